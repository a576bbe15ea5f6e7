//! Classification groups and existence verdicts for closed 2-forms that
//! restrict to the fibre symplectic forms.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::cohomology::{cohomology_context, CohClass, CohContext};
use crate::error::{Error, Result};
use crate::exact::{FgAbelianGroup, Int};
use crate::surfaces::{Representation, SurfaceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    OpenSurface,
    #[serde(rename = "ClosedAspherical-TorsionTest")]
    ClosedAsphericalTorsionTest,
    #[serde(rename = "Sphere-TrivialityTest")]
    SphereTrivialityTest,
    #[serde(rename = "RP2-TrivialRho")]
    Rp2TrivialRho,
    #[serde(rename = "RP2-NontrivialRho")]
    Rp2NontrivialRho,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::OpenSurface => "OpenSurface",
            Branch::ClosedAsphericalTorsionTest => "ClosedAspherical-TorsionTest",
            Branch::SphereTrivialityTest => "Sphere-TrivialityTest",
            Branch::Rp2TrivialRho => "RP2-TrivialRho",
            Branch::Rp2NontrivialRho => "RP2-NontrivialRho",
        }
    }

    pub fn of(s: SurfaceSpec, rho: &Representation) -> Branch {
        match s {
            SurfaceSpec::Open { .. } => Branch::OpenSurface,
            _ if s.is_sphere() => Branch::SphereTrivialityTest,
            _ if s.is_projective_plane() && rho.is_trivial() => Branch::Rp2TrivialRho,
            _ if s.is_projective_plane() => Branch::Rp2NontrivialRho,
            _ => Branch::ClosedAsphericalTorsionTest,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The order of a torsion class, or a normal-form coordinate at a free
/// summand where the class is nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictDetail {
    TorsionOrder(Int),
    NonTorsion { coordinate: usize, value: Int },
}

impl VerdictDetail {
    pub fn of(c: &CohClass) -> VerdictDetail {
        match c.order() {
            Some(order) => VerdictDetail::TorsionOrder(order),
            None => {
                let factors = c.context().h2().invariant_factors();
                let (coordinate, value) = c
                    .coords()
                    .iter()
                    .enumerate()
                    .find(|(i, v)| factors[*i].is_zero() && !v.is_zero())
                    .map(|(i, v)| (i, v.clone()))
                    .expect("a class of infinite order has a nonzero free coordinate");
                VerdictDetail::NonTorsion { coordinate, value }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub admits: bool,
    pub branch: Branch,
    pub detail: VerdictDetail,
    pub note: Option<String>,
}

/// The group indexing equivalence classes of bundles that induce `ρ`.
pub fn classify(s: SurfaceSpec, rho: &Representation) -> Result<FgAbelianGroup> {
    Ok(cohomology_context(s, rho)?.h2().clone())
}

fn check_class(s: SurfaceSpec, rho: &Representation, c: &CohClass) -> Result<()> {
    let ctx = c.context();
    if ctx.surface() != s || ctx.rank() != 2 || ctx.action_images() != rho.images() {
        return Err(Error::ClassContextMismatch);
    }
    Ok(())
}

pub fn decide_symplectic(s: SurfaceSpec, rho: &Representation, c: &CohClass) -> Result<Verdict> {
    check_class(s, rho, c)?;
    if !rho.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    let branch = Branch::of(s, rho);
    let admits = match branch {
        Branch::OpenSurface | Branch::Rp2TrivialRho => true,
        Branch::SphereTrivialityTest | Branch::Rp2NontrivialRho => c.is_zero(),
        Branch::ClosedAsphericalTorsionTest => c.is_torsion(),
    };
    let note = matches!(s, SurfaceSpec::NonOrientableClosed { genus } if genus >= 2).then(|| {
        "non-orientable closed surface of genus >= 2: decided by the aspherical torsion test".to_string()
    });
    Ok(Verdict { admits, branch, detail: VerdictDetail::of(c), note })
}

/// All classes whose bundles admit such a form; finite in every branch.
pub fn enumerate_admissible(s: SurfaceSpec, rho: &Representation) -> Result<Vec<CohClass>> {
    let ctx = cohomology_context(s, rho)?;
    let mut out = Vec::new();
    for coords in ctx.h2().torsion_elements() {
        let c = CohClass::from_coords(&ctx, &coords)?;
        if decide_symplectic(s, rho, &c)?.admits {
            out.push(c);
        }
    }
    Ok(out)
}

/// For principal bundles (trivial `ρ`): fails exactly for nonzero classes
/// over closed orientable surfaces.
pub fn principal_bundle_verdict(s: SurfaceSpec, c: &CohClass) -> Result<Verdict> {
    let ctx: &Arc<CohContext> = c.context();
    if ctx.surface() != s {
        return Err(Error::ClassContextMismatch);
    }
    if ctx.rank() != 2 || !ctx.action_images().iter().all(|m| m.is_identity()) {
        return Err(Error::NontrivialRho);
    }
    let rho = Representation::trivial(s)?;
    Ok(Verdict {
        admits: !(s.is_orientable_closed() && !c.is_zero()),
        branch: Branch::of(s, &rho),
        detail: VerdictDetail::of(c),
        note: None,
    })
}
