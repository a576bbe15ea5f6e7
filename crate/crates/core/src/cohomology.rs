//! Cohomology of surfaces with local coefficients, computed from the cellular
//! cochain complex of the one-relator presentation
//!
//! ```text
//! C^0 = M --d1--> C^1 = M^n --d2--> C^2 = M
//! ```
//!
//! with `d1 v = ((ρ(x_i) - I) v)_i` and `d2 (m_i) = Σ ρ(∂r/∂x_i) m_i`.
//! The sphere is the presentation with no generators and one 2-cell.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{cokernel, subquotient, FgAbelianGroup, Int, IntMatrix, Matrix, Rat, RatColumnSpace};
use crate::heisenberg::PointCocycle;
use crate::huebschmann::ExtensionModel;
use crate::surfaces::{fox_matrices, presentation_of, GroupPresentation, Representation, SurfaceSpec, TorusElem};

/// The cochain complex and its cohomology for one (surface, action) pair.
#[derive(Clone, Debug)]
pub struct CohContext {
    surface: SurfaceSpec,
    presentation: GroupPresentation,
    rho: Option<Representation>,
    rank: usize,
    images: Vec<IntMatrix>,
    d1: IntMatrix,
    d2: IntMatrix,
    h0: FgAbelianGroup,
    h1: FgAbelianGroup,
    h2: FgAbelianGroup,
    rational_d2: RatColumnSpace,
}

impl CohContext {
    /// Builds the complex for an arbitrary integral action of rank `images[i].rows()`.
    pub fn from_action(
        surface: SurfaceSpec,
        rank: usize,
        images: Vec<IntMatrix>,
        rho: Option<Representation>,
    ) -> Result<Self> {
        surface.validate()?;
        let presentation = presentation_of(&surface);
        if images.len() != presentation.generator_count {
            return Err(Error::WrongGeneratorCount { expected: presentation.generator_count, got: images.len() });
        }
        let mut inverses = Vec::with_capacity(images.len());
        for (index, m) in images.iter().enumerate() {
            if m.rows() != rank || m.cols() != rank {
                return Err(Error::DimensionMismatch(format!("action matrix {index} is not {rank}x{rank}")));
            }
            let inv = m.unimodular_inverse().ok_or_else(|| Error::NotInvertible { index, det: m.det().map(|d| d.to_string()).unwrap_or_default() })?;
            inverses.push(inv);
        }
        let n = images.len();
        let id = IntMatrix::identity(rank);
        let d1 = images
            .iter()
            .map(|m| m.sub_checked(&id).expect("same shape"))
            .try_fold(IntMatrix::zeros(0, rank), |acc, block| acc.vstack(&block))?;
        let d2 = if !presentation.has_two_cell() {
            IntMatrix::zeros(0, rank * n)
        } else if presentation.relator.is_empty() {
            IntMatrix::zeros(rank, 0)
        } else {
            fox_matrices(&presentation.relator, &images, &inverses)
                .into_iter()
                .try_fold(IntMatrix::zeros(rank, 0), |acc, block| acc.hstack(&block))?
        };
        let h0 = subquotient(&d1, &IntMatrix::zeros(rank, 0))?;
        let h1 = subquotient(&d2, &d1)?;
        let h2 = if presentation.has_two_cell() { cokernel(&d2) } else { FgAbelianGroup::trivial(rank) };
        let rational_d2 = if presentation.has_two_cell() {
            RatColumnSpace::new(&d2.to_rat())
        } else {
            // every cochain is killed: the quotient has dimension zero
            RatColumnSpace::new(&IntMatrix::identity(rank).to_rat())
        };
        Ok(CohContext { surface, presentation, rho, rank, images, d1, d2, h0, h1, h2, rational_d2 })
    }

    /// Constant coefficients `Z^rank`.
    pub fn trivial_coefficients(surface: SurfaceSpec, rank: usize) -> Result<Self> {
        let n = surface.generator_count();
        CohContext::from_action(surface, rank, vec![IntMatrix::identity(rank); n], None)
    }

    pub fn surface(&self) -> SurfaceSpec {
        self.surface
    }

    pub fn presentation(&self) -> &GroupPresentation {
        &self.presentation
    }

    pub fn representation(&self) -> Option<&Representation> {
        self.rho.as_ref()
    }

    /// Rank of the coefficient module.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action_images(&self) -> &[IntMatrix] {
        &self.images
    }

    pub fn d1(&self) -> &IntMatrix {
        &self.d1
    }

    pub fn d2(&self) -> &IntMatrix {
        &self.d2
    }

    pub fn h0(&self) -> &FgAbelianGroup {
        &self.h0
    }

    pub fn h1(&self) -> &FgAbelianGroup {
        &self.h1
    }

    pub fn h2(&self) -> &FgAbelianGroup {
        &self.h2
    }

    pub fn has_two_cell(&self) -> bool {
        self.presentation.has_two_cell()
    }

    /// True iff `other` describes the same surface and module.
    pub fn same_as(&self, other: &CohContext) -> bool {
        self.surface == other.surface && self.rank == other.rank && self.images == other.images
    }

    /// The action of a torus element on the coefficient module.
    pub fn torus_action(&self, x: TorusElem) -> Result<IntMatrix> {
        if !self.surface.is_torus() {
            return Err(Error::NotTorus);
        }
        Ok(crate::surfaces::torus_action(&self.images[0], &self.images[1], x))
    }
}

pub fn cohomology_context(s: SurfaceSpec, rho: &Representation) -> Result<Arc<CohContext>> {
    if rho.surface() != s {
        return Err(Error::RelatorMismatch(format!("representation is given on {} but the surface is {s}", rho.surface())));
    }
    Ok(Arc::new(CohContext::from_action(s, 2, rho.images().to_vec(), Some(rho.clone()))?))
}

/// `Z^2` modulo all `(ρ(x_i) - I) v`.
pub fn coinvariants(rho: &Representation) -> FgAbelianGroup {
    let id = IntMatrix::identity(2);
    let relations = rho
        .images()
        .iter()
        .map(|m| m.sub_checked(&id).expect("2x2"))
        .try_fold(IntMatrix::zeros(2, 0), |acc, block| acc.hstack(&block))
        .expect("two rows");
    cokernel(&relations)
}

/// An element of H^2, encoded by a cochain on the 2-cell.
#[derive(Clone)]
pub struct CohClass {
    context: Arc<CohContext>,
    representative: Vec<Int>,
    coords: Vec<Int>,
}

impl CohClass {
    pub fn from_representative(context: &Arc<CohContext>, representative: Vec<Int>) -> Result<Self> {
        if representative.len() != context.rank {
            return Err(Error::DimensionMismatch(format!(
                "class representative has length {}, coefficient module has rank {}",
                representative.len(),
                context.rank
            )));
        }
        let coords = context.h2.reduce(&representative)?;
        Ok(CohClass { context: Arc::clone(context), representative, coords })
    }

    pub fn from_coords(context: &Arc<CohContext>, coords: &[Int]) -> Result<Self> {
        let representative = context.h2.lift(coords)?;
        CohClass::from_representative(context, representative)
    }

    pub fn zero(context: &Arc<CohContext>) -> Self {
        CohClass::from_representative(context, vec![Int::zero(); context.rank]).expect("rank agrees")
    }

    pub fn context(&self) -> &Arc<CohContext> {
        &self.context
    }

    pub fn representative(&self) -> &[Int] {
        &self.representative
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_torsion(&self) -> bool {
        self.context.h2.is_torsion(&self.coords).expect("coordinates have the group's arity")
    }

    /// `None` for classes of infinite order.
    pub fn order(&self) -> Option<Int> {
        self.context.h2.element_order(&self.coords).expect("coordinates have the group's arity")
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass> {
        if !self.context.same_as(&other.context) {
            return Err(Error::ClassContextMismatch);
        }
        let rep = self.representative.iter().zip(&other.representative).map(|(a, b)| a + b).collect();
        CohClass::from_representative(&self.context, rep)
    }

    pub fn neg(&self) -> CohClass {
        let rep = self.representative.iter().map(|a| -a).collect();
        CohClass::from_representative(&self.context, rep).expect("rank agrees")
    }
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.context.same_as(&other.context) && self.coords == other.coords
    }
}

impl Eq for CohClass {}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CohClass")
            .field("surface", &self.context.surface)
            .field("representative", &self.representative.iter().map(ToString::to_string).collect::<Vec<_>>())
            .field("coords", &self.coords.iter().map(ToString::to_string).collect::<Vec<_>>())
            .finish()
    }
}

/// Multiplies out the torus relator `a b a^-1 b^-1` in the extension
/// `(u, x)(v, y) = (u + x·v + f(x, y), xy)` using the section `x -> (0, x)`.
pub fn relator_lift<T>(action: &dyn Fn(TorusElem) -> Matrix<T>, f: &PointCocycle<T>) -> Vec<T>
where
    T: Clone + Zero + One + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<Output = T> + std::ops::Neg<Output = T>,
{
    let rank = f.rank();
    let mul = |(u, x): (Vec<T>, TorusElem), (v, y): (Vec<T>, TorusElem)| -> (Vec<T>, TorusElem) {
        let acted = action(x).mul_vec(&v).expect("rank agrees");
        let fxy = f.eval(x, y);
        let w = (0..rank).map(|i| u[i].clone() + acted[i].clone() + fxy[i].clone()).collect();
        (w, x * y)
    };
    let section_inverse = |x: TorusElem| -> (Vec<T>, TorusElem) {
        let w = action(x.inv()).mul_vec(&f.eval(x, x.inv())).expect("rank agrees");
        (w.into_iter().map(|c| -c).collect(), x.inv())
    };
    let mut acc = (vec![T::zero(); rank], TorusElem::IDENTITY);
    for letter in [1i32, 2, -1, -2] {
        let g = TorusElem::generator(letter.unsigned_abs() as usize);
        let step = if letter > 0 { (vec![T::zero(); rank], g) } else { section_inverse(g) };
        acc = mul(acc, step);
    }
    debug_assert!(acc.1.is_identity());
    acc.0
}

fn check_torus_cocycle<T>(context: &CohContext, f: &PointCocycle<T>) -> Result<()> {
    if !context.surface.is_torus() {
        return Err(Error::RelatorMismatch(format!("cocycles are given on the torus group, context is {}", context.surface)));
    }
    if f.rank() != context.rank {
        return Err(Error::RelatorMismatch(format!(
            "cocycle has rank {} but the coefficient module has rank {}",
            f.rank(),
            context.rank
        )));
    }
    Ok(())
}

/// The class of an integral 2-cocycle on the torus group.
pub fn class_of_point_cocycle(context: &Arc<CohContext>, f: &PointCocycle<Int>) -> Result<CohClass> {
    check_torus_cocycle(context, f)?;
    let action = |x: TorusElem| context.torus_action(x).expect("torus context");
    let d = relator_lift(&action, f);
    CohClass::from_representative(context, d)
}

/// The image in `H^2(π; Q^rank)` of a rational 2-cocycle on the torus group.
pub fn rational_class_of_point_cocycle(context: &Arc<CohContext>, f: &PointCocycle<Rat>) -> Result<Vec<Rat>> {
    check_torus_cocycle(context, f)?;
    let action = |x: TorusElem| context.torus_action(x).expect("torus context").to_rat();
    let d = relator_lift(&action, f);
    context.rational_d2.residue(&d)
}

/// The characteristic class of a synthesized torus-group extension.
pub fn class_of_cocycle(ext: &ExtensionModel) -> Result<CohClass> {
    let context = cohomology_context(SurfaceSpec::TORUS, ext.rho())?;
    class_of_point_cocycle(&context, &ext.cocycle())
}

/// The image of `c` under `Z^rank -> Q^rank`, as coordinates modulo the
/// rational image of `d2`. Zero exactly for torsion classes.
pub fn rational_image(c: &CohClass) -> Vec<Rat> {
    let rep: Vec<Rat> = c.representative.iter().cloned().map(Rat::from_integer).collect();
    c.context.rational_d2.residue(&rep).expect("rank agrees")
}

/// `H^p(Z/2; Z^n_T)` from the periodic resolution.
pub fn cyclic_cohomology_z2(t: &IntMatrix, p: u32) -> Result<FgAbelianGroup> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch("module action must be square".into()));
    }
    if !(t * t).is_identity() {
        return Err(Error::NotAnInvolution);
    }
    let n = t.rows();
    let id = IntMatrix::identity(n);
    let minus = t.sub_checked(&id)?;
    let plus = t.add_checked(&id)?;
    match p {
        0 => subquotient(&minus, &IntMatrix::zeros(n, 0)),
        p if p % 2 == 1 => subquotient(&plus, &minus),
        _ => subquotient(&minus, &plus),
    }
}
