//! Surfaces, their one-relator presentations, Fox derivatives of the
//! relator and representations of the fundamental group into GL(2, Z).

use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SurfaceSpec {
    OrientableClosed { genus: u32 },
    #[serde(rename = "nonorientable-closed")]
    NonOrientableClosed { genus: u32 },
    /// Non-closed surface, recorded only through the rank of its free fundamental group.
    Open {
        #[serde(alias = "rank")]
        genus: u32,
    },
}

impl SurfaceSpec {
    pub const SPHERE: SurfaceSpec = SurfaceSpec::OrientableClosed { genus: 0 };
    pub const TORUS: SurfaceSpec = SurfaceSpec::OrientableClosed { genus: 1 };
    pub const PROJECTIVE_PLANE: SurfaceSpec = SurfaceSpec::NonOrientableClosed { genus: 1 };

    pub fn open(rank: u32) -> Self {
        SurfaceSpec::Open { genus: rank }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SurfaceSpec::NonOrientableClosed { genus: 0 } => Err(Error::InvalidSurface(
                "non-orientable closed surfaces have genus >= 1".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn is_closed(&self) -> bool {
        !matches!(self, SurfaceSpec::Open { .. })
    }

    pub fn is_orientable_closed(&self) -> bool {
        matches!(self, SurfaceSpec::OrientableClosed { .. })
    }

    pub fn is_sphere(&self) -> bool {
        *self == Self::SPHERE
    }

    pub fn is_torus(&self) -> bool {
        *self == Self::TORUS
    }

    pub fn is_projective_plane(&self) -> bool {
        *self == Self::PROJECTIVE_PLANE
    }

    pub fn generator_count(&self) -> usize {
        match *self {
            SurfaceSpec::OrientableClosed { genus } => 2 * genus as usize,
            SurfaceSpec::NonOrientableClosed { genus } | SurfaceSpec::Open { genus } => genus as usize,
        }
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SurfaceSpec::OrientableClosed { genus: 0 } => write!(f, "S^2"),
            SurfaceSpec::OrientableClosed { genus: 1 } => write!(f, "T^2"),
            SurfaceSpec::OrientableClosed { genus } => write!(f, "orientable closed surface of genus {genus}"),
            SurfaceSpec::NonOrientableClosed { genus: 1 } => write!(f, "RP^2"),
            SurfaceSpec::NonOrientableClosed { genus: 2 } => write!(f, "Klein bottle"),
            SurfaceSpec::NonOrientableClosed { genus } => {
                write!(f, "non-orientable closed surface of genus {genus}")
            }
            SurfaceSpec::Open { genus } => write!(f, "open surface with free fundamental group of rank {genus}"),
        }
    }
}

/// A word in the free group: `+i` is the generator `x_i`, `-i` its inverse (1-based).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    /// Evaluates the word with `images[i-1]` for `x_i`.
    pub fn evaluate(&self, images: &[IntMatrix], inverses: &[IntMatrix]) -> IntMatrix {
        let n = images.first().map_or(2, IntMatrix::rows);
        self.0.iter().fold(IntMatrix::identity(n), |acc, &l| {
            let idx = l.unsigned_abs() as usize - 1;
            if l > 0 {
                &acc * &images[idx]
            } else {
                &acc * &inverses[idx]
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relator: Word,
    /// Set for the 2-sphere: no generators, and one 2-cell attached along the empty word.
    pub simply_connected: bool,
}

impl GroupPresentation {
    pub fn has_two_cell(&self) -> bool {
        !self.relator.is_empty() || self.simply_connected
    }
}

pub fn presentation_of(s: &SurfaceSpec) -> GroupPresentation {
    match *s {
        SurfaceSpec::OrientableClosed { genus } => {
            let relator = (0..genus as i32)
                .flat_map(|i| {
                    let (a, b) = (2 * i + 1, 2 * i + 2);
                    [a, b, -a, -b]
                })
                .collect();
            GroupPresentation {
                generator_count: 2 * genus as usize,
                relator: Word(relator),
                simply_connected: genus == 0,
            }
        }
        SurfaceSpec::NonOrientableClosed { genus } => GroupPresentation {
            generator_count: genus as usize,
            relator: Word((1..=genus as i32).flat_map(|i| [i, i]).collect()),
            simply_connected: false,
        },
        SurfaceSpec::Open { genus } => GroupPresentation {
            generator_count: genus as usize,
            relator: Word::default(),
            simply_connected: genus == 0,
        },
    }
}

/// A validated representation of the surface group into GL(2, Z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    surface: SurfaceSpec,
    images: Vec<IntMatrix>,
    inverses: Vec<IntMatrix>,
    symplectic: bool,
}

impl Representation {
    pub fn surface(&self) -> SurfaceSpec {
        self.surface
    }

    pub fn images(&self) -> &[IntMatrix] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &IntMatrix {
        &self.images[generator]
    }

    pub fn inverse_image(&self, generator: usize) -> &IntMatrix {
        &self.inverses[generator]
    }

    /// True iff every image lies in SL(2, Z).
    pub fn is_symplectic(&self) -> bool {
        self.symplectic
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(IntMatrix::is_identity)
    }

    pub fn evaluate(&self, w: &Word) -> IntMatrix {
        w.evaluate(&self.images, &self.inverses)
    }

    /// `rho(x)` for an element of the torus group.
    pub fn torus_image(&self, x: TorusElem) -> Result<IntMatrix> {
        if !self.surface.is_torus() {
            return Err(Error::NotTorus);
        }
        Ok(torus_action(&self.images[0], &self.images[1], x))
    }

    pub fn trivial(s: SurfaceSpec) -> Result<Self> {
        validate_representation(s, vec![IntMatrix::identity(2); s.generator_count()])
    }
}

pub fn validate_representation(s: SurfaceSpec, images: Vec<IntMatrix>) -> Result<Representation> {
    s.validate()?;
    let expected = s.generator_count();
    if images.len() != expected {
        return Err(Error::WrongGeneratorCount { expected, got: images.len() });
    }
    let mut symplectic = true;
    let mut inverses = Vec::with_capacity(images.len());
    for (index, m) in images.iter().enumerate() {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::NotTwoByTwo { index });
        }
        let det = m.det()?;
        if !det.abs().is_one() {
            return Err(Error::NotInvertible { index, det: det.to_string() });
        }
        symplectic &= det.is_positive();
        inverses.push(m.unimodular_inverse().expect("determinant is a unit"));
    }
    let rep = Representation { surface: s, images, inverses, symplectic };
    if !rep.evaluate(&presentation_of(&s).relator).is_identity() {
        return Err(Error::RelatorNotSatisfied);
    }
    Ok(rep)
}

/// `rho(d r / d x_i)` for each generator, via the free-differential rules.
pub fn fox_derivatives(p: &GroupPresentation, rho: &Representation) -> Result<Vec<IntMatrix>> {
    if p.relator.is_empty() {
        return Err(Error::EmptyRelator);
    }
    if rho.images().len() != p.generator_count {
        return Err(Error::RelatorMismatch(format!(
            "presentation has {} generators but the representation has {}",
            p.generator_count,
            rho.images().len()
        )));
    }
    Ok(fox_matrices(&p.relator, rho.images(), &rho.inverses))
}

/// Fox derivatives of `relator` evaluated in square images of a common size.
pub(crate) fn fox_matrices(relator: &Word, images: &[IntMatrix], inverses: &[IntMatrix]) -> Vec<IntMatrix> {
    let r = images.first().map_or(0, IntMatrix::rows);
    let mut derivs = vec![IntMatrix::zeros(r, r); images.len()];
    let mut prefix = IntMatrix::identity(r);
    for &l in relator.letters() {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            derivs[i] = derivs[i].add_checked(&prefix).expect("same shape");
            prefix = &prefix * &images[i];
        } else {
            prefix = &prefix * &inverses[i];
            derivs[i] = derivs[i].sub_checked(&prefix).expect("same shape");
        }
    }
    derivs
}

/// An element `a^p b^q` of the torus group, written additively as `(p, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusElem(pub i64, pub i64);

impl TorusElem {
    pub const IDENTITY: TorusElem = TorusElem(0, 0);
    pub const A: TorusElem = TorusElem(1, 0);
    pub const B: TorusElem = TorusElem(0, 1);

    pub fn inv(self) -> TorusElem {
        TorusElem(-self.0, -self.1)
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }

    /// The image of the torus generator `x_i` (1-based).
    pub fn generator(i: usize) -> TorusElem {
        match i {
            1 => Self::A,
            2 => Self::B,
            _ => panic!("the torus group has two generators"),
        }
    }
}

impl std::ops::Mul for TorusElem {
    type Output = TorusElem;

    fn mul(self, other: TorusElem) -> TorusElem {
        TorusElem(self.0 + other.0, self.1 + other.1)
    }
}

impl fmt::Display for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// `alpha^p * beta^q` for commuting invertible `alpha`, `beta`.
pub fn torus_action(alpha: &IntMatrix, beta: &IntMatrix, x: TorusElem) -> IntMatrix {
    let a = alpha.pow_signed(x.0).expect("invertible image");
    let b = beta.pow_signed(x.1).expect("invertible image");
    &a * &b
}

/// The standard representations used throughout the tests and CLI.
pub mod fixtures {
    use super::*;

    pub fn unipotent(k: i64) -> IntMatrix {
        IntMatrix::from_i64_rows(&[&[1, k], &[0, 1]])
    }

    /// `rho(a) = I`, `rho(b) = [[1, 1], [0, 1]]` on the torus.
    pub fn kodaira_thurston() -> Representation {
        validate_representation(SurfaceSpec::TORUS, vec![IntMatrix::identity(2), unipotent(1)])
            .expect("commuting images")
    }

    /// The matrix `[[1 - 2mn, 2mn^2 + n], [-m, mn + 1]]`, sent to by both torus generators.
    pub fn coinvariant_matrix(m: i64, n: i64) -> IntMatrix {
        let mi = Int::from(m);
        let ni = Int::from(n);
        let mn = &mi * &ni;
        IntMatrix::from_rows(vec![
            vec![Int::one() - Int::from(2) * &mn, Int::from(2) * &mn * &ni + &ni],
            vec![-mi, mn + Int::one()],
        ])
        .expect("2x2")
    }

    pub fn finite_coinvariants(m: i64, n: i64) -> Representation {
        let r = coinvariant_matrix(m, n);
        validate_representation(SurfaceSpec::TORUS, vec![r.clone(), r]).expect("equal images commute")
    }
}
