//! Torus-group extensions `Z^2 -> G -> π` in normal form, the fibre product
//! `Π = G x_{GL(2,Z)} Aut(H)` with the localized Heisenberg group `H`, and the
//! cocycle `F` of the extension obtained from `Π` by dividing out `μ(H)`.
//!
//! `G` is generated by `Z^2`, `A`, `B` subject to `A m A^-1 = α m`,
//! `B m B^-1 = β m` and `A B A^-1 B^-1 = t`. Every element is uniquely
//! `m A^p B^q`, written `(m, (p, q))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{solve_linear_rational, Int, IntMatrix, Rat, RatMatrix};
use crate::heisenberg::{aut_compose, aut_inner, psi, HeisAut, HeisElement, PointCocycle};
use crate::surfaces::{presentation_of, Representation, SurfaceSpec, TorusElem, Word};

/// `Σ_{k=0}^{n-1} X^k` for `n >= 0` and `-Σ_{k=n}^{-1} X^k` for `n < 0`, so
/// that `S_{m+n} = S_m + X^m S_n` for all integers.
fn power_sum(x: &IntMatrix, x_inv: &IntMatrix, n: i64) -> IntMatrix {
    let mut acc = IntMatrix::zeros(2, 2);
    if n >= 0 {
        let mut p = IntMatrix::identity(2);
        for _ in 0..n {
            acc = acc.add_checked(&p).expect("2x2");
            p = &p * x;
        }
    } else {
        let mut p = x_inv.clone();
        for _ in 0..n.unsigned_abs() {
            acc = acc.sub_checked(&p).expect("2x2");
            p = &p * x_inv;
        }
    }
    acc
}

/// An element `(u, x)` of the extension group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GElement {
    pub u: Vec<Int>,
    pub x: TorusElem,
}

impl GElement {
    pub fn new(u: Vec<Int>, x: TorusElem) -> Self {
        GElement { u, x }
    }

    pub fn identity() -> Self {
        GElement { u: vec![Int::zero(), Int::zero()], x: TorusElem::IDENTITY }
    }

    /// `(0, x)`, the image of the normal-form section.
    pub fn section(x: TorusElem) -> Self {
        GElement { u: vec![Int::zero(), Int::zero()], x }
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionModel {
    rho: Representation,
    alpha: IntMatrix,
    beta: IntMatrix,
    alpha_inv: IntMatrix,
    beta_inv: IntMatrix,
    target: Vec<Int>,
}

pub fn synthesize_extension(rho: &Representation, t: &[Int]) -> Result<ExtensionModel> {
    if !rho.surface().is_torus() {
        return Err(Error::NotTorus);
    }
    if t.len() != 2 {
        return Err(Error::DimensionMismatch(format!("target vector has length {}, expected 2", t.len())));
    }
    Ok(ExtensionModel {
        rho: rho.clone(),
        alpha: rho.image(0).clone(),
        beta: rho.image(1).clone(),
        alpha_inv: rho.inverse_image(0).clone(),
        beta_inv: rho.inverse_image(1).clone(),
        target: t.to_vec(),
    })
}

impl ExtensionModel {
    pub fn rho(&self) -> &Representation {
        &self.rho
    }

    pub fn alpha(&self) -> &IntMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &IntMatrix {
        &self.beta
    }

    pub fn target(&self) -> &[Int] {
        &self.target
    }

    pub fn rho_of(&self, x: TorusElem) -> IntMatrix {
        crate::surfaces::torus_action(&self.alpha, &self.beta, x)
    }

    /// `B^q A^p = κ(p, q) A^p B^q` with `κ(p, q) = -S_p(α) S_q(β) t`.
    pub fn kappa(&self, p: i64, q: i64) -> Vec<Int> {
        let sp = power_sum(&self.alpha, &self.alpha_inv, p);
        let sq = power_sum(&self.beta, &self.beta_inv, q);
        (&sp * &sq).mul_vec(&self.target).expect("2x2").into_iter().map(|c| -c).collect()
    }

    /// `s(x) s(y) = f(x, y) s(xy)`; equals `α^p κ(p', q)` for `x = (p, q)`, `y = (p', q')`.
    pub fn f(&self, x: TorusElem, y: TorusElem) -> Vec<Int> {
        let alpha_p = self.alpha.pow_signed(x.0).expect("invertible");
        alpha_p.mul_vec(&self.kappa(y.0, x.1)).expect("2x2")
    }

    pub fn cocycle(&self) -> PointCocycle<Int> {
        let me = self.clone();
        PointCocycle::new(2, move |x, y| me.f(x, y))
    }

    pub fn mul(&self, g: &GElement, h: &GElement) -> GElement {
        let acted = self.rho_of(g.x).mul_vec(&h.u).expect("2x2");
        let f = self.f(g.x, h.x);
        let u = (0..2).map(|i| &g.u[i] + &acted[i] + &f[i]).collect();
        GElement { u, x: g.x * h.x }
    }

    /// `(u, x)^-1 = (-ρ(x)^-1 (u + f(x, x^-1)), x^-1)`.
    pub fn inv(&self, g: &GElement) -> GElement {
        let f = self.f(g.x, g.x.inv());
        let s: Vec<Int> = (0..2).map(|i| &g.u[i] + &f[i]).collect();
        let w = self.rho_of(g.x.inv()).mul_vec(&s).expect("2x2");
        GElement { u: w.into_iter().map(|c| -c).collect(), x: g.x.inv() }
    }

    /// `A B A^-1 B^-1` multiplied out with the group law; its module part is `t`.
    pub fn commutator_of_generators(&self) -> GElement {
        let a = GElement::section(TorusElem::A);
        let b = GElement::section(TorusElem::B);
        let ab = self.mul(&a, &b);
        let aba = self.mul(&ab, &self.inv(&a));
        self.mul(&aba, &self.inv(&b))
    }
}

/// An element `(g, A)` of the fibre product over `GL(2, Z)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiElement {
    g: GElement,
    aut: HeisAut,
}

impl PiElement {
    pub fn new(ext: &ExtensionModel, g: GElement, aut: HeisAut) -> Result<Self> {
        if ext.rho_of(g.x) != *aut.bottom() {
            return Err(Error::IncompatiblePair(format!(
                "ρ{} differs from the automorphism's bottom block",
                g.x
            )));
        }
        Ok(PiElement { g, aut })
    }

    pub fn identity() -> Self {
        PiElement { g: GElement::identity(), aut: HeisAut::identity() }
    }

    pub fn g(&self) -> &GElement {
        &self.g
    }

    pub fn aut(&self) -> &HeisAut {
        &self.aut
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

pub fn pi_mul(ext: &ExtensionModel, p: &PiElement, q: &PiElement) -> PiElement {
    PiElement { g: ext.mul(&p.g, &q.g), aut: aut_compose(&p.aut, &q.aut) }
}

pub fn pi_inv(ext: &ExtensionModel, p: &PiElement) -> PiElement {
    PiElement { g: ext.inv(&p.g), aut: p.aut.inverse() }
}

/// `(a, b, c) -> ((b, c), ε)`; factors through the quotient by the centre.
pub fn lambda(h: &HeisElement) -> GElement {
    GElement::new(vec![h.b.clone(), h.c.clone()], TorusElem::IDENTITY)
}

/// `(a, b, c) -> (((b, c), ε), ι_(a,b,c))`; independent of `a`.
pub fn mu(h: &HeisElement) -> PiElement {
    PiElement { g: lambda(h), aut: aut_inner(h) }
}

/// Automorphism lifts `A_i` of the generator images with the relator
/// evaluating to the identity, so `x_i -> A_i` is a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaLift {
    surface: SurfaceSpec,
    images: Vec<HeisAut>,
}

impl SigmaLift {
    pub fn images(&self) -> &[HeisAut] {
        &self.images
    }

    pub fn surface(&self) -> SurfaceSpec {
        self.surface
    }

    pub fn evaluate(&self, w: &Word) -> HeisAut {
        evaluate_word(&self.images, w)
    }

    /// `σ(p, q) = A_1^p A_2^q` on the torus group.
    pub fn at(&self, x: TorusElem) -> Result<HeisAut> {
        if !self.surface.is_torus() {
            return Err(Error::NotTorus);
        }
        Ok(aut_compose(&self.images[0].pow(x.0), &self.images[1].pow(x.1)))
    }

    pub fn lifts(&self, rho: &Representation) -> bool {
        rho.surface() == self.surface && self.images.iter().zip(rho.images()).all(|(a, m)| a.bottom() == m)
    }
}

fn evaluate_word(images: &[HeisAut], w: &Word) -> HeisAut {
    w.letters().iter().fold(HeisAut::identity(), |acc, &l| {
        let a = &images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            aut_compose(&acc, a)
        } else {
            aut_compose(&acc, &a.inverse())
        }
    })
}

/// Corrects zero-top lifts `(0 / ρ(x_i))` by kernel elements so that the
/// relator evaluates to the identity. The relator's top row is affine in the
/// corrections, so this is one rational linear system.
pub fn lift_representation(rho: &Representation) -> Result<SigmaLift> {
    let surface = rho.surface();
    if !surface.is_orientable_closed() {
        return Err(Error::InvalidSurface(format!("{surface} is not closed and orientable")));
    }
    if !rho.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    let relator = presentation_of(&surface).relator;
    let n = rho.images().len();
    let build = |u: &[Rat]| -> Vec<HeisAut> {
        (0..n)
            .map(|i| {
                HeisAut::new([u[2 * i].clone(), u[2 * i + 1].clone()], rho.image(i).clone())
                    .expect("determinant one")
            })
            .collect()
    };
    let top_of = |u: &[Rat]| -> [Rat; 2] { evaluate_word(&build(u), &relator).top().clone() };

    let zero = vec![Rat::zero(); 2 * n];
    let d0 = top_of(&zero);
    let mut columns = Vec::with_capacity(2 * n);
    for j in 0..2 * n {
        let mut e = zero.clone();
        e[j] = Rat::from_integer(1.into());
        let v = top_of(&e);
        columns.push(vec![&v[0] - &d0[0], &v[1] - &d0[1]]);
    }
    let l = if n == 0 { RatMatrix::zeros(2, 0) } else { RatMatrix::from_rows(columns)?.transpose() };
    let rhs = vec![-&d0[0], -&d0[1]];
    let u = solve_linear_rational(&l, &rhs)?
        .ok_or_else(|| Error::NoSolution(format!("relator top row {:?} is not in the image of the corrections", d0)))?;
    let images = build(&u);
    if !evaluate_word(&images, &relator).is_identity() {
        return Err(Error::NoSolution("corrected lifts do not satisfy the relator".into()));
    }
    Ok(SigmaLift { surface, images })
}

/// `F(x, y)` read off from `P = T(x) T(y) T(xy)^-1`, `T(z) = ((0, z), σ(z))`,
/// via the decomposition `P = μ(w) J(φ)` with `J(φ) = ((0, ε), (φ / I))`.
#[allow(non_snake_case)]
pub fn huebschmann_F(x: TorusElem, y: TorusElem, sigma: &SigmaLift, ext: &ExtensionModel) -> Result<[Rat; 2]> {
    if !sigma.lifts(ext.rho()) {
        return Err(Error::NormalizationFailure("σ does not lift the extension's representation".into()));
    }
    let t = |z: TorusElem| -> Result<PiElement> {
        PiElement::new(ext, GElement::section(z), sigma.at(z)?)
            .map_err(|e| Error::NormalizationFailure(e.to_string()))
    };
    let p = pi_mul(ext, &pi_mul(ext, &t(x)?, &t(y)?), &pi_inv(ext, &t(x * y)?));
    if !p.g.x.is_identity() {
        return Err(Error::NormalizationFailure(format!("π-part of P is {} rather than ε", p.g.x)));
    }
    if !p.aut.bottom().is_identity() {
        return Err(Error::NormalizationFailure("Aut-part of P does not lie over the identity".into()));
    }
    let w = [p.g.u[0].clone(), p.g.u[1].clone()];
    let shift = psi(&w);
    let top = p.aut.top();
    Ok([&top[0] - &shift[0], &top[1] - &shift[1]])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleFailure {
    pub x: TorusElem,
    pub y: TorusElem,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub bound: i64,
    pub samples: usize,
    pub passed: usize,
    pub normalization_failures: usize,
    pub failures: Vec<SampleFailure>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.samples && self.failures.is_empty() && self.normalization_failures == 0
    }
}

/// Checks `ψ(f(x, y)) = -F(x, y)` on `samples` pairs with coordinates in `[-bound, bound]`.
pub fn verify_theorem21(rho: &Representation, t: &[Int], bound: i64, samples: usize, seed: u64) -> Result<VerificationReport> {
    if bound < 0 {
        return Err(Error::InvalidJob("sample bound must be non-negative".into()));
    }
    let ext = synthesize_extension(rho, t)?;
    let sigma = lift_representation(rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report =
        VerificationReport { seed, bound, samples, passed: 0, normalization_failures: 0, failures: Vec::new() };
    for _ in 0..samples {
        let mut draw = || TorusElem(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        let (x, y) = (draw(), draw());
        let f = ext.f(x, y);
        let lhs = psi(&[f[0].clone(), f[1].clone()]);
        match huebschmann_F(x, y, &sigma, &ext) {
            Ok(big_f) => {
                let rhs = [-&big_f[0], -&big_f[1]];
                if lhs == rhs {
                    report.passed += 1;
                } else {
                    report.failures.push(SampleFailure {
                        x,
                        y,
                        detail: format!("ψ(f) = ({}, {}) but -F = ({}, {})", lhs[0], lhs[1], rhs[0], rhs[1]),
                    });
                }
            }
            Err(Error::NormalizationFailure(msg)) => {
                report.normalization_failures += 1;
                report.failures.push(SampleFailure { x, y, detail: msg });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
