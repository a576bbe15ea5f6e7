//! The Heisenberg group with rational centre, `(a, b, c)` in `Q x Z x Z`, its
//! endomorphisms in block notation, and 2-cocycles on the torus group.
//!
//! Elements with `a` integral form the discrete Heisenberg group; the full
//! group is its fibrewise localization.

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, IntMatrix, Rat, RatMatrix};
use crate::surfaces::TorusElem;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HeisElement {
    pub a: Rat,
    pub b: Int,
    pub c: Int,
}

impl HeisElement {
    pub fn new(a: Rat, b: Int, c: Int) -> Self {
        HeisElement { a, b, c }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        HeisElement { a: Rat::from_integer(a.into()), b: b.into(), c: c.into() }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn central(a: Rat) -> Self {
        HeisElement { a, b: Int::zero(), c: Int::zero() }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// True iff the element is in the centre `Q x 0 x 0`.
    pub fn is_central(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    /// True iff the element lies in the discrete (integral) Heisenberg group.
    pub fn is_integral(&self) -> bool {
        self.a.is_integer()
    }

    pub fn mul(&self, h: &HeisElement) -> HeisElement {
        HeisElement {
            a: &self.a + &h.a + Rat::from_integer(&self.b * &h.c),
            b: &self.b + &h.b,
            c: &self.c + &h.c,
        }
    }

    pub fn inv(&self) -> HeisElement {
        HeisElement {
            a: -&self.a + Rat::from_integer(&self.b * &self.c),
            b: -&self.b,
            c: -&self.c,
        }
    }

    /// `g h g^-1` in closed form.
    pub fn conj(&self, h: &HeisElement) -> HeisElement {
        HeisElement {
            a: &h.a + Rat::from_integer(&self.b * &h.c - &self.c * &h.b),
            b: h.b.clone(),
            c: h.c.clone(),
        }
    }

    /// `g h g^-1 h^-1` in closed form; always central.
    pub fn comm(&self, h: &HeisElement) -> HeisElement {
        HeisElement::central(Rat::from_integer(&self.b * &h.c - &h.b * &self.c))
    }

    pub fn pow(&self, n: &Int) -> HeisElement {
        if n.is_negative() {
            return self.inv().pow(&-n);
        }
        // C(n, 2) b c
        let binom = n * (n - Int::one()) / Int::from(2);
        HeisElement {
            a: Rat::from_integer(n.clone()) * &self.a + Rat::from_integer(binom * &self.b * &self.c),
            b: n * &self.b,
            c: n * &self.c,
        }
    }

    /// The image in the quotient `Z^2` by the centre.
    pub fn abelianization(&self) -> [Int; 2] {
        [self.b.clone(), self.c.clone()]
    }
}

impl Mul for &HeisElement {
    type Output = HeisElement;

    fn mul(self, rhs: &HeisElement) -> HeisElement {
        HeisElement::mul(self, rhs)
    }
}

impl fmt::Display for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// An endomorphism in block notation: the columns of `[top; bottom]` are the
/// images of `(0,1,0)` and `(0,0,1)`. The centre is scaled by `det(bottom)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisEndo {
    pub top: [Rat; 2],
    pub bottom: IntMatrix,
}

impl HeisEndo {
    pub fn from_images(img1: &HeisElement, img2: &HeisElement) -> Self {
        let bottom = IntMatrix::from_rows(vec![
            vec![img1.b.clone(), img2.b.clone()],
            vec![img1.c.clone(), img2.c.clone()],
        ])
        .expect("2x2");
        HeisEndo { top: [img1.a.clone(), img2.a.clone()], bottom }
    }

    pub fn identity() -> Self {
        HeisEndo { top: [Rat::zero(), Rat::zero()], bottom: IntMatrix::identity(2) }
    }

    pub fn image1(&self) -> HeisElement {
        HeisElement::new(self.top[0].clone(), self.bottom[(0, 0)].clone(), self.bottom[(1, 0)].clone())
    }

    pub fn image2(&self) -> HeisElement {
        HeisElement::new(self.top[1].clone(), self.bottom[(0, 1)].clone(), self.bottom[(1, 1)].clone())
    }

    /// Scale factor on the centre, `b f - e c` for images `(a,b,c)` and `(d,e,f)`.
    pub fn central_scale(&self) -> Int {
        &self.bottom[(0, 0)] * &self.bottom[(1, 1)] - &self.bottom[(1, 0)] * &self.bottom[(0, 1)]
    }

    /// Uses `g = (a - bc, 0, 0) (0, b, 0) (0, 0, c)`.
    pub fn apply(&self, g: &HeisElement) -> HeisElement {
        let centre = &g.a - Rat::from_integer(&g.b * &g.c);
        let head = HeisElement::central(centre * Rat::from_integer(self.central_scale()));
        let tail = self.image1().pow(&g.b).mul(&self.image2().pow(&g.c));
        head.mul(&tail)
    }

    /// `self ∘ other`, evaluated on the two generators.
    pub fn compose(&self, other: &HeisEndo) -> HeisEndo {
        HeisEndo::from_images(&self.apply(&other.image1()), &self.apply(&other.image2()))
    }

    pub fn is_automorphism(&self) -> bool {
        self.central_scale().abs().is_one()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// A two-sided inverse built by solving for preimages of the generators,
    /// or `None` if no such endomorphism exists.
    pub fn try_inverse(&self) -> Option<HeisEndo> {
        let det = self.central_scale();
        if det.is_zero() {
            return None;
        }
        let m_inv = self.bottom.to_rat().inverse()?;
        let pre = |target: [i64; 2]| -> Option<HeisElement> {
            let col = m_inv.mul_vec(&[Rat::from_integer(target[0].into()), Rat::from_integer(target[1].into())]).ok()?;
            if !col.iter().all(Rat::is_integer) {
                return None;
            }
            let (y, z) = (col[0].to_integer(), col[1].to_integer());
            let partial = self.apply(&HeisElement::new(Rat::zero(), y.clone(), z.clone()));
            // shift the centre so the image has zero centre coordinate
            let x = -partial.a / Rat::from_integer(det.clone());
            Some(HeisElement::new(x, y, z))
        };
        let inv = HeisEndo::from_images(&pre([1, 0])?, &pre([0, 1])?);
        (self.compose(&inv).is_identity() && inv.compose(self).is_identity()).then_some(inv)
    }
}

impl fmt::Display for HeisEndo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} {} / {} {} / {} {}]",
            self.top[0],
            self.top[1],
            self.bottom[(0, 0)],
            self.bottom[(0, 1)],
            self.bottom[(1, 0)],
            self.bottom[(1, 1)]
        )
    }
}

/// An automorphism of the localized Heisenberg group; `det(bottom) = ±1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisAut(HeisEndo);

impl HeisAut {
    pub fn new(top: [Rat; 2], bottom: IntMatrix) -> Result<Self> {
        if bottom.rows() != 2 || bottom.cols() != 2 {
            return Err(Error::NotTwoByTwo { index: 0 });
        }
        HeisAut::try_from(HeisEndo { top, bottom })
    }

    pub fn identity() -> Self {
        HeisAut(HeisEndo::identity())
    }

    /// The kernel element `(u / I)` of `rho1`.
    pub fn kernel(u: [Rat; 2]) -> Self {
        HeisAut(HeisEndo { top: u, bottom: IntMatrix::identity(2) })
    }

    pub fn endo(&self) -> &HeisEndo {
        &self.0
    }

    pub fn top(&self) -> &[Rat; 2] {
        &self.0.top
    }

    pub fn bottom(&self) -> &IntMatrix {
        &self.0.bottom
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn inverse(&self) -> HeisAut {
        HeisAut(self.0.try_inverse().expect("automorphisms are invertible"))
    }

    pub fn pow(&self, n: i64) -> HeisAut {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(HeisAut::identity(), |acc, _| aut_compose(&acc, &base))
    }
}

impl TryFrom<HeisEndo> for HeisAut {
    type Error = Error;

    fn try_from(e: HeisEndo) -> Result<Self> {
        if !e.is_automorphism() {
            return Err(Error::NotInvertible { index: 0, det: e.central_scale().to_string() });
        }
        Ok(HeisAut(e))
    }
}

impl fmt::Display for HeisAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn endomorphism_from_images(img1: &HeisElement, img2: &HeisElement) -> HeisEndo {
    HeisEndo::from_images(img1, img2)
}

pub fn is_automorphism(e: &HeisEndo) -> bool {
    e.is_automorphism()
}

pub fn aut_apply(a: &HeisAut, g: &HeisElement) -> HeisElement {
    a.0.apply(g)
}

pub fn aut_compose(a: &HeisAut, b: &HeisAut) -> HeisAut {
    HeisAut(a.0.compose(&b.0))
}

/// Conjugation by `x`: top row `(-c, b)` over the identity.
pub fn aut_inner(x: &HeisElement) -> HeisAut {
    HeisAut::kernel([Rat::from_integer(-&x.c), Rat::from_integer(x.b.clone())])
}

/// The induced automorphism of the quotient `Z^2`.
pub fn rho1(a: &HeisAut) -> IntMatrix {
    a.bottom().clone()
}

/// `(a1, a2) -> (-a2, a1)`.
pub fn psi(v: &[Int; 2]) -> [Rat; 2] {
    [Rat::from_integer(-&v[1]), Rat::from_integer(v[0].clone())]
}

pub fn psi_rat(v: &[Rat; 2]) -> [Rat; 2] {
    [-&v[1], v[0].clone()]
}

/// The cocycle of the section `(b, c) -> (0, b, c)`: `((b,c), (y,z)) -> b z`.
pub fn heisenberg_cocycle(x: TorusElem, y: TorusElem) -> Int {
    Int::from(x.0) * Int::from(y.1)
}

type CocycleFn<T> = dyn Fn(TorusElem, TorusElem) -> Vec<T> + Send + Sync;

/// A 2-cocycle on the torus group with values in a rank-`rank` coefficient module.
#[derive(Clone)]
pub struct PointCocycle<T> {
    rank: usize,
    eval: Arc<CocycleFn<T>>,
}

impl<T> PointCocycle<T> {
    pub fn new(rank: usize, eval: impl Fn(TorusElem, TorusElem) -> Vec<T> + Send + Sync + 'static) -> Self {
        PointCocycle { rank, eval: Arc::new(eval) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eval(&self, x: TorusElem, y: TorusElem) -> Vec<T> {
        (self.eval)(x, y)
    }
}

impl<T: Zero + Clone + Send + Sync + 'static> PointCocycle<T> {
    pub fn zero(rank: usize) -> Self {
        PointCocycle::new(rank, move |_, _| vec![T::zero(); rank])
    }
}

impl<T> fmt::Debug for PointCocycle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointCocycle").field("rank", &self.rank).finish_non_exhaustive()
    }
}

pub fn heisenberg_point_cocycle() -> PointCocycle<Int> {
    PointCocycle::new(1, |x, y| vec![heisenberg_cocycle(x, y)])
}

/// Post-composes with `Z -> Q`.
pub fn fibrewise_localize(f: &PointCocycle<Int>) -> PointCocycle<Rat> {
    let inner = f.clone();
    PointCocycle::new(f.rank(), move |x, y| inner.eval(x, y).into_iter().map(Rat::from_integer).collect())
}

/// `ρ(x) f(y,z) - f(xy,z) + f(x,yz) - f(x,y)` for an action given on torus elements.
pub fn cocycle_defect(
    f: &PointCocycle<Rat>,
    action: &dyn Fn(TorusElem) -> RatMatrix,
    x: TorusElem,
    y: TorusElem,
    z: TorusElem,
) -> Vec<Rat> {
    let acted = action(x).mul_vec(&f.eval(y, z)).expect("rank agrees");
    let fxy_z = f.eval(x * y, z);
    let fx_yz = f.eval(x, y * z);
    let fxy = f.eval(x, y);
    (0..f.rank()).map(|i| &acted[i] - &fxy_z[i] + &fx_yz[i] - &fxy[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: i64, b: i64, c: i64) -> HeisElement {
        HeisElement::from_ints(a, b, c)
    }

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn group_law_examples() {
        let x = h(4, -2, 7);
        assert_eq!(HeisElement::identity().mul(&x), x);
        assert_eq!(h(0, 1, 0).mul(&h(0, 0, 1)), h(1, 1, 1));
        assert_eq!(h(0, 1, 0).comm(&h(0, 0, 1)), h(1, 0, 0));
        assert!(x.mul(&x.inv()).is_identity());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(HeisElement::identity().conj(&h(3, 1, 2)), h(3, 1, 2));
        assert_eq!(h(0, 1, 0).conj(&h(0, 0, 1)), h(1, 0, 1));
        assert!(h(5, 0, 0).comm(&h(-2, 0, 0)).is_identity());
    }

    #[test]
    fn closed_forms_match_expansion() {
        let g = h(3, -1, 2);
        let k = h(-5, 4, 1);
        assert_eq!(g.conj(&k), g.mul(&k).mul(&g.inv()));
        assert_eq!(g.comm(&k), g.mul(&k).mul(&g.inv()).mul(&k.inv()));
    }

    #[test]
    fn centre() {
        assert!(HeisElement::central(r(7, 3)).is_central());
        assert!(!h(0, 1, 0).is_central());
        assert!(HeisElement::identity().is_central());
    }

    #[test]
    fn powers() {
        let g = h(2, 3, -1);
        assert!(g.pow(&Int::zero()).is_identity());
        assert_eq!(g.pow(&Int::from(2)), h(2 * 2 - 3, 6, -2));
        assert_eq!(h(0, 1, 1).pow(&Int::from(3)), h(3, 3, 3));
        assert_eq!(g.pow(&Int::from(-2)), g.inv().mul(&g.inv()));
    }

    #[test]
    fn endomorphisms() {
        let id = endomorphism_from_images(&h(0, 1, 0), &h(0, 0, 1));
        assert!(id.is_identity() && is_automorphism(&id));
        let shear = endomorphism_from_images(&h(0, 1, 0), &h(0, 1, 1));
        assert_eq!(shear.bottom, IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]));
        assert!(is_automorphism(&shear));
        let doubling = endomorphism_from_images(&h(0, 1, 0), &h(0, 0, 2));
        assert!(!is_automorphism(&doubling));
        assert!(doubling.try_inverse().is_none());
        assert_eq!(doubling.apply(&h(1, 0, 0)), h(2, 0, 0));
    }

    #[test]
    fn endomorphism_is_a_homomorphism() {
        let e = endomorphism_from_images(&h(3, 2, 1), &HeisElement::new(r(1, 2), Int::from(-1), Int::from(4)));
        let g = h(5, -2, 3);
        let k = HeisElement::new(r(-7, 3), Int::from(1), Int::from(-4));
        assert_eq!(e.apply(&g.mul(&k)), e.apply(&g).mul(&e.apply(&k)));
    }

    #[test]
    fn inner_automorphisms() {
        let x = h(5, 2, 3);
        let iota = aut_inner(&x);
        assert_eq!(iota.top(), &[r(-3, 1), r(2, 1)]);
        assert!(rho1(&iota).is_identity());
        let g = h(1, -4, 6);
        assert_eq!(aut_apply(&iota, &g), x.conj(&g));
    }

    #[test]
    fn kernel_addition_law() {
        let u = [r(1, 2), r(-3, 1)];
        let v = [r(5, 7), r(2, 1)];
        let sum = [&u[0] + &v[0], &u[1] + &v[1]];
        assert_eq!(aut_compose(&HeisAut::kernel(u), &HeisAut::kernel(v)), HeisAut::kernel(sum));
    }

    #[test]
    fn automorphism_inverse() {
        let a = HeisAut::new([r(1, 3), r(-2, 1)], IntMatrix::from_i64_rows(&[&[2, 1], &[1, 1]])).unwrap();
        assert!(aut_compose(&a, &a.inverse()).is_identity());
        assert!(aut_compose(&a.pow(-2), &a.pow(2)).is_identity());
        assert!(HeisAut::new([r(0, 1), r(0, 1)], IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]])).is_err());
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(&[Int::one(), Int::zero()]), [r(0, 1), r(1, 1)]);
        assert_eq!(psi(&[Int::zero(), Int::zero()]), [r(0, 1), r(0, 1)]);
        assert_eq!(psi(&[Int::from(2), Int::from(3)]), [r(-3, 1), r(2, 1)]);
    }

    #[test]
    fn heisenberg_cocycle_values() {
        assert_eq!(heisenberg_cocycle(TorusElem(1, 0), TorusElem(0, 1)), Int::one());
        assert_eq!(heisenberg_cocycle(TorusElem(0, 1), TorusElem(1, 0)), Int::zero());
        // agrees with s(x) s(y) s(xy)^-1 for the section (b, c) -> (0, b, c)
        let s = |t: TorusElem| h(0, t.0, t.1);
        let (x, y) = (TorusElem(3, -2), TorusElem(-1, 5));
        let p = s(x).mul(&s(y)).mul(&s(x * y).inv());
        assert_eq!(p, HeisElement::central(Rat::from_integer(heisenberg_cocycle(x, y))));
    }

    #[test]
    fn localized_heisenberg_cocycle_is_a_cocycle() {
        let f = fibrewise_localize(&heisenberg_point_cocycle());
        let trivial = |_: TorusElem| RatMatrix::identity(1);
        for x in [TorusElem(1, 2), TorusElem(-3, 0)] {
            for y in [TorusElem(0, 1), TorusElem(2, -2)] {
                let z = TorusElem(-1, 4);
                assert!(cocycle_defect(&f, &trivial, x, y, z).iter().all(Zero::is_zero));
            }
        }
        assert!(f.eval(TorusElem::IDENTITY, TorusElem(3, 3))[0].is_zero());
    }
}
