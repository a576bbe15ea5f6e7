//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Oracles here avoid the library's own linear algebra: coinvariant groups
//! come from determinantal divisors of `[ρ(x_1) - I | ... | ρ(x_n) - I]`,
//! Heisenberg arithmetic from the 3x3 unitriangular matrix model, and
//! products and determinants from plain loops.

use std::process::ExitCode;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symtorus::classification::{classify, decide_symplectic, enumerate_admissible, Branch};
use symtorus::cohomology::{
    class_of_cocycle, class_of_point_cocycle, cohomology_context, cyclic_cohomology_z2, rational_class_of_point_cocycle,
    rational_image, CohClass, CohContext,
};
use symtorus::exact::{smith_normal_form, IntMatrix};
use symtorus::heisenberg::{
    aut_compose, aut_inner, endomorphism_from_images, fibrewise_localize, heisenberg_point_cocycle, is_automorphism,
    rho1, HeisAut, HeisElement, HeisEndo, PointCocycle,
};
use symtorus::huebschmann::{huebschmann_F, lift_representation, synthesize_extension, verify_theorem21, GElement};
use symtorus::surfaces::{validate_representation, Representation, SurfaceSpec, TorusElem};

type Z = BigInt;
type Q = BigRational;
type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Outcome);

fn z(x: i64) -> Z {
    Z::from(x)
}

fn q(n: i64, d: i64) -> Q {
    Q::new(z(n), z(d))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn mat(rows: [[i64; 2]; 2]) -> IntMatrix {
    IntMatrix::from_i64_rows(&[&rows[0], &rows[1]])
}

fn entry(m: &IntMatrix, i: usize, j: usize) -> Z {
    m.row(i)[j].clone()
}

/// Columns of `ρ(x_i) - I` over all generators.
fn augmentation_columns(images: &[IntMatrix]) -> Vec<[Z; 2]> {
    let mut cols = Vec::new();
    for m in images {
        for j in 0..2 {
            let delta = |i: usize| if i == j { z(1) } else { z(0) };
            cols.push([entry(m, 0, j) - delta(0), entry(m, 1, j) - delta(1)]);
        }
    }
    cols
}

/// Invariant factors (units dropped) of `Z^2 / span(cols)`, from the gcd of
/// the entries and the gcd of the 2x2 minors.
fn quotient_factors(cols: &[[Z; 2]]) -> Vec<Z> {
    let d1 = cols.iter().flat_map(|c| c.iter()).fold(z(0), |g, x| g.gcd(x));
    let mut d2 = z(0);
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            d2 = d2.gcd(&(&cols[i][0] * &cols[j][1] - &cols[i][1] * &cols[j][0]));
        }
    }
    let raw = if d1.is_zero() {
        vec![z(0), z(0)]
    } else if d2.is_zero() {
        vec![d1, z(0)]
    } else {
        let second = &d2 / &d1;
        vec![d1, second]
    };
    raw.into_iter().filter(|d| !d.is_one()).collect()
}

/// Coinvariants of `Z^2` under the generator images.
fn coinvariant_factors(images: &[IntMatrix]) -> Vec<Z> {
    quotient_factors(&augmentation_columns(images))
}

fn in_rational_span(cols: &[[Z; 2]], v: &[Z]) -> bool {
    let full_rank = (0..cols.len())
        .any(|i| (i + 1..cols.len()).any(|j| !(&cols[i][0] * &cols[j][1] - &cols[i][1] * &cols[j][0]).is_zero()));
    if full_rank {
        return true;
    }
    match cols.iter().find(|c| !c[0].is_zero() || !c[1].is_zero()) {
        Some(c) => (&v[0] * &c[1] - &v[1] * &c[0]).is_zero(),
        None => v.iter().all(Zero::is_zero),
    }
}

fn zs(xs: &[i64]) -> Vec<Z> {
    xs.iter().map(|&x| z(x)).collect()
}

fn unipotent_rho() -> Representation {
    validate_representation(SurfaceSpec::TORUS, vec![mat([[1, 0], [0, 1]]), mat([[1, 1], [0, 1]])]).unwrap()
}

fn finite_rho(m: i64, n: i64) -> Representation {
    let r = mat([[1 - 2 * m * n, 2 * m * n * n + n], [-m, m * n + 1]]);
    validate_representation(SurfaceSpec::TORUS, vec![r.clone(), r]).unwrap()
}

fn random_sl2(rng: &mut ChaCha8Rng, len: usize) -> IntMatrix {
    let moves = [mat([[1, 1], [0, 1]]), mat([[1, -1], [0, 1]]), mat([[1, 0], [1, 1]]), mat([[1, 0], [-1, 1]])];
    let mut m = mat([[1, 0], [0, 1]]);
    for _ in 0..len {
        m = &m * &moves[rng.gen_range(0..4)];
    }
    m
}

fn signed(rng: &mut ChaCha8Rng, m: IntMatrix) -> IntMatrix {
    if rng.gen_bool(0.3) {
        m.neg()
    } else {
        m
    }
}

/// Handles carry commuting pairs `(±P^i, ±P^j)`; consecutive handles may
/// instead carry `(X, Y, Y, X)`, whose commutators cancel.
fn random_rep(rng: &mut ChaCha8Rng, genus: u32) -> Representation {
    let mut images = Vec::new();
    let mut left = genus;
    while left > 0 {
        if left >= 2 && rng.gen_bool(0.3) {
            let (lx, ly) = (rng.gen_range(0..4), rng.gen_range(0..4));
            let x = random_sl2(rng, lx);
            let y = random_sl2(rng, ly);
            images.extend([x.clone(), y.clone(), y, x]);
            left -= 2;
        } else {
            let choice = rng.gen_range(0..4);
            let p = match choice {
                0 => mat([[1, 1], [0, 1]]),
                3 => mat([[1, 0], [0, 1]]),
                1 => {
                    let (m, n) = (rng.gen_range(0..4), rng.gen_range(0..4));
                    finite_rho(m, n).image(0).clone()
                }
                _ => {
                    let len = rng.gen_range(1..5);
                    random_sl2(rng, len)
                }
            };
            let (i, j) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            let a = p.pow_signed(i).unwrap();
            let b = p.pow_signed(j).unwrap();
            let a = signed(rng, a);
            let b = signed(rng, b);
            images.extend([a, b]);
            left -= 1;
        }
    }
    validate_representation(SurfaceSpec::OrientableClosed { genus }, images).expect("relator holds by construction")
}

fn class_of(ctx: &Arc<CohContext>, rep: &[i64]) -> CohClass {
    CohClass::from_representative(ctx, zs(rep)).unwrap()
}

fn criterion_1() -> Outcome {
    let rho = unipotent_rho();
    let t = SurfaceSpec::TORUS;
    let factors = classify(t, &rho).map_err(|e| e.to_string())?.invariant_factors().to_vec();
    ensure(factors == zs(&[0]), || format!("H^2 has invariant factors {factors:?}, expected [0]"))?;
    let oracle = coinvariant_factors(rho.images());
    ensure(oracle == factors, || format!("coinvariant oracle gives {oracle:?}"))?;
    let admissible = enumerate_admissible(t, &rho).map_err(|e| e.to_string())?;
    ensure(admissible.len() == 1 && admissible[0].is_zero(), || format!("{} admissible classes", admissible.len()))?;
    Ok("H^2 = Z, admissible = {0}".into())
}

fn criterion_2() -> Outcome {
    let t = SurfaceSpec::TORUS;
    for m in 0..=4i64 {
        for n in 0..=4i64 {
            let rho = finite_rho(m, n);
            let g = classify(t, &rho).map_err(|e| e.to_string())?;
            // Z_m + Z_n in invariant-factor form, with Z_0 = Z
            let (zm, zn) = (z(m), z(n));
            let cyclic = quotient_factors(&[[zm.clone(), z(0)], [z(0), zn.clone()]]);
            ensure(g.invariant_factors() == &cyclic[..], || format!("(m,n)=({m},{n}): got {g}, expected Z_{m} + Z_{n}"))?;
            let oracle = coinvariant_factors(rho.images());
            ensure(oracle == cyclic, || format!("(m,n)=({m},{n}): coinvariant oracle {oracle:?}"))?;
            if m > 0 && n > 0 {
                ensure(g.order() == Some(z(m * n)), || format!("(m,n)=({m},{n}): order {:?}", g.order()))?;
                let all = enumerate_admissible(t, &rho).map_err(|e| e.to_string())?;
                let mut coords: Vec<Vec<Z>> = all.iter().map(|c| c.coords().to_vec()).collect();
                coords.sort();
                coords.dedup();
                ensure(all.len() as i64 == m * n && coords.len() == all.len(), || {
                    format!("(m,n)=({m},{n}): {} admissible classes", all.len())
                })?;
            } else {
                ensure(g.free_rank() > 0, || format!("(m,n)=({m},{n}): free rank 0"))?;
                let torsion = quotient_factors(&[[zm.clone(), z(0)], [z(0), zn.clone()]])
                    .into_iter()
                    .filter(|d| !d.is_zero())
                    .collect::<Vec<_>>();
                ensure(g.torsion_factors() == torsion, || format!("(m,n)=({m},{n}): torsion {:?}", g.torsion_factors()))?;
            }
        }
    }
    Ok("25 pairs, orders mn and coinvariant oracle agree".into())
}

fn criterion_3() -> Outcome {
    let sphere = SurfaceSpec::SPHERE;
    let rp2 = SurfaceSpec::PROJECTIVE_PLANE;
    let minus = mat([[-1, 0], [0, -1]]);
    let cases: [(SurfaceSpec, Representation, Vec<Z>, Branch, bool); 3] = [
        (sphere, Representation::trivial(sphere).unwrap(), zs(&[0, 0]), Branch::SphereTrivialityTest, false),
        (rp2, Representation::trivial(rp2).unwrap(), zs(&[2, 2]), Branch::Rp2TrivialRho, true),
        (rp2, validate_representation(rp2, vec![minus.clone()]).unwrap(), zs(&[0, 0]), Branch::Rp2NontrivialRho, false),
    ];
    for (s, rho, expected, branch, always) in &cases {
        let g = classify(*s, rho).map_err(|e| e.to_string())?;
        ensure(g.invariant_factors() == &expected[..], || format!("{s}: H^2 = {g}"))?;
        let ctx = cohomology_context(*s, rho).map_err(|e| e.to_string())?;
        for a in -3..=3 {
            for b in -3..=3 {
                let c = class_of(&ctx, &[a, b]);
                let v = decide_symplectic(*s, rho, &c).map_err(|e| e.to_string())?;
                ensure(v.branch == *branch, || format!("{s}: branch {}", v.branch))?;
                // on RP^2 with trivial ρ the class (a, b) is zero iff a, b are even
                let zero = if *always { a % 2 == 0 && b % 2 == 0 } else { a == 0 && b == 0 };
                ensure(c.is_zero() == zero, || format!("{s}: class ({a},{b}) zero = {}", c.is_zero()))?;
                ensure(v.admits == (*always || zero), || format!("{s}: class ({a},{b}) admits = {}", v.admits))?;
            }
        }
    }
    let zero_module = IntMatrix::zeros(0, 0);
    let identity = mat([[1, 0], [0, 1]]);
    for qdeg in 0..=2u32 {
        let action = match qdeg {
            0 => &minus,
            1 => &zero_module,
            _ => &identity,
        };
        for p in 0..=4u32 {
            let g = cyclic_cohomology_z2(action, p).map_err(|e| e.to_string())?;
            let expected = match (qdeg, p) {
                (2, 0) => zs(&[0, 0]),
                (0, p) if p % 2 == 1 => zs(&[2, 2]),
                (2, p) if p % 2 == 0 => zs(&[2, 2]),
                _ => vec![],
            };
            ensure(g.invariant_factors() == &expected[..], || format!("E2^({p},{qdeg}) = {g}"))?;
        }
    }
    Ok("three genus-zero cases over a 7x7 class grid, 15 table entries".into())
}

/// `(a, b, c)` as `[[1, b, a], [0, 1, c], [0, 0, 1]]`.
#[derive(Clone, PartialEq, Debug)]
struct M3([[Q; 3]; 3]);

impl M3 {
    fn of(h: &HeisElement) -> M3 {
        let (o, l) = (Q::zero(), Q::one());
        M3([
            [l.clone(), Q::from_integer(h.b.clone()), h.a.clone()],
            [o.clone(), l.clone(), Q::from_integer(h.c.clone())],
            [o.clone(), o, l],
        ])
    }

    fn identity() -> M3 {
        M3::of(&HeisElement::identity())
    }

    fn mul(&self, other: &M3) -> M3 {
        let mut out = M3::identity();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = (0..3).map(|k| &self.0[i][k] * &other.0[k][j]).sum();
            }
        }
        out
    }

    /// `I - X + X^2` with `X = M - I` nilpotent.
    fn inv(&self) -> M3 {
        let mut x = self.clone();
        for i in 0..3 {
            x.0[i][i] -= Q::one();
        }
        let x2 = x.mul(&x);
        let mut out = M3::identity();
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = &out.0[i][j] - &x.0[i][j] + &x2.0[i][j];
            }
        }
        out
    }

    fn pow(&self, n: i64) -> M3 {
        let base = if n < 0 { self.inv() } else { self.clone() };
        (0..n.unsigned_abs()).fold(M3::identity(), |acc, _| acc.mul(&base))
    }

    fn triple(&self) -> Option<HeisElement> {
        let m = &self.0;
        let unitriangular = m[0][0].is_one()
            && m[1][1].is_one()
            && m[2][2].is_one()
            && m[1][0].is_zero()
            && m[2][0].is_zero()
            && m[2][1].is_zero();
        if !unitriangular || !m[0][1].is_integer() || !m[1][2].is_integer() {
            return None;
        }
        Some(HeisElement::new(m[0][2].clone(), m[0][1].to_integer(), m[1][2].to_integer()))
    }
}

fn random_heis(rng: &mut ChaCha8Rng, bound: i64) -> HeisElement {
    HeisElement::new(
        q(rng.gen_range(-bound..=bound), rng.gen_range(1..=5)),
        z(rng.gen_range(-bound..=bound)),
        z(rng.gen_range(-bound..=bound)),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let gens = [M3::of(&HeisElement::from_ints(0, 1, 0)), M3::of(&HeisElement::from_ints(0, 0, 1))];
    let mut central_seen = 0;
    for i in 0..10_000 {
        let mut g = random_heis(&mut rng, 20);
        if i % 10 == 0 {
            g = HeisElement::new(g.a.clone(), z(0), z(0));
        }
        let h = random_heis(&mut rng, 20);
        let (mg, mh) = (M3::of(&g), M3::of(&h));
        let n = rng.gen_range(-6..=6i64);
        let checks = [
            ("mul", g.mul(&h), mg.mul(&mh).triple()),
            ("inv", g.inv(), mg.inv().triple()),
            ("conj", g.conj(&h), mg.mul(&mh).mul(&mg.inv()).triple()),
            ("comm", g.comm(&h), mg.mul(&mh).mul(&mg.inv()).mul(&mh.inv()).triple()),
            ("pow", g.pow(&z(n)), mg.pow(n).triple()),
        ];
        for (name, got, model) in checks {
            ensure(Some(&got) == model.as_ref(), || format!("{name}: {g} and {h}: {got} vs {model:?}"))?;
        }
        // conjugation and commutator closed forms
        let bz_cy = Q::from_integer(&g.b * &h.c - &g.c * &h.b);
        let conj_closed = HeisElement::new(&h.a + &bz_cy, h.b.clone(), h.c.clone());
        ensure(g.conj(&h) == conj_closed, || format!("conjugation closed form fails for {g}, {h}"))?;
        ensure(g.comm(&h) == HeisElement::new(bz_cy, z(0), z(0)), || format!("commutator closed form fails for {g}, {h}"))?;
        let commutes = gens.iter().all(|e| mg.mul(e) == e.mul(&mg));
        central_seen += usize::from(commutes);
        ensure(g.is_central() == commutes, || format!("centre test disagrees for {g}"))?;
    }
    ensure(central_seen >= 1000, || format!("only {central_seen} central samples"))?;
    Ok(format!("10000 samples, {central_seen} central"))
}

fn criterion_5() -> Outcome {
    let ctx = Arc::new(CohContext::trivial_coefficients(SurfaceSpec::TORUS, 1).map_err(|e| e.to_string())?);
    ensure(ctx.h2().invariant_factors() == &zs(&[0])[..], || format!("H^2(Z^2; Z) = {}", ctx.h2()))?;
    let f = heisenberg_point_cocycle();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let x = TorusElem(rng.gen_range(-9..=9), rng.gen_range(-9..=9));
        let y = TorusElem(rng.gen_range(-9..=9), rng.gen_range(-9..=9));
        ensure(f.eval(x, y) == zs(&[x.0 * y.1]), || format!("cocycle at {x}, {y}"))?;
    }
    // coboundaries are symmetric, so f(a, b) - f(b, a) detects the class in H^2(Z^2; Z) = Z
    let pairing = &f.eval(TorusElem::A, TorusElem::B)[0] - &f.eval(TorusElem::B, TorusElem::A)[0];
    let c = class_of_point_cocycle(&ctx, &f).map_err(|e| e.to_string())?;
    ensure(pairing.abs().is_one(), || format!("pairing {pairing}"))?;
    ensure(c.coords().len() == 1 && c.coords()[0].abs().is_one(), || format!("class coordinates {:?}", c.coords()))?;
    let doubled = {
        let f = f.clone();
        PointCocycle::new(1, move |x, y| f.eval(x, y).iter().map(|v| v * 2).collect())
    };
    let c2 = class_of_point_cocycle(&ctx, &doubled).map_err(|e| e.to_string())?;
    ensure(c2.coords()[0] == &c.coords()[0] * 2, || "class is not linear in the cocycle".into())?;
    let r = rational_class_of_point_cocycle(&ctx, &fibrewise_localize(&f)).map_err(|e| e.to_string())?;
    ensure(r.iter().any(|v| !v.is_zero()), || "rational image vanishes".into())?;
    Ok(format!("class coordinate {}, pairing {pairing}", c.coords()[0]))
}

/// `h(a, b, c) = (s(a - bc), 0, 0) X^b Y^c`, with `X, Y` the images of the
/// generators and `(s, 0, 0) = [X, Y]`.
fn oracle_apply(x: &HeisElement, y: &HeisElement, g: &HeisElement) -> HeisElement {
    let (mx, my) = (M3::of(x), M3::of(y));
    let s = mx.mul(&my).mul(&mx.inv()).mul(&my.inv()).0[0][2].clone();
    let bc = Q::from_integer(&g.b * &g.c);
    let central = M3::of(&HeisElement::new(s * (&g.a - bc), z(0), z(0)));
    let b: i64 = (&g.b).try_into().expect("small");
    let c: i64 = (&g.c).try_into().expect("small");
    central.mul(&mx.pow(b)).mul(&my.pow(c)).triple().expect("unitriangular")
}

fn endo_apply(e: &HeisEndo, g: &HeisElement) -> HeisElement {
    oracle_apply(&e.image1(), &e.image2(), g)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut autos = Vec::new();
    for i in 0..1000 {
        let mut x = random_heis(&mut rng, 3);
        let mut y = random_heis(&mut rng, 3);
        if i % 2 == 0 {
            // half the bottoms come from GL(2, Z), so both sides of the criterion are exercised
            let len = rng.gen_range(0..6);
            let m = random_sl2(&mut rng, len);
            let m = signed(&mut rng, m);
            let m = if rng.gen_bool(0.5) { &m * &mat([[0, 1], [1, 0]]) } else { m };
            (x.b, x.c, y.b, y.c) = (entry(&m, 0, 0), entry(&m, 1, 0), entry(&m, 0, 1), entry(&m, 1, 1));
        }
        let e = endomorphism_from_images(&x, &y);
        ensure(e.image1() == x && e.image2() == y, || "endomorphism does not send generators to their images".into())?;
        let det = &x.b * &y.c - &x.c * &y.b;
        let inverse = e.try_inverse();
        ensure(is_automorphism(&e) == det.abs().is_one(), || format!("determinant {det} vs automorphism test"))?;
        ensure(inverse.is_some() == det.abs().is_one(), || format!("determinant {det} vs constructed inverse"))?;
        for _ in 0..3 {
            let g = random_heis(&mut rng, 4);
            let h = random_heis(&mut rng, 4);
            let eg = endo_apply(&e, &g);
            ensure(e.apply(&g) == eg, || format!("apply disagrees with the oracle at {g}"))?;
            ensure(endo_apply(&e, &g.mul(&h)) == eg.mul(&endo_apply(&e, &h)), || "oracle is not a homomorphism".into())?;
            if let Some(inv) = &inverse {
                ensure(endo_apply(inv, &eg) == g, || format!("inverse fails at {g}"))?;
                ensure(endo_apply(&e, &endo_apply(inv, &g)) == g, || format!("inverse fails on the right at {g}"))?;
            }
        }
        if let Ok(a) = HeisAut::try_from(e) {
            autos.push(a);
        }
    }
    ensure(autos.len() >= 100, || format!("only {} automorphisms sampled", autos.len()))?;
    for w in autos.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let ab = aut_compose(a, b);
        ensure(rho1(&ab) == &rho1(a) * &rho1(b), || "rho1 is not multiplicative".into())?;
        let g = random_heis(&mut rng, 4);
        ensure(endo_apply(ab.endo(), &g) == endo_apply(a.endo(), &endo_apply(b.endo(), &g)), || "composition order".into())?;
    }
    for _ in 0..500 {
        let u = [q(rng.gen_range(-9..=9), rng.gen_range(1..=4)), q(rng.gen_range(-9..=9), rng.gen_range(1..=4))];
        let v = [q(rng.gen_range(-9..=9), rng.gen_range(1..=4)), q(rng.gen_range(-9..=9), rng.gen_range(1..=4))];
        let sum = [&u[0] + &v[0], &u[1] + &v[1]];
        let (ku, kv) = (HeisAut::kernel(u), HeisAut::kernel(v));
        ensure(aut_compose(&ku, &kv) == HeisAut::kernel(sum), || "kernel addition law".into())?;
        ensure(rho1(&ku).is_identity(), || "kernel element off the identity".into())?;
        let x = random_heis(&mut rng, 5);
        let y = random_heis(&mut rng, 5);
        ensure(aut_compose(&aut_inner(&x), &aut_inner(&y)) == aut_inner(&x.mul(&y)), || "iota is not a homomorphism".into())?;
        let g = random_heis(&mut rng, 5);
        let (mx, mg) = (M3::of(&x), M3::of(&g));
        let conj = mx.mul(&mg).mul(&mx.inv()).triple();
        ensure(Some(endo_apply(aut_inner(&x).endo(), &g)) == conj, || format!("iota_{x} is not conjugation"))?;
    }
    Ok(format!("1000 endomorphisms, {} automorphisms", autos.len()))
}

fn psi(w: &[Z]) -> [Q; 2] {
    [Q::from_integer(-&w[1]), Q::from_integer(w[0].clone())]
}

fn random_pair(rng: &mut ChaCha8Rng, bound: i64) -> (TorusElem, TorusElem) {
    let mut draw = || TorusElem(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
    (draw(), draw())
}

fn criterion_7() -> Outcome {
    let reps = [
        ("trivial", Representation::trivial(SurfaceSpec::TORUS).unwrap()),
        ("unipotent", unipotent_rho()),
        ("finite (2,3)", finite_rho(2, 3)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut runs = 0;
    for (name, rho) in &reps {
        let ctx = cohomology_context(SurfaceSpec::TORUS, rho).map_err(|e| e.to_string())?;
        let cols = augmentation_columns(rho.images());
        let torsion_rep = (-3..=3i64)
            .flat_map(|a| (-3..=3i64).map(move |b| [a, b]))
            .find(|v| in_rational_span(&cols, &zs(v)) && !class_of(&ctx, v).is_zero());
        let mut targets = vec![[0, 0], [1, 0], [0, 1]];
        targets.extend(torsion_rep);
        let sigma = lift_representation(rho).map_err(|e| e.to_string())?;
        for t in targets {
            let t = zs(&t);
            let report = verify_theorem21(rho, &t, 5, 200, 700 + runs).map_err(|e| e.to_string())?;
            runs += 1;
            ensure(report.samples == 200 && report.passed == 200 && report.failures.is_empty(), || {
                format!("{name} t={t:?}: {}/200, first failure {:?}", report.passed, report.failures.first())
            })?;
            ensure(report.normalization_failures == 0, || format!("{name} t={t:?}: normalization failure"))?;
            let ext = synthesize_extension(rho, &t).map_err(|e| e.to_string())?;
            let comm = ext.commutator_of_generators();
            ensure(comm == GElement::new(t.clone(), TorusElem::IDENTITY), || format!("{name}: [A, B] = {comm:?}"))?;
            let class = class_of_cocycle(&ext).map_err(|e| e.to_string())?;
            let expected = class_of(&ctx, &[(&t[0]).try_into().unwrap(), (&t[1]).try_into().unwrap()]);
            ensure(class == expected, || format!("{name} t={t:?}: class of the extension is not [t]"))?;
            for _ in 0..30 {
                let (x, y) = random_pair(&mut rng, 5);
                let f = ext.f(x, y);
                let big_f = huebschmann_F(x, y, &sigma, &ext).map_err(|e| e.to_string())?;
                let lhs = psi(&f);
                ensure(lhs[0] == -&big_f[0] && lhs[1] == -&big_f[1], || format!("{name} t={t:?}: psi(f) != -F at {x}, {y}"))?;
                let g = GElement::new(zs(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5)]), x);
                let h = GElement::new(zs(&[rng.gen_range(-5..=5), rng.gen_range(-5..=5)]), y);
                let k = GElement::section(TorusElem(rng.gen_range(-5..=5), rng.gen_range(-5..=5)));
                ensure(ext.mul(&ext.mul(&g, &h), &k) == ext.mul(&g, &ext.mul(&h, &k)), || format!("{name}: not associative"))?;
                ensure(ext.mul(&g, &ext.inv(&g)) == GElement::identity(), || format!("{name}: bad inverse"))?;
            }
        }
    }
    Ok(format!("{runs} (ρ, t) runs of 200 samples, no failures"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut torsion = 0;
    for _ in 0..500 {
        let genus = rng.gen_range(1..=3);
        let s = SurfaceSpec::OrientableClosed { genus };
        let rho = random_rep(&mut rng, genus);
        let cols = augmentation_columns(rho.images());
        let ctx = cohomology_context(s, &rho).map_err(|e| e.to_string())?;
        let oracle = quotient_factors(&cols);
        ensure(ctx.h2().invariant_factors() == &oracle[..], || format!("genus {genus}: H^2 = {} vs coinvariants {oracle:?}", ctx.h2()))?;
        let v = if rng.gen_bool(0.4) {
            // an integral combination of the columns, sometimes nudged off their span
            let mut acc = [z(0), z(0)];
            for col in &cols {
                let w = z(rng.gen_range(-2..=2));
                acc[0] += &w * &col[0];
                acc[1] += &w * &col[1];
            }
            if rng.gen_bool(0.2) {
                acc[0] += 1;
            }
            acc.to_vec()
        } else {
            zs(&[rng.gen_range(-6..=6), rng.gen_range(-6..=6)])
        };
        let c = CohClass::from_representative(&ctx, v.clone()).map_err(|e| e.to_string())?;
        let expected = in_rational_span(&cols, &v);
        torsion += usize::from(expected);
        ensure(c.is_torsion() == expected, || format!("genus {genus}, v={v:?}: is_torsion = {}", c.is_torsion()))?;
        let image_zero = rational_image(&c).iter().all(Zero::is_zero);
        ensure(image_zero == expected, || format!("genus {genus}, v={v:?}: rational image zero = {image_zero}"))?;
        let verdict = decide_symplectic(s, &rho, &c).map_err(|e| e.to_string())?;
        ensure(verdict.admits == expected && verdict.branch == Branch::ClosedAsphericalTorsionTest, || {
            format!("genus {genus}, v={v:?}: verdict {verdict:?}")
        })?;
    }
    ensure((50..=450).contains(&torsion), || format!("unbalanced sample: {torsion} torsion classes"))?;
    Ok(format!("500 pairs, {torsion} torsion"))
}

fn int_mul(a: &IntMatrix, b: &IntMatrix) -> Vec<Vec<Z>> {
    (0..a.rows())
        .map(|i| (0..b.cols()).map(|j| (0..a.cols()).map(|k| entry(a, i, k) * entry(b, k, j)).sum()).collect())
        .collect()
}

/// Laplace expansion along the first row.
fn det(m: &[Vec<Z>]) -> Z {
    if m.is_empty() {
        return z(1);
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<Z>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn rows_of(m: &IntMatrix) -> Vec<Vec<Z>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn check_snf(a: &IntMatrix) -> Result<(), String> {
    let d = smith_normal_form(a);
    let uav = int_mul(&IntMatrix::from_rows(int_mul(&d.u, a)).unwrap_or_else(|_| IntMatrix::zeros(0, a.cols())), &d.v);
    ensure(uav == rows_of(&d.s), || format!("UAV != S for {a:?}"))?;
    ensure(det(&rows_of(&d.u)).abs().is_one() && det(&rows_of(&d.v)).abs().is_one(), || "U or V not unimodular".into())?;
    let s = rows_of(&d.s);
    let mut diag = Vec::new();
    for (i, row) in s.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i == j {
                diag.push(x.clone());
            } else {
                ensure(x.is_zero(), || "S is not diagonal".into())?;
            }
        }
    }
    ensure(diag.iter().all(|x| !x.is_negative()), || "negative invariant factor".into())?;
    for w in diag.windows(2) {
        let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        ensure(divides, || format!("divisibility fails in {diag:?}"))?;
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let rows: Vec<Vec<Z>> = (0..r).map(|_| (0..c).map(|_| z(rng.gen_range(-9..=9))).collect()).collect();
        check_snf(&IntMatrix::from_rows(rows).unwrap())?;
    }

    let mut reps: Vec<Representation> = (0..150).map(|i| random_rep(&mut rng, 1 + i % 3)).collect();
    let minus = mat([[-1, 0], [0, -1]]);
    for s in [SurfaceSpec::SPHERE, SurfaceSpec::PROJECTIVE_PLANE, SurfaceSpec::NonOrientableClosed { genus: 2 }] {
        reps.push(Representation::trivial(s).unwrap());
        if s.generator_count() > 0 {
            reps.push(validate_representation(s, vec![minus.clone(); s.generator_count()]).unwrap());
        }
    }
    let klein = SurfaceSpec::NonOrientableClosed { genus: 2 };
    let swap = mat([[0, 1], [1, 0]]);
    reps.push(validate_representation(klein, vec![swap.clone(), swap]).unwrap());
    for rank in 1..=3 {
        let images = (0..rank).map(|_| random_sl2(&mut rng, 3)).collect();
        reps.push(validate_representation(SurfaceSpec::open(rank), images).unwrap());
    }
    for rho in &reps {
        let ctx = cohomology_context(rho.surface(), rho).map_err(|e| e.to_string())?;
        let product = int_mul(ctx.d2(), ctx.d1());
        ensure(product.iter().flatten().all(Zero::is_zero), || format!("d2 d1 != 0 over {}", rho.surface()))?;
    }

    let torus_reps = [Representation::trivial(SurfaceSpec::TORUS).unwrap(), unipotent_rho(), finite_rho(2, 3), finite_rho(1, 4)];
    for i in 0..100 {
        let rho = &torus_reps[i % torus_reps.len()];
        let t = zs(&[rng.gen_range(-4..=4), rng.gen_range(-4..=4)]);
        let ext = Arc::new(synthesize_extension(rho, &t).map_err(|e| e.to_string())?);
        let base = class_of_cocycle(&ext).map_err(|e| e.to_string())?;
        let coeffs: Vec<i64> = (0..8).map(|_| rng.gen_range(-3..=3)).collect();
        // φ(p, q) = (c0 p + c1 q + c2 p q + c3 p^2, c4 p + c5 q + c6 q^2 + c7 p q)
        let phi = move |x: TorusElem| -> [Z; 2] {
            let (p, q) = (x.0, x.1);
            let k = &coeffs;
            [z(k[0] * p + k[1] * q + k[2] * p * q + k[3] * p * p), z(k[4] * p + k[5] * q + k[6] * q * q + k[7] * p * q)]
        };
        let e2 = Arc::clone(&ext);
        let perturbed = PointCocycle::new(2, move |x, y| {
            let f = e2.f(x, y);
            let r = e2.rho_of(x);
            let (px, py, pxy) = (phi(x), phi(y), phi(x * y));
            (0..2)
                .map(|i| &f[i] + &px[i] + (&entry(&r, i, 0) * &py[0] + &entry(&r, i, 1) * &py[1]) - &pxy[i])
                .collect()
        });
        let c = class_of_point_cocycle(base.context(), &perturbed).map_err(|e| e.to_string())?;
        ensure(c == base, || format!("perturbation {i} changes the class"))?;
    }
    Ok(format!("SNF on 1000 matrices, d2 d1 = 0 on {} representations, 100 coboundaries", reps.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "unipotent torus action", criterion_1),
        (2, "finite coinvariants", criterion_2),
        (3, "genus-zero table", criterion_3),
        (4, "Heisenberg matrix model", criterion_4),
        (5, "Heisenberg class", criterion_5),
        (6, "automorphism laws", criterion_6),
        (7, "psi(f) = -F", criterion_7),
        (8, "torsion and localization", criterion_8),
        (9, "structural suites", criterion_9),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {id} PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} FAIL  {name}: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
