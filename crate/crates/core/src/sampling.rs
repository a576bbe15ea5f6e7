//! Seeded generators of random inputs for self-checks and property suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::exact::{int_vec, Int, IntMatrix};
use crate::heisenberg::HeisElement;
use crate::surfaces::{fixtures, validate_representation, Representation, SurfaceSpec};

fn generators() -> [IntMatrix; 4] {
    let s = IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]);
    let t = IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]]);
    let s_inv = s.unimodular_inverse().expect("unimodular");
    let t_inv = t.unimodular_inverse().expect("unimodular");
    [s, s_inv, t, t_inv]
}

/// A word of length `len` in `S^±1, T^±1`.
pub fn random_sl2<R: Rng>(rng: &mut R, len: usize) -> IntMatrix {
    let gens = generators();
    (0..len).fold(IntMatrix::identity(2), |acc, _| &acc * gens.choose(rng).expect("nonempty"))
}

fn signed_power<R: Rng>(rng: &mut R, w: &IntMatrix) -> IntMatrix {
    let k = rng.gen_range(-2..=2);
    let p = w.pow_signed(k).expect("unimodular");
    if rng.gen_bool(0.25) {
        p.neg()
    } else {
        p
    }
}

/// A commuting pair in SL(2, Z).
pub fn random_commuting_pair<R: Rng>(rng: &mut R) -> (IntMatrix, IntMatrix) {
    match rng.gen_range(0..4) {
        0 => (IntMatrix::identity(2), IntMatrix::identity(2)),
        1 => (IntMatrix::identity(2), fixtures::unipotent(rng.gen_range(-3..=3))),
        2 => {
            let r = fixtures::coinvariant_matrix(rng.gen_range(0..=4), rng.gen_range(0..=4));
            (r.clone(), r)
        }
        _ => {
            let len = rng.gen_range(1..=4);
            let w = random_sl2(rng, len);
            (signed_power(rng, &w), signed_power(rng, &w))
        }
    }
}

/// A representation of the closed orientable surface of the given genus into SL(2, Z).
pub fn random_symplectic_representation<R: Rng>(rng: &mut R, genus: u32) -> Representation {
    let mut images = Vec::with_capacity(2 * genus as usize);
    let mut remaining = genus;
    while remaining > 0 {
        if remaining >= 2 && rng.gen_bool(0.5) {
            // [X, Y][Y, X] = I for any X, Y
            let (lx, ly) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
            let x = random_sl2(rng, lx);
            let y = random_sl2(rng, ly);
            images.extend([x.clone(), y.clone(), y, x]);
            remaining -= 2;
        } else {
            let (p, q) = random_commuting_pair(rng);
            images.extend([p, q]);
            remaining -= 1;
        }
    }
    validate_representation(SurfaceSpec::OrientableClosed { genus }, images).expect("relator holds by construction")
}

pub fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let rows: Vec<Vec<Int>> =
        (0..rows).map(|_| (0..cols).map(|_| Int::from(rng.gen_range(-bound..=bound))).collect()).collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, cols);
    }
    IntMatrix::from_rows(rows).expect("rectangular")
}

pub fn random_vec<R: Rng>(rng: &mut R, len: usize, bound: i64) -> Vec<Int> {
    int_vec(&(0..len).map(|_| rng.gen_range(-bound..=bound)).collect::<Vec<_>>())
}

/// A Heisenberg element with centre coordinate `n/d`, `d` in `1..=6`.
pub fn random_heis<R: Rng>(rng: &mut R, bound: i64) -> HeisElement {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=6);
    HeisElement::new(
        crate::exact::rat(num, den),
        Int::from(rng.gen_range(-bound..=bound)),
        Int::from(rng.gen_range(-bound..=bound)),
    )
}
