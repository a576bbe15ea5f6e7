//! Smith normal form over the integers.
//!
//! Row and column operations are mirrored onto `U` and `V` so that
//! `U * A * V = S` holds exactly at every step. Pivots are chosen by smallest
//! absolute value, which keeps intermediate entries small for the matrix sizes
//! this crate works with.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::{Int, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1 | d_2 | ... ` of `S`, one per `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        self.s.diagonal()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = smallest_nonzero(&s, t..m, t..n) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !s[(i, t)].is_zero() {
                    let q = -s[(i, t)].div_floor(&s[(t, t)]);
                    s.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    clean &= s[(i, t)].is_zero();
                }
            }
            for j in t + 1..n {
                if !s[(t, j)].is_zero() {
                    let q = -s[(t, j)].div_floor(&s[(t, t)]);
                    s.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    clean &= s[(t, j)].is_zero();
                }
            }
            if !clean {
                // a remainder is now smaller than the pivot; move it into place
                let (pi, pj) = smallest_in_cross(&s, t);
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let pivot = s[(t, t)].clone();
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => {
                    let one = Int::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    SnfDecomposition { u, s, v }
}

fn smallest_nonzero(
    s: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    rows.flat_map(|i| cols.clone().map(move |j| (i, j)))
        .filter(|&(i, j)| !s[(i, j)].is_zero())
        .min_by(|&a, &b| s[a].abs().cmp(&s[b].abs()))
}

fn smallest_in_cross(s: &IntMatrix, t: usize) -> (usize, usize) {
    let col = (t..s.rows()).map(|i| (i, t));
    let row = (t + 1..s.cols()).map(|j| (t, j));
    col.chain(row)
        .filter(|&p| !s[p].is_zero())
        .min_by(|&a, &b| s[a].abs().cmp(&s[b].abs()))
        .expect("pivot entry is nonzero")
}
