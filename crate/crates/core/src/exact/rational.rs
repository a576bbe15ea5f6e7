use num_traits::Zero;

use super::matrix::{Rat, RatMatrix};
use crate::error::{Error, Result};

/// Reduced row echelon form; returns the pivot column of each nonzero row.
fn rref(a: &mut RatMatrix) -> Vec<usize> {
    let (m, n) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let Some(p) = (row..m).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let inv = a[(row, col)].recip();
        for j in 0..n {
            a[(row, j)] = &a[(row, j)] * &inv;
        }
        for i in 0..m {
            if i != row && !a[(i, col)].is_zero() {
                let k = -a[(i, col)].clone();
                a.add_row_multiple(i, row, &k);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Some solution of `a * x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve_linear_rational(a: &RatMatrix, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let rhs = RatMatrix::from_vec(b.len(), 1, b.to_vec())?;
    let mut aug = a.hstack(&rhs)?;
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); n];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug[(row, n)].clone();
    }
    Ok(Some(x))
}

/// The column space of a rational matrix, used to reduce vectors to a
/// canonical residue in `Q^n / colspan`.
#[derive(Clone, Debug)]
pub struct RatColumnSpace {
    dim: usize,
    /// RREF rows spanning the column space, each with a leading 1 at `pivots[i]`.
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl RatColumnSpace {
    pub fn new(a: &RatMatrix) -> Self {
        let mut t = a.transpose();
        let pivots = rref(&mut t);
        let basis = (0..pivots.len()).map(|i| t.row(i).to_vec()).collect();
        RatColumnSpace { dim: a.rows(), basis, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn quotient_dim(&self) -> usize {
        self.dim - self.rank()
    }

    /// Coordinates of `v` modulo the column space, read off at the non-pivot positions.
    pub fn residue(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a {}-dimensional space",
                v.len(),
                self.dim
            )));
        }
        let mut r = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let k = r[p].clone();
            for (x, b) in r.iter_mut().zip(row) {
                *x = &*x - &k * b;
            }
        }
        Ok((0..self.dim).filter(|i| !self.pivots.contains(i)).map(|i| r[i].clone()).collect())
    }

    pub fn contains(&self, v: &[Rat]) -> Result<bool> {
        Ok(self.residue(v)?.iter().all(Zero::is_zero))
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}
