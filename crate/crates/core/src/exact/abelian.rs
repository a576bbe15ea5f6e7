//! Finitely generated abelian groups presented as cokernels of integer matrices.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// `Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | d_2 | ...`, together with the maps that
/// translate between an ambient lattice `Z^n` and normal-form coordinates.
///
/// A factor of `0` is a free summand `Z`. Factors equal to `1` never appear, so
/// two groups are isomorphic exactly when their factor lists are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct FgAbelianGroup {
    invariant_factors: Vec<Int>,
    /// k x n: ambient vector -> raw coordinates (before reducing mod d_i).
    reduction: IntMatrix,
    /// n x k: coordinate generators as ambient vectors.
    lift: IntMatrix,
}

impl FgAbelianGroup {
    /// The trivial group with an `ambient_dim`-dimensional ambient lattice
    /// (every ambient vector reduces to the empty coordinate list).
    pub fn trivial(ambient_dim: usize) -> Self {
        FgAbelianGroup {
            invariant_factors: Vec::new(),
            reduction: IntMatrix::zeros(0, ambient_dim),
            lift: IntMatrix::zeros(ambient_dim, 0),
        }
    }

    /// `Z^n` with the identity reduction.
    pub fn free(n: usize) -> Self {
        FgAbelianGroup {
            invariant_factors: vec![Int::zero(); n],
            reduction: IntMatrix::identity(n),
            lift: IntMatrix::identity(n),
        }
    }

    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    /// Number of coordinates in normal form.
    pub fn arity(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.reduction.cols()
    }

    pub fn free_rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion_factors(&self) -> Vec<Int> {
        self.invariant_factors.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion_factors().iter().product()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        (self.free_rank() == 0).then(|| self.torsion_order())
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_isomorphic(&self, other: &FgAbelianGroup) -> bool {
        self.invariant_factors == other.invariant_factors
    }

    /// Maps an ambient vector to its normal-form coordinates.
    pub fn reduce(&self, v: &[Int]) -> Result<Vec<Int>> {
        let raw = self.reduction.mul_vec(v)?;
        Ok(self.canonical(raw))
    }

    /// An ambient representative of the element with the given coordinates.
    pub fn lift(&self, coords: &[Int]) -> Result<Vec<Int>> {
        self.check_arity(coords)?;
        self.lift.mul_vec(coords)
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.arity()]
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Result<Vec<Int>> {
        self.check_arity(a)?;
        self.check_arity(b)?;
        Ok(self.canonical(a.iter().zip(b).map(|(x, y)| x + y).collect()))
    }

    pub fn neg(&self, a: &[Int]) -> Result<Vec<Int>> {
        self.check_arity(a)?;
        Ok(self.canonical(a.iter().map(|x| -x).collect()))
    }

    pub fn scale(&self, k: &Int, a: &[Int]) -> Result<Vec<Int>> {
        self.check_arity(a)?;
        Ok(self.canonical(a.iter().map(|x| k * x).collect()))
    }

    pub fn is_zero(&self, a: &[Int]) -> Result<bool> {
        self.check_arity(a)?;
        Ok(self.canonical(a.to_vec()).iter().all(Zero::is_zero))
    }

    /// True iff the element has finite order.
    pub fn is_torsion(&self, coords: &[Int]) -> Result<bool> {
        self.check_arity(coords)?;
        Ok(self
            .invariant_factors
            .iter()
            .zip(coords)
            .all(|(d, c)| !d.is_zero() || c.is_zero()))
    }

    /// Order of an element, `None` when it has infinite order.
    pub fn element_order(&self, coords: &[Int]) -> Result<Option<Int>> {
        if !self.is_torsion(coords)? {
            return Ok(None);
        }
        let order = self
            .invariant_factors
            .iter()
            .zip(coords)
            .filter(|(d, _)| !d.is_zero())
            .fold(Int::one(), |acc, (d, c)| {
                let c = c.mod_floor(d);
                acc.lcm(&(d / d.gcd(&c)))
            });
        Ok(Some(order))
    }

    /// All elements of the torsion subgroup, in lexicographic coordinate order.
    pub fn torsion_elements(&self) -> Vec<Vec<Int>> {
        let mut out = vec![Vec::new()];
        for d in &self.invariant_factors {
            let range: Vec<Int> = if d.is_zero() {
                vec![Int::zero()]
            } else {
                residues(d)
            };
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    range.iter().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn canonical(&self, mut coords: Vec<Int>) -> Vec<Int> {
        for (c, d) in coords.iter_mut().zip(&self.invariant_factors) {
            if !d.is_zero() {
                *c = c.mod_floor(d);
            }
        }
        coords
    }

    fn check_arity(&self, coords: &[Int]) -> Result<()> {
        if coords.len() != self.arity() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} normal-form coordinates, got {}",
                self.arity(),
                coords.len()
            )));
        }
        Ok(())
    }
}

fn residues(d: &Int) -> Vec<Int> {
    let mut v = Vec::new();
    let mut x = Int::zero();
    while &x < d {
        v.push(x.clone());
        x += 1;
    }
    v
}

impl fmt::Debug for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Z^n / column-span(a)` where `n = a.rows()`.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    let n = a.rows();
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let u_inv = snf.u.unimodular_inverse().expect("SNF transform is unimodular");

    let mut factors = Vec::new();
    let mut keep = Vec::new();
    for i in 0..n {
        let d = diag.get(i).cloned().unwrap_or_else(Int::zero);
        if !d.is_one() {
            factors.push(d);
            keep.push(i);
        }
    }
    let reduction = if keep.is_empty() {
        IntMatrix::zeros(0, n)
    } else {
        IntMatrix::from_rows(keep.iter().map(|&i| snf.u.row(i).to_vec()).collect()).expect("rectangular")
    };
    let lift = if keep.is_empty() {
        IntMatrix::zeros(n, 0)
    } else {
        IntMatrix::from_rows(keep.iter().map(|&i| u_inv.column(i)).collect())
            .expect("rectangular")
            .transpose()
    };
    FgAbelianGroup { invariant_factors: factors, reduction, lift }
}

/// A Z-basis of `ker(a)` as the columns of an `a.cols() x k` matrix, along
/// with a `k x a.cols()` matrix giving coordinates of kernel vectors in that basis.
pub fn kernel_basis(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let n = a.cols();
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let v_inv = snf.v.unimodular_inverse().expect("SNF transform is unimodular");
    if r == n {
        return (IntMatrix::zeros(n, 0), IntMatrix::zeros(0, n));
    }
    let basis = IntMatrix::from_rows((r..n).map(|j| snf.v.column(j)).collect())
        .expect("rectangular")
        .transpose();
    let coords = IntMatrix::from_rows((r..n).map(|i| v_inv.row(i).to_vec()).collect()).expect("rectangular");
    (basis, coords)
}

/// `ker(outgoing) / im(incoming)` for a composable pair with `outgoing * incoming = 0`.
pub fn subquotient(outgoing: &IntMatrix, incoming: &IntMatrix) -> Result<FgAbelianGroup> {
    if outgoing.cols() != incoming.rows() {
        return Err(Error::DimensionMismatch("maps are not composable".into()));
    }
    if !outgoing.mul_checked(incoming)?.is_zero() {
        return Err(Error::DimensionMismatch("composite of the two maps is not zero".into()));
    }
    let (basis, coords) = kernel_basis(outgoing);
    let k = basis.cols();
    let relations = if k == 0 {
        IntMatrix::zeros(0, incoming.cols())
    } else {
        coords.mul_checked(incoming)?
    };
    let inner = cokernel(&relations);
    // compose the inner reduction with kernel coordinates so callers can reduce ambient kernel vectors
    let reduction = if k == 0 {
        IntMatrix::zeros(0, outgoing.cols())
    } else {
        inner.reduction.mul_checked(&coords)?
    };
    let lift = if k == 0 { IntMatrix::zeros(outgoing.cols(), 0) } else { basis.mul_checked(&inner.lift)? };
    Ok(FgAbelianGroup { invariant_factors: inner.invariant_factors, reduction, lift })
}

/// `Z_{d_1} ⊕ ... ⊕ Z_{d_k}` in normal form (zeros give free summands).
pub fn from_cyclic_orders(orders: &[Int]) -> FgAbelianGroup {
    let n = orders.len();
    let mut diag = IntMatrix::zeros(n, n);
    for (i, d) in orders.iter().enumerate() {
        diag[(i, i)] = d.abs();
    }
    cokernel(&diag)
}
