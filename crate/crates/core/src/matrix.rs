//! Exact integer matrices and the Smith normal form.
//!
//! Entries are unbounded-precision integers: SNF intermediates can swell far
//! past machine width even for small inputs.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| BigInt::from(x)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * other.get(k, j);
                    *out.get_mut(i, j) += prod;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.entries.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                match (k + 1..n).find(|&i| !at(&m, i, k).is_zero()) {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j);
                    m[i * n + j] = num / &prev;
                }
            }
            prev = at(&m, k, k);
        }
        sign * at(&m, n - 1, n - 1)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += q * row b
    fn add_row_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let add = q * self.get(b, j);
            *self.get_mut(a, j) += add;
        }
    }

    /// col a += q * col b
    fn add_col_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let add = q * self.get(i, b);
            *self.get_mut(i, a) += add;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j).clone();
            *self.get_mut(a, j) = v;
        }
    }
}

/// Decomposition U·M·V = D with U, V unimodular and D diagonal with each
/// entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    /// Nonzero diagonal entries in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Compute the Smith normal form with deterministic pivoting: the pivot is
/// the entry of smallest nonzero absolute value in the remaining submatrix,
/// ties broken by row-major position. The identity U·M·V = D and
/// unimodularity of U and V are verified before returning.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let steps = m.rows().min(m.cols());

    for k in 0..steps {
        'pivot: loop {
            let Some((pi, pj)) = pick_pivot(&d, k) else {
                break 'pivot;
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            // clear column k by division; a nonzero remainder leaves a
            // strictly smaller candidate pivot behind
            let mut dirty = false;
            for i in k + 1..d.rows() {
                if d.get(i, k).is_zero() {
                    continue;
                }
                let q = -(d.get(i, k) / d.get(k, k));
                d.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                if !d.get(i, k).is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..d.cols() {
                if d.get(k, j).is_zero() {
                    continue;
                }
                let q = -(d.get(k, j) / d.get(k, k));
                d.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                if !d.get(k, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // force the divisibility chain: drag a non-divisible entry into
            // row k and keep reducing
            let pivot = d.get(k, k).clone();
            let offender = (k + 1..d.rows())
                .find(|&i| (k + 1..d.cols()).any(|j| !(d.get(i, j) % &pivot).is_zero()));
            if let Some(i) = offender {
                let one = BigInt::one();
                d.add_row_multiple(k, i, &one);
                u.add_row_multiple(k, i, &one);
                continue 'pivot;
            }
            break 'pivot;
        }
        if d.get(k, k).is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }

    let snf = SmithNormalForm { d, u, v };
    verify(m, &snf);
    snf
}

fn pick_pivot(d: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..d.rows() {
        for j in k..d.cols() {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn verify(m: &IntMatrix, snf: &SmithNormalForm) {
    assert!(snf.d.is_diagonal(), "smith form must be diagonal");
    let factors = snf.invariant_factors();
    for w in factors.windows(2) {
        assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
    }
    assert!(
        factors.iter().all(|f| f.is_positive()),
        "invariant factors must be positive"
    );
    // zero entries only after the nonzero ones
    let n = snf.d.rows().min(snf.d.cols());
    for i in factors.len()..n {
        assert!(snf.d.get(i, i).is_zero());
    }
    assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "U*M*V must equal D");
    assert_eq!(
        snf.u.determinant().abs(),
        BigInt::one(),
        "U must be unimodular"
    );
    assert_eq!(
        snf.v.determinant().abs(),
        BigInt::one(),
        "V must be unimodular"
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_entry_normalizes_to_one() {
        let m = IntMatrix::from_i64(1, 1, &[-1]).unwrap();
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, IntMatrix::from_i64(1, 1, &[1]).unwrap());
    }

    #[test]
    fn hand_reduced_two_by_two() {
        // gcd of entries is 1 and |det| = 3, so the form is diag(1, 3)
        let m = IntMatrix::from_i64(2, 2, &[1, -2, -2, 1]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(-3));
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, IntMatrix::from_i64(2, 2, &[1, 0, 0, 3]).unwrap());
    }

    #[test]
    fn zero_matrix_stays_zero() {
        let m = IntMatrix::zero(2, 2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.d, IntMatrix::zero(2, 2));
        assert_eq!(snf.u, IntMatrix::identity(2));
        assert_eq!(snf.v, IntMatrix::identity(2));
    }

    #[test]
    fn empty_matrices_are_fine() {
        let m = IntMatrix::zero(0, 3);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank(), 0);
        let m = IntMatrix::zero(0, 0);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn rectangular_reduction() {
        let m = IntMatrix::from_i64(2, 3, &[2, 4, 4, -6, 6, 12]).unwrap();
        let snf = smith_normal_form(&m);
        let factors = snf.invariant_factors();
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0], BigInt::from(2));
        assert!((&factors[1] % &factors[0]).is_zero());
    }

    #[test]
    fn determinant_matches_product_of_factors() {
        let m = IntMatrix::from_i64(3, 3, &[2, 0, 1, 0, 3, 0, 1, 0, 2]).unwrap();
        let snf = smith_normal_form(&m);
        let product: BigInt = snf.invariant_factors().iter().product();
        assert_eq!(m.determinant().abs(), product);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let err = IntMatrix::new(2, 2, vec![BigInt::one()]).unwrap_err();
        assert_eq!(err.name(), "InvalidMatrix");
    }
}
