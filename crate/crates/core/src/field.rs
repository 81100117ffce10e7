//! Exact linear algebra over prime fields.
//!
//! Every matrix carries its modulus. Entries are stored reduced in `[0, p)`
//! and all arithmetic goes through `u128` intermediates, so any prime that
//! fits in a `u64` is usable.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Smallest prime `>= n`.
pub fn smallest_prime_geq(n: u64) -> u64 {
    let mut candidate = n.max(2);
    while !primal_check::miller_rabin(candidate) {
        candidate += 1;
    }
    candidate
}

/// Smallest prime strictly greater than `n`.
pub fn smallest_prime_gt(n: u64) -> u64 {
    smallest_prime_geq(n + 1)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && primal_check::miller_rabin(n)
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Modular inverse by the extended Euclidean algorithm. `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % p as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "{a} is not invertible mod {p}");
    old_s.rem_euclid(p as i128) as u64
}

/// Dense matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{}) [", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from rows of arbitrary integers, reducing them mod `p`.
    ///
    /// Fails if `p` is not prime or the rows are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(p: u64, cols: usize, rows: &[R]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("modulus {p} is not prime")));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&x| x.rem_euclid(p as i64) as u64));
        }
        Ok(Self {
            p,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from already-reduced entries. Fails on any entry `>= p`.
    pub fn from_reduced(p: u64, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("modulus {p} is not prime")));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&x| x >= p) {
            return Err(Error::InvalidArgument(format!(
                "entry {bad} is not reduced mod {p}"
            )));
        }
        Ok(Self {
            p,
            rows,
            cols,
            data,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        self.data[r * self.cols + c] = value % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols, "row width mismatch");
        self.data.extend(row.iter().map(|&x| x % self.p));
        self.rows += 1;
    }

    /// Vertical concatenation. Both operands must agree on `p` and column count.
    pub fn stack(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_compatible(other)?;
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FpMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Keeps only the listed columns, in the listed order.
    pub fn select_columns(&self, columns: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, self.rows, columns.len());
        for r in 0..self.rows {
            for (j, &c) in columns.iter().enumerate() {
                out.data[r * columns.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, 0, self.cols);
        for &r in rows {
            out.push_row(self.row(r));
        }
        out
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.p != other.p || self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} (p={}) by {}x{} (p={})",
                self.rows, self.cols, self.p, other.rows, other.cols, other.p
            )));
        }
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = add_mod(out.data[idx], mul_mod(a, other.get(k, c), p), p);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product over `F_p`.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(x).fold(0u64, |acc, (&a, &b)| {
                    add_mod(acc, mul_mod(a, b, self.p), self.p)
                })
            })
            .collect()
    }

    fn check_compatible(&self, other: &FpMatrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::InvalidArgument(format!(
                "field mismatch: p={} vs p={}",
                self.p, other.p
            )));
        }
        if self.cols != other.cols {
            return Err(Error::InvalidArgument(format!(
                "column mismatch: {} vs {}",
                self.cols, other.cols
            )));
        }
        Ok(())
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(pivot) = (lead..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if pivot != lead {
                for j in 0..self.cols {
                    self.data.swap(pivot * self.cols + j, lead * self.cols + j);
                }
            }
            let inv = inv_mod(self.get(lead, c), p);
            for x in self.row_mut(lead) {
                *x = mul_mod(*x, inv, p);
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = mul_mod(factor, self.get(lead, j), p);
                    let idx = r * self.cols + j;
                    self.data[idx] = sub_mod(self.data[idx], v, p);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    /// Rank over `F_p`.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// True iff every row of `b` lies in the row space of `self`.
    pub fn rowspace_contains(&self, b: &FpMatrix) -> Result<bool> {
        let stacked = self.stack(b)?;
        Ok(stacked.rank() == self.rank())
    }

    /// Finds `X` with `X * self == target`, if one exists.
    pub fn solve_left(&self, target: &FpMatrix) -> Result<Option<FpMatrix>> {
        self.check_compatible(target)?;
        // X * A = B  <=>  A^T * X^T = B^T; eliminate on [A^T | B^T].
        let p = self.p;
        let n = self.rows;
        let at = self.transpose();
        let bt = target.transpose();
        let mut aug = FpMatrix::zeros(p, at.rows, n + bt.cols);
        for r in 0..at.rows {
            aug.row_mut(r)[..n].copy_from_slice(at.row(r));
            aug.row_mut(r)[n..].copy_from_slice(bt.row(r));
        }
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&c| c >= n) {
            return Ok(None);
        }
        let mut xt = FpMatrix::zeros(p, n, bt.cols);
        for (r, &c) in pivots.iter().enumerate() {
            xt.row_mut(c).copy_from_slice(&aug.row(r)[n..]);
        }
        Ok(Some(xt.transpose()))
    }
}

/// Vandermonde matrix with evaluation points `1, 2, ..., rows` (taken mod `p`).
///
/// Row `i` is `(1, x, x^2, ..., x^(cols-1))` with `x = i + 1`. The points are
/// distinct as long as `rows <= p`, which makes every `cols`-row subset
/// invertible.
pub fn vandermonde(rows: usize, cols: usize, p: u64) -> Result<FpMatrix> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("modulus {p} is not prime")));
    }
    if rows as u64 > p {
        return Err(Error::Infeasible(format!(
            "{rows} distinct evaluation points do not exist in F_{p}"
        )));
    }
    let mut m = FpMatrix::zeros(p, rows, cols);
    for i in 0..rows {
        let x = (i as u64 + 1) % p;
        let mut power = 1 % p;
        for j in 0..cols {
            m.data[i * cols + j] = power;
            power = mul_mod(power, x, p);
        }
    }
    Ok(m)
}

/// Matrix with i.i.d. uniform entries drawn from `rng`.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, p: u64, rng: &mut R) -> FpMatrix {
    let data = (0..rows * cols).map(|_| rng.gen_range(0..p)).collect();
    FpMatrix {
        p,
        rows,
        cols,
        data,
    }
}
