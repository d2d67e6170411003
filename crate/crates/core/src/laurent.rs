//! Laurent polynomials and matrices of them, with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{MaskSequence, Matrix};
use crate::rational::Rational;
use crate::scalar::Scalar;

/// `Σ_k c_k z^k` with finitely many nonzero `c_k`. Zero coefficients are
/// never stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<T> {
    terms: BTreeMap<i64, T>,
}

pub type RatLaurent = LaurentPoly<Rational>;

impl<T: Scalar> Default for LaurentPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: T, k: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    /// `z^k`
    pub fn z(k: i64) -> Self {
        Self::monomial(T::one(), k)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, T)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, k: i64, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&k) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(k, s);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn coeff(&self, k: i64) -> T {
        self.terms.get(&k).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, k))` when the polynomial is exactly `c z^k`.
    pub fn as_monomial(&self) -> Option<(T, i64)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *k))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (*k, c.clone() * s.clone())))
    }

    /// Multiplication by `z^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k + shift, c.clone()))
                .collect(),
        }
    }

    /// `p(z) -> p(-z)`.
    pub fn substitute_neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, if k % 2 == 0 { c.clone() } else { -c.clone() }))
                .collect(),
        }
    }

    /// The function `z -> conj(p(z))` on `|z| = 1`, i.e. `c_k z^k -> conj(c_k) z^{-k}`.
    pub fn conj_on_circle(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (-k, c.conj())).collect(),
        }
    }

    /// `p(z) -> p(z^2)`.
    pub fn upsample(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (2 * k, c.clone())).collect(),
        }
    }

    /// Inverse of [`upsample`](Self::upsample); fails if an odd power is present.
    pub fn downsample(&self) -> Result<Self> {
        if let Some(k) = self.terms.keys().find(|k| *k % 2 != 0) {
            return Err(Error::Construction(format!(
                "odd power z^{k} in even symbol"
            )));
        }
        Ok(Self {
            terms: self.terms.iter().map(|(k, c)| (k / 2, c.clone())).collect(),
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Exact evaluation at a nonzero scalar.
    pub fn eval(&self, z: &T) -> T {
        let mut acc = T::zero();
        for (k, c) in &self.terms {
            let mut zk = T::one();
            let base = if *k < 0 {
                T::one() / z.clone()
            } else {
                z.clone()
            };
            for _ in 0..k.unsigned_abs() {
                zk = zk * base.clone();
            }
            acc = acc + c.clone() * zk;
        }
        acc
    }

    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| c.to_c64() * z.powi(*k as i32))
            .sum()
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Rectangular matrix of Laurent polynomials.
#[derive(Clone, PartialEq)]
pub struct LaurentMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly<T>>,
}

pub type RatLaurentMatrix = LaurentMatrix<Rational>;

impl<T: Scalar> LaurentMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                LaurentPoly::one()
            } else {
                LaurentPoly::zero()
            }
        })
    }

    /// `p(z) Id_n`.
    pub fn scalar_identity(p: &LaurentPoly<T>, n: usize) -> Self {
        Self::identity(n).mul_poly(p)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LaurentPoly<T>,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// `factor · Σ_k M_k z^k`.
    pub fn from_mask(mask: &MaskSequence<T>, factor: &T) -> Self {
        let mut out = Self::zeros(mask.rows(), mask.cols());
        for (k, m) in mask.iter() {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let e = &mut out.entries[i * mask.cols() + j];
                    e.add_term(k, m.get(i, j).clone() * factor.clone());
                }
            }
        }
        out
    }

    /// Mask `k -> factor · coeff_k`, inverse of [`from_mask`](Self::from_mask).
    pub fn to_mask(&self, factor: &T) -> MaskSequence<T> {
        let mut mask = MaskSequence::new(self.rows, self.cols);
        let (lo, hi) = match self.exp_range() {
            Some(r) => r,
            None => return mask,
        };
        for k in lo..=hi {
            mask.insert(k, self.coeff_matrix(k).scale(factor));
        }
        mask
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly<T> {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly<T>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    /// `(min, max)` exponent over all entries.
    pub fn exp_range(&self) -> Option<(i64, i64)> {
        let lo = self.entries.iter().filter_map(LaurentPoly::min_exp).min()?;
        let hi = self.entries.iter().filter_map(LaurentPoly::max_exp).max()?;
        Some((lo, hi))
    }

    /// Coefficient matrix of `z^k`.
    pub fn coeff_matrix(&self, k: i64) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }

    fn map(&self, f: impl Fn(&LaurentPoly<T>) -> LaurentPoly<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(LaurentPoly::neg)
    }

    pub fn mul_poly(&self, p: &LaurentPoly<T>) -> Self {
        self.map(|e| e.mul(p))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|e| e.scale(s))
    }

    pub fn substitute_neg(&self) -> Self {
        self.map(LaurentPoly::substitute_neg)
    }

    /// Entrywise conjugation on the unit circle (no transpose).
    pub fn conj_on_circle(&self) -> Self {
        self.map(LaurentPoly::conj_on_circle)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `conj(M(z))ᵀ` on the unit circle.
    pub fn adjoint_on_circle(&self) -> Self {
        self.conj_on_circle().transpose()
    }

    pub fn upsample(&self) -> Self {
        self.map(LaurentPoly::upsample)
    }

    pub fn downsample(&self) -> Result<Self> {
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(LaurentPoly::downsample)
                .collect::<Result<_>>()?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = LaurentPoly::zero();
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        }))
    }

    /// Sub-block `rows r0..r0+nr`, `cols c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Self::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Assembles `[[a, b], [c, d]]` from equally shaped blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("incompatible blocks".into()));
        }
        Ok(Self::from_fn(
            a.rows + c.rows,
            a.cols + b.cols,
            |i, j| match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (true, false) => b.get(i, j - a.cols).clone(),
                (false, true) => c.get(i - a.rows, j).clone(),
                (false, false) => d.get(i - a.rows, j - a.cols).clone(),
            },
        ))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    /// Exact inverse of a square lower-triangular matrix whose diagonal
    /// entries are monomials `c z^d`, the units of the Laurent ring.
    #[allow(clippy::needless_range_loop)]
    pub fn invert_lower_triangular(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not square",
                self.rows, self.cols
            )));
        }
        if !self.is_lower_triangular() {
            return Err(Error::NotInvertible("not lower triangular".into()));
        }
        let n = self.rows;
        let mut diag_inv = Vec::with_capacity(n);
        for i in 0..n {
            match self.get(i, i).as_monomial() {
                Some((c, d)) => diag_inv.push(LaurentPoly::monomial(T::one() / c, -d)),
                None => {
                    return Err(Error::NotInvertible(format!(
                        "diagonal entry {i} is not a monomial"
                    )))
                }
            }
        }
        let mut inv = Self::zeros(n, n);
        for j in 0..n {
            inv.set(j, j, diag_inv[j].clone());
            for i in j + 1..n {
                let mut acc = LaurentPoly::zero();
                for k in j..i {
                    let l = self.get(i, k);
                    if !l.is_zero() {
                        acc = acc.add(&l.mul(inv.get(k, j)));
                    }
                }
                inv.set(i, j, acc.mul(&diag_inv[i]).neg());
            }
        }
        Ok(inv)
    }

    pub fn eval(&self, z: &T) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(z))
    }

    pub fn eval_c64(&self, z: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval_c64(z))
    }

    /// Entries that are not zero, as `(row, col, poly)`.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, LaurentPoly<T>)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if !e.is_zero() {
                    out.push((i, j, e.clone()));
                }
            }
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for LaurentMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.rows {
            list.entry(&&self.entries[i * self.cols..(i + 1) * self.cols]);
        }
        list.finish()
    }
}
