//! Laurent polynomials in one variable `t` over exact integers or complex
//! doubles, matrices of them, and their determinants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustfft::FftPlanner;
use serde_json::{json, Value};

/// Complex coefficients below this magnitude are dropped.
pub const PRUNE_EPS: f64 = 1e-10;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("determinant of a non-square {rows}x{cols} matrix")]
    NonSquare { rows: usize, cols: usize },
}

/// Coefficient ring of a [`LaurentPoly`].
pub trait Coeff: Clone + fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn negligible(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// +1 or -1 according to the canonical sign rule, 0 for zero.
    fn sign(&self) -> i8;
    fn to_complex(&self) -> Complex64;
    fn dist(&self, other: &Self) -> f64;
    fn to_json(&self) -> Vec<Value>;
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn negligible(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn to_json(&self) -> Vec<Value> {
        vec![json!(self.to_string())]
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn negligible(&self) -> bool {
        self.norm() < PRUNE_EPS
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self) -> i8 {
        let tiny = 1e-14 * self.norm();
        if self.re > tiny {
            1
        } else if self.re < -tiny {
            -1
        } else if self.im > 0.0 {
            1
        } else if self.im < 0.0 {
            -1
        } else {
            0
        }
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
    fn to_json(&self) -> Vec<Value> {
        vec![json!(self.re), json!(self.im)]
    }
}

/// Finitely supported map from exponents to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<C: Coeff> {
    terms: BTreeMap<i64, C>,
}

pub type ZPoly = LaurentPoly<BigInt>;
pub type CPoly = LaurentPoly<Complex64>;

impl<C: Coeff> Default for LaurentPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    pub fn monomial(c: C, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, &c);
        p
    }

    /// Sums repeated exponents and drops negligible results.
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: &C) {
        let v = match self.terms.get(&e) {
            Some(old) => old.add(c),
            None => c.clone(),
        };
        if v.negligible() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> C {
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// The substitution `t -> 1/t`.
    pub fn involute(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// The substitution `t -> t^n` for `n >= 1`.
    pub fn dilate(&self, n: i64) -> Self {
        assert!(n >= 1);
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e * n, c.clone())).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.mul(s))))
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.terms.iter().map(|(e, c)| c.to_complex() * t.powi(*e as i32)).sum()
    }

    pub fn to_complex(&self) -> CPoly {
        CPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, c.to_complex())))
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut row = vec![json!(e)];
                row.extend(c.to_json());
                Value::Array(row)
            })
            .collect();
        json!({ "terms": terms })
    }

    /// Representative of the class of `self` modulo `±t^Z`.
    pub fn canonicalize(&self) -> CanonicalForm<C> {
        let Some(m) = self.min_exp() else {
            return CanonicalForm { poly: Self::zero(), shift: 0, sign: 1 };
        };
        let poly = self.shift(-m);
        if poly.coeff(0).sign() < 0 {
            CanonicalForm { poly: -&poly, shift: m, sign: -1 }
        } else {
            CanonicalForm { poly, shift: m, sign: 1 }
        }
    }

    /// Largest coefficient distance between two polynomials.
    pub fn max_dist(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.into_iter().map(|e| self.coeff(e).dist(&other.coeff(e))).fold(0.0, f64::max)
    }

    /// Equality in `F[t^±1]/(±t^Z)`, optionally also up to `t -> 1/t`.
    pub fn eq_mod(&self, other: &Self, allow_involution: bool, tol: f64) -> bool {
        let q = other.canonicalize().poly;
        if self.canonicalize().poly.max_dist(&q) <= tol {
            return true;
        }
        allow_involution && self.involute().canonicalize().poly.max_dist(&q) <= tol
    }

    /// `Some((eps, r))` when `p(t) = eps t^r p(1/t)` within `tol`.
    pub fn is_palindromic(&self, tol: f64) -> Option<(i8, i64)> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Some((1, 0));
        };
        let r = lo + hi;
        let (clo, chi) = (self.coeff(lo), self.coeff(hi));
        let eps = if chi.dist(&clo) <= tol {
            1
        } else if chi.dist(&clo.neg()) <= tol {
            -1
        } else {
            return None;
        };
        for e in lo..=hi {
            let mirror = self.coeff(r - e);
            let mirror = if eps == 1 { mirror } else { mirror.neg() };
            if self.coeff(e).dist(&mirror) > tol {
                return None;
            }
        }
        Some((eps, r))
    }
}

impl ZPoly {
    pub fn from_ints(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dlo, dhi) = (d.min_exp()?, d.max_exp()?);
        let lead = d.coeff(dhi);
        let Some(lo) = self.min_exp() else {
            return Some(Self::zero());
        };
        let mut rem = self.clone();
        let mut q = Self::zero();
        while let Some(hi) = rem.max_exp() {
            let e = hi - dhi;
            if e < lo - dlo {
                return None;
            }
            let c = rem.coeff(hi);
            if !(&c % &lead).is_zero() {
                return None;
            }
            let m = Self::monomial(&c / &lead, e);
            rem = &rem - &(&m * d);
            q = &q + &m;
        }
        Some(q)
    }

    pub fn eval_int(&self, t: i64) -> BigInt {
        assert!(t != 0 || self.min_exp().is_none_or(|m| m >= 0));
        let mut acc = <BigInt as num_traits::Zero>::zero();
        for (e, c) in self.terms() {
            acc += c * BigInt::from(t).pow(e.unsigned_abs() as u32);
        }
        acc
    }
}

impl CPoly {
    /// `p'(1) = sum k c_k`.
    pub fn derivative_at_one(&self) -> Complex64 {
        self.terms().map(|(e, c)| c * e as f64).sum()
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, &c.neg());
        }
        out
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        let mut acc: BTreeMap<i64, C> = BTreeMap::new();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                let p = c1.mul(c2);
                acc.entry(e1 + e2).and_modify(|v| *v = v.add(&p)).or_insert(p);
            }
        }
        LaurentPoly::from_terms(acc)
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| match e {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `original = sign * t^shift * poly`, with `poly` starting at `t^0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalForm<C: Coeff> {
    pub poly: LaurentPoly<C>,
    pub shift: i64,
    pub sign: i8,
}

impl<C: Coeff> CanonicalForm<C> {
    pub fn reconstruct(&self) -> LaurentPoly<C> {
        let p = self.poly.shift(self.shift);
        if self.sign < 0 {
            -&p
        } else {
            p
        }
    }

    /// Coefficients of `poly` from `t^0` upward.
    pub fn coefficients(&self) -> Vec<C> {
        match self.poly.max_exp() {
            Some(hi) => (0..=hi).map(|e| self.poly.coeff(e)).collect(),
            None => Vec::new(),
        }
    }
}

/// Dense row-major matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentMatrix<C: Coeff> {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<LaurentPoly<C>>,
}

pub type ZMatrix = LaurentMatrix<BigInt>;
pub type CMatrix = LaurentMatrix<Complex64>;

impl<C: Coeff> LaurentMatrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, entries: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> LaurentPoly<C>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        LaurentMatrix { rows, cols, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly<C> {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly<C>) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[LaurentPoly<C>] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly<C>) -> LaurentPoly<C>) -> Self {
        LaurentMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Entrywise `t -> 1/t`.
    pub fn involute(&self) -> Self {
        self.map(|p| p.involute())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = LaurentPoly::zero();
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * other.get(k, j));
            }
            acc
        })
    }

    /// Multiplies row `i` by `t^{r_i}` and column `j` by `t^{c_j}`.
    pub fn shift_rows_cols(&self, r: &[i64], c: &[i64]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).shift(r[i] + c[j]))
    }

    pub fn eval(&self, t: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(t))
    }

    pub fn to_complex(&self) -> CMatrix {
        LaurentMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.to_complex()).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect()))
                .collect(),
        )
    }

    /// Per-column (min, max) exponents; `None` for a zero column.
    fn column_ranges(&self) -> Vec<Option<(i64, i64)>> {
        (0..self.cols)
            .map(|j| {
                let mut range: Option<(i64, i64)> = None;
                for i in 0..self.rows {
                    let p = self.get(i, j);
                    if let (Some(lo), Some(hi)) = (p.min_exp(), p.max_exp()) {
                        range = Some(match range {
                            None => (lo, hi),
                            Some((a, b)) => (a.min(lo), b.max(hi)),
                        });
                    }
                }
                range
            })
            .collect()
    }
}

impl ZMatrix {
    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Self::from_fn(n, m, |i, j| ZPoly::from_ints(&[(0, rows[i][j])]))
    }

    /// Integer matrix of the coefficients of `t^k`.
    pub fn coefficient(&self, k: i64) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).coeff(k).to_i64().expect("coefficient overflow")).collect())
            .collect()
    }

    /// Specialization `t = 1`.
    pub fn at_one(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval_int(1).to_i64().expect("overflow")).collect())
            .collect()
    }

    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        let lo = self.entries.iter().filter_map(|p| p.min_exp()).min()?;
        let hi = self.entries.iter().filter_map(|p| p.max_exp()).max()?;
        Some((lo, hi))
    }
}

impl CMatrix {
    /// Right multiplication by `diag(d)`.
    pub fn mul_diag(&self, d: &[Complex64]) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).scale(&d[j]))
    }
}

/// Determinant by evaluation at roots of unity and inverse DFT.
pub fn det_numeric(m: &CMatrix) -> Result<CPoly, LaurentError> {
    if !m.is_square() {
        return Err(LaurentError::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(CPoly::one());
    }
    let ranges = m.column_ranges();
    if ranges.iter().any(|r| r.is_none()) {
        return Ok(CPoly::zero());
    }
    let ranges: Vec<(i64, i64)> = ranges.into_iter().flatten().collect();
    let extracted: i64 = ranges.iter().map(|r| r.0).sum();
    let degree: i64 = ranges.iter().map(|r| r.1 - r.0).sum();
    let reduced = CMatrix::from_fn(n, n, |i, j| m.get(i, j).shift(-ranges[j].0));
    let points = (degree + 1) as usize;
    let mut values: Vec<Complex64> = (0..points)
        .map(|k| {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / points as f64);
            reduced.eval(w).determinant()
        })
        .collect();
    FftPlanner::new().plan_fft_forward(points).process(&mut values);
    let scale = 1.0 / points as f64;
    Ok(CPoly::from_terms(values.into_iter().enumerate().map(|(e, v)| (e as i64 + extracted, v * scale))))
}

/// Fraction-free (Bareiss) determinant over `Z[t^±1]`.
pub fn det_exact(m: &ZMatrix) -> Result<ZPoly, LaurentError> {
    if !m.is_square() {
        return Err(LaurentError::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(ZPoly::one());
    }
    let ranges = m.column_ranges();
    if ranges.iter().any(|r| r.is_none()) {
        return Ok(ZPoly::zero());
    }
    let lows: Vec<i64> = ranges.iter().map(|r| r.unwrap().0).collect();
    let mut a: Vec<Vec<ZPoly>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).shift(-lows[j])).collect()).collect();
    let mut negate = false;
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Ok(ZPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss step is not an exact division");
            }
            a[i][k] = ZPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].shift(lows.iter().sum());
    Ok(if negate { -&det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(terms: &[(i64, i64)]) -> ZPoly {
        ZPoly::from_ints(terms)
    }

    #[test]
    fn canonical_sign_flip() {
        let c = z(&[(3, 2), (2, -2)]).canonicalize();
        assert_eq!(c.poly, z(&[(0, 2), (1, -2)]));
        assert_eq!((c.shift, c.sign), (2, -1));
    }

    #[test]
    fn canonical_of_zero() {
        let c = ZPoly::zero().canonicalize();
        assert!(c.poly.is_zero());
        assert_eq!((c.shift, c.sign), (0, 1));
    }

    #[test]
    fn involution_equivalence() {
        assert!(z(&[(1, 2), (0, -1)]).eq_mod(&z(&[(1, 1), (0, -2)]), true, 0.0));
        assert!(!z(&[(1, 2), (0, -1)]).eq_mod(&z(&[(1, 1), (0, -2)]), false, 0.0));
    }

    #[test]
    fn exact_division() {
        let a = z(&[(0, 1), (1, -1)]);
        let b = z(&[(-1, 2), (0, 3), (2, 1)]);
        assert_eq!((&a * &b).div_exact(&a), Some(b));
        assert_eq!(z(&[(0, 1)]).div_exact(&z(&[(0, 2)])), None);
    }

    #[test]
    fn palindromic_examples() {
        assert_eq!(z(&[(0, 1), (1, -5), (2, 1)]).is_palindromic(0.0), Some((1, 2)));
        assert_eq!(z(&[(4, 1), (3, -2), (2, 2), (1, -1)]).is_palindromic(0.0), Some((-1, 5)));
        assert_eq!(z(&[(2, 1), (1, 1), (0, 2)]).is_palindromic(0.0), None);
    }

    #[test]
    fn non_square_rejected() {
        let m = ZMatrix::zeros(2, 3);
        assert_eq!(det_exact(&m), Err(LaurentError::NonSquare { rows: 2, cols: 3 }));
        assert!(det_numeric(&m.to_complex()).is_err());
    }
}
