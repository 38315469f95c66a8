//! Dense truncated power series over `Complex64`.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `c_0 + c_1 z + ... + c_N z^N`; every operation is exact modulo `z^{N+1}`.
//! Binary operations require both operands to carry the same order, so a
//! computation fixes its truncation order once and keeps it throughout.
//!
//! Two conventions matter downstream:
//!
//! * composition `f(g(z))` requires `g(0) = 0`, otherwise truncation would
//!   not commute with substitution;
//! * [`TruncatedSeries::shifted_quotient`] (division by `z`) loses one order
//!   of information; the result is re-padded with a zero top coefficient.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Power series truncated at a fixed order.
///
/// ```
/// use etaconv::series::TruncatedSeries;
/// use etaconv::Complex64;
///
/// // (1 + 2z + 3z^2)(4 + 5z) = 4 + 13z + 22z^2 + O(z^3)
/// let f = TruncatedSeries::from_real(&[1.0, 2.0, 3.0]);
/// let g = TruncatedSeries::from_real(&[4.0, 5.0, 0.0]);
/// let p = f.mul(&g).unwrap();
/// assert_eq!(p.coeff(1), Complex64::new(13.0, 0.0));
/// assert_eq!(p.coeff(2), Complex64::new(22.0, 0.0));
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![ZERO; order + 1] }
    }

    /// The constant series `c`.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The identity series `z`. Requires `order >= 1`.
    pub fn identity(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput("identity series needs order >= 1"));
        }
        let mut s = Self::zero(order);
        s.coeffs[1] = ONE;
        Ok(s)
    }

    /// Builds a series from its coefficients `c_0..c_N`.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a series needs at least a constant term"));
        }
        Ok(TruncatedSeries { coeffs })
    }

    /// Builds a series from real coefficients (test and example helper).
    pub fn from_real(coeffs: &[f64]) -> Self {
        TruncatedSeries {
            coeffs: coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`; `k` must not exceed the order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    /// All stored coefficients `c_0..c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Mutable access for in-place construction.
    pub fn coeff_mut(&mut self, k: usize) -> &mut Complex64 {
        &mut self.coeffs[k]
    }

    /// Largest `k` with a nonzero coefficient (0 for the zero series).
    pub fn effective_degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| *c != ZERO)
            .unwrap_or(0)
    }

    fn check_order(&self, rhs: &Self) -> Result<()> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: rhs.order() });
        }
        Ok(())
    }

    /// Coefficientwise sum.
    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    /// Coefficientwise difference.
    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncatedSeries { coeffs })
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        let n = self.order();
        let mut out = Self::zero(n);
        let da = self.effective_degree().min(n);
        for k in 0..=da {
            let a = self.coeffs[k];
            if a == ZERO {
                continue;
            }
            for j in 0..=(n - k) {
                out.coeffs[k + j] += a * rhs.coeffs[j];
            }
        }
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, c: Complex64) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `z`; the previous top coefficient falls off the end.
    pub fn shift_up(&self) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for k in 1..=n {
            out.coeffs[k] = self.coeffs[k - 1];
        }
        out
    }

    /// Division by `z` for a series with `f(0) = 0`.
    ///
    /// The top coefficient of the result would need `c_{N+1}`, which the
    /// truncation does not carry; it is re-padded with zero.
    pub fn shifted_quotient(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::Domain("division by z needs a vanishing constant term"));
        }
        let n = self.order();
        let mut out = Self::zero(n);
        for k in 0..n {
            out.coeffs[k] = self.coeffs[k + 1];
        }
        Ok(out)
    }

    /// Composition `self(inner(z))`; `inner` must vanish at the origin.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        if inner.coeffs[0] != ZERO {
            return Err(Error::Domain("composition needs inner(0) = 0"));
        }
        let n = self.order();
        // Horner from the effective degree down; skipping the zero tail keeps
        // composition with low-degree outer series (ODE vector fields) cheap.
        let d = self.effective_degree();
        let mut acc = Self::constant(self.coeffs[d], n);
        for k in (0..d).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse of a series with `f(0) = 0`, `f'(0) != 0`.
    ///
    /// Solves `f(g(z)) = z` coefficient by coefficient: the `z^n` coefficient
    /// of `f(g)` depends on `g_n` only through `f'(0) g_n`.
    pub fn reversion(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::Domain("reversion needs f(0) = 0"));
        }
        let f1 = self.coeffs[1];
        if f1 == ZERO {
            return Err(Error::Domain("reversion needs f'(0) != 0"));
        }
        let n = self.order();
        let mut g = Self::zero(n);
        g.coeffs[1] = ONE / f1;
        for k in 2..=n {
            let h = self.compose(&g)?;
            g.coeffs[k] = -h.coeffs[k] / f1;
        }
        Ok(g)
    }

    /// Multiplicative inverse of a series with a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let f0 = self.coeffs[0];
        if f0 == ZERO {
            return Err(Error::Domain("reciprocal needs f(0) != 0"));
        }
        let n = self.order();
        let mut out = Self::zero(n);
        out.coeffs[0] = ONE / f0;
        // c[n] = -(1/f0) * sum_{k=1..n} f[k] c[n-k]
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = -acc / f0;
        }
        Ok(out)
    }

    /// Exponential of a series (any constant term).
    pub fn exp(&self) -> Self {
        let n = self.order();
        let scale = self.coeffs[0].exp();
        let mut out = Self::zero(n);
        out.coeffs[0] = ONE;
        // E' = h' E with h = self - self(0):  n E[n] = sum k h[k] E[n-k]
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += Complex64::new(j as f64, 0.0) * self.coeffs[j] * out.coeffs[k - j];
            }
            out.coeffs[k] = acc / Complex64::new(k as f64, 0.0);
        }
        out.scale(scale)
    }

    /// Logarithm of a series with nonzero constant term.
    ///
    /// The branch is the principal logarithm of `f(0)` with its imaginary
    /// part normalized into `[0, 2π)`, so `exp(log f) = f` while `log` itself
    /// is single-valued.
    pub fn log(&self) -> Result<Self> {
        let f0 = self.coeffs[0];
        if f0 == ZERO {
            return Err(Error::Domain("logarithm needs f(0) != 0"));
        }
        let mut l0 = f0.ln();
        if l0.im < 0.0 {
            l0.im += 2.0 * core::f64::consts::PI;
        }
        let n = self.order();
        let u = self.scale(ONE / f0); // u(0) = 1
        let mut out = Self::zero(n);
        out.coeffs[0] = l0;
        // L[n] = u[n] - (1/n) sum_{k=1..n-1} k L[k] u[n-k]
        for k in 1..=n {
            let mut acc = ZERO;
            for j in 1..k {
                acc += Complex64::new(j as f64, 0.0) * out.coeffs[j] * u.coeffs[k - j];
            }
            out.coeffs[k] = u.coeffs[k] - acc / Complex64::new(k as f64, 0.0);
        }
        Ok(out)
    }

    /// Evaluates the truncated polynomial at a point (Horner).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Max coefficientwise absolute difference against another series.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
