//! Measure descriptions, moment sequences, and the transform calculus.
//!
//! A probability measure on the unit circle enters as a [`CircleMeasureSpec`]
//! (atoms, Haar, or raw moments) and is immediately reduced to its moment
//! sequence `m_n = ∫ ζ^n dμ`. All convolution formulas act on the
//! coefficients of the eta transform
//!
//! ```text
//! η_μ(z) = ψ_μ(z) / (1 + ψ_μ(z)),    ψ_μ(z) = Σ_{n≥1} m_n z^n,
//! ```
//!
//! an analytic self-map of the disc with η(0) = 0 and |η(z)| ≤ |z| (the
//! Schur class). On top of η sit the R̃-transform, its conditional variant
//! for a pair of measures, and the T-transforms whose multiplicativity
//! characterizes the c-free convolution:
//!
//! ```text
//! R̃_ν(z / (1 − η_ν(z)))     = η_ν(z) / (1 − η_ν(z))
//! R̃_{(μ,ν)}(z / (1 − η_ν))  = η_μ(z) / (1 − η_ν(z))
//! T_{(μ,ν)}(z) = R̃_{(μ,ν)}(R̃_ν^{-1}(z)) / R̃_ν^{-1}(z),   T_ν(z) = z / R̃_ν^{-1}(z).
//! ```
//!
//! All of these are truncated series; the R̃'s are exact modulo `z^{N+1}`,
//! while T-transforms lose their top coefficient to the division by `z`
//! (slots `0..N-1` are exact, slot `N` is padded with zero).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Reduces an angle to `[0, 2π)` without the std-only `f64::rem_euclid`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let r = theta % TAU;
    if r < 0.0 {
        r + TAU
    } else {
        r
    }
}

/// Input description of a probability measure on the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub enum CircleMeasureSpec {
    /// Finitely many atoms `(angle in radians, weight)`; weights sum to 1.
    Atoms(Vec<(f64, f64)>),
    /// Normalized Haar measure; every moment vanishes.
    Haar,
    /// Raw moments `m_1..m_K`; usable at any order `N <= K`.
    Moments(Vec<Complex64>),
}

/// Moments `m_1..m_N` of a measure on the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    m: Vec<Complex64>,
}

impl MomentSequence {
    /// Wraps raw moments; entries must be finite. The bound `|m_n| <= 1`
    /// holds for genuine measures and is enforced where measures are
    /// ingested ([`moments_from_spec`]), not here, so that intermediate
    /// scaled objects remain representable.
    pub fn new(m: Vec<Complex64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidInput("moment sequence needs order >= 1"));
        }
        if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("moments must be finite"));
        }
        Ok(MomentSequence { m })
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.m.len()
    }

    /// `m_n`, 1-indexed; `n` must lie in `1..=N`.
    pub fn moment(&self, n: usize) -> Complex64 {
        self.m[n - 1]
    }

    /// All moments `m_1..m_N`.
    pub fn values(&self) -> &[Complex64] {
        &self.m
    }

    /// The moment generating series `ψ(z) = Σ m_n z^n` at order `N`.
    pub fn psi_series(&self) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(self.m.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.m);
        TruncatedSeries::from_coeffs(coeffs).expect("nonempty by construction")
    }

    /// Max absolute difference against another sequence of the same order.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.m
            .iter()
            .zip(&rhs.m)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Coefficients `a_1..a_N` of an eta transform `η(z) = Σ a_n z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaCoefficients {
    a: Vec<Complex64>,
}

impl EtaCoefficients {
    /// Wraps coefficients; entries must be finite. Membership in the Schur
    /// class is a property of measure-derived inputs, testable with
    /// [`schur_check`]; scalings may leave it temporarily.
    pub fn new(a: Vec<Complex64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInput("eta coefficients need order >= 1"));
        }
        if a.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("eta coefficients must be finite"));
        }
        Ok(EtaCoefficients { a })
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// Coefficients `a_1..a_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.a
    }

    /// `a_1`, the mean of the underlying measure.
    pub fn mean(&self) -> Complex64 {
        self.a[0]
    }

    /// The series `0 + a_1 z + ... + a_N z^N`.
    pub fn as_series(&self) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(self.a.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.a);
        TruncatedSeries::from_coeffs(coeffs).expect("nonempty by construction")
    }

    /// Reads `a_1..a_N` back off a series whose constant term vanishes.
    pub fn from_series(s: &TruncatedSeries) -> Result<Self> {
        if s.coeff(0) != ZERO {
            return Err(Error::Domain("eta transforms vanish at the origin"));
        }
        if s.order() == 0 {
            return Err(Error::InvalidInput("eta coefficients need order >= 1"));
        }
        EtaCoefficients::new(s.coeffs()[1..].to_vec())
    }

    /// Evaluates the truncated eta polynomial at a point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for a in self.a.iter().rev() {
            acc = (acc + a) * z;
        }
        acc
    }

    /// True if every coefficient is (exactly) zero: the Haar measure at
    /// this truncation order.
    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|c| *c == ZERO)
    }

    /// Max absolute coefficient difference against another eta.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.a
            .iter()
            .zip(&rhs.a)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A pair `(μ, ν)` of eta-coefficient vectors: the state of a conditionally
/// free or conditionally monotone computation.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDistribution {
    pub mu: EtaCoefficients,
    pub nu: EtaCoefficients,
}

impl PairDistribution {
    pub fn new(mu: EtaCoefficients, nu: EtaCoefficients) -> Result<Self> {
        if mu.order() != nu.order() {
            return Err(Error::OrderMismatch { left: mu.order(), right: nu.order() });
        }
        Ok(PairDistribution { mu, nu })
    }

    pub fn order(&self) -> usize {
        self.mu.order()
    }

    /// The unit pair `(δ_1, δ_1)`, with `η(z) = z` on both sides.
    pub fn unit(order: usize) -> Result<Self> {
        let delta = delta_eta(ONE, order)?;
        PairDistribution::new(delta.clone(), delta)
    }
}

/// Eta coefficients of the point mass `δ_c` at `c` on the circle:
/// `η(z) = cz`.
pub fn delta_eta(c: Complex64, order: usize) -> Result<EtaCoefficients> {
    if order == 0 {
        return Err(Error::InvalidInput("eta coefficients need order >= 1"));
    }
    let mut a = vec![ZERO; order];
    a[0] = c;
    EtaCoefficients::new(a)
}

/// Computes `m_1..m_order` from a measure specification.
///
/// Atom weights must be nonnegative and sum to 1 within `1e-12`; raw
/// moments must satisfy `|m_n| <= 1` (within `1e-9`) and supply at least
/// `order` entries.
pub fn moments_from_spec(spec: &CircleMeasureSpec, order: usize) -> Result<MomentSequence> {
    if order == 0 {
        return Err(Error::InvalidInput("order must be >= 1"));
    }
    match spec {
        CircleMeasureSpec::Atoms(atoms) => {
            if atoms.is_empty() {
                return Err(Error::InvalidMeasure("atom list is empty"));
            }
            let mut total = 0.0;
            for &(angle, weight) in atoms {
                if !angle.is_finite() || !weight.is_finite() {
                    return Err(Error::InvalidMeasure("atom data must be finite"));
                }
                if weight < 0.0 {
                    return Err(Error::InvalidMeasure("atom weights must be nonnegative"));
                }
                total += weight;
            }
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidMeasure("atom weights must sum to 1"));
            }
            let mut m = vec![ZERO; order];
            for &(angle, weight) in atoms {
                // ζ^n = e^{inθ} accumulated multiplicatively per atom
                let zeta = Complex64::from_polar(1.0, wrap_angle(angle));
                let mut pow = ONE;
                for entry in m.iter_mut() {
                    pow *= zeta;
                    *entry += weight * pow;
                }
            }
            MomentSequence::new(m)
        }
        CircleMeasureSpec::Haar => MomentSequence::new(vec![ZERO; order]),
        CircleMeasureSpec::Moments(values) => {
            if values.len() < order {
                return Err(Error::InvalidInput("fewer moments supplied than the requested order"));
            }
            let m = values[..order].to_vec();
            if m.iter().any(|c| c.norm() > 1.0 + 1e-9) {
                return Err(Error::InvalidMeasure("|m_n| <= 1 fails"));
            }
            MomentSequence::new(m)
        }
    }
}

/// `η = ψ / (1 + ψ)` on coefficients.
pub fn eta_from_moments(m: &MomentSequence) -> EtaCoefficients {
    let psi = m.psi_series();
    let one = TruncatedSeries::constant(ONE, psi.order());
    let denom = one.add(&psi).expect("same order");
    let eta = psi
        .mul(&denom.recip().expect("constant term is 1"))
        .expect("same order");
    EtaCoefficients::from_series(&eta).expect("psi(0) = 0")
}

/// `ψ = η / (1 − η)` read back as moments; inverse of [`eta_from_moments`].
pub fn moments_from_eta(a: &EtaCoefficients) -> MomentSequence {
    let eta = a.as_series();
    let one = TruncatedSeries::constant(ONE, eta.order());
    let denom = one.sub(&eta).expect("same order");
    let psi = eta
        .mul(&denom.recip().expect("constant term is 1"))
        .expect("same order");
    MomentSequence::new(psi.coeffs()[1..].to_vec()).expect("order >= 1")
}

/// `u(z) = z / (1 − η(z))`, the substitution variable of the R̃ relations.
/// Its linear coefficient is 1, so it is always reversible.
pub(crate) fn u_series(eta: &TruncatedSeries) -> TruncatedSeries {
    let one = TruncatedSeries::constant(ONE, eta.order());
    let denom = one.sub(eta).expect("same order");
    denom.recip().expect("constant term is 1").shift_up()
}

/// R̃ of a single measure, from `R̃_ν(z/(1−η_ν)) = η_ν/(1−η_ν)`.
///
/// The defining relation itself is solvable for any η (the substitution
/// `u = z/(1−η)` always has linear coefficient 1), but a zero-mean measure
/// yields `R̃'(0) = 0`, which makes the inverse `R̃^{-1}` needed by every
/// consumer undefined; such inputs are rejected here.
pub fn rtilde_from_eta(b: &EtaCoefficients) -> Result<TruncatedSeries> {
    if b.mean() == ZERO {
        return Err(Error::MeanZero("R-tilde of a zero-mean measure"));
    }
    let eta = b.as_series();
    let u = u_series(&eta);
    let one = TruncatedSeries::constant(ONE, eta.order());
    let rhs = eta
        .mul(&one.sub(&eta)?.recip()?)
        .expect("same order");
    rhs.compose(&u.reversion()?)
}

/// R̃ of a pair, from `R̃_{(μ,ν)}(z/(1−η_ν)) = η_μ/(1−η_ν)`.
pub fn cfree_rtilde(p: &PairDistribution) -> Result<TruncatedSeries> {
    if p.nu.mean() == ZERO {
        return Err(Error::MeanZero("conditional R-tilde with zero-mean second component"));
    }
    let eta_mu = p.mu.as_series();
    let eta_nu = p.nu.as_series();
    let u = u_series(&eta_nu);
    let one = TruncatedSeries::constant(ONE, eta_nu.order());
    let rhs = eta_mu.mul(&one.sub(&eta_nu)?.recip()?)?;
    rhs.compose(&u.reversion()?)
}

/// Inverts `R̃_ν` back to eta coefficients (the reverse of
/// [`rtilde_from_eta`]). Runs one order higher internally: the final
/// division by `z` consumes one coefficient, and the extra slot is fully
/// determined by `R̃_1..R̃_N`, so the output stays exact modulo `z^{N+1}`.
pub(crate) fn eta_from_rtilde(rt: &TruncatedSeries) -> Result<EtaCoefficients> {
    let n = rt.order();
    let mut ext = rt.coeffs().to_vec();
    ext.push(ZERO);
    let rt_ext = TruncatedSeries::from_coeffs(ext)?;
    let one = TruncatedSeries::constant(ONE, n + 1);
    // z = v(w)(1 + R̃(w)) for v = u^{-1}, so u = reversion(w / (1 + R̃)).
    let v = one.add(&rt_ext)?.recip()?.shift_up();
    let u = v.reversion()?;
    // η = 1 − z/u(z)
    let eta_ext = one.sub(&u.shifted_quotient()?.recip()?)?;
    EtaCoefficients::new(eta_ext.coeffs()[1..=n].to_vec())
}

/// The pair `(T_{(μ,ν)}, T_ν)`.
///
/// Both series carry a zero-padded top coefficient: the division by
/// `R̃_ν^{-1}(z)` (a series vanishing at 0) consumes one order, so slots
/// `0..N-1` are exact and slot `N` is 0.
pub fn t_transforms(p: &PairDistribution) -> Result<(TruncatedSeries, TruncatedSeries)> {
    if p.mu.mean() == ZERO || p.nu.mean() == ZERO {
        return Err(Error::MeanZero("T-transforms need nonzero means"));
    }
    let rt_nu = rtilde_from_eta(&p.nu)?;
    let rt_pair = cfree_rtilde(p)?;
    let rt_nu_inv = rt_nu.reversion()?;
    // T_ν = z / R̃_ν^{-1}(z)
    let t_nu = rt_nu_inv.shifted_quotient()?.recip()?;
    // T_{(μ,ν)} = [R̃_{(μ,ν)}(R̃_ν^{-1}(z)) / z] · T_ν
    let t_pair = rt_pair
        .compose(&rt_nu_inv)?
        .shifted_quotient()?
        .mul(&t_nu)?;
    Ok((t_pair, t_nu))
}

/// Grid test of the Schur bound `|η(z)| <= |z|` on the circle of the given
/// radius. A necessary condition sampled at finitely many points, not a
/// certificate.
pub fn schur_check(a: &EtaCoefficients, radius: f64, points: usize) -> Result<bool> {
    Ok(schur_violation(a, radius, points)? <= 1e-9)
}

/// Largest excess of `|η|` over the radius on the sample grid (0 when the
/// bound holds everywhere on it).
pub(crate) fn schur_violation(a: &EtaCoefficients, radius: f64, points: usize) -> Result<f64> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidInput("schur check radius must lie in (0, 1)"));
    }
    if points < 8 {
        return Err(Error::InvalidInput("schur check needs at least 8 points"));
    }
    let mut worst = 0.0f64;
    for j in 0..points {
        let z = Complex64::from_polar(radius, TAU * j as f64 / points as f64);
        worst = worst.max(a.eval(z).norm() - radius);
    }
    Ok(worst)
}
