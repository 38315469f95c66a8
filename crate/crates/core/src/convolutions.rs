//! Multiplicative convolutions of circle measures on eta coefficients.
//!
//! Every operation here is a closed formula on η-transforms:
//!
//! ```text
//! monotone      η_{μ▷ν}  = η_μ ∘ η_ν
//! Boolean       η_{μ⨃ν}  = η_μ · η_ν / z
//! orthogonal    η_{μ∠ν}  = z · (η_μ(w)/w) ∘ η_ν
//! c-monotone    left: ((η_{μ1}(w)/w) ∘ η_{ν2}) · η_{μ2},   right: η_{ν1} ∘ η_{ν2}
//! c-free        T-transforms multiply componentwise
//! ```
//!
//! The quotients `η(w)/w` are coefficient shifts, never series divisions,
//! so the c-monotone and orthogonal formulas stay well defined when the
//! inner measure is Haar (η ≡ 0); those degenerate branches fall out of the
//! same code path. All outputs are exact modulo `z^{N+1}`: each formula is
//! triangular in the coefficients, and the one padded slot a shift
//! introduces is annihilated by a factor vanishing at the origin before it
//! can surface.
//!
//! The mean-normalized variants ▷₀ and ⨃₀ reduce to ▷ and ⨃ after the
//! scaling `S_c` and demand nonzero means, as does the c-free convolution,
//! whose chain runs through inverses of R̃-transforms.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;
use crate::transforms::{
    eta_from_rtilde, t_transforms, u_series, EtaCoefficients, PairDistribution,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Monotone convolution: `η_{μ▷ν} = η_μ ∘ η_ν`.
pub fn conv_monotone(mu: &EtaCoefficients, nu: &EtaCoefficients) -> Result<EtaCoefficients> {
    let out = mu.as_series().compose(&nu.as_series())?;
    EtaCoefficients::from_series(&out)
}

/// Boolean convolution: `η_{μ⨃ν}(z) = η_μ(z) η_ν(z) / z`.
pub fn conv_boolean(mu: &EtaCoefficients, nu: &EtaCoefficients) -> Result<EtaCoefficients> {
    let q = mu.as_series().shifted_quotient().expect("eta vanishes at 0");
    EtaCoefficients::from_series(&q.mul(&nu.as_series())?)
}

/// Orthogonal convolution: `η_{μ∠ν}(z) = z · η_μ(η_ν(z)) / η_ν(z)`,
/// computed as `z · ((η_μ(w)/w) ∘ η_ν)`. When ν is Haar (η_ν ≡ 0) this
/// degenerates to `a_1(μ) z`, the continuity limit.
pub fn conv_orthogonal(mu: &EtaCoefficients, nu: &EtaCoefficients) -> Result<EtaCoefficients> {
    let q = mu.as_series().shifted_quotient().expect("eta vanishes at 0");
    let out = q.compose(&nu.as_series())?.shift_up();
    EtaCoefficients::from_series(&out)
}

/// Conditionally monotone convolution of pairs:
///
/// ```text
/// (μ1,ν1) ▷_c (μ2,ν2) = (μ1 ▷_{ν2} μ2, ν1 ▷ ν2),
/// η_{μ1▷_{ν2}μ2}(z) = (η_{μ1}(η_{ν2}(z)) / η_{ν2}(z)) · η_{μ2}(z).
/// ```
///
/// The quotient is taken as `(η_{μ1}(w)/w) ∘ η_{ν2}`, so η_{ν2} ≡ 0 yields
/// the degenerate branch `m_1(μ1) · η_{μ2}` without a separate case.
pub fn conv_cmonotone(p1: &PairDistribution, p2: &PairDistribution) -> Result<PairDistribution> {
    let q1 = p1.mu.as_series().shifted_quotient().expect("eta vanishes at 0");
    let left = q1.compose(&p2.nu.as_series())?.mul(&p2.mu.as_series())?;
    let right = p1.nu.as_series().compose(&p2.nu.as_series())?;
    PairDistribution::new(
        EtaCoefficients::from_series(&left)?,
        EtaCoefficients::from_series(&right)?,
    )
}

/// Conditionally free convolution of pairs, defined by multiplicativity of
/// the T-transforms:
///
/// ```text
/// T_{(μ1,ν1)⊠_c(μ2,ν2)} = T_{(μ1,ν1)} T_{(μ2,ν2)},    T_{ν1⊠ν2} = T_{ν1} T_{ν2}.
/// ```
///
/// The products are inverted back to eta coefficients through the chain
/// `T_ν → R̃_ν^{-1} (= z/T_ν) → R̃_ν → η_ν` and the defining relation of the
/// pair transform, `η_μ = (1 − η_ν) · R̃_{(μ,ν)}(z/(1 − η_ν))`. Each step is
/// triangular, so all output coefficients are exact modulo `z^{N+1}` even
/// though the T-series themselves carry a padded top slot.
///
/// All four component means must be nonzero.
pub fn conv_cfree(p1: &PairDistribution, p2: &PairDistribution) -> Result<PairDistribution> {
    if p1.mu.mean() == ZERO || p2.mu.mean() == ZERO {
        return Err(Error::MeanZero("c-free convolution needs nonzero means"));
    }
    let (tc1, tn1) = t_transforms(p1)?;
    let (tc2, tn2) = t_transforms(p2)?;
    let tc = tc1.mul(&tc2)?;
    let tn = tn1.mul(&tn2)?;

    // R̃_ν^{-1}(z) = z / T_ν(z); reversion recovers R̃_ν itself.
    let rt_nu_inv = tn.recip()?.shift_up();
    let rt_nu = rt_nu_inv.reversion()?;
    let nu = eta_from_rtilde(&rt_nu)?;

    // R̃_{(μ,ν)}(w) = T_{(μ,ν)}(R̃_ν(w)) · w; the shift discards the one
    // slot that depended on the padded top of the T-product.
    let rt_pair = tc.compose(&rt_nu)?.shift_up();
    let eta_nu = nu.as_series();
    let one = TruncatedSeries::constant(ONE, eta_nu.order());
    let one_minus = one.sub(&eta_nu)?;
    let eta_mu = one_minus.mul(&rt_pair.compose(&u_series(&eta_nu))?)?;

    PairDistribution::new(EtaCoefficients::from_series(&eta_mu)?, nu)
}

/// Mean-normalized monotone convolution:
/// `η_{μ▷₀ν}(z) = η_μ(η_ν(m_1(μ) z) / m_1(μ))`, i.e. `μ ▷ S_{m_1(μ)}ν`.
pub fn conv_monotone0(mu: &EtaCoefficients, nu: &EtaCoefficients) -> Result<EtaCoefficients> {
    if mu.mean() == ZERO {
        return Err(Error::MeanZero("mean-normalized monotone convolution needs m_1(mu) != 0"));
    }
    conv_monotone(mu, &scale_s(mu.mean(), nu)?)
}

/// Mean-normalized Boolean convolution:
/// `η_{μ⨃₀ν}(z)/z = (η_μ(m_1(ν)z) / (m_1(ν)z)) · (η_ν(m_1(μ)z) / (m_1(μ)z))`,
/// i.e. `S_{m_1(ν)}μ ⨃ S_{m_1(μ)}ν`.
pub fn conv_boolean0(mu: &EtaCoefficients, nu: &EtaCoefficients) -> Result<EtaCoefficients> {
    if mu.mean() == ZERO || nu.mean() == ZERO {
        return Err(Error::MeanZero("mean-normalized Boolean convolution needs nonzero means"));
    }
    conv_boolean(&scale_s(nu.mean(), mu)?, &scale_s(mu.mean(), nu)?)
}

/// The scaling `T_c`: `η_{T_cμ} = c · η_μ` coefficientwise. `T_0` sends
/// everything to Haar. For the result to stay in the Schur class, `|c| <= 1`.
pub fn scale_t(c: Complex64, mu: &EtaCoefficients) -> Result<EtaCoefficients> {
    EtaCoefficients::new(mu.coeffs().iter().map(|a| c * a).collect())
}

/// The scaling `S_c`: `η_{S_cμ}(z) = η_μ(cz) / c`, i.e. `a_n ↦ c^{n-1} a_n`.
/// Requires `c != 0`; `|c| <= 1` keeps the Schur class.
pub fn scale_s(c: Complex64, mu: &EtaCoefficients) -> Result<EtaCoefficients> {
    if c == ZERO {
        return Err(Error::InvalidInput("S-scaling needs c != 0"));
    }
    let mut pow = ONE;
    let mut out = Vec::with_capacity(mu.order());
    for a in mu.coeffs() {
        out.push(pow * a);
        pow *= c;
    }
    EtaCoefficients::new(out)
}

/// The `n`-fold ▷_c power of a pair, `n >= 1`, as a left-associated
/// iterate (the convolution is associative, so bracketing is immaterial).
pub fn cmonotone_power(p: &PairDistribution, n: u32) -> Result<PairDistribution> {
    if n == 0 {
        return Err(Error::InvalidInput("convolution power needs n >= 1"));
    }
    let mut acc = p.clone();
    for _ in 1..n {
        acc = conv_cmonotone(&acc, p)?;
    }
    Ok(acc)
}
