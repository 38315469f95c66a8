//! Abel–Poisson density reconstruction and closed-form reference measures.
//!
//! From the boundary correspondence `(1+η_μ(z))/(1−η_μ(z)) = ∫ (ζ+z)/(ζ−z) dμ(ζ)`,
//! the moments of `μ` determine its Poisson-smoothed density at radius
//! `r_0 < 1`:
//!
//! ```text
//! p_{r_0}(θ) = 1 + 2 Σ_{n=1}^{N} r_0^n Re(m_n e^{−inθ}),
//! ```
//!
//! normalized against Lebesgue measure `dθ/2π`. Truncation at order `N`
//! smudges the density further, so the reconstruction is always reported at
//! its explicit radius and atoms are read off through window masses, never
//! as pointwise singular parts. The reference family here consists of the
//! exactly solvable semigroups: the rotating shrinking point mass (whose
//! density is a moving Poisson kernel), the Haar-plus-point-mass mixture,
//! and the left components `η(z) = z(z+(1−z)e^{at})^{−r}` driven by
//! proportional fields.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// f64 math (powi/exp/cos) comes from the trait under no_std; builds that link
// std anywhere in the graph see the inherent methods instead
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;
use crate::transforms::{wrap_angle, EtaCoefficients, MomentSequence};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Poisson-smoothed density samples at a fixed radius, normalized so that
/// a probability measure has total (trapezoid) mass 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DensitySamples {
    radius: f64,
    angles: Vec<f64>,
    values: Vec<f64>,
}

impl DensitySamples {
    /// Sampling radius `r_0`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Sample angles in `[0, 2π)`, ascending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Density values `p(θ_j) >= 0`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Trapezoid integral over the full circle divided by `2π`, closing the
    /// wraparound segment by periodicity. Close to 1 for fine grids.
    pub fn trapezoid_mass(&self) -> f64 {
        self.window_mass(0.0, core::f64::consts::PI + 1e-12)
    }

    /// Trapezoid mass of the window `|θ − center| <= half_width` (angles
    /// compared modulo `2π`).
    pub fn window_mass(&self, center: f64, half_width: f64) -> f64 {
        let n = self.angles.len();
        let inside = |j: usize| {
            let mut d = wrap_angle(self.angles[j] - center);
            if d > core::f64::consts::PI {
                d -= TAU;
            }
            d.abs() <= half_width
        };
        let mut mass = 0.0;
        for j in 0..n {
            let k = (j + 1) % n;
            if inside(j) && inside(k) {
                let dt = wrap_angle(self.angles[k] - self.angles[j]);
                mass += 0.5 * (self.values[j] + self.values[k]) * dt;
            }
        }
        mass / TAU
    }
}

/// Abel–Poisson density of a moment sequence at radius `r_0`, sampled on
/// `points` equispaced angles.
///
/// For genuine measures the truncated sum can only undershoot zero by the
/// tail `2 r_0^{N+1}/(1−r_0)` (all moments are bounded by 1), so dips
/// within that allowance are clamped to 0; anything deeper proves the
/// moments inconsistent with a positive measure and errors.
pub fn poisson_density(m: &MomentSequence, radius: f64, points: usize) -> Result<DensitySamples> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidInput("sampling radius must lie in (0, 1)"));
    }
    if points == 0 {
        return Err(Error::InvalidInput("density sampling needs at least one point"));
    }
    let order = m.order();
    let allowance = 2.0 * radius.powi(order as i32 + 1) / (1.0 - radius) + 1e-9;
    let mut angles = Vec::with_capacity(points);
    let mut values = Vec::with_capacity(points);
    for j in 0..points {
        let theta = TAU * j as f64 / points as f64;
        let w = Complex64::from_polar(radius, -theta);
        let mut pw = ONE;
        let mut acc = 0.0;
        for mn in m.values() {
            pw *= w;
            acc += (mn * pw).re;
        }
        let p = 1.0 + 2.0 * acc;
        if p < -allowance {
            return Err(Error::InconsistentMoments(
                "density is negative beyond the truncation allowance",
            ));
        }
        angles.push(theta);
        values.push(p.max(0.0));
    }
    Ok(DensitySamples { radius, angles, values })
}

fn check_decay_params(a: f64, t: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidInput("decay rate a must be finite and > 0"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput("time must be finite and >= 0"));
    }
    Ok(())
}

/// Closed-form density of the semigroup driven by the constant field
/// `B_2 = −a + ib`: the right component at time `t` is the point mass at
/// `e^{ibt}` shrunk to radius `e^{−at}`, whose Abel–Poisson density at
/// sampling radius `r_0` is the Poisson kernel
///
/// ```text
/// p(θ) = (1 − ρ²) / (1 + ρ² − 2ρ cos(θ − bt)),    ρ = r_0 e^{−at},
/// ```
///
/// evaluated at the given angles.
pub fn reference_poisson_density(
    a: f64,
    b: f64,
    t: f64,
    radius: f64,
    angles: &[f64],
) -> Result<DensitySamples> {
    check_decay_params(a, t)?;
    if !b.is_finite() {
        return Err(Error::InvalidInput("rotation rate must be finite"));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidInput("sampling radius must lie in (0, 1)"));
    }
    if angles.is_empty() || angles.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("angles must be finite and nonempty"));
    }
    let rho = radius * (-a * t).exp();
    let values = angles
        .iter()
        .map(|&theta| {
            (1.0 - rho * rho) / (1.0 + rho * rho - 2.0 * rho * (theta - b * t).cos())
        })
        .collect();
    Ok(DensitySamples { radius, angles: angles.to_vec(), values })
}

/// Closed-form moments of the semigroup driven by `B_2(z) = a(z − 1)`: the
/// right component is the mixture `ν_t = (1 − e^{−at})·Haar + e^{−at}·δ_1`,
/// so every moment equals `e^{−at}`.
pub fn reference_haar_delta_moments(a: f64, t: f64, order: usize) -> Result<MomentSequence> {
    check_decay_params(a, t)?;
    if order == 0 {
        return Err(Error::InvalidInput("order must be >= 1"));
    }
    let m = (-a * t).exp();
    MomentSequence::new(vec![Complex64::new(m, 0.0); order])
}

/// Closed-form left component of the semigroup driven by `B_2(z) = a(z−1)`
/// and `B_1 = r·B_2`:
///
/// ```text
/// η_{μ_t^r}(z) = z (z + (1 − z) e^{at})^{−r},
/// ```
///
/// expanded to `order` coefficients through series log/exp.
pub fn reference_mu_r_eta(a: f64, r: f64, t: f64, order: usize) -> Result<EtaCoefficients> {
    check_decay_params(a, t)?;
    if !r.is_finite() {
        return Err(Error::InvalidInput("the power r must be finite"));
    }
    if order == 0 {
        return Err(Error::InvalidInput("order must be >= 1"));
    }
    let eat = (a * t).exp();
    let mut base = vec![0.0; order + 1];
    base[0] = eat;
    base[1] = 1.0 - eat;
    let eta = TruncatedSeries::from_real(&base)
        .log()?
        .scale(Complex64::new(-r, 0.0))
        .exp()
        .shift_up();
    EtaCoefficients::from_series(&eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroups::{evolve_coefficients, FieldSeries};
    use crate::transforms::{moments_from_eta, moments_from_spec, CircleMeasureSpec};

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn haar_density_is_constant_one() {
        let m = MomentSequence::new(vec![ZERO; 6]).unwrap();
        let d = poisson_density(&m, 0.9, 32).unwrap();
        assert!(d.values().iter().all(|&p| (p - 1.0).abs() < 1e-15));
        assert!((d.trapezoid_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_mass_density_is_the_poisson_kernel() {
        let r = 0.8;
        let m = MomentSequence::new(vec![ONE; 128]).unwrap();
        let d = poisson_density(&m, r, 256).unwrap();
        for (theta, p) in d.angles().iter().zip(d.values()) {
            let kernel = (1.0 - r * r) / (1.0 + r * r - 2.0 * r * theta.cos());
            assert!((p - kernel).abs() < 1e-10);
        }
        assert!((d.trapezoid_mass() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn deep_negativity_flags_inconsistent_moments() {
        // m_n = -1 for all n is no measure: the density at θ = 0 dives far
        // below the truncation allowance
        let m = MomentSequence::new(vec![-ONE; 16]).unwrap();
        assert!(matches!(
            poisson_density(&m, 0.9, 64),
            Err(Error::InconsistentMoments(_))
        ));
    }

    #[test]
    fn truncation_dips_are_clamped_not_flagged() {
        // a genuine point mass sampled close to the circle with few moments
        // rings negative, but only within the tail allowance
        let m = MomentSequence::new(vec![ONE; 64]).unwrap();
        let d = poisson_density(&m, 0.999, 128).unwrap();
        assert!(d.values().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn trapezoid_mass_is_one_for_alias_free_grids() {
        let spec = CircleMeasureSpec::Atoms(vec![(0.5, 0.3), (2.0, 0.45), (4.4, 0.25)]);
        let m = moments_from_spec(&spec, 20).unwrap();
        let d = poisson_density(&m, 0.7, 64).unwrap();
        assert!((d.trapezoid_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn atom_windows_carry_their_weights() {
        let atoms = [(0.8, 0.55), (3.5, 0.45)];
        let spec = CircleMeasureSpec::Atoms(atoms.to_vec());
        let m = moments_from_spec(&spec, 6000).unwrap();
        let d = poisson_density(&m, 0.995, 8192).unwrap();
        for &(angle, weight) in &atoms {
            let mass = d.window_mass(angle, 0.1);
            assert!(
                mass >= 0.95 * weight,
                "window at {angle} holds {mass}, want >= {}",
                0.95 * weight
            );
        }
        assert!((d.trapezoid_mass() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn shrinking_point_mass_density_matches_its_kernel() {
        // constant field B = -a+ib: moments of ν_t are e^{(−a+ib)nt}, and
        // the sampled density is the reference kernel at the same radius
        let (a, b, t, r0) = (0.5, 1.0, 1.0, 0.999);
        let lam = c(-a, b) * t;
        let mut mom = Vec::new();
        let mut acc = ONE;
        for _ in 0..64 {
            acc *= lam.exp();
            mom.push(acc);
        }
        let m = MomentSequence::new(mom).unwrap();
        let d = poisson_density(&m, r0, 512).unwrap();
        let reference = reference_poisson_density(a, b, t, r0, d.angles()).unwrap();
        for (p, q) in d.values().iter().zip(reference.values()) {
            assert!((p - q).abs() < 1e-12);
        }
    }

    #[test]
    fn haar_delta_moments_interpolate_delta_and_haar() {
        let at_zero = reference_haar_delta_moments(1.0, 0.0, 5).unwrap();
        assert!(at_zero.values().iter().all(|&m| (m - ONE).norm() < 1e-15));
        let late = reference_haar_delta_moments(1.0, 40.0, 5).unwrap();
        assert!(late.values().iter().all(|&m| m.norm() < 1e-15));
    }

    #[test]
    fn references_match_the_integrated_semigroup() {
        // B_2 = a(z-1) with a = 1, B_1 = r·B_2 with r = 1, t = 0.7
        let (aa, t, order) = (1.0, 0.7, 8);
        let b2 = FieldSeries::new(vec![c(-aa, 0.0), c(aa, 0.0)]).unwrap();
        let ev = evolve_coefficients(&b2, &b2, t, 1000, order).unwrap();
        let end = ev.final_pair();
        let nu_moments = moments_from_eta(&end.nu);
        let want = reference_haar_delta_moments(aa, t, order).unwrap();
        assert!(nu_moments.max_abs_diff(&want) < 1e-8);
        let mu_ref = reference_mu_r_eta(aa, 1.0, t, order).unwrap();
        assert!(end.mu.max_abs_diff(&mu_ref) < 1e-8);
        // r = 1 makes the left component the ν-marginal of a ▷-semigroup,
        // which for this field equals the right component
        assert!(end.mu.max_abs_diff(&end.nu) < 1e-8);
    }

    #[test]
    fn parameter_validation_rejects_nonsense() {
        let m = MomentSequence::new(vec![ZERO; 3]).unwrap();
        assert!(matches!(poisson_density(&m, 1.0, 16), Err(Error::InvalidInput(_))));
        assert!(matches!(poisson_density(&m, 0.5, 0), Err(Error::InvalidInput(_))));
        assert!(matches!(
            reference_poisson_density(-1.0, 0.0, 1.0, 0.9, &[0.0]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            reference_haar_delta_moments(1.0, -0.5, 4),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(reference_mu_r_eta(1.0, 2.0, 0.5, 0), Err(Error::InvalidInput(_))));
    }
}
