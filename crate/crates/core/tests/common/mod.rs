//! Seeded random measure fixtures shared by the integration suites.
#![allow(dead_code)]

use etaconv::transforms::{
    eta_from_moments, moments_from_spec, CircleMeasureSpec, EtaCoefficients, MomentSequence,
    PairDistribution,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// 2 or 3 atoms within `±spread` of a random center, weights normalized;
/// `|m_1| >= cos(spread)` for any weights, so small spreads force the mean
/// away from 0.
pub fn spread_spec(rng: &mut ChaCha8Rng, spread: f64) -> CircleMeasureSpec {
    let k = rng.gen_range(2..=3usize);
    let center = rng.gen_range(0.0..core::f64::consts::TAU);
    let mut atoms: Vec<(f64, f64)> = (0..k)
        .map(|_| {
            (
                center + rng.gen_range(-spread..=spread),
                rng.gen_range(0.1..1.0f64),
            )
        })
        .collect();
    let total: f64 = atoms.iter().map(|&(_, w)| w).sum();
    for atom in &mut atoms {
        atom.1 /= total;
    }
    CircleMeasureSpec::Atoms(atoms)
}

/// Atoms anywhere on the circle: unconditioned mean.
pub fn random_spec(rng: &mut ChaCha8Rng) -> CircleMeasureSpec {
    spread_spec(rng, core::f64::consts::PI)
}

pub fn random_moments(rng: &mut ChaCha8Rng, order: usize) -> MomentSequence {
    moments_from_spec(&random_spec(rng), order).expect("atomic specs are valid")
}

pub fn random_eta(rng: &mut ChaCha8Rng, order: usize) -> EtaCoefficients {
    eta_from_moments(&random_moments(rng, order))
}

/// Random eta with `|m_1| >= cos(spread)`.
pub fn concentrated_eta(rng: &mut ChaCha8Rng, order: usize, spread: f64) -> EtaCoefficients {
    eta_from_moments(&moments_from_spec(&spread_spec(rng, spread), order).expect("valid spec"))
}

/// Random polynomial eta of the given degree, strictly inside the Schur
/// class: total coefficient magnitude `mass < 1` bounds `|η(z)| ≤ mass·|z|`.
/// Exactly representable at any order ≥ degree, so truncation artifacts
/// never push it over the boundary; the first slot keeps a healthy share of
/// the mass for operations that divide by the mean.
pub fn short_eta(rng: &mut ChaCha8Rng, order: usize, degree: usize, mass: f64) -> EtaCoefficients {
    assert!((1..=order).contains(&degree) && (0.0..1.0).contains(&mass));
    let mut mags: Vec<f64> = (0..degree).map(|_| rng.gen_range(0.1..1.0)).collect();
    mags[0] += 1.0;
    let total: f64 = mags.iter().sum();
    let mut coeffs = vec![etaconv::Complex64::new(0.0, 0.0); order];
    for (k, &m) in mags.iter().enumerate() {
        let phase = rng.gen_range(0.0..core::f64::consts::TAU);
        coeffs[k] = etaconv::Complex64::from_polar(mass * m / total, phase);
    }
    EtaCoefficients::new(coeffs).expect("nonempty finite coefficients")
}

pub fn random_pair(rng: &mut ChaCha8Rng, order: usize) -> PairDistribution {
    PairDistribution::new(random_eta(rng, order), random_eta(rng, order)).expect("equal orders")
}

pub fn concentrated_pair(rng: &mut ChaCha8Rng, order: usize, spread: f64) -> PairDistribution {
    PairDistribution::new(
        concentrated_eta(rng, order, spread),
        concentrated_eta(rng, order, spread),
    )
    .expect("equal orders")
}
