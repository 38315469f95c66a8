//! Conditionally monotone convolution semigroups driven by Herglotz fields.
//!
//! A weakly continuous semigroup of pairs `(μ_t, ν_t)` starting at
//! `(δ_1, δ_1)` is generated by two analytic fields with `Re B_j <= 0`:
//!
//! ```text
//! d/dt η_{μ_t}(z) = η_{μ_t}(z) · B_1(η_{ν_t}(z)),
//! d/dt η_{ν_t}(z) = η_{ν_t}(z) · B_2(η_{ν_t}(z)),
//! ```
//!
//! with `B_j(z) = iγ_j + ∫ (z+ζ)/(z−ζ) dτ_j(ζ)` for a real `γ_j` and a
//! positive finite measure `τ_j` on the circle. This module integrates the
//! system two ways (on η-coefficients, where the ODE closes triangularly,
//! and pointwise on a grid of disc points), recovers the fields of a
//! semigroup from its time-one pair by the triangular affine solve, applies
//! the branch transformations that map one generating pair to another with
//! the same time-one distribution, and provides Boolean convolution powers
//! with their truncated infinite-divisibility test.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;
use crate::transforms::{schur_violation, EtaCoefficients, PairDistribution};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const TAU: f64 = 2.0 * core::f64::consts::PI;
const I_2PI: Complex64 = Complex64::new(0.0, TAU);

/// Fixed-step RK4 resolution the CLI assumes per unit of time.
pub const RK4_STEPS_PER_UNIT: usize = 1000;

/// Schur-excess gate applied to every saved slice of a coefficient
/// evolution; a larger violation aborts with an instability error.
const EVOLUTION_SCHUR_TOLERANCE: f64 = 1e-6;

/// A Herglotz vector field `B(z) = iγ + Σ_k w_k (z+ζ_k)/(z−ζ_k)` with an
/// atomic measure `τ = Σ w_k δ_{ζ_k}`, `ζ_k = e^{iθ_k}`. Nonnegative
/// weights certify `Re B <= 0` on the disc by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HerglotzField {
    gamma: f64,
    tau: Vec<(f64, f64)>,
}

impl HerglotzField {
    /// `gamma` and atoms `(angle, weight)`; weights must be nonnegative.
    pub fn new(gamma: f64, tau: Vec<(f64, f64)>) -> Result<Self> {
        if !gamma.is_finite()
            || tau.iter().any(|&(a, w)| !a.is_finite() || !w.is_finite())
        {
            return Err(Error::InvalidInput("field data must be finite"));
        }
        if tau.iter().any(|&(_, w)| w < 0.0) {
            return Err(Error::NotHerglotz("tau weights must be nonnegative"));
        }
        Ok(HerglotzField { gamma, tau })
    }

    /// The drift `γ` (`B(0) = iγ − τ(𝕋)`).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The atoms of `τ` as `(angle, weight)`.
    pub fn tau(&self) -> &[(f64, f64)] {
        &self.tau
    }

    /// Total mass `τ(𝕋) = Σ w_k`.
    pub fn mass(&self) -> f64 {
        self.tau.iter().map(|&(_, w)| w).sum()
    }
}

/// Taylor data `r_1..r_K` of a field, `B(z) = Σ_n r_n z^{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSeries {
    r: Vec<Complex64>,
}

impl FieldSeries {
    pub fn new(r: Vec<Complex64>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::InvalidInput("field series needs at least one coefficient"));
        }
        if r.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("field series must be finite"));
        }
        Ok(FieldSeries { r })
    }

    /// Coefficients `r_1..r_K`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.r
    }

    /// Number of supplied coefficients.
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `B` as a polynomial in `z` at the given truncation order (missing
    /// coefficients are zero, surplus ones are dropped; coefficient `n` of
    /// the result is `r_{n+1}`).
    pub(crate) fn as_poly(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![ZERO; order + 1];
        for (slot, r) in coeffs.iter_mut().zip(&self.r) {
            *slot = *r;
        }
        TruncatedSeries::from_coeffs(coeffs).expect("nonempty by construction")
    }

    /// Polynomial evaluation `Σ r_n z^{n-1}`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = ZERO;
        for r in self.r.iter().rev() {
            acc = acc * z + r;
        }
        acc
    }
}

/// Taylor coefficients of a Herglotz field: from the expansion
/// `(z+ζ)/(z−ζ) = −1 − 2 Σ_{n≥1} (z/ζ)^n`,
///
/// ```text
/// r_1 = iγ − Σ_k w_k,    r_{n+1} = −2 Σ_k w_k e^{−inθ_k}.
/// ```
pub fn field_series(f: &HerglotzField, order: usize) -> Result<FieldSeries> {
    if order == 0 {
        return Err(Error::InvalidInput("order must be >= 1"));
    }
    let mut r = Vec::with_capacity(order);
    r.push(Complex64::new(-f.mass(), f.gamma));
    // ζ^{-n} accumulated per atom
    let mut powers: Vec<Complex64> = f.tau.iter().map(|_| ONE).collect();
    for _ in 1..order {
        let mut sum = ZERO;
        for (&(angle, weight), pow) in f.tau.iter().zip(powers.iter_mut()) {
            *pow *= Complex64::from_polar(1.0, -angle);
            sum += weight * *pow;
        }
        r.push(-2.0 * sum);
    }
    FieldSeries::new(r)
}

/// Evaluates a Herglotz field inside the open disc.
pub fn field_eval(f: &HerglotzField, z: Complex64) -> Result<Complex64> {
    if z.norm() >= 1.0 {
        return Err(Error::Domain("Herglotz fields are evaluated on |z| < 1"));
    }
    let mut acc = Complex64::new(0.0, f.gamma);
    for &(angle, weight) in &f.tau {
        let zeta = Complex64::from_polar(1.0, angle);
        acc += weight * (z + zeta) / (z - zeta);
    }
    Ok(acc)
}

/// Sampling radius shared by [`field_from_series`]'s validation grid and
/// its density reconstruction.
const FIELD_RECOVERY_RADIUS: f64 = 0.99;

/// Recovers an atomic Herglotz field from Taylor data.
///
/// The truncated polynomial `B_N(z) = Σ r_n z^{n-1}` is validated on
/// `grid_points` equispaced angles of the circle `|z| = 0.99` (any real
/// part above `1e-9` is rejected), then `τ` is reconstructed from the
/// boundary density `−(1/2π) Re B_N(0.99 e^{iθ})` as one atom per grid
/// angle, renormalized to total mass `−Re r_1` and `γ = Im r_1`.
///
/// The reconstruction is Abel-damped: `field_series` of the result returns
/// `r_1` exactly and `0.99^n · r_{n+1}` for `n + 1` up to roughly a quarter
/// of the grid size (beyond that, sampling aliases enter).
pub fn field_from_series(r: &FieldSeries, grid_points: usize) -> Result<HerglotzField> {
    if r.len() < 2 {
        return Err(Error::InvalidInput("field recovery needs at least two coefficients"));
    }
    if grid_points < 8 {
        return Err(Error::InvalidInput("field recovery needs at least 8 grid points"));
    }
    let m = grid_points;
    let mut weights = Vec::with_capacity(m);
    let mut angles = Vec::with_capacity(m);
    for k in 0..m {
        let theta = TAU * k as f64 / m as f64;
        let b = r.eval(Complex64::from_polar(FIELD_RECOVERY_RADIUS, theta));
        if b.re > 1e-9 {
            return Err(Error::NotHerglotz(
                "series has positive real part on the validation grid",
            ));
        }
        angles.push(theta);
        weights.push((-b.re / m as f64).max(0.0));
    }
    let gamma = r.coeffs()[0].im;
    let target_mass = -r.coeffs()[0].re;
    let raw_mass: f64 = weights.iter().sum();
    if target_mass <= 0.0 || raw_mass <= 0.0 {
        return HerglotzField::new(gamma, Vec::new());
    }
    let scale = target_mass / raw_mass;
    let tau = angles
        .into_iter()
        .zip(weights)
        .map(|(a, w)| (a, w * scale))
        .collect();
    HerglotzField::new(gamma, tau)
}

/// Time slices of a coefficient evolution: η-coefficient vectors of
/// `(μ_t, ν_t)` at every RK4 step, starting from `(δ_1, δ_1)`.
#[derive(Clone, Debug)]
pub struct SemigroupEvolution {
    times: Vec<f64>,
    a: Vec<Vec<Complex64>>,
    b: Vec<Vec<Complex64>>,
}

impl SemigroupEvolution {
    /// Saved times `0 = t_0 < ... < t_M`.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of saved slices (steps + 1).
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Truncation order of the coefficient vectors.
    pub fn order(&self) -> usize {
        self.a[0].len()
    }

    /// `η_{μ_t}`-coefficients at slice `j`.
    pub fn mu_at(&self, j: usize) -> EtaCoefficients {
        EtaCoefficients::new(self.a[j].clone()).expect("validated during integration")
    }

    /// `η_{ν_t}`-coefficients at slice `j`.
    pub fn nu_at(&self, j: usize) -> EtaCoefficients {
        EtaCoefficients::new(self.b[j].clone()).expect("validated during integration")
    }

    /// The pair at slice `j`.
    pub fn pair_at(&self, j: usize) -> PairDistribution {
        PairDistribution::new(self.mu_at(j), self.nu_at(j)).expect("equal orders")
    }

    /// The pair at the final time.
    pub fn final_pair(&self) -> PairDistribution {
        self.pair_at(self.len() - 1)
    }
}

/// One RK4 step of the coefficient system
/// `a' = a · (B_1 ∘ b)`, `b' = b · (B_2 ∘ b)`.
fn rk4_step(
    a: &TruncatedSeries,
    b: &TruncatedSeries,
    p1: &TruncatedSeries,
    p2: &TruncatedSeries,
    dt: f64,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    let rhs = |a: &TruncatedSeries, b: &TruncatedSeries| -> Result<(TruncatedSeries, TruncatedSeries)> {
        Ok((a.mul(&p1.compose(b)?)?, b.mul(&p2.compose(b)?)?))
    };
    let h = |x: f64| Complex64::new(x, 0.0);
    let (k1a, k1b) = rhs(a, b)?;
    let (k2a, k2b) = rhs(
        &a.add(&k1a.scale(h(dt / 2.0)))?,
        &b.add(&k1b.scale(h(dt / 2.0)))?,
    )?;
    let (k3a, k3b) = rhs(
        &a.add(&k2a.scale(h(dt / 2.0)))?,
        &b.add(&k2b.scale(h(dt / 2.0)))?,
    )?;
    let (k4a, k4b) = rhs(&a.add(&k3a.scale(h(dt)))?, &b.add(&k3b.scale(h(dt)))?)?;
    let combine = |k1: TruncatedSeries,
                   k2: TruncatedSeries,
                   k3: TruncatedSeries,
                   k4: TruncatedSeries,
                   y: &TruncatedSeries|
     -> Result<TruncatedSeries> {
        y.add(
            &k1.add(&k2.scale(h(2.0)))?
                .add(&k3.scale(h(2.0)))?
                .add(&k4)?
                .scale(h(dt / 6.0)),
        )
    };
    Ok((combine(k1a, k2a, k3a, k4a, a)?, combine(k1b, k2b, k3b, k4b, b)?))
}

/// Integrates the coefficient system without any Schur monitoring and
/// returns only the final coefficient vectors. Used for the trial runs of
/// the embedding solve, whose intermediate fields may leave the Herglotz
/// class.
fn integrate_final(
    r: &[Complex64],
    s: &[Complex64],
    t_end: f64,
    steps: usize,
    order: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let p1 = FieldSeries::new(r.to_vec())?.as_poly(order);
    let p2 = FieldSeries::new(s.to_vec())?.as_poly(order);
    let mut a = TruncatedSeries::identity(order)?;
    let mut b = TruncatedSeries::identity(order)?;
    let dt = t_end / steps as f64;
    for _ in 0..steps {
        let (na, nb) = rk4_step(&a, &b, &p1, &p2, dt)?;
        a = na;
        b = nb;
    }
    Ok((a.coeffs()[1..].to_vec(), b.coeffs()[1..].to_vec()))
}

/// Integrates the coefficient ODEs from `(δ_1, δ_1)` with fixed-step RK4,
/// saving every step. Each saved slice is Schur-gated (radius 0.9, 64
/// points); an excess beyond `1e-6` aborts with an instability error,
/// which usually means the step count is too small for the field or the
/// field is not dissipative.
pub fn evolve_coefficients(
    b1: &FieldSeries,
    b2: &FieldSeries,
    t_end: f64,
    steps: usize,
    order: usize,
) -> Result<SemigroupEvolution> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput("evolution time must be finite and >= 0"));
    }
    if steps == 0 {
        return Err(Error::InvalidInput("evolution needs at least one step"));
    }
    if order == 0 {
        return Err(Error::InvalidInput("order must be >= 1"));
    }
    let p1 = b1.as_poly(order);
    let p2 = b2.as_poly(order);
    let mut a = TruncatedSeries::identity(order)?;
    let mut b = TruncatedSeries::identity(order)?;
    let dt = t_end / steps as f64;
    let mut out = SemigroupEvolution {
        times: Vec::with_capacity(steps + 1),
        a: Vec::with_capacity(steps + 1),
        b: Vec::with_capacity(steps + 1),
    };
    let mut save = |t: f64, a: &TruncatedSeries, b: &TruncatedSeries| -> Result<()> {
        for series in [a, b] {
            let eta = EtaCoefficients::from_series(series)
                .map_err(|_| Error::Instability("evolution produced non-finite coefficients"))?;
            if schur_violation(&eta, 0.9, 64)? > EVOLUTION_SCHUR_TOLERANCE {
                return Err(Error::Instability(
                    "evolved slice left the Schur class; increase the step count",
                ));
            }
        }
        out.times.push(t);
        out.a.push(a.coeffs()[1..].to_vec());
        out.b.push(b.coeffs()[1..].to_vec());
        Ok(())
    };
    save(0.0, &a, &b)?;
    for j in 1..=steps {
        let (na, nb) = rk4_step(&a, &b, &p1, &p2, dt)?;
        a = na;
        b = nb;
        save(dt * j as f64, &a, &b)?;
    }
    Ok(out)
}

/// Pointwise trajectories `η_{μ_t}(z)`, `η_{ν_t}(z)` over a set of disc
/// points, saved at every RK4 step.
#[derive(Clone, Debug)]
pub struct GridEvolution {
    times: Vec<f64>,
    points: Vec<Complex64>,
    u: Vec<Vec<Complex64>>,
    v: Vec<Vec<Complex64>>,
}

impl GridEvolution {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// `η_{μ_t}(z_i)` along the time grid.
    pub fn mu_trajectory(&self, i: usize) -> &[Complex64] {
        &self.u[i]
    }

    /// `η_{ν_t}(z_i)` along the time grid.
    pub fn nu_trajectory(&self, i: usize) -> &[Complex64] {
        &self.v[i]
    }
}

/// Integrates `u' = u·B_1(v)`, `v' = v·B_2(v)` from `u = v = z` for every
/// grid point. The flow contracts moduli; a saved step that increases
/// `|u|` or `|v|` by more than `1e-9`, or any stage that leaves the open
/// disc, aborts with an instability error.
pub fn evolve_grid(
    b1: &HerglotzField,
    b2: &HerglotzField,
    t_end: f64,
    z_points: &[Complex64],
    steps: usize,
) -> Result<GridEvolution> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput("evolution time must be finite and >= 0"));
    }
    if steps == 0 {
        return Err(Error::InvalidInput("evolution needs at least one step"));
    }
    if z_points.iter().any(|z| z.norm() >= 1.0) {
        return Err(Error::Domain("grid points must lie in the open unit disc"));
    }
    let dt = t_end / steps as f64;
    let eval = |f: &HerglotzField, z: Complex64| -> Result<Complex64> {
        field_eval(f, z)
            .map_err(|_| Error::Instability("integration stage left the unit disc"))
    };
    let times: Vec<f64> = (0..=steps).map(|j| dt * j as f64).collect();
    let mut u_all = Vec::with_capacity(z_points.len());
    let mut v_all = Vec::with_capacity(z_points.len());
    for &z in z_points {
        let mut u = z;
        let mut v = z;
        let mut us = Vec::with_capacity(steps + 1);
        let mut vs = Vec::with_capacity(steps + 1);
        us.push(u);
        vs.push(v);
        for _ in 0..steps {
            let rhs = |u: Complex64, v: Complex64| -> Result<(Complex64, Complex64)> {
                Ok((u * eval(b1, v)?, v * eval(b2, v)?))
            };
            let (k1u, k1v) = rhs(u, v)?;
            let (k2u, k2v) = rhs(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v)?;
            let (k3u, k3v) = rhs(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v)?;
            let (k4u, k4v) = rhs(u + dt * k3u, v + dt * k3v)?;
            let nu = u + dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            let nv = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            if nu.norm() > u.norm() + 1e-9 || nv.norm() > v.norm() + 1e-9 {
                return Err(Error::Instability(
                    "trajectory modulus increased; increase the step count",
                ));
            }
            u = nu;
            v = nv;
            us.push(u);
            vs.push(v);
        }
        u_all.push(us);
        v_all.push(vs);
    }
    Ok(GridEvolution { times, points: z_points.to_vec(), u: u_all, v: v_all })
}

/// `κ_t(z) = z · exp(∫_0^t B_1(η_{ν_s}(z)) ds)` by quadrature along a
/// stored trajectory. `z` must be one of the trajectory's grid points and
/// `t` a multiple of its time step (composite Simpson where the interval
/// count is even, with a 3/8 tail when it is odd).
pub fn kappa_quadrature(
    b1: &HerglotzField,
    traj: &GridEvolution,
    z: Complex64,
    t: f64,
) -> Result<Complex64> {
    let idx = traj
        .points
        .iter()
        .position(|p| (p - z).norm() <= 1e-13)
        .ok_or(Error::InvalidInput("z is not a trajectory grid point"))?;
    if traj.times.len() < 2 {
        return Err(Error::InvalidInput("trajectory has no time steps"));
    }
    let dt = traj.times[1];
    let m_real = t / dt;
    let m = if m_real < 0.0 { 0 } else { (m_real + 0.5) as usize };
    if (t - m as f64 * dt).abs() > 1e-9 || m >= traj.times.len() {
        return Err(Error::InvalidInput("t is not on the trajectory time grid"));
    }
    let mut f = Vec::with_capacity(m + 1);
    for j in 0..=m {
        f.push(field_eval(b1, traj.v[idx][j])?);
    }
    Ok(z * simpson(&f, dt).exp())
}

/// Integral of uniformly sampled values: composite Simpson, with a 3/8
/// closing block when the interval count is odd (trapezoid for a single
/// interval).
fn simpson(f: &[Complex64], dt: f64) -> Complex64 {
    let m = f.len() - 1;
    match m {
        0 => ZERO,
        1 => 0.5 * dt * (f[0] + f[1]),
        _ => {
            let even_part = if m.is_multiple_of(2) { m } else { m - 3 };
            let mut acc = ZERO;
            if even_part > 0 {
                let mut sum = f[0] + f[even_part];
                for (j, val) in f.iter().enumerate().take(even_part).skip(1) {
                    sum += if j % 2 == 1 { 4.0 * val } else { 2.0 * val };
                }
                acc += dt / 3.0 * sum;
            }
            if m % 2 == 1 {
                // 3 intervals remain: Newton's 3/8 rule
                acc += 0.375 * dt * (f[m - 3] + 3.0 * f[m - 2] + 3.0 * f[m - 1] + f[m]);
            }
            acc
        }
    }
}

/// Boolean convolution power `μ^{⨃t}`: with `η_μ(z)/z = e^{u(z)}` for the
/// branch `Im u(0) ∈ [0, 2π)`, the power is `η(z) = z e^{t·u(z)}`.
/// Requires `a_1 != 0` (the truncated surrogate of `η/z` having no zero)
/// and `t >= 0`.
pub fn boolean_power(mu: &EtaCoefficients, t: f64) -> Result<EtaCoefficients> {
    if mu.mean() == ZERO {
        return Err(Error::NotBooleanId("Boolean powers need a_1 != 0"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput("Boolean power exponent must be finite and >= 0"));
    }
    let u = mu
        .as_series()
        .shifted_quotient()
        .expect("eta vanishes at 0")
        .log()?;
    let eta = u.scale(Complex64::new(t, 0.0)).exp().shift_up();
    EtaCoefficients::from_series(&eta)
}

/// Truncated Boolean infinite-divisibility test: `μ` embeds into a Boolean
/// power semigroup iff `q(z) = η_μ(z)/z` has no zero on the disc. On the
/// truncated polynomial this is checked on the circle of the given radius:
/// `a_1 != 0`, the minimum of `|q|` exceeds `1e-9`, and the winding number
/// of `q` around 0 vanishes (no zeros inside by the argument principle).
pub fn check_boolean_id(mu: &EtaCoefficients, radius: f64, points: usize) -> Result<bool> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::InvalidInput("check radius must lie in (0, 1)"));
    }
    if points < 8 {
        return Err(Error::InvalidInput("winding check needs at least 8 points"));
    }
    if mu.mean() == ZERO {
        return Ok(false);
    }
    let q = mu.as_series().shifted_quotient().expect("eta vanishes at 0");
    let mut values = Vec::with_capacity(points + 1);
    for j in 0..=points {
        let z = Complex64::from_polar(radius, TAU * j as f64 / points as f64);
        let qz = q.eval(z);
        if qz.norm() <= 1e-9 {
            return Ok(false);
        }
        values.push(qz);
    }
    let mut total = 0.0;
    for pair in values.windows(2) {
        total += (pair[1] / pair[0]).arg();
    }
    let winding = (total / TAU + 0.5 * total.signum()) as i64;
    Ok(winding == 0)
}

/// Recovers field series `(B_1, B_2)` whose semigroup reaches `target` at
/// `t = 1`, out to `order` coefficients each.
///
/// `s_1 = log b_1` and `r_1 = log a_1` are principal logarithms; every
/// higher coefficient is obtained sequentially from the fact that, with
/// `r_2..r_{n-1}, s_2..s_n` fixed, the time-one coefficient `b_n(1)` is an
/// affine function of `s_n` (and `a_n(1)` of `r_n`) — exactly, even under
/// the RK4 discretization, so two trial evolutions per coefficient solve
/// it. Trial runs are not Schur-gated: intermediate trial fields may leave
/// the Herglotz class without harming the solve.
///
/// Requires `0 < |b_1| < 1` and `a_1 != 0`; the inversion integrates with
/// `steps` RK4 steps over `[0, 1]`, which bounds the roundtrip accuracy.
pub fn fields_from_time_one(
    target: &PairDistribution,
    order: usize,
    steps: usize,
) -> Result<(FieldSeries, FieldSeries)> {
    if order == 0 || steps == 0 {
        return Err(Error::InvalidInput("order and steps must be >= 1"));
    }
    if order > target.order() {
        return Err(Error::InvalidInput("target supplies fewer coefficients than the order"));
    }
    let a1 = target.mu.mean();
    let b1 = target.nu.mean();
    if b1 == ZERO || b1.norm() >= 1.0 {
        return Err(Error::EmbeddingUnsupported(
            "embedding needs 0 < |b_1| < 1 for the right component",
        ));
    }
    if a1 == ZERO {
        return Err(Error::EmbeddingUnsupported("embedding needs a_1 != 0"));
    }

    // s_2..s_N first: the right component is autonomous, so B_1 = 0 works
    // as a placeholder. Then r_2..r_N against the fully known s.
    let zero_field = [ZERO];
    let mut s = vec![ZERO; order];
    s[0] = b1.ln();
    for n in 2..=order {
        s[n - 1] = ZERO;
        let v0 = integrate_final(&zero_field, &s[..n], 1.0, steps, n)?.1[n - 1];
        s[n - 1] = ONE;
        let v1 = integrate_final(&zero_field, &s[..n], 1.0, steps, n)?.1[n - 1];
        s[n - 1] = affine_solve(target.nu.coeffs()[n - 1], v0, v1, n)?;
    }
    let mut r = vec![ZERO; order];
    r[0] = a1.ln();
    for n in 2..=order {
        r[n - 1] = ZERO;
        let v0 = integrate_final(&r[..n], &s[..n], 1.0, steps, n)?.0[n - 1];
        r[n - 1] = ONE;
        let v1 = integrate_final(&r[..n], &s[..n], 1.0, steps, n)?.0[n - 1];
        r[n - 1] = affine_solve(target.mu.coeffs()[n - 1], v0, v1, n)?;
    }
    Ok((FieldSeries::new(r)?, FieldSeries::new(s)?))
}

/// One step of the sequential embedding solve: the time-one coefficient is
/// affine in the trial field coefficient, so two evaluations determine it.
fn affine_solve(want: Complex64, v0: Complex64, v1: Complex64, index: usize) -> Result<Complex64> {
    let slope = v1 - v0;
    if slope.norm() < 1e-12 {
        return Err(Error::DegenerateEmbedding { index });
    }
    Ok((want - v0) / slope)
}

/// The fields produced by [`nonuniqueness_transform`], with grid-checked
/// dissipativity verdicts: a transformed field generates a genuine
/// semigroup only when its real part stays nonpositive on the disc, which
/// the branch change does not guarantee.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformedFields {
    pub b1: FieldSeries,
    pub b2: FieldSeries,
    pub b1_dissipative: bool,
    pub b2_dissipative: bool,
}

/// Grid test of `Re B <= 0` for a field polynomial (radius 0.999, 256
/// points, slack 1e-9).
fn series_dissipative(f: &FieldSeries) -> bool {
    const POINTS: usize = 256;
    for j in 0..POINTS {
        let z = Complex64::from_polar(0.999, TAU * j as f64 / POINTS as f64);
        if f.eval(z).re > 1e-9 {
            return false;
        }
    }
    true
}

/// Branch transformation producing other generator pairs with the same
/// time-one pair distribution: with `λ = 1 + 2πin/s_1`,
///
/// ```text
/// B̃_2 = λ B_2,    B̃_1 = 2πim − (2πin/s_1) r_1 + λ B_1,
/// ```
///
/// i.e. `s̃_1 = s_1 + 2πin`, `r̃_1 = r_1 + 2πim` and every higher
/// coefficient is scaled by `λ`. For a constant `B_2` (a point-mass right
/// component) this reduces to the translation `B_2 + 2πin`. `n != 0`
/// requires `s_1 != 0`.
///
/// Dissipativity of the results is reported, not assumed; an invalid
/// transformed field means that branch does not correspond to a semigroup.
pub fn nonuniqueness_transform(
    b1: &FieldSeries,
    b2: &FieldSeries,
    n: i64,
    m: i64,
) -> Result<TransformedFields> {
    let s1 = b2.coeffs()[0];
    if s1 == ZERO && n != 0 {
        return Err(Error::UndefinedTransform(
            "s_1 = 0 admits no branch rotation of the right field",
        ));
    }
    let lambda = if n == 0 {
        ONE
    } else {
        ONE + I_2PI * n as f64 / s1
    };
    let mut s_new: Vec<Complex64> = b2.coeffs().iter().map(|c| lambda * c).collect();
    s_new[0] = s1 + I_2PI * n as f64;
    let mut r_new: Vec<Complex64> = b1.coeffs().iter().map(|c| lambda * c).collect();
    r_new[0] = b1.coeffs()[0] + I_2PI * m as f64;
    let b1_t = FieldSeries::new(r_new)?;
    let b2_t = FieldSeries::new(s_new)?;
    let b1_ok = series_dissipative(&b1_t);
    let b2_ok = series_dissipative(&b2_t);
    Ok(TransformedFields { b1: b1_t, b2: b2_t, b1_dissipative: b1_ok, b2_dissipative: b2_ok })
}
