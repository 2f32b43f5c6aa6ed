//! Posterior evolution under double heterodyne detection.
//!
//! The squeeze decays deterministically, `tanh(rho(t)) = e^{-mu t}
//! tanh(rho0)` with the axis rotating as `theta(t) = theta0 - 2 omega t`,
//! while the displacement and the likelihood amplitude pick up the
//! measured complex noise through Ito integrals. Uncertainties are
//! noise-independent, so the squeeze-region predicates are deterministic
//! too.
//!
//! All stochastic sums run on the exact grid and increments of the input
//! `NoisePath` (left endpoints), which keeps trajectory-versus-oracle
//! comparisons bit-reproducible.

use crate::error::Error;
use crate::noise::{NoiseKind, NoisePath};
use crate::params::ModelParams;
use crate::squeeze::{
    moments_from_record, one_minus_tanh, SolutionFrame, SqueezeParam, SqueezedCoherentRecord,
};
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::Float;

/// Which quadrature, if any, is squeezed below the vacuum level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqueezeRegion {
    XSqueezed,
    YSqueezed,
    None,
}

/// `e^{-mu t} tanh(rho0)` together with a cancellation-free `1 - s`.
#[inline]
fn decayed_tanh(t: f64, mu: f64, rho0: f64) -> (f64, f64) {
    let t0 = rho0.tanh();
    let s = (-mu * t).exp() * t0;
    // 1 - s = (1 - tanh rho0) + tanh(rho0) (1 - e^{-mu t})
    let one_minus_s = one_minus_tanh(rho0) + t0 * (-(-mu * t).exp_m1());
    (s, one_minus_s)
}

/// Deterministic squeeze at time `t`:
/// `rho(t) = atanh(e^{-mu t} tanh rho0)`, `theta(t) = theta0 - 2 omega t`.
///
/// Evaluated in the log domain so it stays exact up to `rho0 = 20` where
/// a literal `atanh(tanh ...)` round trip would saturate.
pub fn squeeze_at(t: f64, params: &ModelParams, xi0: &SqueezeParam) -> SqueezeParam {
    let (s, one_minus_s) = decayed_tanh(t, params.mu, xi0.rho());
    let rho = 0.5 * (s.ln_1p() - one_minus_s.ln());
    let theta = xi0.theta() - 2.0 * params.omega * t;
    SqueezeParam::new(rho.max(0.0), theta).expect("flow stays in the valid domain")
}

/// Noise-independent uncertainties:
/// `dX(t) = 1/2 [1 + C(t)(e^{-mu t} tanh rho0 - cos(theta0 - 2 omega t))]^{1/2}`
/// and the `+cos` partner, `C(t) = 2 e^{-mu t} tanh rho0 / (1 - e^{-2 mu t} tanh^2 rho0)`.
///
/// The bracket is regrouped as `((1-s)^2 + 4 s sin^2(D/2)) / (1 - s^2)`
/// (and `cos^2` for dY) which is the same algebra with every term
/// nonnegative, so the `t = 0` identities hold to machine precision even
/// at `rho0 = 8`.
pub fn uncertainties(t: f64, params: &ModelParams, rho0: f64, theta0: f64) -> (f64, f64) {
    let (s, one_minus_s) = decayed_tanh(t, params.mu, rho0);
    let one_minus_s2 = one_minus_s * (1.0 + s);
    let half = 0.5 * (theta0 - 2.0 * params.omega * t);
    let sin_h = half.sin();
    let cos_h = half.cos();
    let dx = 0.5 * ((one_minus_s * one_minus_s + 4.0 * s * sin_h * sin_h) / one_minus_s2).sqrt();
    let dy = 0.5 * ((one_minus_s * one_minus_s + 4.0 * s * cos_h * cos_h) / one_minus_s2).sqrt();
    (dx, dy)
}

/// X is squeezed iff `cos(theta0 - 2 omega t) > e^{-mu t} tanh rho0`,
/// Y iff `< -e^{-mu t} tanh rho0`. With `rho0 = 0` there is no squeezing
/// at all, so the predicate returns `None` regardless of the cosine.
pub fn squeeze_region(t: f64, params: &ModelParams, rho0: f64, theta0: f64) -> SqueezeRegion {
    if rho0 <= 0.0 {
        return SqueezeRegion::None;
    }
    let (s, _) = decayed_tanh(t, params.mu, rho0);
    let c = (theta0 - 2.0 * params.omega * t).cos();
    if c > s {
        SqueezeRegion::XSqueezed
    } else if c < -s {
        SqueezeRegion::YSqueezed
    } else {
        SqueezeRegion::None
    }
}

/// `cosh(rho(t)) / cosh(rho0)` and `sinh(rho(t))`, `cosh(rho(t))` from the
/// decayed tanh, avoiding an atanh/cosh round trip.
#[inline]
fn hyperbolics_at(t: f64, mu: f64, rho0: f64) -> (f64, f64, f64) {
    let (s, one_minus_s) = decayed_tanh(t, mu, rho0);
    let inv = 1.0 / (one_minus_s * (1.0 + s)).sqrt(); // cosh(rho(t))
    (inv / rho0.cosh(), s * inv, inv)
}

/// Displacement along a complex Wiener record:
/// `alpha(t) = e^{-(i omega + mu/2) t} (cosh rho(t) / cosh rho0)
/// (alpha0 - sqrt(mu) e^{i theta0} sinh(rho0) J(t))` with the Ito integral
/// `J(t) = int_0^t e^{-(i omega + mu/2) t'} e^{-i phi(t')} dQ(t')`.
///
/// Returns `n_steps + 1` values on the path's grid, `alpha(0) = alpha0`.
pub fn alpha_trajectory(
    path: &NoisePath,
    params: &ModelParams,
    xi0: &SqueezeParam,
    alpha0: C64,
) -> Result<Vec<C64>, Error> {
    if path.kind() != NoiseKind::Complex {
        return Err(Error::NoiseKindMismatch {
            expected: NoiseKind::Complex,
            got: path.kind(),
        });
    }
    let grid = *path.grid();
    let n = grid.n_steps();
    let mu = params.mu;
    let rho0 = xi0.rho();
    let drive = C64::from_polar(mu.sqrt() * rho0.sinh(), xi0.theta());

    let mut alphas = Vec::with_capacity(n + 1);
    alphas.push(alpha0);
    let mut j = C64::new(0.0, 0.0);
    for k in 0..n {
        let t_k = grid.time(k);
        let damp = (-(0.5 * mu) * t_k).exp();
        let carrier = C64::from_polar(damp, -params.omega * t_k);
        j += carrier * params.lo_factor(t_k) * path.increments()[k];
        let t_next = grid.time(k + 1);
        let (ratio, _, _) = hyperbolics_at(t_next, mu, rho0);
        let damp_next = (-(0.5 * mu) * t_next).exp();
        let carrier_next = C64::from_polar(damp_next, -params.omega * t_next);
        alphas.push(carrier_next * ratio * (alpha0 - drive * j));
    }
    Ok(alphas)
}

/// Likelihood amplitude along the same record:
/// `l(t) = sqrt(cosh rho(t) / cosh rho0) exp[-i omega t / 2
/// + (|alpha(t)|^2 - |alpha0|^2)/2 + chi(t)]` where `chi` collects the
/// Ito integral of `sqrt(mu) alpha cosh(rho) e^{-i phi}` and the
/// left-endpoint time integral of `mu e^{-i theta} alpha^2 sinh cosh`.
///
/// `alphas` must come from [`alpha_trajectory`] on the same path.
pub fn l_trajectory(
    path: &NoisePath,
    params: &ModelParams,
    xi0: &SqueezeParam,
    alpha0: C64,
    alphas: &[C64],
) -> Result<Vec<C64>, Error> {
    if path.kind() != NoiseKind::Complex {
        return Err(Error::NoiseKindMismatch {
            expected: NoiseKind::Complex,
            got: path.kind(),
        });
    }
    let grid = *path.grid();
    let n = grid.n_steps();
    if alphas.len() != n + 1 {
        return Err(Error::GridMismatch {
            expected: n + 1,
            got: alphas.len(),
        });
    }
    let mu = params.mu;
    let rho0 = xi0.rho();
    let sqrt_mu = mu.sqrt();
    let alpha0_sq = alpha0.norm_sqr();

    let mut ls = Vec::with_capacity(n + 1);
    ls.push(C64::new(1.0, 0.0));
    let mut chi = C64::new(0.0, 0.0);
    for k in 0..n {
        let t_k = grid.time(k);
        let (_, sinh_k, cosh_k) = hyperbolics_at(t_k, mu, rho0);
        let theta_k = xi0.theta() - 2.0 * params.omega * t_k;
        let a_k = alphas[k];
        chi += sqrt_mu * a_k * cosh_k * params.lo_factor(t_k) * path.increments()[k]
            + mu * C64::from_polar(1.0, -theta_k) * a_k * a_k * sinh_k * cosh_k * grid.dt();
        let t_next = grid.time(k + 1);
        let (ratio, _, _) = hyperbolics_at(t_next, mu, rho0);
        let phase = C64::new(0.0, -0.5 * params.omega * t_next);
        let growth = 0.5 * (alphas[k + 1].norm_sqr() - alpha0_sq);
        ls.push(ratio.sqrt() * (phase + growth + chi).exp());
    }
    Ok(ls)
}

/// Full posterior trajectory for one double-heterodyne record.
#[derive(Clone, Debug)]
pub struct Het2Solution {
    pub params: ModelParams,
    pub xi0: SqueezeParam,
    pub alpha0: C64,
    pub frames: Vec<SolutionFrame>,
}

/// Evaluate `(l, xi, alpha)` and the posterior moments at every grid point.
pub fn solve(
    path: &NoisePath,
    params: &ModelParams,
    xi0: &SqueezeParam,
    alpha0: C64,
) -> Result<Het2Solution, Error> {
    let alphas = alpha_trajectory(path, params, xi0, alpha0)?;
    let ls = l_trajectory(path, params, xi0, alpha0, &alphas)?;
    let grid = *path.grid();
    let frames = (0..=grid.n_steps())
        .map(|k| {
            let t = grid.time(k);
            let record = SqueezedCoherentRecord {
                l: ls[k],
                squeeze: squeeze_at(t, params, xi0),
                alpha: alphas[k],
            };
            let moments = moments_from_record(&record);
            SolutionFrame { t, record, moments }
        })
        .collect();
    Ok(Het2Solution {
        params: *params,
        xi0: *xi0,
        alpha0,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::TimeGrid;
    use crate::params::DetectionScheme;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn params(omega: f64, mu: f64) -> ModelParams {
        ModelParams::new(omega, mu, 0.7, 0.05, DetectionScheme::DoubleHeterodyne).unwrap()
    }

    /// RK4 oracle for the deterministic pair
    /// d rho = -mu sinh(rho) cosh(rho) dt, d theta = -2 omega dt.
    fn rk4_squeeze(t: f64, omega: f64, mu: f64, rho0: f64, theta0: f64, steps: usize) -> (f64, f64) {
        let dt = t / steps as f64;
        let f = |r: f64| -mu * r.sinh() * r.cosh();
        let mut rho = rho0;
        for _ in 0..steps {
            let k1 = f(rho);
            let k2 = f(rho + 0.5 * dt * k1);
            let k3 = f(rho + 0.5 * dt * k2);
            let k4 = f(rho + dt * k3);
            rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        (rho, theta0 - 2.0 * omega * t)
    }

    #[test]
    fn squeeze_at_initial_condition() {
        let p = params(1.0, 0.3);
        let xi0 = SqueezeParam::new(0.5, 1.0).unwrap();
        let s = squeeze_at(0.0, &p, &xi0);
        assert_eq!(s.rho(), 0.5);
        assert_eq!(s.theta(), 1.0);
    }

    #[test]
    fn squeeze_at_matches_rk4() {
        // mu t = 1 with omega t = pi: rho = atanh(e^{-1} tanh 0.5)
        let p = ModelParams::new(PI, 1.0, 0.0, 0.0, DetectionScheme::DoubleHeterodyne).unwrap();
        let xi0 = SqueezeParam::new(0.5, 0.0).unwrap();
        let s = squeeze_at(1.0, &p, &xi0);
        assert_relative_eq!(s.rho(), 0.17167016630211703, max_relative = 1e-12);
        assert_relative_eq!(s.theta(), -2.0 * PI, max_relative = 1e-14);
        let (rho_rk4, _) = rk4_squeeze(1.0, PI, 1.0, 0.5, 0.0, 4000);
        assert_relative_eq!(s.rho(), rho_rk4, max_relative = 1e-10);

        for &(mu, rho0, t) in &[(0.01, 2.0, 50.0), (0.1, 0.1, 7.0), (1.0, 1.5, 3.0)] {
            let p = ModelParams::new(1.0, mu, 0.0, 0.0, DetectionScheme::DoubleHeterodyne).unwrap();
            let xi0 = SqueezeParam::new(rho0, 0.3).unwrap();
            let s = squeeze_at(t, &p, &xi0);
            let (rho_rk4, theta_rk4) = rk4_squeeze(t, 1.0, mu, rho0, 0.3, 20_000);
            assert_relative_eq!(s.rho(), rho_rk4, max_relative = 1e-9);
            assert_relative_eq!(s.theta(), theta_rk4, max_relative = 1e-12);
        }
    }

    #[test]
    fn squeeze_at_asymptotic() {
        // mu t = 40, rho0 = 8: rho ~ e^{-40} tanh 8, effectively zero.
        let p = params(1.0, 1.0);
        let xi0 = SqueezeParam::new(8.0, 0.0).unwrap();
        let s = squeeze_at(40.0, &p, &xi0);
        assert!(s.rho() > 0.0);
        assert_relative_eq!(s.rho(), 4.248353299113120e-18, max_relative = 1e-10);
    }

    #[test]
    fn rho_semigroup_and_theta_linear() {
        let p = params(1.3, 0.21);
        let xi0 = SqueezeParam::new(1.7, 0.4).unwrap();
        for &(t1, t2) in &[(0.5, 1.0), (2.0, 3.0), (0.01, 7.0)] {
            let direct = squeeze_at(t1 + t2, &p, &xi0);
            let mid = squeeze_at(t1, &p, &xi0);
            let two_step = squeeze_at(t2, &p, &mid);
            assert!((direct.rho() - two_step.rho()).abs() < 1e-12);
            assert!((direct.theta() - two_step.theta()).abs() < 1e-12);
            // theta increments add exactly
            let d1 = squeeze_at(t1, &p, &xi0).theta() - xi0.theta();
            let d2 = squeeze_at(t2, &p, &xi0).theta() - xi0.theta();
            assert!((direct.theta() - xi0.theta() - d1 - d2).abs() < 1e-12);
        }
    }

    #[test]
    fn uncertainties_examples() {
        let p = params(1.0, 0.1);
        for &t in &[0.0, 0.3, 5.0, 40.0] {
            let (dx, dy) = uncertainties(t, &p, 0.0, 0.0);
            assert_eq!((dx, dy), (0.5, 0.5));
        }
        // t = 0, theta0 = 0: the 1 + C (s - 1) bracket collapses to e^{-2 rho0}
        let (dx, dy) = uncertainties(0.0, &p, 0.5, 0.0);
        assert_relative_eq!(dx, 0.3032653298563167, max_relative = 1e-12);
        assert_relative_eq!(dy, 0.8243606353500641, max_relative = 1e-12);
        for &rho0 in &[0.1, 2.0, 8.0] {
            let (dx, dy) = uncertainties(0.0, &p, rho0, 0.0);
            assert_relative_eq!(dx, (-rho0).exp() / 2.0, max_relative = 1e-11);
            assert_relative_eq!(dy, rho0.exp() / 2.0, max_relative = 1e-11);
        }
    }

    #[test]
    fn uncertainties_literal_formula_agreement() {
        // Regrouped bracket equals the literal 1 + C(t)(s -+ cos) form
        // where the latter is numerically safe.
        let p = params(1.0, 0.01);
        for k in 0..200 {
            let t = 0.5 * k as f64;
            let rho0 = 1.3;
            let theta0 = 0.2;
            let s = (-p.mu * t).exp() * rho0.tanh();
            let c_t = 2.0 * s / (1.0 - s * s);
            let cos = (theta0 - 2.0 * p.omega * t).cos();
            let dx_lit = 0.5 * (1.0 + c_t * (s - cos)).sqrt();
            let dy_lit = 0.5 * (1.0 + c_t * (s + cos)).sqrt();
            let (dx, dy) = uncertainties(t, &p, rho0, theta0);
            assert_relative_eq!(dx, dx_lit, max_relative = 1e-10);
            assert_relative_eq!(dy, dy_lit, max_relative = 1e-10);
        }
    }

    #[test]
    fn uncertainties_vacuum_limit() {
        let p = params(1.0, 0.01);
        let (dx, dy) = uncertainties(2000.0, &p, 8.0, 0.0);
        assert!((dx - 0.5).abs() < 1e-8);
        assert!((dy - 0.5).abs() < 1e-8);
    }

    #[test]
    fn squeeze_region_examples() {
        let p = params(1.0, 0.1);
        assert_eq!(squeeze_region(0.0, &p, 0.5, 0.0), SqueezeRegion::XSqueezed);
        assert_eq!(squeeze_region(0.0, &p, 0.5, PI), SqueezeRegion::YSqueezed);
        // cos = 0 sits strictly between the thresholds
        let t = PI / 4.0; // theta0 - 2 t = -pi/2
        assert_eq!(squeeze_region(t, &p, 1.0, 0.0), SqueezeRegion::None);
        // rho0 = 0: no squeezing even where cos > 0
        assert_eq!(squeeze_region(0.0, &p, 0.0, 0.0), SqueezeRegion::None);
    }

    #[test]
    fn squeeze_region_agrees_with_spreads() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            let p = params(rng.gen_range(0.2..3.0), rng.gen_range(0.01..1.0));
            let rho0 = rng.gen_range(1e-3..3.0f64);
            let theta0 = rng.gen_range(-PI..PI);
            let t = rng.gen_range(0.0..30.0);
            let (dx, dy) = uncertainties(t, &p, rho0, theta0);
            let region = squeeze_region(t, &p, rho0, theta0);
            match region {
                SqueezeRegion::XSqueezed => assert!(dx < 0.5 && dy > 0.5),
                SqueezeRegion::YSqueezed => assert!(dy < 0.5 && dx > 0.5),
                SqueezeRegion::None => assert!(dx >= 0.5 - 1e-12 && dy >= 0.5 - 1e-12),
            }
        }
    }

    #[test]
    fn product_bound_and_equality_cases() {
        let p = params(1.0, 0.05);
        let rho0 = 1.1;
        let theta0 = 0.6;
        for k in 0..5000 {
            let t = 0.01 * k as f64;
            let (dx, dy) = uncertainties(t, &p, rho0, theta0);
            let prod = dx * dy;
            assert!(prod >= 0.25 - 1e-12);
            let cos = (theta0 - 2.0 * p.omega * t).cos();
            if cos.abs() > 1.0 - 1e-10 {
                assert!((prod - 0.25).abs() < 1e-9);
            }
        }
        // exact equality points: theta0 - 2 omega t = 0 mod pi
        let t_eq = theta0 / 2.0;
        let (dx, dy) = uncertainties(t_eq, &p, rho0, theta0);
        assert!((dx * dy - 0.25).abs() < 1e-12);
    }

    #[test]
    fn alpha_coherent_is_noise_free() {
        // rho0 = 0 kills the stochastic term exactly: alpha(t) =
        // alpha0 e^{-(i omega + mu/2) t}, bitwise identical across seeds.
        let p = params(1.0, 0.2);
        let grid = TimeGrid::from_steps(1e-3, 500).unwrap();
        let xi0 = SqueezeParam::vacuum();
        let alpha0 = C64::new(0.7, -0.3);
        let a1 = alpha_trajectory(
            &NoisePath::generate(grid, NoiseKind::Complex, 1),
            &p,
            &xi0,
            alpha0,
        )
        .unwrap();
        let a2 = alpha_trajectory(
            &NoisePath::generate(grid, NoiseKind::Complex, 999),
            &p,
            &xi0,
            alpha0,
        )
        .unwrap();
        assert_eq!(a1, a2);
        for (k, a) in a1.iter().enumerate() {
            let t = grid.time(k);
            let expect = alpha0
                * C64::from_polar((-0.5 * p.mu * t).exp(), -p.omega * t);
            assert!((a - expect).norm() < 1e-12);
        }
        // alpha0 = 0 stays 0
        let z = alpha_trajectory(
            &NoisePath::generate(grid, NoiseKind::Complex, 1),
            &p,
            &xi0,
            C64::new(0.0, 0.0),
        )
        .unwrap();
        assert!(z.iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn alpha_matches_euler_maruyama() {
        // Independent EM integration of the (rho, theta, alpha) system on
        // the same path.
        let p = params(1.0, 0.1);
        let grid = TimeGrid::from_steps(1e-3, 1000).unwrap();
        let path = NoisePath::generate(grid, NoiseKind::Complex, 21);
        let xi0 = SqueezeParam::new(0.5, 0.3).unwrap();
        let alpha0 = C64::new(0.4, 0.2);
        let alphas = alpha_trajectory(&path, &p, &xi0, alpha0).unwrap();

        let mut a = alpha0;
        let mut rho = xi0.rho();
        let mut max_err: f64 = 0.0;
        for k in 0..grid.n_steps() {
            let t = grid.time(k);
            let theta = xi0.theta() - 2.0 * p.omega * t;
            let drift = (C64::new(-0.5 * p.mu, -p.omega) - p.mu * rho.sinh() * rho.sinh()) * a;
            let noise = -p.mu.sqrt()
                * C64::from_polar(rho.sinh(), theta)
                * p.lo_factor(t)
                * path.increments()[k];
            a += drift * grid.dt() + noise;
            rho += -p.mu * rho.sinh() * rho.cosh() * grid.dt();
            max_err = max_err.max((a - alphas[k + 1]).norm());
        }
        assert!(max_err < 10.0 * grid.dt(), "max_err = {max_err}");
    }

    #[test]
    fn l_vacuum_zero_point_phase() {
        let p = params(1.0, 0.1);
        let grid = TimeGrid::from_steps(1e-3, 400).unwrap();
        let path = NoisePath::generate(grid, NoiseKind::Complex, 3);
        let xi0 = SqueezeParam::vacuum();
        let alpha0 = C64::new(0.0, 0.0);
        let alphas = alpha_trajectory(&path, &p, &xi0, alpha0).unwrap();
        let ls = l_trajectory(&path, &p, &xi0, alpha0, &alphas).unwrap();
        for (k, l) in ls.iter().enumerate() {
            let t = grid.time(k);
            assert!((l.norm() - 1.0).abs() < 1e-12);
            let expect = C64::from_polar(1.0, -0.5 * p.omega * t);
            assert!((l - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_produces_consistent_frames() {
        let p = params(1.0, 0.1);
        let grid = TimeGrid::from_steps(1e-3, 300).unwrap();
        let path = NoisePath::generate(grid, NoiseKind::Complex, 9);
        let xi0 = SqueezeParam::new(0.5, 0.0).unwrap();
        let sol = solve(&path, &p, &xi0, C64::new(0.5, 0.0)).unwrap();
        assert_eq!(sol.frames.len(), 301);
        let f0 = &sol.frames[0];
        assert_eq!(f0.record.l, C64::new(1.0, 0.0));
        assert_eq!(f0.record.alpha, C64::new(0.5, 0.0));
        assert_eq!(f0.record.squeeze.rho(), 0.5);
        // rho strictly decreasing, theta exactly linear, norm positive
        for w in sol.frames.windows(2) {
            assert!(w[1].record.squeeze.rho() < w[0].record.squeeze.rho());
            assert!(w[1].record.norm2() > 0.0);
            let dtheta = w[1].record.squeeze.theta() - w[0].record.squeeze.theta();
            assert!((dtheta + 2.0 * p.omega * grid.dt()).abs() < 1e-12);
            assert!(w[1].moments.uncertainty_product() >= 0.25 - 1e-12);
        }
        // frame uncertainties agree with the closed-form pair
        for f in sol.frames.iter().step_by(50) {
            let (dx, dy) = uncertainties(f.t, &p, 0.5, 0.0);
            assert_relative_eq!(f.moments.dx, dx, max_relative = 1e-10);
            assert_relative_eq!(f.moments.dy, dy, max_relative = 1e-10);
        }
    }

    #[test]
    fn wrong_noise_kind_is_rejected() {
        let p = params(1.0, 0.1);
        let grid = TimeGrid::from_steps(1e-3, 10).unwrap();
        let path = NoisePath::generate(grid, NoiseKind::Real, 1);
        let xi0 = SqueezeParam::vacuum();
        assert!(matches!(
            alpha_trajectory(&path, &p, &xi0, C64::new(0.0, 0.0)),
            Err(Error::NoiseKindMismatch { .. })
        ));
    }
}
