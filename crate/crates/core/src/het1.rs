//! Posterior evolution under single balanced heterodyne detection.
//!
//! The disk coordinate `Gamma(t)` obeys a deterministic Riccati equation
//! `dGamma/dt = -(2 i omega + mu) Gamma + mu e^{-2 i phi(t)} Gamma^2`,
//! solved here three ways: the general closed form, the specialized
//! `phi(t) = pi/2 + vartheta t` closed form, and a fixed-step RK4
//! integrator that serves as the independent check of both.
//!
//! The displacement and likelihood amplitude are stochastic. Their
//! closed forms mix Ito integrals (left endpoints, exact grid of the
//! input path) with deterministic time integrals of `Gamma` alone, which
//! are accumulated by the trapezoidal rule; integrands containing the
//! stochastic `alpha` stay left-endpoint so the Ito terms are unbiased.

use crate::error::Error;
use crate::noise::{NoiseKind, NoisePath, TimeGrid};
use crate::params::ModelParams;
use crate::squeeze::{
    moments_from_record, squeeze_from_gamma, GammaParam, SolutionFrame, SqueezeParam,
    SqueezedCoherentRecord,
};
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::Float;

const DENOM_FLOOR: f64 = 1e-12;

/// Deterministic `Gamma(t)` samples on a grid; identical for every noise
/// path with the same parameters.
#[derive(Clone, Debug)]
pub struct RiccatiSolution {
    params: ModelParams,
    gamma0: GammaParam,
    grid: TimeGrid,
    gammas: Vec<C64>,
}

impl RiccatiSolution {
    /// Fixed-step RK4 of the Riccati equation with `substeps` internal
    /// stages per grid interval. Aborts if `|Gamma|` ever reaches 1.
    pub fn integrate(
        grid: TimeGrid,
        params: &ModelParams,
        gamma0: &GammaParam,
        substeps: usize,
    ) -> Result<Self, Error> {
        let substeps = substeps.max(1);
        let h = grid.dt() / substeps as f64;
        let rhs = |t: f64, g: C64| -> C64 {
            let phi = params.phase(t);
            let rot = C64::from_polar(1.0, -2.0 * phi);
            -C64::new(params.mu, 2.0 * params.omega) * g + params.mu * rot * g * g
        };
        let mut g = gamma0.gamma();
        let mut gammas = Vec::with_capacity(grid.n_steps() + 1);
        gammas.push(g);
        for k in 0..grid.n_steps() {
            let t0 = grid.time(k);
            for j in 0..substeps {
                let t = t0 + h * j as f64;
                let k1 = rhs(t, g);
                let k2 = rhs(t + 0.5 * h, g + 0.5 * h * k1);
                let k3 = rhs(t + 0.5 * h, g + 0.5 * h * k2);
                let k4 = rhs(t + h, g + h * k3);
                g += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                if !(g.norm_sqr() < 1.0) {
                    return Err(Error::InvariantViolation {
                        what: "|Gamma| reached 1 during Riccati integration",
                        t: t + h,
                    });
                }
            }
            gammas.push(g);
        }
        Ok(Self {
            params: *params,
            gamma0: *gamma0,
            grid,
            gammas,
        })
    }

    /// Sample the general closed form on the grid.
    pub fn from_closed_general(
        grid: TimeGrid,
        params: &ModelParams,
        gamma0: &GammaParam,
    ) -> Result<Self, Error> {
        let gammas = (0..=grid.n_steps())
            .map(|k| gamma_closed_general(grid.time(k), params, gamma0).map(|g| g.gamma()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            params: *params,
            gamma0: *gamma0,
            grid,
            gammas,
        })
    }

    /// Sample the `phi0 = pi/2` closed form on the grid.
    pub fn from_closed_linear_phase(
        grid: TimeGrid,
        params: &ModelParams,
        gamma0: &GammaParam,
    ) -> Result<Self, Error> {
        let gammas = (0..=grid.n_steps())
            .map(|k| gamma_closed_linear_phase(grid.time(k), params, gamma0).map(|g| g.gamma()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            params: *params,
            gamma0: *gamma0,
            grid,
            gammas,
        })
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    #[inline]
    pub fn gamma0(&self) -> &GammaParam {
        &self.gamma0
    }

    /// Raw complex samples, `gammas()[k] = Gamma(t_k)`.
    #[inline]
    pub fn gammas(&self) -> &[C64] {
        &self.gammas
    }

    pub fn sample(&self, k: usize) -> Result<GammaParam, Error> {
        GammaParam::from_complex(self.gammas[k])
    }
}

/// General closed form
/// `Gamma(t) = Gamma(0) e^{-(2 i omega + mu) t} / (1 - mu Gamma(0) I(t))`
/// with `I(t) = int_0^t e^{-(2 i omega + mu) t' - 2 i phi(t')} dt'`
/// evaluated analytically for the linear phase law.
pub fn gamma_closed_general(
    t: f64,
    params: &ModelParams,
    gamma0: &GammaParam,
) -> Result<GammaParam, Error> {
    let g0 = gamma0.gamma();
    // z = mu + 2 i (omega + vartheta); |z| >= mu > 0
    let z = C64::new(params.mu, 2.0 * (params.omega + params.vartheta));
    let phase0 = C64::from_polar(1.0, -2.0 * params.phi0);
    let integral = phase0 * (1.0 - (-z * t).exp()) / z;
    let denom = 1.0 - params.mu * g0 * integral;
    if denom.norm() < DENOM_FLOOR {
        return Err(Error::Singularity {
            t,
            magnitude: denom.norm(),
        });
    }
    let decay = C64::from_polar((-params.mu * t).exp(), -2.0 * params.omega * t);
    GammaParam::from_complex(g0 * decay / denom)
}

/// Specialized closed form for `phi(t) = pi/2 + vartheta t`:
/// `Gamma(t) = (2 i omega + 2 i vartheta + mu) Gamma(0) /
/// (e^{(2 i omega + mu) t} [2 i omega + 2 i vartheta + mu (1 + Gamma(0))]
/// - mu Gamma(0) e^{-2 i vartheta t})`.
///
/// Evaluated with the numerator and denominator both multiplied by
/// `e^{-(2 i omega + mu) t}` so only decaying exponentials appear.
pub fn gamma_closed_linear_phase(
    t: f64,
    params: &ModelParams,
    gamma0: &GammaParam,
) -> Result<GammaParam, Error> {
    let half_pi = core::f64::consts::FRAC_PI_2;
    if (params.phi0 - half_pi).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "phi0",
            value: params.phi0,
            reason: "linear-phase closed form requires phi0 = pi/2",
        });
    }
    let g0 = gamma0.gamma();
    let z = C64::new(params.mu, 2.0 * (params.omega + params.vartheta));
    let denom = z + params.mu * g0 * (1.0 - (-z * t).exp());
    if denom.norm() < DENOM_FLOOR {
        return Err(Error::Singularity {
            t,
            magnitude: denom.norm(),
        });
    }
    let decay = C64::from_polar((-params.mu * t).exp(), -2.0 * params.omega * t);
    GammaParam::from_complex(z * g0 * decay / denom)
}

/// `kappa = (1 + Gamma) / (1 - Gamma)`; maps the open disk to the right
/// half-plane, so `Re kappa > 0`.
pub fn kappa(g: &GammaParam) -> C64 {
    g.kappa()
}

/// Noise-independent posterior spreads
/// `dX = (4 Re kappa)^{-1/2}`, `dY = |kappa| (4 Re kappa)^{-1/2}`.
pub fn uncertainties_single(g: &GammaParam) -> (f64, f64) {
    g.spreads()
}

/// Displacement along a real Wiener record. Writing
/// `w(t) = alpha(t) sqrt(1 - |Gamma(t)|^2)` and
/// `E(t) = exp(mu int_0^t e^{-2 i phi} Gamma dt')`, the closed form is
/// `w(t) = e^{-(i omega + mu/2) t} E(t) [w(0)
/// - sqrt(mu) int_0^t e^{(i omega + mu/2) s} E(s)^{-1} e^{-i phi(s)} Gamma(s) dQ(s)]`.
///
/// The nested exponential is carried as a single running accumulator,
/// so the whole trajectory costs O(n).
pub fn alpha_trajectory_single(
    path: &NoisePath,
    params: &ModelParams,
    sol: &RiccatiSolution,
    alpha0: C64,
) -> Result<Vec<C64>, Error> {
    if path.kind() != NoiseKind::Real {
        return Err(Error::NoiseKindMismatch {
            expected: NoiseKind::Real,
            got: path.kind(),
        });
    }
    if path.grid() != sol.grid() {
        return Err(Error::GridMismatch {
            expected: sol.grid().n_steps(),
            got: path.grid().n_steps(),
        });
    }
    let grid = *path.grid();
    let n = grid.n_steps();
    let dt = grid.dt();
    let mu = params.mu;
    let sqrt_mu = mu.sqrt();
    let g = sol.gammas();

    let det = |k: usize| -> C64 {
        // integrand of the deterministic E(t) exponent
        C64::from_polar(1.0, -2.0 * params.phase(grid.time(k))) * g[k]
    };

    let w0 = alpha0 * (1.0 - g[0].norm_sqr()).sqrt();
    let mut alphas = Vec::with_capacity(n + 1);
    alphas.push(alpha0);
    let mut big_g = C64::new(0.0, 0.0); // mu * int_0^{t_k} e^{-2 i phi} Gamma dt (trapezoid)
    let mut ito = C64::new(0.0, 0.0);
    for k in 0..n {
        let t_k = grid.time(k);
        // left endpoint: exp((i omega + mu/2) t_k - G_k)
        let kernel = (C64::new(0.5 * mu * t_k, params.omega * t_k) - big_g).exp();
        ito += kernel * params.lo_factor(t_k) * g[k] * path.increments()[k];
        big_g += mu * dt * 0.5 * (det(k) + det(k + 1));
        let t_next = grid.time(k + 1);
        let w = (big_g - C64::new(0.5 * mu * t_next, params.omega * t_next)).exp()
            * (w0 - sqrt_mu * ito);
        alphas.push(w / (1.0 - g[k + 1].norm_sqr()).sqrt());
    }
    Ok(alphas)
}

/// Likelihood amplitude along the same record; the exponent collects
/// `-i omega t / 2`, the `|alpha|^2` difference, two `mu`-weighted
/// families of time integrals with `e^{-+2 i phi}` factors and the
/// `|Gamma|^2 / (1 - |Gamma|^2)` term, plus the Ito integral of
/// `sqrt(mu) e^{-i phi} alpha / sqrt(1 - |Gamma|^2)`.
pub fn l_trajectory_single(
    path: &NoisePath,
    params: &ModelParams,
    sol: &RiccatiSolution,
    alphas: &[C64],
) -> Result<Vec<C64>, Error> {
    if path.kind() != NoiseKind::Real {
        return Err(Error::NoiseKindMismatch {
            expected: NoiseKind::Real,
            got: path.kind(),
        });
    }
    if path.grid() != sol.grid() {
        return Err(Error::GridMismatch {
            expected: sol.grid().n_steps(),
            got: path.grid().n_steps(),
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
    let dt = grid.dt();
    let mu = params.mu;
    let sqrt_mu = mu.sqrt();
    let g = sol.gammas();
    let alpha0_sq = alphas[0].norm_sqr();

    // deterministic integrands (Gamma only), trapezoid accumulated
    let det_sq = |k: usize| -> f64 {
        let m2 = g[k].norm_sqr();
        m2 / (2.0 * (1.0 - m2))
    };
    let det_minus = |k: usize| -> C64 {
        let m2 = g[k].norm_sqr();
        C64::from_polar(1.0, -2.0 * params.phase(grid.time(k))) * (0.5 * m2 * g[k]) / (1.0 - m2)
    };
    let det_plus = |k: usize| -> C64 {
        let m2 = g[k].norm_sqr();
        let gc = g[k].conj();
        C64::from_polar(1.0, 2.0 * params.phase(grid.time(k))) * gc * gc * (0.5 * g[k]) / (1.0 - m2)
    };

    let mut ls = Vec::with_capacity(n + 1);
    ls.push(C64::new(1.0, 0.0));
    let mut i_sq = 0.0; // int |G|^2 / (2 (1-|G|^2)) dt
    let mut i_minus = C64::new(0.0, 0.0); // int e^{-2 i phi} |G|^2 G / (2 (1-|G|^2)) dt
    let mut i_plus = C64::new(0.0, 0.0); // int e^{+2 i phi} conj(G)^2 G / (2 (1-|G|^2)) dt
    let mut s_bar = C64::new(0.0, 0.0); // int conj(G) alpha^2 / (1-|G|^2) dt (left)
    let mut s_minus = C64::new(0.0, 0.0); // int e^{-2 i phi} alpha^2 / (1-|G|^2) dt (left)
    let mut s_plus = C64::new(0.0, 0.0); // int e^{+2 i phi} conj(G)^2 alpha^2 / (1-|G|^2) dt (left)
    let mut ito = C64::new(0.0, 0.0); // int e^{-i phi} alpha / sqrt(1-|G|^2) dQ
    for k in 0..n {
        let t_k = grid.time(k);
        let m2 = g[k].norm_sqr();
        let one_m = 1.0 - m2;
        let a2 = alphas[k] * alphas[k];
        let rot_m = C64::from_polar(1.0, -2.0 * params.phase(t_k));
        s_bar += g[k].conj() * a2 / one_m * dt;
        s_minus += rot_m * a2 / one_m * dt;
        s_plus += rot_m.conj() * g[k].conj() * g[k].conj() * a2 / one_m * dt;
        ito += params.lo_factor(t_k) * alphas[k] / one_m.sqrt() * path.increments()[k];
        i_sq += dt * 0.5 * (det_sq(k) + det_sq(k + 1));
        i_minus += dt * 0.5 * (det_minus(k) + det_minus(k + 1));
        i_plus += dt * 0.5 * (det_plus(k) + det_plus(k + 1));

        let t_next = grid.time(k + 1);
        let exponent = C64::new(0.0, -0.5 * params.omega * t_next)
            + 0.5 * (alphas[k + 1].norm_sqr() - alpha0_sq)
            - mu * (i_sq - s_bar)
            - 0.5 * mu * (i_minus + s_minus)
            + 0.5 * mu * (i_plus - s_plus)
            + sqrt_mu * ito;
        ls.push(exponent.exp());
    }
    Ok(ls)
}

/// Full posterior trajectory for one single-heterodyne record.
#[derive(Clone, Debug)]
pub struct Het1Solution {
    pub params: ModelParams,
    pub xi0: SqueezeParam,
    pub alpha0: C64,
    pub frames: Vec<SolutionFrame>,
}

/// Evaluate `(l, xi, alpha)` and posterior moments on the path's grid,
/// with `Gamma(t)` from the general closed form.
pub fn solve(
    path: &NoisePath,
    params: &ModelParams,
    xi0: &SqueezeParam,
    alpha0: C64,
) -> Result<Het1Solution, Error> {
    let gamma0 = crate::squeeze::gamma_from_squeeze(xi0);
    let sol = RiccatiSolution::from_closed_general(*path.grid(), params, &gamma0)?;
    let alphas = alpha_trajectory_single(path, params, &sol, alpha0)?;
    let ls = l_trajectory_single(path, params, &sol, &alphas)?;
    let grid = *path.grid();
    let mut frames = Vec::with_capacity(grid.n_steps() + 1);
    for k in 0..=grid.n_steps() {
        let squeeze = squeeze_from_gamma(&sol.sample(k)?);
        let record = SqueezedCoherentRecord {
            l: ls[k],
            squeeze,
            alpha: alphas[k],
        };
        let moments = moments_from_record(&record);
        frames.push(SolutionFrame {
            t: grid.time(k),
            record,
            moments,
        });
    }
    Ok(Het1Solution {
        params: *params,
        xi0: *xi0,
        alpha0,
        frames,
    })
}
