//! Reproducible discretized Wiener measurement records.
//!
//! Everything downstream is an Ito (left-endpoint) sum against these
//! increments, so the grid and the increments are the single source of
//! truth for a trajectory: the closed forms and the number-basis
//! integrator consume the exact same path.
//!
//! Paths are keyed by `(master seed, trajectory index)` through the
//! ChaCha stream mechanism, so ensembles farm out deterministically.

use crate::error::Error;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Uniform time grid with `n_steps` intervals of width `dt`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t_max: f64,
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    /// `n_steps = round(t_max / dt)`; rejects grids where `dt * n_steps`
    /// does not reproduce `t_max` to 1e-12 (relative).
    pub fn new(t_max: f64, dt: f64) -> Result<Self, Error> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidParameter {
                name: "t_max",
                value: t_max,
                reason: "must be finite and > 0",
            });
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
                reason: "must be finite and > 0",
            });
        }
        let n = (t_max / dt).round();
        if n < 1.0 || n > 1e15 {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
                reason: "grid would have no or too many steps",
            });
        }
        let n_steps = n as usize;
        if ((dt * n) - t_max).abs() > 1e-12 * t_max.max(1.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
                reason: "dt * round(t_max/dt) does not reproduce t_max",
            });
        }
        Ok(Self { t_max, dt, n_steps })
    }

    pub fn from_steps(dt: f64, n_steps: usize) -> Result<Self, Error> {
        if !(dt.is_finite() && dt > 0.0) || n_steps == 0 {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
                reason: "need dt > 0 and n_steps >= 1",
            });
        }
        Ok(Self {
            t_max: dt * n_steps as f64,
            dt,
            n_steps,
        })
    }

    #[inline]
    pub fn dt(&self) -> f64 {
        self.dt
    }

    #[inline]
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Left endpoint of step `k` (also valid at `k = n_steps`).
    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.dt * k as f64
    }
}

/// Real record (single heterodyne) or complex record (double heterodyne).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseKind {
    Real,
    Complex,
}

/// One realized measurement record on a grid.
///
/// Real kind: each increment is N(0, dt) on the real axis. Complex kind:
/// `dQ = (dq1 - i dq2) / sqrt(2)` with independent N(0, dt) components,
/// so `E[|dQ|^2] = dt` and `E[(dQ)^2] = 0`.
#[derive(Clone, Debug)]
pub struct NoisePath {
    grid: TimeGrid,
    kind: NoiseKind,
    seed: u64,
    stream: u64,
    increments: Vec<C64>,
}

impl NoisePath {
    /// Path for the given seed (stream 0).
    pub fn generate(grid: TimeGrid, kind: NoiseKind, seed: u64) -> Self {
        Self::for_trajectory(grid, kind, seed, 0)
    }

    /// Deterministic per-trajectory path: the master seed picks the
    /// generator key, the trajectory index picks the ChaCha stream.
    pub fn for_trajectory(grid: TimeGrid, kind: NoiseKind, master_seed: u64, traj: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
        rng.set_stream(traj);
        let sd = grid.dt().sqrt();
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        let increments = (0..grid.n_steps())
            .map(|_| match kind {
                NoiseKind::Real => {
                    let x: f64 = rng.sample(StandardNormal);
                    C64::new(sd * x, 0.0)
                }
                NoiseKind::Complex => {
                    let x: f64 = rng.sample(StandardNormal);
                    let y: f64 = rng.sample(StandardNormal);
                    C64::new(sd * x * inv_sqrt2, -sd * y * inv_sqrt2)
                }
            })
            .collect();
        Self {
            grid,
            kind,
            seed: master_seed,
            stream: traj,
            increments,
        }
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn stream(&self) -> u64 {
        self.stream
    }

    #[inline]
    pub fn increments(&self) -> &[C64] {
        &self.increments
    }

    /// `Q(t_max)`, the telescoped sum of all increments.
    pub fn total(&self) -> C64 {
        self.increments.iter().sum()
    }

    /// Merge blocks of `factor` increments into one, halving (etc.) the
    /// grid resolution while staying on the same Brownian path. Used by
    /// strong-convergence studies.
    pub fn coarsen(&self, factor: usize) -> Result<NoisePath, Error> {
        if factor == 0 || self.grid.n_steps() % factor != 0 {
            return Err(Error::GridMismatch {
                expected: self.grid.n_steps(),
                got: factor,
            });
        }
        let grid = TimeGrid::from_steps(self.grid.dt() * factor as f64, self.grid.n_steps() / factor)?;
        let increments = self
            .increments
            .chunks(factor)
            .map(|c| c.iter().sum())
            .collect();
        Ok(NoisePath {
            grid,
            kind: self.kind,
            seed: self.seed,
            stream: self.stream,
            increments,
        })
    }
}

/// Left-endpoint Ito sum `sum_k f(t_k) dQ_k` of an integrand sampled at
/// the grid's left endpoints (`samples[k] = f(t_k)`, `k < n_steps`).
pub fn ito_integrate(samples: &[C64], path: &NoisePath) -> Result<C64, Error> {
    if samples.len() != path.grid().n_steps() {
        return Err(Error::GridMismatch {
            expected: path.grid().n_steps(),
            got: samples.len(),
        });
    }
    Ok(samples
        .iter()
        .zip(path.increments())
        .map(|(f, dq)| f * dq)
        .sum())
}
