//! Squeeze-parameter algebra and quadrature moments of the Gaussian family.
//!
//! A pure squeezed coherent state is parametrized by the squeeze
//! `xi = rho * exp(i theta)` and the displacement `alpha`. The bounded
//! disk coordinate `Gamma = exp(i theta) * tanh(rho)` is what the
//! single-heterodyne flow acts on; quadrature spreads only depend on it.
//!
//! `GammaParam` keeps `(rho, theta)` rather than the complex number
//! itself: `tanh` saturates to 1.0 in f64 near `rho = 19`, which would
//! destroy the round trip with `SqueezeParam` for large squeezes. All
//! magnitude-sensitive quantities (`1 - |Gamma|`, `kappa`, spreads) are
//! evaluated from `rho` directly so no cancellation occurs.

use crate::error::Error;
use num_complex::Complex64 as C64;
use num_traits::Float;

/// `1 - tanh(rho)` without cancellation, valid for any `rho >= 0`.
#[inline]
pub(crate) fn one_minus_tanh(rho: f64) -> f64 {
    2.0 / ((2.0 * rho).exp() + 1.0)
}

/// `1 + tanh(rho)` (monotone, no cancellation).
#[inline]
pub(crate) fn one_plus_tanh(rho: f64) -> f64 {
    2.0 / ((-2.0 * rho).exp() + 1.0)
}

/// Squeeze magnitude and axis angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezeParam {
    rho: f64,
    theta: f64,
}

impl SqueezeParam {
    /// `rho >= 0` finite; `theta` finite. A zero squeeze carries no axis,
    /// so `theta` is normalized to 0 when `rho == 0`.
    pub fn new(rho: f64, theta: f64) -> Result<Self, Error> {
        if !(rho.is_finite() && rho >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: rho,
                reason: "must be finite and >= 0",
            });
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "must be finite",
            });
        }
        let theta = if rho == 0.0 { 0.0 } else { theta };
        Ok(Self { rho, theta })
    }

    pub fn vacuum() -> Self {
        Self {
            rho: 0.0,
            theta: 0.0,
        }
    }

    #[inline]
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Stored unwrapped so linear-in-time phases stay exactly linear.
    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Angle folded into `(-pi, pi]` for output.
    pub fn theta_wrapped(&self) -> f64 {
        crate::wrap_angle(self.theta)
    }

    /// `xi = rho * exp(i theta)` as a complex number.
    pub fn xi(&self) -> C64 {
        C64::from_polar(self.rho, self.theta)
    }
}

/// Disk coordinate `Gamma = exp(i theta) tanh(rho)`, stored in the
/// atanh domain (see module docs).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaParam {
    rho: f64,
    theta: f64,
}

impl GammaParam {
    /// Build from a raw complex number; rejects `|gamma| >= 1`.
    pub fn from_complex(gamma: C64) -> Result<Self, Error> {
        let mag = gamma.norm();
        if !(mag < 1.0) {
            return Err(Error::NonPhysicalGamma { magnitude: mag });
        }
        let rho = mag.atanh();
        let theta = if mag == 0.0 { 0.0 } else { gamma.arg() };
        Ok(Self { rho, theta })
    }

    /// The complex disk coordinate. Saturates to magnitude 1.0 in f64
    /// for `rho` beyond ~19; use the dedicated accessors for anything
    /// sensitive to `1 - |Gamma|`.
    pub fn gamma(&self) -> C64 {
        C64::from_polar(self.rho.tanh(), self.theta)
    }

    #[inline]
    pub fn magnitude(&self) -> f64 {
        self.rho.tanh()
    }

    #[inline]
    pub fn arg(&self) -> f64 {
        self.theta
    }

    /// `Gamma_1 = cosh(rho)`.
    #[inline]
    pub fn gamma1(&self) -> f64 {
        self.rho.cosh()
    }

    /// `Gamma_2 = exp(i theta) sinh(rho)`.
    pub fn gamma2(&self) -> C64 {
        C64::from_polar(self.rho.sinh(), self.theta)
    }

    /// `1 - |Gamma|^2 = sech^2(rho)`, exact for large `rho`.
    #[inline]
    pub fn one_minus_mag_sq(&self) -> f64 {
        one_minus_tanh(self.rho) * one_plus_tanh(self.rho)
    }

    /// Moebius image `kappa = (1 + Gamma) / (1 - Gamma)`.
    ///
    /// Evaluated as `((1 - |Gamma|^2) + 2 i Im Gamma) / |1 - Gamma|^2`,
    /// which keeps `Re kappa > 0` structurally and survives `rho` up to
    /// several hundred.
    pub fn kappa(&self) -> C64 {
        let t = self.magnitude();
        let s = self.theta.sin();
        let denom = self.abs2_one_minus_gamma();
        C64::new(self.one_minus_mag_sq() / denom, 2.0 * t * s / denom)
    }

    /// `|1 - Gamma|^2` without cancellation near `theta = 0`.
    fn abs2_one_minus_gamma(&self) -> f64 {
        let t = self.magnitude();
        let c = self.theta.cos();
        let s = self.theta.sin();
        let re = if c >= 0.0 {
            let half = (self.theta / 2.0).sin();
            one_minus_tanh(self.rho) + 2.0 * t * half * half
        } else {
            1.0 - t * c
        };
        re * re + t * t * s * s
    }

    /// `|1 + Gamma|^2` without cancellation near `theta = pi`.
    fn abs2_one_plus_gamma(&self) -> f64 {
        let t = self.magnitude();
        let c = self.theta.cos();
        let s = self.theta.sin();
        let re = if c >= 0.0 {
            1.0 + t * c
        } else {
            let half = (self.theta / 2.0).cos();
            one_minus_tanh(self.rho) + 2.0 * t * half * half
        };
        re * re + t * t * s * s
    }

    /// Quadrature spreads `(dX, dY)` of any family member with this
    /// squeeze: `dX = (4 Re kappa)^{-1/2}`, `dY = |kappa| dX`.
    pub fn spreads(&self) -> (f64, f64) {
        let one_m2 = self.one_minus_mag_sq();
        let dx = (self.abs2_one_minus_gamma() / (4.0 * one_m2)).sqrt();
        let dy = (self.abs2_one_plus_gamma() / (4.0 * one_m2)).sqrt();
        (dx, dy)
    }
}

/// `Gamma = exp(i theta) tanh(rho)`; exact inverse of [`squeeze_from_gamma`].
pub fn gamma_from_squeeze(s: &SqueezeParam) -> GammaParam {
    GammaParam {
        rho: s.rho,
        theta: s.theta,
    }
}

/// `rho = atanh|Gamma|`, `theta = arg Gamma` (0 when `Gamma = 0`).
pub fn squeeze_from_gamma(g: &GammaParam) -> SqueezeParam {
    SqueezeParam {
        rho: g.rho,
        theta: if g.rho == 0.0 { 0.0 } else { g.theta },
    }
}

/// Exact posterior state inside the Gaussian family: likelihood
/// amplitude, squeeze, and displacement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezedCoherentRecord {
    /// Complex likelihood amplitude; `|l|^2` is the probability density
    /// of the observed record relative to the Wiener measure.
    pub l: C64,
    pub squeeze: SqueezeParam,
    pub alpha: C64,
}

impl SqueezedCoherentRecord {
    /// State at t = 0: `l = 1`.
    pub fn initial(squeeze: SqueezeParam, alpha: C64) -> Self {
        Self {
            l: C64::new(1.0, 0.0),
            squeeze,
            alpha,
        }
    }

    /// `|l|^2`, the squared norm of the unnormalized posterior.
    #[inline]
    pub fn norm2(&self) -> f64 {
        self.l.norm_sqr()
    }
}

/// One frame of a solved trajectory: time, exact family parameters, and
/// the posterior moments they imply.
#[derive(Clone, Copy, Debug)]
pub struct SolutionFrame {
    pub t: f64,
    pub record: SqueezedCoherentRecord,
    pub moments: QuadratureMoments,
}

/// First and second quadrature moments of the normalized posterior.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureMoments {
    pub mean_x: f64,
    pub mean_y: f64,
    /// Standard deviation of X (> 0).
    pub dx: f64,
    /// Standard deviation of Y (> 0).
    pub dy: f64,
}

impl QuadratureMoments {
    /// `dX * dY`; at least 1/4 for this pure Gaussian family.
    #[inline]
    pub fn uncertainty_product(&self) -> f64 {
        self.dx * self.dy
    }
}

/// Posterior quadrature moments of a family member.
///
/// The mean of the mode operator is `alpha cosh(rho) - conj(alpha)
/// exp(i theta) sinh(rho)`; the spreads depend on the squeeze alone.
pub fn moments_from_record(r: &SqueezedCoherentRecord) -> QuadratureMoments {
    let g = gamma_from_squeeze(&r.squeeze);
    let mean = r.alpha * g.gamma1() - r.alpha.conj() * g.gamma2();
    let (dx, dy) = g.spreads();
    QuadratureMoments {
        mean_x: mean.re,
        mean_y: mean.im,
        dx,
        dy,
    }
}
