//! Physical model parameters.
//!
//! Planck's constant is fixed to 1 throughout; the free Hamiltonian only
//! enters through the angular frequency `omega`. The local oscillator
//! phase follows the linear law `phi(t) = phi0 + vartheta * t`.

use crate::error::Error;
use num_complex::Complex64 as C64;
use num_traits::Float;

/// Which output observation drives the filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectionScheme {
    /// Two channels with a pi/2 phase offset; the record is a complex
    /// Wiener process with `(dQ)^2 = 0` and `|dQ|^2 = dt`.
    DoubleHeterodyne,
    /// One balanced channel; the record is a real Wiener process.
    SingleHeterodyne,
}

/// Cavity frequency, damping, and local-oscillator phase law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Angular frequency of the mode (rad per unit time, > 0).
    pub omega: f64,
    /// Coupling (total damping rate, 1/time, > 0).
    pub mu: f64,
    /// Local-oscillator phase at t = 0 (rad).
    pub phi0: f64,
    /// Local-oscillator detuning (rad per unit time).
    pub vartheta: f64,
    pub scheme: DetectionScheme,
}

impl ModelParams {
    pub fn new(
        omega: f64,
        mu: f64,
        phi0: f64,
        vartheta: f64,
        scheme: DetectionScheme,
    ) -> Result<Self, Error> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
                reason: "must be finite and > 0",
            });
        }
        if !(mu.is_finite() && mu > 0.0) {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "must be finite and > 0",
            });
        }
        if !phi0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi0",
                value: phi0,
                reason: "must be finite",
            });
        }
        if !vartheta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "vartheta",
                value: vartheta,
                reason: "must be finite",
            });
        }
        Ok(Self {
            omega,
            mu,
            phi0,
            vartheta,
            scheme,
        })
    }

    /// Local-oscillator phase `phi(t) = phi0 + vartheta * t`.
    #[inline]
    pub fn phase(&self, t: f64) -> f64 {
        self.phi0 + self.vartheta * t
    }

    /// `exp(-i phi(t))`, the factor multiplying the record increment.
    #[inline]
    pub fn lo_factor(&self, t: f64) -> C64 {
        let p = self.phase(t);
        C64::new(p.cos(), -p.sin())
    }
}
