//! Posterior dynamics of a single damped cavity mode under continuous
//! heterodyne observation.
//!
//! The mode starts in a squeezed coherent state and stays inside that
//! Gaussian family while the measurement record is read out. This crate
//! provides the closed-form evolution of the family parameters for both
//! detection schemes (double heterodyne with a complex Wiener record,
//! single balanced heterodyne with a real one), reproducible measurement
//! noise, and a truncated number-basis integrator that serves as an
//! independent brute-force check of every closed form.
//!
//! The crate is `no_std` (with `alloc`); all IO lives in the companion
//! CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod error;
pub mod fock;
pub mod het1;
pub mod het2;
pub mod noise;
pub mod params;
pub mod squeeze;

pub use error::Error;
pub use num_complex::Complex64 as C64;
pub use params::{DetectionScheme, ModelParams};
pub use squeeze::{
    gamma_from_squeeze, moments_from_record, squeeze_from_gamma, GammaParam, QuadratureMoments,
    SolutionFrame, SqueezeParam, SqueezedCoherentRecord,
};

/// Wrap an angle into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut y = x % two_pi;
    if y <= -core::f64::consts::PI {
        y += two_pi;
    } else if y > core::f64::consts::PI {
        y -= two_pi;
    }
    y
}
