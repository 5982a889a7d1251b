//! Randomness and special functions: seedable streams, `log+`, the iterated
//! logarithm, the clipping threshold, the clipped Gaussian sampler and the
//! `J` sampling law.

pub mod j;
pub mod rng;
pub mod special;

pub use j::JParams;
pub use rng::RngStream;

use crate::error::CoreError;

/// `log+(x) = max(0, ln x)`.
///
/// Rejects `x <= 0` loudly instead of returning 0: every caller in this crate
/// passes a positive ratio, and a silent 0 on a non-positive argument would
/// mask an upstream bug.
///
/// # Panics
/// If `x <= 0` or `x` is NaN.
pub fn log_plus(x: f64) -> f64 {
    assert!(x > 0.0, "log_plus domain: x must be positive, got {x}");
    x.ln().max(0.0)
}

/// Iterated logarithm of order `m`, clamped below at `e` on every level:
/// `ilog(0, x) = x`, `ilog(m, x) = max(ln(ilog(m-1, x)), e)`.
///
/// # Panics
/// If `x <= 0` or `x` is NaN.
pub fn ilog(m: u32, x: f64) -> f64 {
    assert!(x > 0.0, "ilog domain: x must be positive, got {x}");
    let mut v = x;
    for _ in 0..m {
        v = v.ln().max(std::f64::consts::E);
    }
    v
}

/// Clipping threshold for an arm with empirical mean `mu_hat` after `pulls`
/// pulls: `mu_hat + sqrt(alpha/pulls * log+(horizon / (arms * pulls)))`.
///
/// The bonus is zero (the threshold collapses to `mu_hat` exactly) once
/// `pulls >= horizon / arms`, and it is the MOSS-style index when used as a
/// ranking score directly.
pub fn clip_threshold(mu_hat: f64, pulls: u64, horizon: u64, arms: usize, alpha: f64) -> f64 {
    debug_assert!(pulls >= 1 && horizon >= 1 && arms >= 1 && alpha > 0.0);
    let s = pulls as f64;
    let ratio = horizon as f64 / (arms as f64 * s);
    mu_hat + (alpha / s * log_plus(ratio)).sqrt()
}

/// One arm's clipped-Gaussian sampling distribution: a normal with mean
/// `mu_hat` and variance `variance`, truncated from above at `tau`.
///
/// The resulting law has the normal density below `tau` plus an atom at `tau`
/// of mass `1 - Phi((tau - mu_hat)/sqrt(variance))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipSpec {
    mu_hat: f64,
    variance: f64,
    tau: f64,
}

impl ClipSpec {
    pub fn new(mu_hat: f64, variance: f64, tau: f64) -> Result<Self, CoreError> {
        if !mu_hat.is_finite() {
            return Err(CoreError::invalid("mu_hat", "must be finite"));
        }
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(CoreError::invalid("variance", "must be positive and finite"));
        }
        if !tau.is_finite() {
            return Err(CoreError::invalid("tau", "must be finite"));
        }
        Ok(ClipSpec { mu_hat, variance, tau })
    }

    pub fn mu_hat(&self) -> f64 {
        self.mu_hat
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Exact mass of the atom at `tau`.
    pub fn atom_mass(&self) -> f64 {
        special::normal_sf((self.tau - self.mu_hat) / self.variance.sqrt())
    }

    /// Draw `min(mu_hat + sqrt(variance) * z, tau)` with `z` a standard
    /// normal from `rng`. Location-scale form; consumes exactly one uniform.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let theta = self.mu_hat + self.variance.sqrt() * rng.standard_normal();
        theta.min(self.tau)
    }
}
