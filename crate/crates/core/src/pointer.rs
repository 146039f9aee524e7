//! Gaussian states of the measuring device's pointer variable `q`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ComplexField, Representation};
use crate::grid::Grid1D;

/// Grids must reach this many widths beyond the centre.
pub const EXTENT_SIGMAS: f64 = 8.0;
/// Minimum distance (in widths) between a truncation cut and the centre.
pub const CUT_MARGIN_SIGMAS: f64 = 5.0;

/// `ψ(q) ∝ exp(-(q-q̄)²/2σ²) · exp(-i k q) · exp(-i χ (q-q̄)²)`, optionally
/// zeroed below a cut.
///
/// `phase_tilt` (`k`) is a momentum offset: the state's momentum mean is
/// `+k`. `chirp` (`χ`) is a quadratic phase which, in the second-order
/// Aharonov–Reznik model, moves the best-resolution energy band to
/// `E0 = χ / ∫g²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPointerSpec {
    pub center: f64,
    pub sigma: f64,
    #[serde(default)]
    pub truncate_below: Option<f64>,
    #[serde(default)]
    pub phase_tilt: f64,
    #[serde(default)]
    pub chirp: f64,
}

impl GaussianPointerSpec {
    pub fn new(center: f64, sigma: f64) -> Self {
        Self {
            center,
            sigma,
            truncate_below: None,
            phase_tilt: 0.0,
            chirp: 0.0,
        }
    }

    pub fn truncated(mut self, cut: f64) -> Self {
        self.truncate_below = Some(cut);
        self
    }

    pub fn with_tilt(mut self, k: f64) -> Self {
        self.phase_tilt = k;
        self
    }

    pub fn with_chirp(mut self, chirp: f64) -> Self {
        self.chirp = chirp;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidPointer(format!("sigma {} must be positive", self.sigma)));
        }
        if ![self.center, self.phase_tilt, self.chirp].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidPointer("non-finite pointer parameter".into()));
        }
        if let Some(cut) = self.truncate_below {
            let margin = (self.center - cut) / self.sigma;
            if !(margin >= CUT_MARGIN_SIGMAS) {
                return Err(Error::TruncationMassTooLarge {
                    cut,
                    margin_sigmas: margin,
                });
            }
        }
        Ok(())
    }

    /// Range a grid must cover for this state.
    pub fn required_range(&self) -> (f64, f64) {
        let hi = self.center + EXTENT_SIGMAS * self.sigma;
        let lo = match self.truncate_below {
            Some(cut) => cut.min(self.center - EXTENT_SIGMAS * self.sigma),
            None => self.center - EXTENT_SIGMAS * self.sigma,
        };
        (lo, hi)
    }

    /// Whether `q` carries amplitude (above the cut, if any).
    pub fn in_support(&self, q: f64) -> bool {
        self.truncate_below.is_none_or(|cut| q >= cut)
    }

    /// Unnormalized amplitude at `q`.
    pub fn amplitude(&self, q: f64) -> C64 {
        if !self.in_support(q) {
            return C64::new(0.0, 0.0);
        }
        let d = q - self.center;
        let env = (-d * d / (2.0 * self.sigma * self.sigma)).exp();
        C64::from_polar(env, -self.phase_tilt * q - self.chirp * d * d)
    }
}

pub fn make_gaussian(spec: &GaussianPointerSpec, grid: &Grid1D) -> Result<ComplexField> {
    spec.validate()?;
    let (need_lo, need_hi) = spec.required_range();
    // A cut may sit exactly on `lo`; the centre ± 8σ requirement is the same
    // one applied to untruncated states.
    let lo_ok = match spec.truncate_below {
        Some(cut) => grid.lo() <= cut,
        None => grid.lo() <= need_lo,
    };
    if !lo_ok || grid.hi() < need_hi {
        return Err(Error::DomainTooSmall {
            lo: grid.lo(),
            hi: grid.hi(),
            need_lo: spec.truncate_below.unwrap_or(need_lo),
            need_hi,
        });
    }
    ComplexField::from_fn(*grid, Representation::Position, |q| spec.amplitude(q)).normalized()
}

/// Grid for `spec` fine enough to resolve the local wavenumber bound `k_max`
/// of any phase applied on top of the state (plus the envelope's own band).
pub fn pointer_grid(spec: &GaussianPointerSpec, k_max: f64, min_points: usize) -> Result<Grid1D> {
    spec.validate()?;
    let (lo, hi) = spec.required_range();
    let band = k_max.abs() + spec.phase_tilt.abs() + 12.0 / spec.sigma;
    // keep the content inside the inner 3/4 of the band
    let spacing = 0.75 * std::f64::consts::PI / band;
    Grid1D::with_max_spacing(lo, hi, spacing, min_points)
}

/// Largest `|dφ/dq|` of `phase` over `[lo, hi]`, sampled on 2048 intervals.
pub fn max_phase_slope(phase: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let m = 2048;
    let h = (hi - lo) / m as f64;
    (0..m)
        .map(|j| {
            let a = lo + j as f64 * h;
            ((phase(a + h) - phase(a)) / h).abs()
        })
        .fold(0.0, f64::max)
}
