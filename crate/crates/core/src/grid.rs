use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform one-dimensional grid with `n` points `lo + j * spacing`,
/// `j = 0..n`. The upper end `hi` is excluded, as on a periodic lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite bounds [{lo}, {hi}]")));
        }
        if hi <= lo {
            return Err(Error::InvalidGrid(format!("hi {hi} must exceed lo {lo}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "point count {n} must be a power of two >= 8"
            )));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        self.lo + j as f64 * self.spacing()
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.point(j))
    }

    /// Last sample point (`hi - spacing`).
    pub fn last(&self) -> f64 {
        self.point(self.n - 1)
    }

    pub fn covers(&self, a: f64, b: f64) -> bool {
        self.lo <= a && self.hi >= b
    }

    /// Reciprocal lattice of the discrete transform, ordered from the most
    /// negative momentum upward: `p_k = k * 2π / (n * spacing)`,
    /// `k = -n/2 .. n/2`.
    pub fn reciprocal(&self) -> Grid1D {
        let dp = 2.0 * std::f64::consts::PI / (self.n as f64 * self.spacing());
        let half = (self.n / 2) as f64;
        Grid1D {
            lo: -half * dp,
            hi: half * dp,
            n: self.n,
        }
    }

    /// Smallest power-of-two grid on `[lo, hi]` whose spacing does not exceed
    /// `max_spacing`, with at least `min_n` points.
    pub fn with_max_spacing(lo: f64, hi: f64, max_spacing: f64, min_n: usize) -> Result<Self> {
        if !(max_spacing > 0.0) {
            return Err(Error::InvalidGrid(format!("spacing bound {max_spacing}")));
        }
        let need = ((hi - lo) / max_spacing).ceil().max(1.0) as usize;
        let n = need.max(min_n).max(8).next_power_of_two();
        Self::new(lo, hi, n)
    }
}
