use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;

pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    Position,
    Momentum,
}

/// Complex amplitudes sampled on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid1D,
    amps: Vec<C64>,
    repr: Representation,
}

impl ComplexField {
    pub fn new(grid: Grid1D, amps: Vec<C64>, repr: Representation) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} amplitudes for a grid of {} points",
                amps.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, amps, repr })
    }

    pub fn from_fn(grid: Grid1D, repr: Representation, f: impl Fn(f64) -> C64) -> Self {
        let amps = grid.points().map(f).collect();
        Self { grid, amps, repr }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    /// `Σ |amp|² · spacing`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Unnormalized(n));
        }
        let s = 1.0 / n.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= s);
        Ok(self)
    }

    /// Pointwise multiplication by `f(coordinate)`.
    pub fn map_with(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        let amps = self
            .grid
            .points()
            .zip(&self.amps)
            .map(|(x, &a)| f(x, a))
            .collect();
        Self {
            grid: self.grid,
            amps,
            repr: self.repr,
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn require(&self, repr: Representation) -> Result<()> {
        if self.repr != repr {
            return Err(Error::WrongRepresentation {
                expected: repr,
                got: self.repr,
            });
        }
        Ok(())
    }
}

/// `Σ conj(a) · b · spacing`.
pub fn overlap(a: &ComplexField, b: &ComplexField) -> Result<C64> {
    if a.grid != b.grid || a.repr != b.repr {
        return Err(Error::GridMismatch);
    }
    let s: C64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
    Ok(s * a.grid.spacing())
}
