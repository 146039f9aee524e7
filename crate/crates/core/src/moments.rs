use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ComplexField;

/// Mean and spread of `|amp|²`. `width` is `√2 · std`, the width
/// convention under which a minimal Gaussian has `Δq · Δp = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentStats {
    pub mean: f64,
    pub std: f64,
    pub width: f64,
}

fn require_normalized(field: &ComplexField) -> Result<()> {
    if !field.is_normalized() {
        return Err(Error::Unnormalized(field.norm_sqr()));
    }
    Ok(())
}

pub fn moments(field: &ComplexField) -> Result<MomentStats> {
    require_normalized(field)?;
    let grid = field.grid();
    let dx = grid.spacing();
    let probs = field.probabilities();
    let mean: f64 = grid.points().zip(&probs).map(|(x, p)| x * p).sum::<f64>() * dx;
    let var: f64 = grid
        .points()
        .zip(&probs)
        .map(|(x, p)| (x - mean).powi(2) * p)
        .sum::<f64>()
        * dx;
    let std = var.max(0.0).sqrt();
    Ok(MomentStats {
        mean,
        std,
        width: std::f64::consts::SQRT_2 * std,
    })
}

/// `k`-th central moment of `|amp|²`.
pub fn central_moment(field: &ComplexField, k: i32) -> Result<f64> {
    let m = moments(field)?;
    let grid = field.grid();
    let s: f64 = grid
        .points()
        .zip(field.amps())
        .map(|(x, a)| (x - m.mean).powi(k) * a.norm_sqr())
        .sum();
    Ok(s * grid.spacing())
}
