//! Internal and external clocks.
//!
//! The internal time is the clock reading `x` (zeroed at `x_i`). The external
//! time is the variable conjugate to the total energy in the eigenstate
//! phase: `∫ dx'/(1+g q)` in the Aharonov–Reznik model and `∫ (1+g q) dx'`
//! in the lapse model. Both clocks agree outside the coupling window.

use serde::{Deserialize, Serialize};

use crate::coupling::CouplingProfile;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::measurement::MeasurementRecord;
use crate::mp::MPParams;
use crate::pointer::make_gaussian;

/// Products below `1 - PRODUCT_TOLERANCE` are reported as violations.
pub const PRODUCT_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockModel {
    Ar,
    Mp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeMap {
    pub model: ClockModel,
    pub profile: CouplingProfile,
}

impl TimeMap {
    pub fn new(model: ClockModel, profile: CouplingProfile) -> Self {
        Self { model, profile }
    }

    /// `(t_int, t_ext)` at clock reading `x` for pointer value `q`.
    pub fn elapsed_times(&self, x: f64, q: f64) -> Result<(f64, f64)> {
        let t_int = x - self.profile.x_i();
        let t_ext = match self.model {
            ClockModel::Ar => t_int + self.profile.integral_reciprocal_excess(q, x)?,
            ClockModel::Mp => t_int + q * self.profile.integral_power(1, x)?,
        };
        Ok((t_int, t_ext))
    }
}

/// Statistics of the external duration `T_ext = T_int (1 + g q)` induced by
/// the pointer distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TExtStats {
    pub mean_text: f64,
    /// `√2 · std` of `T_ext`.
    pub spread_text: f64,
    /// `ΔE0 · ΔT_ext`.
    pub product_spread: f64,
    /// `ΔE0 · T̄_ext`.
    pub product_mean: f64,
}

pub fn text_statistics(
    params: &MPParams,
    record: &MeasurementRecord,
    qgrid: &Grid1D,
) -> Result<TExtStats> {
    let l = params.profile.length();
    let coupling = params.profile.total_power(1)?;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    if !close(record.t_int, l) {
        return Err(Error::MismatchedParams(format!(
            "record t_int {} vs window length {l}",
            record.t_int
        )));
    }
    if !close(record.coupling, coupling) {
        return Err(Error::MismatchedParams(format!(
            "record coupling {} vs ∫g = {coupling}",
            record.coupling
        )));
    }
    let pointer = make_gaussian(&params.pointer, qgrid)?;
    let dq = qgrid.spacing();
    let t_ext = |q: f64| l + q * coupling;
    let weights = pointer.probabilities();
    let mean: f64 = qgrid.points().zip(&weights).map(|(q, w)| t_ext(q) * w).sum::<f64>() * dq;
    let var: f64 = qgrid
        .points()
        .zip(&weights)
        .map(|(q, w)| (t_ext(q) - mean).powi(2) * w)
        .sum::<f64>()
        * dq;
    let spread = std::f64::consts::SQRT_2 * var.sqrt();
    Ok(TExtStats {
        mean_text: mean,
        spread_text: spread,
        product_spread: record.de0 * spread,
        product_mean: record.de0 * mean,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub runs: Vec<TExtStats>,
    pub min_product_spread: f64,
    pub max_product_spread: f64,
    pub min_product_mean: f64,
    pub max_product_mean: f64,
    /// Indices of runs with `product_spread < 1 - PRODUCT_TOLERANCE`.
    pub violations: Vec<usize>,
}

pub fn uncertainty_report(stats: &[TExtStats]) -> Result<UncertaintyReport> {
    if stats.is_empty() {
        return Err(Error::EmptyInput);
    }
    let fold = |f: fn(&TExtStats) -> f64, init: f64, pick: fn(f64, f64) -> f64| {
        stats.iter().map(f).fold(init, pick)
    };
    Ok(UncertaintyReport {
        runs: stats.to_vec(),
        min_product_spread: fold(|s| s.product_spread, f64::INFINITY, f64::min),
        max_product_spread: fold(|s| s.product_spread, f64::NEG_INFINITY, f64::max),
        min_product_mean: fold(|s| s.product_mean, f64::INFINITY, f64::min),
        max_product_mean: fold(|s| s.product_mean, f64::NEG_INFINITY, f64::max),
        violations: stats
            .iter()
            .enumerate()
            .filter(|(_, s)| s.product_spread < 1.0 - PRODUCT_TOLERANCE)
            .map(|(i, _)| i)
            .collect(),
    })
}
