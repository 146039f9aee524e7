//! One CSV row per parameter tuple.

use isoenergy::ar::{ar_auto_grid, ar_pointer_distribution, ar_predicted_precision};
use isoenergy::mp::{mp_auto_grid, mp_measure};
use isoenergy::time::text_statistics;
use isoenergy::{MeasurementRecord, ProfileShape, Regime, TExtStats};
use serde::Serialize;

use crate::config::{ArAmplitude, ModelKind, ModelParams, RunInput};
use crate::error::CliError;

/// Column order of every `runs.csv`. Columns that do not apply to a model
/// are left empty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub model: ModelKind,
    pub shape: ProfileShape,
    pub x_i: f64,
    pub length: f64,
    pub coupling: f64,
    pub ramp: f64,
    pub sigma: f64,
    pub center: f64,
    pub tilt: f64,
    pub chirp: f64,
    pub e_box: f64,
    pub e_total: f64,
    pub shift: f64,
    pub shift_predicted: f64,
    pub dp: f64,
    pub dp_predicted: f64,
    pub de0: f64,
    pub de0_predicted: f64,
    /// `L · ΔE0`.
    pub t_de0: f64,
    pub regime: Option<Regime>,
    pub t_int: f64,
    pub mean_text: Option<f64>,
    pub spread_text: Option<f64>,
    pub product_spread: Option<f64>,
    pub product_mean: Option<f64>,
    /// Finest eigen-residual, filled by `verify` only.
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    pub record: MeasurementRecord,
    pub text: Option<TExtStats>,
    pub shift_predicted: f64,
    pub dp_predicted: f64,
}

pub fn measure(input: &RunInput, min_points: usize, ar_amplitude: ArAmplitude) -> Result<RunOutcome, CliError> {
    match input.params()? {
        ModelParams::Ar(p) => {
            let exact = ar_amplitude == ArAmplitude::Exact;
            let grid = ar_auto_grid(&p, exact, min_points)?;
            let record = ar_pointer_distribution(&p, &grid, exact)?;
            let pred = ar_predicted_precision(&p)?;
            let g1 = p.profile.total_power(1)?;
            let g2 = p.profile.total_power(2)?;
            Ok(RunOutcome {
                record,
                text: None,
                shift_predicted: p.e_total * (g1 - 2.0 * g2 * p.pointer.center),
                dp_predicted: pred.dp,
            })
        }
        ModelParams::Mp(p) => {
            let grid = mp_auto_grid(&p, min_points)?;
            let record = mp_measure(&p, &grid)?;
            let text = text_statistics(&p, &record, &grid)?;
            let (sigma, chirp) = (p.pointer.sigma, p.pointer.chirp);
            Ok(RunOutcome {
                record,
                text: Some(text),
                shift_predicted: -p.e_total * record.coupling,
                dp_predicted: (1.0 + 4.0 * chirp * chirp * sigma.powi(4)).sqrt() / sigma,
            })
        }
    }
}

pub fn compute_row(input: &RunInput, min_points: usize, ar_amplitude: ArAmplitude) -> Result<RunRow, CliError> {
    let out = measure(input, min_points, ar_amplitude)?;
    let rec = out.record;
    Ok(RunRow {
        model: input.model,
        shape: input.shape,
        x_i: input.x_i,
        length: input.length,
        coupling: input.coupling,
        ramp: input.ramp,
        sigma: input.sigma,
        center: input.center,
        tilt: input.tilt,
        chirp: input.chirp,
        e_box: input.e_box,
        e_total: input.e_total,
        shift: rec.shift,
        shift_predicted: out.shift_predicted,
        dp: rec.dp,
        dp_predicted: out.dp_predicted,
        de0: rec.de0,
        de0_predicted: out.dp_predicted / rec.coupling,
        t_de0: rec.t_int * rec.de0,
        regime: rec.regime,
        t_int: rec.t_int,
        mean_text: out.text.map(|t| t.mean_text),
        spread_text: out.text.map(|t| t.spread_text),
        product_spread: out.text.map(|t| t.product_spread),
        product_mean: out.text.map(|t| t.product_mean),
        residual: None,
    })
}
