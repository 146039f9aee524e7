use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use isoenergy::ar::{ar_auto_grid, ar_post_measurement_field, ar_post_measurement_field_exact};
use isoenergy::mp::{mp_auto_grid, mp_post_measurement_field};
use isoenergy::oracle::{convergence_study, Target};
use isoenergy::time::{text_statistics, uncertainty_report, UncertaintyReport};
use isoenergy::{to_momentum, MeasurementRecord, ProfileShape, Regime, TExtStats};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ArAmplitude, ExperimentConfig, ModelKind, ModelParams, RunInput};
use crate::error::CliError;
use crate::rows::{compute_row, RunRow};

/// Environment variable overriding the output directory of the config.
pub const OUT_ENV: &str = "ISOENERGY_OUT";

/// `--out` wins over the environment, which wins over the config file.
pub fn resolve_out_dir(flag: Option<&Path>, cfg: &ExperimentConfig) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(p) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(p);
    }
    cfg.output
        .dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("isoenergy-out"))
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a, T: Serialize> {
    command: &'a str,
    version: &'a str,
    config: &'a ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<T>,
}

fn write_json<T: Serialize>(
    path: &Path,
    command: &str,
    cfg: &ExperimentConfig,
    summary: Option<T>,
) -> Result<(), CliError> {
    let w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(
        w,
        &Sidecar {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config: cfg,
            summary,
        },
    )?;
    Ok(())
}

pub fn run_rows(inputs: &[RunInput], cfg: &ExperimentConfig) -> Result<Vec<RunRow>, CliError> {
    inputs
        .par_iter()
        .map(|r| compute_row(r, cfg.grid.min_points, cfg.grid.ar_amplitude))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// Finest residual below tolerance and order inside the window.
    Converges,
    /// Order below the approximate-solution bound.
    Plateaus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub run: usize,
    pub model: ModelKind,
    pub target: &'static str,
    pub q: f64,
    pub resolution: usize,
    pub residual: f64,
    pub fitted_order: f64,
    pub expectation: Expectation,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub runs: Vec<RunRow>,
    pub convergence: Vec<ConvergenceRow>,
    pub failures: usize,
}

fn check_q(params: &ModelParams, q: f64) -> Result<(), CliError> {
    let ok = match params {
        ModelParams::Ar(p) => 1.0 + p.profile.plateau() * q > 0.0,
        ModelParams::Mp(_) => q >= 0.0,
    };
    if !ok || !q.is_finite() {
        return Err(CliError::Config(format!("verify.q = {q} is outside the model's domain")));
    }
    Ok(())
}

pub fn verify(cfg: &ExperimentConfig) -> Result<VerifyReport, CliError> {
    let inputs = cfg.runs()?;
    let res = &cfg.grid.resolutions;
    if res.len() < 3 || res.windows(2).any(|w| w[1] != 2 * w[0]) || res[0] < 8 {
        return Err(CliError::Config(
            "grid.resolutions needs at least 3 sizes, each doubling the previous".into(),
        ));
    }
    if cfg.verify.q.is_empty() {
        return Err(CliError::Config("verify.q has no values".into()));
    }
    let params = inputs.iter().map(|r| r.params()).collect::<Result<Vec<_>, _>>()?;
    for p in &params {
        for &q in &cfg.verify.q {
            check_q(p, q)?;
        }
    }

    let tol = &cfg.tolerances;
    let mut cells = vec![];
    for (run, p) in params.iter().enumerate() {
        for &q in &cfg.verify.q {
            cells.push((run, p, q, Expectation::Converges));
            if cfg.verify.approximate && matches!(p, ModelParams::Ar(_)) {
                cells.push((run, p, q, Expectation::Plateaus));
            }
        }
    }
    let studies = cells
        .par_iter()
        .map(|&(run, p, q, expect)| {
            let (model, target) = match (p, expect) {
                (ModelParams::Ar(a), Expectation::Converges) => (ModelKind::Ar, Target::ArExact(a)),
                (ModelParams::Ar(a), Expectation::Plateaus) => (ModelKind::Ar, Target::ArSecondOrder(a)),
                (ModelParams::Mp(m), _) => (ModelKind::Mp, Target::MpExact(m)),
            };
            let (residuals, order) = match convergence_study(target, res, q) {
                Ok(rep) => (rep.residuals, rep.fitted_order),
                Err(isoenergy::Error::GridTooCoarse(_)) => (vec![f64::NAN; res.len()], f64::NAN),
                Err(e) => return Err(CliError::Numeric(e)),
            };
            let finest = *residuals.last().unwrap();
            let pass = match expect {
                Expectation::Converges => {
                    finest < tol.residual && (tol.order_min..=tol.order_max).contains(&order)
                }
                Expectation::Plateaus => order < tol.approx_order_max,
            };
            Ok(res
                .iter()
                .zip(residuals)
                .map(|(&resolution, residual)| ConvergenceRow {
                    run,
                    model,
                    target: target.name(),
                    q,
                    resolution,
                    residual,
                    fitted_order: order,
                    expectation: expect,
                    pass,
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let convergence: Vec<ConvergenceRow> = studies.into_iter().flatten().collect();
    let failures = convergence
        .iter()
        .filter(|c| !c.pass && c.resolution == *res.last().unwrap())
        .count();

    let mut runs = run_rows(&inputs, cfg)?;
    for (run, row) in runs.iter_mut().enumerate() {
        row.residual = convergence
            .iter()
            .filter(|c| {
                c.run == run && c.expectation == Expectation::Converges && c.resolution == *res.last().unwrap()
            })
            .map(|c| c.residual)
            .reduce(|a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) });
    }
    Ok(VerifyReport {
        runs,
        convergence,
        failures,
    })
}

pub fn cmd_verify(cfg: &ExperimentConfig, out: &Path) -> Result<VerifyReport, CliError> {
    let report = verify(cfg)?;
    std::fs::create_dir_all(out)?;
    write_csv(&out.join("verify-runs.csv"), &report.runs)?;
    write_csv(&out.join("verify-convergence.csv"), &report.convergence)?;
    write_json::<()>(&out.join("verify.config.json"), "verify", cfg, None)?;
    if report.failures > 0 {
        return Err(CliError::Verification(format!(
            "{} of {} studies missed their bound; see verify-convergence.csv",
            report.failures,
            report.convergence.len() / cfg.grid.resolutions.len()
        )));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeRow {
    pub e_total: f64,
    pub de0_measured: f64,
    pub de0_predicted: f64,
    pub t_de0: f64,
    pub regime: Option<Regime>,
}

pub fn regimes(cfg: &ExperimentConfig) -> Result<(Vec<RunRow>, Vec<RegimeRow>), CliError> {
    if cfg.model.values("model")?.iter().any(|m| *m != ModelKind::Ar) {
        return Err(CliError::Config("regimes sweeps the AR model only".into()));
    }
    let runs = run_rows(&cfg.runs()?, cfg)?;
    let table = runs
        .iter()
        .map(|r| RegimeRow {
            e_total: r.e_total,
            de0_measured: r.de0,
            de0_predicted: r.de0_predicted,
            t_de0: r.t_de0,
            regime: r.regime,
        })
        .collect();
    Ok((runs, table))
}

pub fn cmd_regimes(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<RegimeRow>, CliError> {
    let (runs, table) = regimes(cfg)?;
    std::fs::create_dir_all(out)?;
    write_csv(&out.join("regimes-runs.csv"), &runs)?;
    write_csv(&out.join("regimes.csv"), &table)?;
    write_json::<()>(&out.join("regimes.config.json"), "regimes", cfg, None)?;
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseStatus {
    Computed,
    Reference,
    NotComputable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub case: u32,
    pub status: CaseStatus,
    pub model: Option<ModelKind>,
    pub length: Option<f64>,
    pub coupling: Option<f64>,
    pub sigma: Option<f64>,
    pub e_total: Option<f64>,
    pub t_int: Option<f64>,
    pub de0: Option<f64>,
    pub t_de0: Option<f64>,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseSummary {
    pub case: u32,
    pub status: CaseStatus,
    pub rows: usize,
    pub min_de0: Option<f64>,
    pub max_de0: Option<f64>,
    pub min_t_de0: Option<f64>,
    pub max_t_de0: Option<f64>,
    pub note: &'static str,
}

const CASE1_NOTE: &str = "external observer: T dE0 >= 1 with no dependence on the coupling; no internal model to run";
const CASE2_NOTE: &str = "AR model: T dE0 bounded below, near-saturating only inside a finite energy band";
const CASE7_NOTE: &str = "MP model: dE0 fixed by L g dq while the internal duration shrinks";
const OPEN_NOTE: &str = "not-computable: relation left open";

fn row_from(case: u32, r: &RunRow, note: &'static str) -> Table1Row {
    Table1Row {
        case,
        status: CaseStatus::Computed,
        model: Some(r.model),
        length: Some(r.length),
        coupling: Some(r.coupling),
        sigma: Some(r.sigma),
        e_total: Some(r.e_total),
        t_int: Some(r.t_int),
        de0: Some(r.de0),
        t_de0: Some(r.t_de0),
        note,
    }
}

fn note_row(case: u32, status: CaseStatus, note: &'static str) -> Table1Row {
    Table1Row {
        case,
        status,
        model: None,
        length: None,
        coupling: None,
        sigma: None,
        e_total: None,
        t_int: None,
        de0: None,
        t_de0: None,
        note,
    }
}

fn case_inputs(cfg: &ExperimentConfig, case: u32) -> Result<Vec<RunInput>, CliError> {
    let base = |model, length, coupling, sigma, center, e_total| RunInput {
        model,
        shape: ProfileShape::Rectangular,
        x_i: 0.0,
        length,
        coupling,
        ramp: 0.0,
        sigma,
        center,
        tilt: 0.0,
        chirp: 0.0,
        e_box: 0.5,
        e_total,
    };
    let inputs: Vec<RunInput> = match case {
        2 => {
            let c = &cfg.table1.case2;
            c.e_total
                .values("table1.case2.e_total")?
                .into_iter()
                .map(|e| base(ModelKind::Ar, c.length, c.coupling, c.sigma, 0.0, e))
                .collect()
        }
        7 => {
            let c = &cfg.table1.case7;
            if c.lengths.is_empty() {
                return Err(CliError::Config("table1.case7.lengths has no values".into()));
            }
            c.lengths
                .iter()
                .map(|&l| {
                    // the pointer width σ is Δq in the √2·std convention
                    let g = c.lg_dq / (l * c.sigma);
                    base(ModelKind::Mp, l, g, c.sigma, 10.0 * c.sigma, c.e_total)
                })
                .collect()
        }
        _ => vec![],
    };
    for r in &inputs {
        r.params()?;
    }
    Ok(inputs)
}

pub fn table1(cfg: &ExperimentConfig) -> Result<(Vec<Table1Row>, Vec<CaseSummary>), CliError> {
    if cfg.table1.cases.is_empty() {
        return Err(CliError::Config("table1.cases has no values".into()));
    }
    if let Some(c) = cfg.table1.cases.iter().find(|c| !(1..=8).contains(*c)) {
        return Err(CliError::Config(format!("unknown table1 case {c}")));
    }
    let inputs = cfg
        .table1
        .cases
        .iter()
        .map(|&c| case_inputs(cfg, c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = vec![];
    let mut summaries = vec![];
    for (&case, inputs) in cfg.table1.cases.iter().zip(&inputs) {
        let (status, note, case_rows) = match case {
            1 => (CaseStatus::Reference, CASE1_NOTE, vec![note_row(1, CaseStatus::Reference, CASE1_NOTE)]),
            2 | 7 => {
                let note = if case == 2 { CASE2_NOTE } else { CASE7_NOTE };
                let runs = run_rows(inputs, cfg)?;
                (CaseStatus::Computed, note, runs.iter().map(|r| row_from(case, r, note)).collect())
            }
            _ => (
                CaseStatus::NotComputable,
                OPEN_NOTE,
                vec![note_row(case, CaseStatus::NotComputable, OPEN_NOTE)],
            ),
        };
        let de0: Vec<f64> = case_rows.iter().filter_map(|r| r.de0).collect();
        let t_de0: Vec<f64> = case_rows.iter().filter_map(|r| r.t_de0).collect();
        let min = |v: &[f64]| v.iter().copied().reduce(f64::min);
        let max = |v: &[f64]| v.iter().copied().reduce(f64::max);
        summaries.push(CaseSummary {
            case,
            status,
            rows: case_rows.len(),
            min_de0: min(&de0),
            max_de0: max(&de0),
            min_t_de0: min(&t_de0),
            max_t_de0: max(&t_de0),
            note,
        });
        rows.extend(case_rows);
    }
    Ok((rows, summaries))
}

pub fn cmd_table1(cfg: &ExperimentConfig, out: &Path) -> Result<Vec<Table1Row>, CliError> {
    let (rows, summaries) = table1(cfg)?;
    std::fs::create_dir_all(out)?;
    write_csv(&out.join("table1.csv"), &rows)?;
    write_json(&out.join("table1.json"), "table1", cfg, Some(&summaries))?;
    Ok(rows)
}

fn single_run(cfg: &ExperimentConfig) -> Result<RunInput, CliError> {
    let mut runs = cfg.runs()?;
    if runs.len() != 1 {
        return Err(CliError::Config(format!(
            "expected a single parameter tuple, the config expands to {}",
            runs.len()
        )));
    }
    Ok(runs.remove(0))
}

/// Single measurement; with `dump` the post-measurement pointer state is
/// written there in momentum representation.
pub fn cmd_measure(cfg: &ExperimentConfig, dump: Option<&Path>) -> Result<MeasurementRecord, CliError> {
    let run = single_run(cfg)?;
    let out = crate::rows::measure(&run, cfg.grid.min_points, cfg.grid.ar_amplitude)?;
    if let Some(path) = dump {
        let after = match run.params()? {
            ModelParams::Ar(p) => {
                let exact = cfg.grid.ar_amplitude == ArAmplitude::Exact;
                let grid = ar_auto_grid(&p, exact, cfg.grid.min_points)?;
                if exact {
                    ar_post_measurement_field_exact(&p, &grid)?
                } else {
                    ar_post_measurement_field(&p, &grid)?
                }
            }
            ModelParams::Mp(p) => mp_post_measurement_field(&p, &mp_auto_grid(&p, cfg.grid.min_points)?)?,
        };
        let w = BufWriter::new(File::create(path)?);
        isoenergy::io::write_field(&to_momentum(&after)?, w)?;
    }
    Ok(out.record)
}

pub fn cmd_text_stats(cfg: &ExperimentConfig) -> Result<TExtStats, CliError> {
    let run = single_run(cfg)?;
    let ModelParams::Mp(p) = run.params()? else {
        return Err(CliError::Config("text-stats needs the MP model".into()));
    };
    let grid = mp_auto_grid(&p, cfg.grid.min_points)?;
    let record = isoenergy::mp::mp_measure(&p, &grid)?;
    Ok(text_statistics(&p, &record, &grid)?)
}

/// Uncertainty summary over the MP rows of a sweep.
pub fn sweep_uncertainty(rows: &[RunRow]) -> Result<UncertaintyReport, CliError> {
    let stats: Vec<TExtStats> = rows
        .iter()
        .filter_map(|r| {
            Some(TExtStats {
                mean_text: r.mean_text?,
                spread_text: r.spread_text?,
                product_spread: r.product_spread?,
                product_mean: r.product_mean?,
            })
        })
        .collect();
    Ok(uncertainty_report(&stats)?)
}
