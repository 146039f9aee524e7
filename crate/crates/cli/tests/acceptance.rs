//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

use std::path::Path;
use std::process::Command;

use isoenergy::ar::{ar_auto_grid, ar_exact_amplitude_from, ar_pointer_distribution, ar_post_measurement_field};
use isoenergy::ar::{ar_classify_regime, ar_post_measurement_field_exact};
use isoenergy::moments::central_moment;
use isoenergy::mp::{mp_auto_grid, mp_exact_amplitude_from, mp_measure, mp_post_measurement_field};
use isoenergy::oracle::quadrature_transform;
use isoenergy::pointer::pointer_grid;
use isoenergy::*;
use isoenergy_cli::commands::{self, sweep_uncertainty, Expectation};
use isoenergy_cli::config::{ArAmplitude, ModelKind, RunInput};
use isoenergy_cli::rows::compute_row;
use isoenergy_cli::ExperimentConfig;
use num_complex::Complex64 as C64;

const RESIDUAL_BOUND: f64 = 1e-6;
const ORDER_WINDOW: (f64, f64) = (3.5, 4.5);
const PLATEAU_ORDER: f64 = 1.0;
const PERCENT: f64 = 0.01;
const PRODUCT_TOL: f64 = 0.02;
const SHIFT_REL: f64 = 1e-8;
const WIDTH_REL: f64 = 1e-10;
const MOMENT_REL: f64 = 1e-8;
const TRANSFORM_REL: f64 = 1e-10;

type Outcome = std::result::Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_1() -> Outcome {
    let cfg = ExperimentConfig::from_toml(include_str!("../configs/verify.toml")).map_err(|e| e.to_string())?;
    let rep = commands::verify(&cfg).map_err(|e| e.to_string())?;
    let finest = *cfg.grid.resolutions.last().unwrap();
    let mut ok = finest == 2048 && cfg.verify.q == [0.6] && cfg.sweep.coupling == isoenergy_cli::config::Sweep::One(0.5);
    let mut notes = vec![];
    for row in rep.convergence.iter().filter(|r| r.resolution == finest) {
        let good = match row.expectation {
            Expectation::Converges => {
                row.residual < RESIDUAL_BOUND && (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(&row.fitted_order)
            }
            Expectation::Plateaus => row.fitted_order < PLATEAU_ORDER,
        };
        ok &= good;
        notes.push(format!("{} residual {:.2e} order {:.2}", row.target, row.residual, row.fitted_order));
    }
    ok &= notes.len() == 3;
    check(ok, notes.join("; "))
}

fn ar_rect(e0: f64, g: f64) -> ARParams {
    ARParams::new(
        e0,
        0.5,
        CouplingProfile::rectangular(0.0, 1.0, g).unwrap(),
        GaussianPointerSpec::new(0.0, 1.0),
    )
    .unwrap()
}

fn criterion_2() -> Outcome {
    let (l, g, sigma) = (1.0f64, 0.1f64, 1.0f64);
    let mut ok = true;
    let mut products = vec![];
    for &e0 in &[0.0, 10.0, 50.0, 100.0, 500.0] {
        let p = ar_rect(e0, g);
        let rec = ar_pointer_distribution(&p, &ar_auto_grid(&p, false, 1024).unwrap(), false)
            .map_err(|e| e.to_string())?;
        let shift = l * g * e0;
        let width = (1.0 + 4.0 * l * l * g.powi(4) * e0 * e0 * sigma.powi(4)).sqrt() / sigma;
        ok &= (rec.shift - shift).abs() <= PERCENT * shift.abs().max(1e-9);
        ok &= rel(rec.dp, width) < PERCENT;
        products.push((e0, rec.t_int * rec.de0));
    }
    let t0 = products[0].1;
    let t500 = products[4].1;
    ok &= rel(t0, 10.0) < PERCENT;
    ok &= rel(t500, 10.0 * 101f64.sqrt()) < PRODUCT_TOL;
    let below = ar_classify_regime(&ar_rect(49.999, g));
    let at = ar_classify_regime(&ar_rect(50.0, g));
    ok &= below == Regime::NearSaturating && at == Regime::Dispersive;
    check(
        ok,
        format!("T dE0 = {t0:.4} at E0 = 0, {t500:.4} at E0 = 500; boundary {below} / {at} at E0 = 50"),
    )
}

fn mp_params(e0: f64) -> MPParams {
    MPParams::new(
        e0,
        0.5,
        CouplingProfile::rectangular(0.0, 1.0, 0.5).unwrap(),
        MPParams::pointer_for(10.0, 1.0),
    )
    .unwrap()
}

fn criterion_3() -> Outcome {
    let energies = [-100.0, 0.0, 100.0];
    let grid = mp_auto_grid(&mp_params(100.0), 1024).unwrap();
    let before = to_momentum(&make_gaussian(&mp_params(0.0).pointer, &grid).unwrap()).unwrap();
    let mb = moments(&before).unwrap();
    let mut ok = true;
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut de0 = vec![];
    for &e0 in &energies {
        let p = mp_params(e0);
        let rec = mp_measure(&p, &grid).map_err(|e| e.to_string())?;
        let expected = -0.5 * e0;
        let s_err = (rec.shift - expected).abs() / expected.abs().max(1.0);
        let after = to_momentum(&mp_post_measurement_field(&p, &grid).unwrap()).unwrap();
        let w_err = rel(moments(&after).unwrap().width, mb.width);
        let mut m_err = 0.0f64;
        for k in 2..=6 {
            let d = central_moment(&after, k).unwrap() - central_moment(&before, k).unwrap();
            m_err = m_err.max(d.abs() / mb.std.powi(k));
        }
        ok &= s_err < SHIFT_REL && w_err < WIDTH_REL && m_err < MOMENT_REL;
        worst = (worst.0.max(s_err), worst.1.max(w_err), worst.2.max(m_err));
        de0.push(rec.de0);
    }
    let spread = de0.iter().map(|d| rel(*d, de0[1])).fold(0.0, f64::max);
    ok &= spread < WIDTH_REL;
    check(
        ok,
        format!(
            "shift err {:.1e}, width err {:.1e}, moment err {:.1e}, de0 spread {:.1e}",
            worst.0, worst.1, worst.2, spread
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut cfg = ExperimentConfig::default();
    cfg.table1.cases = vec![7];
    let (rows, _) = commands::table1(&cfg).map_err(|e| e.to_string())?;
    let mut ok = rows.len() == 4;
    let lengths = [1.0, 0.1, 0.01, 0.001];
    let mut worst = 0.0f64;
    for (row, &l) in rows.iter().zip(&lengths) {
        let de0 = row.de0.unwrap();
        worst = worst.max(rel(de0, 0.1));
        ok &= row.t_int == Some(l) && row.length == Some(l);
        ok &= (row.coupling.unwrap() * l * row.sigma.unwrap() - 10.0).abs() < 1e-9;
    }
    ok &= worst < PERCENT;
    let shrink = rows[0].t_int.unwrap() / rows[3].t_int.unwrap();
    ok &= (shrink - 1000.0).abs() < 1e-9;
    check(ok, format!("de0 within {worst:.1e} of 0.1 while t_int shrinks {shrink:.0}x"))
}

fn mp_input(center: f64, sigma: f64, chirp: f64, g: f64) -> RunInput {
    RunInput {
        model: ModelKind::Mp,
        shape: ProfileShape::Rectangular,
        x_i: 0.0,
        length: 1.0,
        coupling: g,
        ramp: 0.0,
        sigma,
        center,
        tilt: 0.0,
        chirp,
        e_box: 0.5,
        e_total: 3.0,
    }
}

fn criterion_5() -> Outcome {
    let base = compute_row(&mp_input(10.0, 1.0, 0.0, 0.5), 1024, ArAmplitude::SecondOrder).map_err(|e| e.to_string())?;
    let (mean, spread, product) = (
        base.mean_text.unwrap(),
        base.spread_text.unwrap(),
        base.product_spread.unwrap(),
    );
    let mut ok = rel(mean, 6.0) < PERCENT && rel(spread, 0.5) < PERCENT && rel(product, 1.0) < PRODUCT_TOL;

    let mut rows = vec![];
    for &sigma in &[0.5, 1.0, 2.0, 4.0] {
        // centred far from and right at the cut, then squeezed
        for &(widths, chirp) in &[(10.0, 0.0), (5.0, 0.0), (5.0, 0.25), (10.0, 0.5), (8.0, 2.0)] {
            let input = mp_input(widths * sigma, sigma, chirp / (sigma * sigma), 0.5);
            rows.push(compute_row(&input, 1024, ArAmplitude::SecondOrder).map_err(|e| e.to_string())?);
        }
    }
    let report = sweep_uncertainty(&rows).map_err(|e| e.to_string())?;
    ok &= report.runs.len() == 20 && report.violations.is_empty();
    ok &= report.min_product_spread >= 1.0 - PRODUCT_TOL;
    ok &= report.runs.iter().all(|s| s.product_mean >= s.product_spread);
    check(
        ok,
        format!(
            "mean {mean:.6} spread {spread:.6} product {product:.6}; 20 states min {:.4} max {:.4}",
            report.min_product_spread, report.max_product_spread
        ),
    )
}

fn binwise_error(field: &ComplexField) -> f64 {
    let fast = to_momentum(field).unwrap();
    let slow = quadrature_transform(field).unwrap();
    let peak = slow.amps().iter().map(|a| a.norm()).fold(0.0, f64::max);
    fast.amps()
        .iter()
        .zip(slow.amps())
        .map(|(a, b)| (a - b).norm() / peak)
        .fold(0.0, f64::max)
}

fn corpus() -> Vec<ComplexField> {
    let mut out = vec![];
    for &e0 in &[0.0, 50.0, 500.0] {
        let p = ar_rect(e0, 0.1);
        out.push(ar_post_measurement_field(&p, &ar_auto_grid(&p, false, 512).unwrap()).unwrap());
    }
    let mut exact = ar_rect(20.0, 0.19);
    exact.pointer = exact.pointer.truncated(-5.0);
    out.push(ar_post_measurement_field_exact(&exact, &ar_auto_grid(&exact, true, 512).unwrap()).unwrap());
    for &e0 in &[-100.0, 0.0, 100.0] {
        let p = mp_params(e0);
        out.push(mp_post_measurement_field(&p, &mp_auto_grid(&p, 512).unwrap()).unwrap());
    }
    let squeezed = GaussianPointerSpec::new(1.0, 0.5).with_tilt(4.0).with_chirp(0.7);
    out.push(make_gaussian(&squeezed, &pointer_grid(&squeezed, 10.0, 256).unwrap()).unwrap());
    let grid = Grid1D::new(0.0, 20.0, 512).unwrap();
    out.push(
        ComplexField::from_fn(grid, Representation::Position, |q| {
            let a = (-(q - 8.5f64).powi(2) / 0.5).exp() + 0.6 * (-(q - 11.0f64).powi(2) / 0.8).exp();
            C64::from_polar(a, 0.3 * q)
        })
        .normalized()
        .unwrap(),
    );
    out
}

fn records_match(a: &MeasurementRecord, b: &MeasurementRecord) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-10 * x.abs().max(1.0);
    close(a.shift, b.shift)
        && close(a.dp, b.dp)
        && close(a.de0, b.de0)
        && a.t_int == b.t_int
        && a.coupling == b.coupling
        && a.regime == b.regime
}

fn criterion_6() -> Outcome {
    let fields = corpus();
    let worst = fields.iter().map(binwise_error).fold(0.0, f64::max);
    let mut ok = worst < TRANSFORM_REL;

    // E_box rescaling through the standard pipelines: bit-identical
    let mp = mp_params(12.0);
    let grid = mp_auto_grid(&mp, 1024).unwrap();
    let scaled = MPParams { e_box: 10.0 * mp.e_box, ..mp };
    ok &= mp_measure(&mp, &grid).unwrap() == mp_measure(&scaled, &grid).unwrap();
    let ar = ar_rect(30.0, 0.1);
    let agrid = ar_auto_grid(&ar, false, 1024).unwrap();
    let ar_scaled = ARParams { e_box: 10.0 * ar.e_box, ..ar };
    ok &= ar_pointer_distribution(&ar, &agrid, false).unwrap()
        == ar_pointer_distribution(&ar_scaled, &agrid, false).unwrap();

    // pointer states assembled from eigenstate amplitudes read past the window
    let mp_ref = mp_measure(&mp, &grid).unwrap();
    let mp_before = make_gaussian(&mp.pointer, &grid).unwrap();
    let ar_ref = ar_pointer_distribution(&ar, &agrid, true).unwrap();
    let ar_before = make_gaussian(&ar.pointer, &agrid).unwrap();
    for &(origin, factor) in &[(0.0, 1.0), (-3.0, 1.0), (-40.0, 10.0)] {
        let m = MPParams { e_box: factor * mp.e_box, ..mp };
        let after = mp_before.map_with(|q, a| if a.norm_sqr() == 0.0 { a } else { a * mp_exact_amplitude_from(&m, origin, 1.7, q).unwrap() });
        let rec = MeasurementRecord::from_fields(&mp_before, &after, mp_ref.coupling, 1.0, None).unwrap();
        ok &= records_match(&rec, &mp_ref);

        let a = ARParams { e_box: factor * ar.e_box, ..ar };
        let after = ar_before.map_with(|q, v| v * ar_exact_amplitude_from(&a, origin, 1.7, q).unwrap());
        let rec = MeasurementRecord::from_fields(&ar_before, &after, ar_ref.coupling, 1.0, ar_ref.regime).unwrap();
        ok &= records_match(&rec, &ar_ref);
    }
    check(
        ok,
        format!("{} fields, worst bin error {worst:.1e}; records invariant under origin and E_box x10", fields.len()),
    )
}

fn run_regimes(config: &Path, out: &Path, jobs: &str) -> std::result::Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_isoenergy"))
        .args(["regimes", "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(["--jobs", jobs])
        .env_remove("ISOENERGY_OUT")
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(String::from_utf8_lossy(&status.stderr).into_owned());
    }
    let mut bytes = std::fs::read(out.join("regimes.csv")).map_err(|e| e.to_string())?;
    bytes.extend(std::fs::read(out.join("regimes-runs.csv")).map_err(|e| e.to_string())?);
    Ok(bytes)
}

fn criterion_7() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = dir.path().join("regimes.toml");
    std::fs::write(&config, include_str!("../configs/regimes.toml")).map_err(|e| e.to_string())?;
    let a = run_regimes(&config, &dir.path().join("a"), "1")?;
    let b = run_regimes(&config, &dir.path().join("b"), "4")?;
    check(a == b && !a.is_empty(), format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("eigen-residual", criterion_1),
        ("AR shift and width", criterion_2),
        ("MP exactness", criterion_3),
        ("fast internal measurement", criterion_4),
        ("external-time statistics", criterion_5),
        ("oracle agreement", criterion_6),
        ("determinism", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
