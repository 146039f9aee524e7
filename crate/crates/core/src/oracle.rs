//! Independent numerical checks: a fixed fourth-order finite-difference
//! derivative, a direct O(n²) Fourier sum, and grid-refinement studies of the
//! eigen-equation residual `‖Hψ − E0ψ‖ / ‖ψ‖`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::ar::{self, ARParams};
use crate::error::{Error, Result};
use crate::field::{ComplexField, Representation};
use crate::grid::Grid1D;
use crate::mp::{self, MPParams, Ordering};

/// Residuals below this are treated as round-off and excluded from order fits.
pub const ROUNDOFF_FLOOR: f64 = 1e-11;
/// Largest phase advance per grid step accepted by the stencil.
pub const MAX_PHASE_STEP: f64 = 1.0;

/// Fourth-order first derivative. Interior points use the five-point central
/// stencil; the two points at each end use the five-point one-sided stencils
/// of the same order, so no periodicity is assumed.
pub fn fd4_derivative(f: &[C64], h: f64) -> Vec<C64> {
    let n = f.len();
    assert!(n >= 5, "stencil needs at least five points");
    let c = 1.0 / (12.0 * h);
    let mut d = vec![C64::new(0.0, 0.0); n];
    for j in 2..n - 2 {
        d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) * c;
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
        + 3.0 * f[n - 5])
        * c;
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4]
        - f[n - 5])
        * c;
    d
}

/// Largest phase jump between neighbouring samples.
pub fn max_phase_step(f: &[C64]) -> f64 {
    f.windows(2)
        .filter(|w| w[0].norm_sqr() > 0.0 && w[1].norm_sqr() > 0.0)
        .map(|w| (w[1] * w[0].conj()).arg().abs())
        .fold(0.0, f64::max)
}

/// `−i ∂x` applied with [`fd4_derivative`], after checking the sampling.
pub(crate) fn clock_momentum(field: &ComplexField) -> Result<Vec<C64>> {
    field.require(Representation::Position)?;
    let step = max_phase_step(field.amps());
    if step > MAX_PHASE_STEP {
        return Err(Error::GridTooCoarse(step));
    }
    let minus_i = C64::new(0.0, -1.0);
    Ok(fd4_derivative(field.amps(), field.grid().spacing())
        .into_iter()
        .map(|d| minus_i * d)
        .collect())
}

/// Direct discretization of `(2π)^{-1/2} ∫ dq e^{+ipq} ψ(q)` on the same
/// reciprocal lattice as [`crate::transform::to_momentum`].
pub fn quadrature_transform(field: &ComplexField) -> Result<ComplexField> {
    field.require(Representation::Position)?;
    let grid = field.grid();
    let pgrid = grid.reciprocal();
    let scale = grid.spacing() / (2.0 * std::f64::consts::PI).sqrt();
    let qs: Vec<f64> = grid.points().collect();
    let amps = pgrid
        .points()
        .map(|p| {
            let s: C64 = qs
                .iter()
                .zip(field.amps())
                .map(|(&q, a)| a * C64::from_polar(1.0, p * q))
                .sum();
            s * scale
        })
        .collect();
    ComplexField::new(pgrid, amps, Representation::Momentum)
}

/// Which closed-form amplitude a residual is evaluated for.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    ArExact(&'a ARParams),
    ArSecondOrder(&'a ARParams),
    MpExact(&'a MPParams),
    /// Exact MP amplitude with the unsymmetrized `f(x) H_c` ordering.
    MpUnsymmetrized(&'a MPParams),
}

impl Target<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            Target::ArExact(_) => "ar-exact",
            Target::ArSecondOrder(_) => "ar-second-order",
            Target::MpExact(_) => "mp-exact",
            Target::MpUnsymmetrized(_) => "mp-unsymmetrized",
        }
    }

    fn profile(&self) -> &crate::coupling::CouplingProfile {
        match self {
            Target::ArExact(p) | Target::ArSecondOrder(p) => &p.profile,
            Target::MpExact(p) | Target::MpUnsymmetrized(p) => &p.profile,
        }
    }

    fn e_total(&self) -> f64 {
        match self {
            Target::ArExact(p) | Target::ArSecondOrder(p) => p.e_total,
            Target::MpExact(p) | Target::MpUnsymmetrized(p) => p.e_total,
        }
    }

    fn sample(&self, grid: &Grid1D, q: f64) -> Result<ComplexField> {
        let amps = grid
            .points()
            .map(|x| match self {
                Target::ArExact(p) => ar::ar_exact_amplitude(p, x, q),
                Target::ArSecondOrder(p) => ar::ar_second_order_amplitude(p, x, q),
                Target::MpExact(p) | Target::MpUnsymmetrized(p) => mp::mp_exact_amplitude(p, x, q),
            })
            .collect::<Result<Vec<_>>>()?;
        ComplexField::new(*grid, amps, Representation::Position)
    }

    fn apply(&self, field: &ComplexField, q: f64) -> Result<ComplexField> {
        match self {
            Target::ArExact(p) | Target::ArSecondOrder(p) => ar::ar_apply_hamiltonian(p, field, q),
            Target::MpExact(p) => mp::mp_apply_hamiltonian(p, field, q, Ordering::Symmetrized),
            Target::MpUnsymmetrized(p) => mp::mp_apply_hamiltonian(p, field, q, Ordering::LeftOnly),
        }
    }
}

/// x grid padded by `L/2` of uncoupled clock on each side of the window.
pub fn padded_x_grid(profile: &crate::coupling::CouplingProfile, n: usize) -> Result<Grid1D> {
    let pad = 0.5 * profile.length();
    Grid1D::new(profile.x_i() - pad, profile.x_f() + pad, n)
}

pub fn residual_norm(target: Target<'_>, x_grid: &Grid1D, q: f64) -> Result<f64> {
    let profile = target.profile();
    let h = x_grid.spacing();
    if x_grid.lo() > profile.x_i() - 2.0 * h || x_grid.last() < profile.x_f() + 2.0 * h {
        return Err(Error::InsufficientPadding);
    }
    let psi = target.sample(x_grid, q)?;
    let h_psi = target.apply(&psi, q)?;
    let e0 = target.e_total();
    let (num, den) = psi
        .amps()
        .iter()
        .zip(h_psi.amps())
        .fold((0.0, 0.0), |(n, d), (a, ha)| {
            (n + (ha - e0 * a).norm_sqr(), d + a.norm_sqr())
        });
    Ok((num / den).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub resolutions: Vec<usize>,
    pub residuals: Vec<f64>,
    pub fitted_order: f64,
}

/// Least-squares slope of `-log r` against `log n` over the points above the
/// round-off floor; zero when fewer than two such points exist.
pub fn fitted_order(resolutions: &[usize], residuals: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = resolutions
        .iter()
        .zip(residuals)
        .filter(|(_, &r)| r > ROUNDOFF_FLOOR)
        .map(|(&n, &r)| ((n as f64).ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    -sxy / sxx
}

pub fn convergence_study(target: Target<'_>, resolutions: &[usize], q: f64) -> Result<ConvergenceReport> {
    if resolutions.len() < 3 || resolutions.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::TooFewResolutions);
    }
    let residuals = resolutions
        .iter()
        .map(|&n| residual_norm(target, &padded_x_grid(target.profile(), n)?, q))
        .collect::<Result<Vec<_>>>()?;
    let fitted_order = fitted_order(resolutions, &residuals);
    Ok(ConvergenceReport {
        resolutions: resolutions.to_vec(),
        residuals,
        fitted_order,
    })
}
