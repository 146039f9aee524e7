//! The lapse-operator clock model,
//! `H = H_box/(1+qg(x)) + ½(H_c/(1+qg(x)) + (1/(1+qg(x))) H_c)`.
//!
//! Eigenstates are `ψ = √(1+g(x)q) e^{−iE_box x} e^{iE0 ∫(1+g(x')q)dx'}`.
//! After the window the pointer carries `e^{iE0 q ∫g}` exactly, so its
//! momentum distribution is rigidly translated by `−E0 ∫g`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coupling::CouplingProfile;
use crate::error::{Error, Result};
use crate::field::{ComplexField, Representation};
use crate::grid::Grid1D;
use crate::measurement::MeasurementRecord;
use crate::oracle::clock_momentum;
use crate::pointer::{make_gaussian, pointer_grid, GaussianPointerSpec, CUT_MARGIN_SIGMAS};

/// Relative tolerance on the measured shift against `−E0 ∫g`.
pub const SHIFT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MPParams {
    pub e_total: f64,
    pub e_box: f64,
    pub profile: CouplingProfile,
    pub pointer: GaussianPointerSpec,
}

impl MPParams {
    /// Validates the support rule: the pointer is cut at `q = 0` and centred
    /// at least five widths above it, so `1 + q g(x) ≥ 1` on the support.
    pub fn new(
        e_total: f64,
        e_box: f64,
        profile: CouplingProfile,
        pointer: GaussianPointerSpec,
    ) -> Result<Self> {
        if !(e_total.is_finite() && e_box.is_finite()) {
            return Err(Error::InvalidParams("non-finite energy".into()));
        }
        pointer.validate()?;
        if pointer.truncate_below != Some(0.0) {
            return Err(Error::InvalidParams(
                "pointer must be truncated at q = 0".into(),
            ));
        }
        if pointer.center < CUT_MARGIN_SIGMAS * pointer.sigma {
            return Err(Error::InvalidParams(format!(
                "pointer centre {} is closer than 5 widths to q = 0",
                pointer.center
            )));
        }
        Ok(Self {
            e_total,
            e_box,
            profile,
            pointer,
        })
    }

    /// Pointer spec centred at `center` with width `sigma`, cut at zero.
    pub fn pointer_for(center: f64, sigma: f64) -> GaussianPointerSpec {
        GaussianPointerSpec::new(center, sigma).truncated(0.0)
    }

    pub fn with_energy(mut self, e_total: f64) -> Self {
        self.e_total = e_total;
        self
    }
}

pub fn mp_exact_amplitude(params: &MPParams, x: f64, q: f64) -> Result<C64> {
    mp_exact_amplitude_from(params, params.profile.x_i(), x, q)
}

/// Exact amplitude with the energy phase integrated from `origin ≤ x_i`.
pub fn mp_exact_amplitude_from(params: &MPParams, origin: f64, x: f64, q: f64) -> Result<C64> {
    if q < 0.0 {
        return Err(Error::OutsideSupport(q));
    }
    if origin > params.profile.x_i() {
        return Err(Error::InvalidParams(format!(
            "phase origin {origin} lies inside the coupling window"
        )));
    }
    let lapse = 1.0 + params.profile.eval(x) * q;
    let t_ext = (x - origin) + q * params.profile.integral_power(1, x)?;
    Ok(C64::from_polar(
        lapse.sqrt(),
        -params.e_box * x + params.e_total * t_ext,
    ))
}

/// Pointer state after the window: the initial state times `e^{iE0 q ∫g}`.
pub fn mp_post_measurement_field(params: &MPParams, qgrid: &Grid1D) -> Result<ComplexField> {
    let kick = params.e_total * params.profile.total_power(1)?;
    Ok(make_gaussian(&params.pointer, qgrid)?.map_with(|q, a| a * C64::from_polar(1.0, kick * q)))
}

pub fn mp_auto_grid(params: &MPParams, min_points: usize) -> Result<Grid1D> {
    let kick = params.e_total * params.profile.total_power(1)?;
    let chirp_slope = 2.0 * params.pointer.chirp.abs() * 8.0 * params.pointer.sigma;
    pointer_grid(&params.pointer, kick.abs() + chirp_slope, min_points)
}

pub fn mp_measure(params: &MPParams, qgrid: &Grid1D) -> Result<MeasurementRecord> {
    let before = make_gaussian(&params.pointer, qgrid)?;
    let after = mp_post_measurement_field(params, qgrid)?;
    let rec = MeasurementRecord::from_fields(
        &before,
        &after,
        params.profile.total_power(1)?,
        params.profile.length(),
        None,
    )?;
    let expected = -params.e_total * rec.coupling;
    if (rec.shift - expected).abs() > SHIFT_TOLERANCE * expected.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "pointer shift {} differs from {expected}",
            rec.shift
        )));
    }
    Ok(rec)
}

/// Operator ordering of the clock term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ordering {
    /// `½(f H_c + H_c f)`, the Hermitian form.
    Symmetrized,
    /// `f H_c` alone; not Hermitian, kept as a regression reference.
    LeftOnly,
}

/// `(Hψ)(x)` for a pointer eigenvalue `q > 0` with `H_box → E_box` and
/// `f = 1/(1 + q g(x))`.
pub fn mp_apply_hamiltonian(
    params: &MPParams,
    field_x: &ComplexField,
    q: f64,
    ordering: Ordering,
) -> Result<ComplexField> {
    if q < 0.0 {
        return Err(Error::OutsideSupport(q));
    }
    let grid = *field_x.grid();
    let f: Vec<f64> = grid
        .points()
        .map(|x| 1.0 / (1.0 + params.profile.eval(x) * q))
        .collect();
    let p_psi = clock_momentum(field_x)?;
    let clock: Vec<C64> = match ordering {
        Ordering::Symmetrized => {
            let f_psi = ComplexField::new(
                grid,
                field_x.amps().iter().zip(&f).map(|(a, fx)| a * fx).collect(),
                Representation::Position,
            )?;
            let p_f_psi = clock_momentum(&f_psi)?;
            (0..grid.len())
                .map(|j| 0.5 * (f[j] * p_psi[j] + p_f_psi[j]))
                .collect()
        }
        Ordering::LeftOnly => (0..grid.len()).map(|j| f[j] * p_psi[j]).collect(),
    };
    let out = field_x
        .amps()
        .iter()
        .zip(&f)
        .zip(clock)
        .map(|((a, fx), c)| params.e_box * fx * a + c)
        .collect();
    ComplexField::new(grid, out, Representation::Position)
}
