//! The Aharonov–Reznik clock model,
//! `H = H_c + H_box + (½ g H_c + ½ H_c g + g H_box) q`, `H_c = −i∂x`.
//!
//! Energy eigenstates with pointer eigenvalue `q` are
//! `ψ = (1+g(x)q)^{-1/2} e^{−iE_box x} e^{iE0 ∫ dx'/(1+g(x')q)}`; after the
//! window the pointer carries the phase `E0 ∫ [1/(1+gq) − 1]`, which to
//! second order is `−E0 q ∫g + E0 q² ∫g²`.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::CouplingProfile;
use crate::error::{Error, Result};
use crate::field::{ComplexField, Representation};
use crate::grid::Grid1D;
use crate::measurement::{MeasurementRecord, Regime};
use crate::oracle::clock_momentum;
use crate::pointer::{make_gaussian, max_phase_slope, pointer_grid, GaussianPointerSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ARParams {
    pub e_total: f64,
    pub e_box: f64,
    pub profile: CouplingProfile,
    pub pointer: GaussianPointerSpec,
}

impl ARParams {
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
        Ok(Self {
            e_total,
            e_box,
            profile,
            pointer,
        })
    }

    /// `g σ < 1`, the regime where expanding the phase in `g q` makes sense.
    pub fn expansion_valid(&self) -> bool {
        self.profile.plateau() * self.pointer.sigma < 1.0
    }

    pub fn with_energy(mut self, e_total: f64) -> Self {
        self.e_total = e_total;
        self
    }
}

fn amplitude(params: &ARParams, origin: f64, x: f64, q: f64, clock_phase: f64) -> C64 {
    let h = 1.0 + params.profile.eval(x) * q;
    let phase = -params.e_box * x + params.e_total * ((x - origin) + clock_phase);
    C64::from_polar(h.powf(-0.5), phase)
}

pub fn ar_exact_amplitude(params: &ARParams, x: f64, q: f64) -> Result<C64> {
    ar_exact_amplitude_from(params, params.profile.x_i(), x, q)
}

/// Exact amplitude with the energy phase integrated from `origin ≤ x_i`.
pub fn ar_exact_amplitude_from(params: &ARParams, origin: f64, x: f64, q: f64) -> Result<C64> {
    if origin > params.profile.x_i() {
        return Err(Error::InvalidParams(format!(
            "phase origin {origin} lies inside the coupling window"
        )));
    }
    let lag = params.profile.integral_reciprocal_excess(q, x)?;
    Ok(amplitude(params, origin, x, q, lag))
}

pub fn ar_second_order_amplitude(params: &ARParams, x: f64, q: f64) -> Result<C64> {
    params.profile.check_regular(q, x)?;
    let i1 = params.profile.integral_power(1, x)?;
    let i2 = params.profile.integral_power(2, x)?;
    Ok(amplitude(params, params.profile.x_i(), x, q, -q * i1 + q * q * i2))
}

/// Pointer phase picked up across the whole window, second-order expansion.
pub fn second_order_pointer_phase(params: &ARParams, q: f64) -> Result<f64> {
    let i1 = params.profile.total_power(1)?;
    let i2 = params.profile.total_power(2)?;
    Ok(params.e_total * (-q * i1 + q * q * i2))
}

/// Pointer phase picked up across the whole window, exact.
pub fn exact_pointer_phase(params: &ARParams, q: f64) -> Result<f64> {
    Ok(params.e_total * params.profile.integral_reciprocal_excess(q, params.profile.x_f())?)
}

fn pointer_field(
    params: &ARParams,
    qgrid: &Grid1D,
    phase: impl Fn(f64) -> Result<f64> + Sync,
) -> Result<ComplexField> {
    let initial = make_gaussian(&params.pointer, qgrid)?;
    let qs: Vec<f64> = qgrid.points().collect();
    let amps = qs
        .par_iter()
        .zip(initial.amps())
        .map(|(&q, &a)| {
            if a.norm_sqr() == 0.0 {
                Ok(a)
            } else {
                Ok(a * C64::from_polar(1.0, phase(q)?))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ComplexField::new(*qgrid, amps, Representation::Position)
}

/// Pointer state after the window with the second-order phase
/// `e^{−iE0 q ∫g + iE0 q² ∫g²}`; the common factor `e^{i(E0−E_box)x}` is
/// dropped.
pub fn ar_post_measurement_field(params: &ARParams, qgrid: &Grid1D) -> Result<ComplexField> {
    pointer_field(params, qgrid, |q| second_order_pointer_phase(params, q))
}

/// As [`ar_post_measurement_field`] but with the exact phase, integrated
/// per grid point.
pub fn ar_post_measurement_field_exact(params: &ARParams, qgrid: &Grid1D) -> Result<ComplexField> {
    pointer_field(params, qgrid, |q| exact_pointer_phase(params, q))
}

/// Pointer grid resolving the post-measurement phase of `params`.
pub fn ar_auto_grid(params: &ARParams, use_exact: bool, min_points: usize) -> Result<Grid1D> {
    params.pointer.validate()?;
    let (lo, hi) = params.pointer.required_range();
    let chirp = params.pointer.chirp;
    let center = params.pointer.center;
    let slope = if use_exact {
        let lo_s = params.pointer.truncate_below.map_or(lo, |c| c.max(lo));
        // the exact phase diverges at 1 + gq = 0; stop the slope scan at
        // the support edge
        params.profile.check_regular(lo_s, params.profile.x_f())?;
        max_phase_slope(
            |q| exact_pointer_phase(params, q).unwrap_or(0.0) - chirp * (q - center).powi(2),
            lo_s,
            hi,
        )
    } else {
        max_phase_slope(
            |q| second_order_pointer_phase(params, q).unwrap_or(0.0) - chirp * (q - center).powi(2),
            lo,
            hi,
        )
    };
    pointer_grid(&params.pointer, slope, min_points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ARPrecision {
    /// Predicted pointer momentum width.
    pub dp: f64,
    /// Predicted energy precision `dp / ∫g`.
    pub de0: f64,
    /// Half-width of the near-saturating band, `1/(2 ∫g² σ²)`.
    pub crossover: f64,
    /// Energy of best resolution, `χ/∫g²` (zero for an unchirped pointer).
    pub band_center: f64,
    /// `T · ΔE0` with `T = L`.
    pub product: f64,
}

pub fn ar_predicted_precision(params: &ARParams) -> Result<ARPrecision> {
    let g1 = params.profile.total_power(1)?;
    let g2 = params.profile.total_power(2)?;
    let sigma = params.pointer.sigma;
    if !(g1 > 0.0 && sigma > 0.0) {
        return Err(Error::InvalidParams("coupling and sigma must be positive".into()));
    }
    let beta = g2 * params.e_total - params.pointer.chirp;
    let dp = (1.0 + 4.0 * beta * beta * sigma.powi(4)).sqrt() / sigma;
    let de0 = dp / g1;
    Ok(ARPrecision {
        dp,
        de0,
        crossover: 1.0 / (2.0 * g2 * sigma * sigma),
        band_center: params.pointer.chirp / g2,
        product: params.profile.length() * de0,
    })
}

/// Ties at the band edge count as dispersive.
pub fn ar_classify_regime(params: &ARParams) -> Regime {
    let g2 = params.profile.total_power(2).unwrap_or(0.0);
    let sigma = params.pointer.sigma;
    if g2 <= 0.0 {
        return Regime::NearSaturating;
    }
    let crossover = 1.0 / (2.0 * g2 * sigma * sigma);
    let center = params.pointer.chirp / g2;
    if (params.e_total - center).abs() < crossover {
        Regime::NearSaturating
    } else {
        Regime::Dispersive
    }
}

pub fn ar_pointer_distribution(
    params: &ARParams,
    qgrid: &Grid1D,
    use_exact: bool,
) -> Result<MeasurementRecord> {
    let before = make_gaussian(&params.pointer, qgrid)?;
    let after = if use_exact {
        ar_post_measurement_field_exact(params, qgrid)?
    } else {
        ar_post_measurement_field(params, qgrid)?
    };
    MeasurementRecord::from_fields(
        &before,
        &after,
        params.profile.total_power(1)?,
        params.profile.length(),
        Some(ar_classify_regime(params)),
    )
}

/// `(Hψ)(x)` for a pointer eigenvalue `q`, `H_box → E_box`, with the
/// symmetrized coupling `½(h H_c + H_c h)`, `h = 1 + g(x) q`.
pub fn ar_apply_hamiltonian(params: &ARParams, field_x: &ComplexField, q: f64) -> Result<ComplexField> {
    let grid = *field_x.grid();
    let h: Vec<f64> = grid.points().map(|x| 1.0 + params.profile.eval(x) * q).collect();
    let p_psi = clock_momentum(field_x)?;
    let h_psi = ComplexField::new(
        grid,
        field_x.amps().iter().zip(&h).map(|(a, hx)| a * hx).collect(),
        Representation::Position,
    )?;
    let p_h_psi = clock_momentum(&h_psi)?;
    let out = field_x
        .amps()
        .iter()
        .enumerate()
        .map(|(j, a)| params.e_box * h[j] * a + 0.5 * (h[j] * p_psi[j] + p_h_psi[j]))
        .collect();
    ComplexField::new(grid, out, Representation::Position)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(e0: f64, g: f64, sigma: f64) -> ARParams {
        ARParams::new(
            e0,
            0.7,
            CouplingProfile::rectangular(0.0, 1.0, g).unwrap(),
            GaussianPointerSpec::new(0.0, sigma),
        )
        .unwrap()
    }

    #[test]
    fn decoupled_amplitude_is_free_phase() {
        let p = ARParams {
            profile: CouplingProfile::rectangular(0.0, 1.0, 0.0).unwrap(),
            ..params(3.0, 0.1, 1.0)
        };
        for &x in &[-1.0, 0.3, 2.5] {
            let a = ar_exact_amplitude(&p, x, 0.8).unwrap();
            let free = C64::from_polar(1.0, (3.0 - 0.7) * x);
            assert!((a - free).norm() < 1e-14);
            assert_eq!(a, ar_second_order_amplitude(&p, x, 0.8).unwrap());
        }
    }

    #[test]
    fn exact_phase_after_window_closed_form() {
        let p = params(2.0, 0.4, 1.0);
        let (x, q) = (1.6, 1.5);
        let a = ar_exact_amplitude(&p, x, q).unwrap();
        let phase = -0.7 * x + 2.0 * (x - 1.0 + 1.0 / (1.0 + 0.4 * q));
        assert!((a - C64::from_polar(1.0, phase)).norm() < 1e-14);
    }

    #[test]
    fn modulus_is_inverse_lapse() {
        let p = params(2.0, 0.4, 1.0);
        for &(x, q) in &[(0.5, 1.0), (0.2, -1.5), (3.0, 2.0)] {
            let a = ar_exact_amplitude(&p, x, q).unwrap();
            let g = p.profile.eval(x);
            assert!((a.norm_sqr() - 1.0 / (1.0 + g * q)).abs() < 1e-14);
        }
        assert!(matches!(
            ar_exact_amplitude(&p, 0.5, -3.0),
            Err(Error::SingularCoupling { .. })
        ));
    }

    #[test]
    fn q_zero_decouples() {
        let p = params(2.0, 0.4, 1.0);
        let a = ar_exact_amplitude(&p, 0.6, 0.0).unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-15);
        assert!((a - C64::from_polar(1.0, (2.0 - 0.7) * 0.6)).norm() < 1e-14);
    }

    #[test]
    fn second_order_error_is_third_order() {
        // phase difference after the window ≈ E0 L (gq)³ for small gq
        let p = params(5.0, 0.1, 1.0);
        let q = 0.1;
        let exact = exact_pointer_phase(&p, q).unwrap();
        let approx = second_order_pointer_phase(&p, q).unwrap();
        let gq: f64 = 0.01;
        let expected = 5.0 * gq.powi(3);
        assert!(((approx - exact) - expected).abs() < 0.02 * expected);
        // at gq = 0.5 the neglected term is no longer small
        let q = 5.0;
        let diff = second_order_pointer_phase(&p, q).unwrap() - exact_pointer_phase(&p, q).unwrap();
        assert!(diff.abs() > 0.2);
    }

    #[test]
    fn predicted_precision_values() {
        let pr = ar_predicted_precision(&params(0.0, 0.1, 1.0)).unwrap();
        assert!((pr.de0 - 10.0).abs() < 1e-12);
        assert!((pr.product - 10.0).abs() < 1e-12);
        assert!((pr.crossover - 50.0).abs() < 1e-9);
        let at_cross = ar_predicted_precision(&params(50.0, 0.1, 1.0)).unwrap();
        assert!((at_cross.de0 - 10.0 * 2f64.sqrt()).abs() < 1e-9);
        let far = ar_predicted_precision(&params(500.0, 0.1, 1.0)).unwrap();
        assert!((far.de0 - 10.0 * 101f64.sqrt()).abs() < 1e-9);
        let bad = ARParams {
            profile: CouplingProfile::rectangular(0.0, 1.0, 0.0).unwrap(),
            ..params(1.0, 0.1, 1.0)
        };
        assert!(ar_predicted_precision(&bad).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(ar_classify_regime(&params(0.0, 0.1, 1.0)), Regime::NearSaturating);
        assert_eq!(ar_classify_regime(&params(-49.0, 0.1, 1.0)), Regime::NearSaturating);
        assert_eq!(ar_classify_regime(&params(500.0, 0.1, 1.0)), Regime::Dispersive);
        assert_eq!(ar_classify_regime(&params(50.0, 0.1, 1.0)), Regime::Dispersive);
    }

    #[test]
    fn zero_energy_leaves_pointer_untouched() {
        let p = params(0.0, 0.1, 1.0);
        let grid = Grid1D::new(-8.0, 8.0, 256).unwrap();
        let post = ar_post_measurement_field(&p, &grid).unwrap();
        assert_eq!(post, make_gaussian(&p.pointer, &grid).unwrap());
        let rec = ar_pointer_distribution(&p, &grid, false).unwrap();
        assert!(rec.shift.abs() < 1e-12);
        assert!((rec.dp - 1.0).abs() < 1e-10);
    }

    #[test]
    fn first_order_term_is_a_tilt() {
        // with ∫g² negligible the pointer only acquires e^{-iE0Lgq}
        let p = params(10.0, 1e-4, 1.0);
        let grid = Grid1D::new(-8.0, 8.0, 256).unwrap();
        let post = ar_post_measurement_field(&p, &grid).unwrap();
        let tilted = make_gaussian(&p.pointer.with_tilt(10.0 * 1e-4), &grid).unwrap();
        for (a, b) in post.amps().iter().zip(tilted.amps()) {
            assert!((a - b).norm() < 1e-6);
        }
    }
}
