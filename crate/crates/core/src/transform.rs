//! Position ↔ momentum transform.
//!
//! Convention: `ψ̃(p) = (2π)^{-1/2} ∫ dq e^{+ipq} ψ(q)`, discretized on the
//! reciprocal lattice of the position grid. Under this sign a position-space
//! factor `e^{-iaq}` translates the momentum distribution by `+a`.
//!
//! Momentum fields are stored in ascending `p` order (`k = -n/2 .. n/2`).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::field::{ComplexField, Representation};

/// Fraction of the band (per side) treated as the Nyquist edge.
const EDGE_FRACTION: usize = 16;
pub const EDGE_MASS_LIMIT: f64 = 1e-9;

pub fn to_momentum(field: &ComplexField) -> Result<ComplexField> {
    field.require(Representation::Position)?;
    let grid = *field.grid();
    let n = grid.len();
    let pgrid = grid.reciprocal();

    let mut buf = field.amps().to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);

    let scale = grid.spacing() / (2.0 * PI).sqrt();
    let half = n / 2;
    let amps = (0..n)
        .map(|k| {
            let p = pgrid.point(k);
            let src = (k + half) % n;
            buf[src] * C64::from_polar(scale, p * grid.lo())
        })
        .collect();
    ComplexField::new(pgrid, amps, Representation::Momentum)
}

/// Inverse of [`to_momentum`]; `position` supplies the target grid.
pub fn to_position(field: &ComplexField, position: &crate::grid::Grid1D) -> Result<ComplexField> {
    field.require(Representation::Momentum)?;
    let n = position.len();
    if n != field.grid().len() || position.reciprocal() != *field.grid() {
        return Err(Error::GridMismatch);
    }
    let pgrid = *field.grid();
    let half = n / 2;
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for (k, a) in field.amps().iter().enumerate() {
        let p = pgrid.point(k);
        buf[(k + half) % n] = a * C64::from_polar(1.0, -p * position.lo());
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = pgrid.spacing() / (2.0 * PI).sqrt();
    buf.iter_mut().for_each(|a| *a *= scale);
    ComplexField::new(*position, buf, Representation::Position)
}

/// Probability mass in the outer `1/16` of the momentum band on each side.
pub fn edge_mass(momentum: &ComplexField) -> Result<f64> {
    momentum.require(Representation::Momentum)?;
    let n = momentum.grid().len();
    let w = (n / EDGE_FRACTION).max(1);
    let dp = momentum.grid().spacing();
    let probs = momentum.amps();
    let mass: f64 = probs[..w]
        .iter()
        .chain(&probs[n - w..])
        .map(|a| a.norm_sqr())
        .sum();
    Ok(mass * dp)
}

/// [`to_momentum`] followed by the band-limit check: content reaching the
/// Nyquist edge is reported as an error instead of being silently aliased.
pub fn to_momentum_checked(field: &ComplexField) -> Result<ComplexField> {
    let m = to_momentum(field)?;
    let edge = edge_mass(&m)?;
    if edge > EDGE_MASS_LIMIT {
        return Err(Error::NyquistExceeded(edge));
    }
    Ok(m)
}
