use serde::{Deserialize, Serialize};

/// Precision regime of the second-order Aharonov–Reznik measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `|E0 − E*| < 1/(2Lg²σ²)`: precision close to `1/(Lgσ)`.
    NearSaturating,
    /// Dispersion of the pointer dominates the precision.
    Dispersive,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::NearSaturating => "near-saturating",
            Regime::Dispersive => "dispersive",
        })
    }
}

/// Outcome of one pointer measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    /// Momentum mean after minus momentum mean before.
    pub shift: f64,
    /// Pointer momentum width after the measurement (√2 · std).
    pub dp: f64,
    /// Inferred energy precision `dp / ∫g`.
    pub de0: f64,
    /// Internal duration of the measurement, `L`.
    pub t_int: f64,
    /// `∫ g(x) dx` over the window (`L g` for a rectangular profile).
    pub coupling: f64,
    pub regime: Option<Regime>,
}

impl MeasurementRecord {
    /// Record from the pointer state before and after the window, both in
    /// position representation on the same grid.
    pub fn from_fields(
        before: &crate::field::ComplexField,
        after: &crate::field::ComplexField,
        coupling: f64,
        t_int: f64,
        regime: Option<Regime>,
    ) -> crate::error::Result<Self> {
        use crate::moments::moments;
        use crate::transform::to_momentum_checked;
        if !(coupling > 0.0) {
            return Err(crate::error::Error::InvalidParams(
                "measurement needs a nonzero coupling".into(),
            ));
        }
        let b = moments(&to_momentum_checked(before)?)?;
        let a = moments(&to_momentum_checked(after)?)?;
        Ok(Self {
            shift: a.mean - b.mean,
            dp: a.width,
            de0: a.width / coupling,
            t_int,
            coupling,
            regime,
        })
    }
}
