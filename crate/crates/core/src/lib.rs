//! Numerical models of an observer inside an isolated system measuring the
//! system's total energy with a von Neumann pointer driven by an internal
//! clock.
//!
//! Two exactly solvable models are provided: [`ar`] (pointer coupled to the
//! total energy through a symmetrized `g(x) H q` term; the pointer shift is
//! only linear in `E0` to first order) and [`mp`] (clock rate modulated by
//! the operator lapse `1/(1+q g(x))`; the pointer is translated exactly).
//! [`time`] relates internal and external durations, and [`oracle`] holds
//! the independent finite-difference and direct-quadrature checks.
//!
//! Units have `ħ = 1`. Widths follow the `Δ = √2 · std` convention, under
//! which a minimal Gaussian satisfies `Δq Δp = 1`.

pub mod ar;
pub mod coupling;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod measurement;
pub mod moments;
pub mod mp;
pub mod oracle;
pub mod pointer;
mod quad;
pub mod time;
pub mod transform;

pub use ar::{ARParams, ARPrecision};
pub use coupling::{CouplingProfile, ProfileShape};
pub use error::{Error, Result};
pub use field::{overlap, ComplexField, Representation};
pub use grid::Grid1D;
pub use measurement::{MeasurementRecord, Regime};
pub use moments::{moments, MomentStats};
pub use mp::MPParams;
pub use pointer::{make_gaussian, GaussianPointerSpec};
pub use time::{ClockModel, TExtStats, TimeMap};
pub use transform::{to_momentum, to_position};
