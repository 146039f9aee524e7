use thiserror::Error;

use crate::field::Representation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid pointer state: {0}")]
    InvalidPointer(String),
    #[error("invalid coupling profile: {0}")]
    InvalidProfile(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("grid [{lo}, {hi}] does not cover required range [{need_lo}, {need_hi}]")]
    DomainTooSmall {
        lo: f64,
        hi: f64,
        need_lo: f64,
        need_hi: f64,
    },
    #[error("truncation cut {cut} lies {margin_sigmas:.3} widths from the centre (need at least 5)")]
    TruncationMassTooLarge { cut: f64, margin_sigmas: f64 },
    #[error("expected a field in {expected:?} representation, got {got:?}")]
    WrongRepresentation {
        expected: Representation,
        got: Representation,
    },
    #[error("field is not normalized (norm {0})")]
    Unnormalized(f64),
    #[error("fields live on different grids or representations")]
    GridMismatch,
    #[error("momentum content reaches the Nyquist band edge (edge mass {0:e})")]
    NyquistExceeded(f64),
    #[error("coupling makes 1 + g(x) q nonpositive at q = {q}")]
    SingularCoupling { q: f64 },
    #[error("pointer coordinate q = {0} lies outside the support q > 0")]
    OutsideSupport(f64),
    #[error("unsupported coupling power {0} (expected 1, 2 or 3)")]
    UnsupportedPower(u32),
    #[error("grid too coarse: phase advances {0:.3} rad per step")]
    GridTooCoarse(f64),
    #[error("x grid must leave at least two uncoupled points at each end")]
    InsufficientPadding,
    #[error("convergence study needs at least three doubling resolutions")]
    TooFewResolutions,
    #[error("record does not belong to these parameters: {0}")]
    MismatchedParams(String),
    #[error("empty input")]
    EmptyInput,
    #[error("numerical inconsistency: {0}")]
    Numerical(String),
    #[error("malformed field record: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
