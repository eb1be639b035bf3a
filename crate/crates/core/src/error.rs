use std::io;

use thiserror::Error;

/// Errors raised by the model, solvers, simulator and exporters.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("conditioning on an outcome with zero probability")]
    ZeroProbabilityOutcome,

    #[error("bet would leave zero wealth (full stake lost on an uncertain outcome)")]
    BankruptWealth,

    #[error("separation angle {delta} rad is degenerate for the closed form")]
    DegenerateDelta { delta: f64 },

    #[error("information-gain formula undefined: denominator vanishes at xi={xi}, delta={delta}")]
    UndefinedFormula { xi: f64, delta: f64 },

    #[error("prior {xi} is certain; no informative measurement exists")]
    DegeneratePrior { xi: f64 },

    #[error(
        "grid too coarse: value at step {step}, xi={xi} drops below the next step by {violation:e}"
    )]
    GridTooCoarse { step: usize, xi: f64, violation: f64 },

    #[error("wealth {wealth} outside the grid range [{min}, {max}]")]
    OutOfRangeWealth { wealth: f64, min: f64, max: f64 },

    #[error("instance too large: N={n_steps} exceeds the limit {limit}")]
    InstanceTooLarge { n_steps: usize, limit: usize },

    #[error("optimal policy requested without a solved value stack for these parameters")]
    UnsolvablePolicy,

    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),

    #[error("csv failure: {0}")]
    Csv(#[from] csv::Error),

    #[error("json failure: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed data: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
