use thiserror::Error;

use crate::compactify::Chart;
use crate::model::Point2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParams {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("polynomial system has degree {0}, need at least 1")]
    DegreeTooLow(usize),

    #[error("point ({u}, {v}) is outside the domain of the transition {from:?} -> {to:?}")]
    ChartDomain { from: Chart, to: Chart, u: f64, v: f64 },

    #[error("blow-up requires a system in chart U2, got {0:?}")]
    WrongChart(Chart),

    #[error("equilibrium is not hyperbolic (eigenvalue real part {re:e} inside the zero band)")]
    NonHyperbolic { re: f64 },

    #[error("equilibrium is not semi-hyperbolic: {0}")]
    NotSemiHyperbolic(&'static str),

    #[error("second-order centre manifold term vanishes; higher order needed")]
    NeedsHigherOrder,

    #[error("Hopf analysis needs c > delta (got c = {c}, delta = {delta})")]
    HopfRequiresCGreaterDelta { c: f64, delta: f64 },

    #[error("eigenproblem residual {0:e} exceeds tolerance")]
    IllConditioned(f64),

    #[error("interior equilibrium P2 does not exist for these parameters")]
    NoInteriorEquilibrium,

    #[error("step size underflow at t = {t}, last state {state:?} in chart {chart:?}")]
    StepUnderflow { t: f64, chart: Chart, state: Point2 },

    #[error("orbit did not return to the section: {0}")]
    NoReturn(NoReturnReason),

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("invalid grid specification: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Why a return-map evaluation produced no crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoReturnReason {
    ConvergedToPoint,
    Escaped,
    MaxTime,
    LeftAffineChart,
}

impl std::fmt::Display for NoReturnReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NoReturnReason::ConvergedToPoint => "orbit converged to an equilibrium",
            NoReturnReason::Escaped => "orbit escaped towards infinity",
            NoReturnReason::MaxTime => "maximum integration time reached",
            NoReturnReason::LeftAffineChart => "orbit left the affine chart",
        };
        f.write_str(s)
    }
}
