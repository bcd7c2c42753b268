use crate::expr::{EvalError, ParseError};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coefficient {
    A,
    B,
}

impl std::fmt::Display for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Coefficient::A => "A",
            Coefficient::B => "B",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("metric is not positive definite at {point:?}: {coefficient} = {value} (need A > 0 and B > 0)")]
    NotPositiveDefinite {
        coefficient: Coefficient,
        value: f64,
        point: [f64; 3],
    },
    #[error("vector {x:?} does not induce a Q-basis: need x3*((x1)^2 + (x2)^2) != 0")]
    DegenerateVector { x: [f64; 3] },
    #[error("Ricci curvature undefined: quadratic form vanishes on direction {v:?}")]
    NullDirection { v: [f64; 3] },
    #[error("sectional curvature undefined: 2-plane spanned by {x:?}, {y:?} is degenerate")]
    DegeneratePlane { x: [f64; 3], y: [f64; 3] },
    #[error("catenoid parameter u must be non-zero")]
    DegenerateParameter,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
