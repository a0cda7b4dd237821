//! Symbolic layer: soficity, the automaton of admissible words and the exact
//! tiling decision through the difference transducer.

mod automaton;
pub mod charpoly;
mod transducer;

use thiserror::Error;

use crate::betamap::{BetaTransform, Expansion, TransformError};
use crate::numfield::QBeta;
use crate::tiling::TilingError;

pub use automaton::{build_automaton, cylinder, ShiftAutomaton};
pub use transducer::{
    build_transducer, decide_tiling, difference_candidates, DiffState, DiffTransducer, EigenMethod, SccReport,
    TilingDecision, Verdict,
};

#[derive(Debug, Error)]
pub enum SoficError {
    #[error("not sofic: {0}")]
    NotSofic(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// Expansion of an interval endpoint: b(ℓ_a) for a lower end, b̃(r_a) for an upper one.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointExpansion {
    pub digit: usize,
    pub point: QBeta,
    pub upper: bool,
    pub expansion: Expansion,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Soficity {
    Sofic(Vec<EndpointExpansion>),
    /// an endpoint whose orbit did not close within the budget
    NotSofic { witness: QBeta, upper: bool },
}

impl Soficity {
    pub fn is_sofic(&self) -> bool {
        matches!(self, Soficity::Sofic(_))
    }
}

/// The shift is sofic iff every b(ℓ_a) and b̃(r_a) is eventually periodic.
/// Orbits longer than `budget` count as not periodic.
pub fn soficity_check(t: &BetaTransform, budget: usize) -> Result<Soficity, SoficError> {
    let lower = t.right();
    let upper = lower.twin();
    let mut out = Vec::new();
    for (iv, a) in t.pieces() {
        for (is_upper, map, x) in [(false, &lower, &iv.lo), (true, &upper, &iv.hi)] {
            match map.expand(x, budget) {
                Ok(expansion) => out.push(EndpointExpansion { digit: *a, point: x.clone(), upper: is_upper, expansion }),
                Err(TransformError::BudgetExceeded(_)) => {
                    return Ok(Soficity::NotSofic { witness: x.clone(), upper: is_upper })
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(Soficity::Sofic(out))
}
