//! Ground truth: UCQ evaluation, repair enumeration (including the
//! representative database `D*`) and consistent answers by intersection.

mod answers;
mod eval;
mod repairs;
mod rets;

use thiserror::Error;

use crate::model::Semantics;

pub use answers::{consistent_answers, oracle_route, CqaAnswers, Route};
pub use eval::{eval_ucq, symmetric_difference};
pub use repairs::{
    enumerate_repairs_cm, enumerate_repairs_ls_le, enumerate_repairs_ls_le_limited, RepairSet, SearchSpace,
    DEFAULT_NODE_LIMIT,
};
pub use rets::{build_rets, rets_size_check, RetsDatabase, RetsSize};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0}")]
    Unsupported(String),
    #[error("the representative database needs keys and safe foreign superkeys only: {0}")]
    NotKdSfsk(String),
    #[error("{0} answers are defined here only for queries without comparison atoms")]
    ComparisonAtoms(Semantics),
    #[error("outside the oracle's scope: {0}")]
    OutOfScope(String),
    #[error("repair search exceeded {0} states")]
    SearchLimit(usize),
}
