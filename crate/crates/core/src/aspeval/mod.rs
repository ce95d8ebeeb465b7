//! Grounding and answer-set evaluation of generated programs, and cautious
//! reasoning over the query predicate.

mod exhaustive;
mod ground;
mod solve;

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use thiserror::Error;

pub use exhaustive::{answer_sets_exhaustive, EXHAUSTIVE_LIMIT};
pub use ground::{ground, AtomId, GroundCount, GroundProgram, GroundRule};

use crate::model::{Database, Fact};
use crate::oracle::CqaAnswers;
use crate::program::{AspProgram, QueryPred};

pub const DEFAULT_GROUND_CAP: usize = 5000;
pub const GROUND_CAP_VAR: &str = "CQA_GROUND_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AspError {
    #[error("unsafe variable {var} in rule `{rule}`")]
    Unsafe { rule: String, var: String },
    #[error("ground program exceeds {cap} atoms; raise {GROUND_CAP_VAR} or export the program for an external solver")]
    CapExceeded { cap: usize },
    #[error("program has no query predicate")]
    NoQuery,
}

/// The atom cap, from `CQA_GROUND_CAP` when set to a number.
pub fn ground_cap_from_env() -> usize {
    std::env::var(GROUND_CAP_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_GROUND_CAP)
}

/// Every answer set, each as its sorted set of atoms.
pub fn answer_sets(gp: &GroundProgram) -> Vec<BTreeSet<Fact>> {
    let mut out = Vec::new();
    solve::for_each_answer_set(gp, None, &mut |m| {
        out.push(m.iter().map(|&a| gp.atom(a).clone()).collect());
        ControlFlow::Continue(())
    });
    out.sort();
    out
}

/// Tuples `t` with `query(t)` in every answer set, found by repeatedly
/// asking for an answer set that drops one of the remaining candidates.
pub fn cautious_ground(gp: &GroundProgram, query: &QueryPred) -> CqaAnswers {
    let mut candidates: Option<BTreeSet<AtomId>> = None;
    loop {
        let mut found = None;
        let not_all = candidates.as_ref().map(|c| c.iter().copied().collect());
        solve::for_each_answer_set(gp, not_all, &mut |m| {
            found = Some(m.clone());
            ControlFlow::Break(())
        });
        let Some(model) = found else { break };
        let in_query = |a: &AtomId| {
            let f = gp.atom(*a);
            f.relation == query.name && f.tuple.len() == query.arity
        };
        candidates = Some(match candidates {
            None => model.iter().copied().filter(in_query).collect(),
            Some(c) => c.intersection(&model).copied().collect(),
        });
        if candidates.as_ref().is_some_and(BTreeSet::is_empty) {
            break;
        }
    }
    match candidates {
        None => CqaAnswers::VacuouslyAll,
        Some(c) => CqaAnswers::Tuples(c.into_iter().map(|a| gp.atom(a).tuple.clone()).collect()),
    }
}

/// Grounds `program` over `facts` and computes the cautious answers to its
/// query predicate.
pub fn cautious(program: &AspProgram, facts: &Database, cap: usize) -> Result<CqaAnswers, AspError> {
    let query = program.query.clone().ok_or(AspError::NoQuery)?;
    let gp = ground(program, facts, cap)?;
    Ok(cautious_ground(&gp, &query))
}
