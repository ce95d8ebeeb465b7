//! One entry point over the engines: the repair oracle, the general
//! encoding, the optimized encoding, or an exported program.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::aspeval::{cautious, AspError};
use crate::encode::{encode_general, EncodeError};
use crate::model::{Database, Schema, Semantics, UnionQuery};
use crate::optimize::encode_optimized;
use crate::oracle::{consistent_answers, CqaAnswers, OracleError};
use crate::program::AspProgram;
use crate::textio::emit_asp;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Oracle,
    AspGeneral,
    AspOpt,
    Export,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Oracle, Engine::AspGeneral, Engine::AspOpt, Engine::Export];
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Oracle => "oracle",
            Engine::AspGeneral => "asp-general",
            Engine::AspOpt => "asp-opt",
            Engine::Export => "export",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Engine::ALL
            .into_iter()
            .find(|e| e.to_string() == s)
            .ok_or_else(|| format!("unknown engine {s:?} (expected oracle, asp-general, asp-opt or export)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Asp(#[from] AspError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Answers(CqaAnswers),
    /// The program followed by the facts, in the ASP text format.
    Program(String),
}

/// The program an ASP engine would evaluate.
pub fn program_for(
    schema: &Schema,
    db: &Database,
    q: &UnionQuery,
    semantics: Semantics,
    optimized: bool,
) -> Result<AspProgram, EncodeError> {
    if optimized {
        encode_optimized(schema, q, semantics, Some(db))
    } else {
        encode_general(schema, q, semantics, Some(db))
    }
}

/// Consistent answers of `q` under `semantics` by `engine`. `Export`
/// returns the optimized program with the facts appended.
pub fn run(
    schema: &Schema,
    db: &Database,
    q: &UnionQuery,
    semantics: Semantics,
    engine: Engine,
    cap: usize,
) -> Result<Outcome, EngineError> {
    Ok(match engine {
        Engine::Oracle => Outcome::Answers(consistent_answers(db, schema, q, semantics)?),
        Engine::AspGeneral | Engine::AspOpt => {
            let p = program_for(schema, db, q, semantics, engine == Engine::AspOpt)?;
            Outcome::Answers(cautious(&p, db, cap)?)
        }
        Engine::Export => {
            let mut p = program_for(schema, db, q, semantics, true)?;
            let query = p.query.take();
            let mut out = emit_asp(&p);
            out.push_str(&db.to_string());
            if let Some(query) = query {
                out.push_str(&format!("{query}\n"));
            }
            Outcome::Program(out)
        }
    })
}
