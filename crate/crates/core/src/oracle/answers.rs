use std::collections::BTreeSet;
use std::fmt;

use crate::model::{decidability_gate, GateResult, ProfileRow, Schema, Semantics, Tuple, UnionQuery};
use crate::model::{Constant, Database};
use crate::optimize::le_equivalence_holds;
use crate::rewrite::perfect_rewrite;

use super::eval::eval_ucq;
use super::repairs::{enumerate_repairs_cm, enumerate_repairs_ls_le};
use super::rets::require_kd_sfsk;
use super::OracleError;

/// Consistent answers. `VacuouslyAll` marks an empty repair family, where
/// every tuple qualifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CqaAnswers {
    Tuples(BTreeSet<Tuple>),
    VacuouslyAll,
}

impl CqaAnswers {
    pub fn tuples(&self) -> Option<&BTreeSet<Tuple>> {
        match self {
            CqaAnswers::Tuples(t) => Some(t),
            CqaAnswers::VacuouslyAll => None,
        }
    }

    /// Intersection of answer sets, starting from the vacuous answer.
    pub fn intersect(sets: impl IntoIterator<Item = BTreeSet<Tuple>>) -> CqaAnswers {
        let mut acc = CqaAnswers::VacuouslyAll;
        for s in sets {
            acc = match acc {
                CqaAnswers::VacuouslyAll => CqaAnswers::Tuples(s),
                CqaAnswers::Tuples(t) => CqaAnswers::Tuples(t.intersection(&s).cloned().collect()),
            };
        }
        acc
    }

    pub fn is_subset(&self, other: &CqaAnswers) -> bool {
        match (self, other) {
            (_, CqaAnswers::VacuouslyAll) => true,
            (CqaAnswers::VacuouslyAll, CqaAnswers::Tuples(_)) => false,
            (CqaAnswers::Tuples(a), CqaAnswers::Tuples(b)) => a.is_subset(b),
        }
    }
}

/// One answer per line, values separated by commas.
impl fmt::Display for CqaAnswers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CqaAnswers::VacuouslyAll => writeln!(f, "% no repairs: every tuple is vacuously a consistent answer"),
            CqaAnswers::Tuples(ts) => {
                for t in ts {
                    let vals: Vec<String> = t.iter().map(ToString::to_string).collect();
                    writeln!(f, "{}", vals.join(","))?;
                }
                Ok(())
            }
        }
    }
}

/// How the oracle computes answers for a schema and semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Intersection over CM-complete repairs.
    CmRepairs,
    /// Perfect rewriting evaluated over the maximal key-consistent subsets.
    Separation,
    /// Intersection over repairs contained in `D*`.
    RepresentativeDb,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::CmRepairs => "intersection over CM-complete repairs",
            Route::Separation => "perfect rewriting over maximal key-consistent subsets",
            Route::RepresentativeDb => "intersection over repairs contained in D*",
        })
    }
}

pub fn oracle_route(schema: &Schema, db: &Database, semantics: Semantics) -> Result<Route, OracleError> {
    let gate = decidability_gate(schema, semantics);
    if let GateResult::Unsupported { reason, .. } = gate {
        return Err(OracleError::Unsupported(reason));
    }
    let row = gate.row();
    match semantics {
        Semantics::CmComplete => Ok(Route::CmRepairs),
        Semantics::LooselySound => match row {
            ProfileRow::NoDcs | ProfileRow::KdOnly | ProfileRow::KdNkc => Ok(Route::Separation),
            ProfileRow::DcsOnly => Ok(Route::CmRepairs),
            ProfileRow::KdSfsk => Ok(Route::RepresentativeDb),
            ProfileRow::KdAny | ProfileRow::AnyAny => unreachable!("gated above"),
        },
        Semantics::LooselyExact => {
            if require_kd_sfsk(schema).is_ok() {
                Ok(Route::RepresentativeDb)
            } else if le_equivalence_holds(schema, Some(db)).is_some() {
                Ok(Route::CmRepairs)
            } else {
                Err(OracleError::OutOfScope(format!(
                    "loosely-exact answers for {row} are only computed when the schema has keys and safe \
                     foreign superkeys, or when loosely-exact and CM-complete answers provably coincide"
                )))
            }
        }
    }
}

/// `ans_Σ(q, G, D)`: tuples that are answers in every Σ-repair. Under
/// loosely-sound and loosely-exact semantics tuples holding a labelled null
/// are dropped and `q` must be free of comparison atoms.
pub fn consistent_answers(
    db: &Database,
    schema: &Schema,
    q: &UnionQuery,
    semantics: Semantics,
) -> Result<CqaAnswers, OracleError> {
    let route = oracle_route(schema, db, semantics)?;
    if semantics != Semantics::CmComplete && q.has_comparisons() {
        return Err(OracleError::ComparisonAtoms(semantics));
    }
    let answers = match route {
        Route::CmRepairs => {
            let repairs = enumerate_repairs_cm(db, schema)?;
            CqaAnswers::intersect(repairs.repairs.iter().map(|b| eval_ucq(b, q)))
        }
        Route::Separation => {
            let rewritten = perfect_rewrite(q, schema.inds()).map_err(|_| OracleError::ComparisonAtoms(semantics))?;
            let repairs = enumerate_repairs_cm(db, &schema.keys_only())?;
            CqaAnswers::intersect(repairs.repairs.iter().map(|b| eval_ucq(b, &rewritten)))
        }
        Route::RepresentativeDb => {
            let repairs = enumerate_repairs_ls_le(db, schema, semantics)?;
            CqaAnswers::intersect(repairs.repairs.iter().map(|b| eval_ucq(b, q)))
        }
    };
    Ok(match answers {
        CqaAnswers::Tuples(ts) if semantics != Semantics::CmComplete => {
            CqaAnswers::Tuples(ts.into_iter().filter(|t| !t.iter().any(Constant::is_null)).collect())
        }
        other => other,
    })
}
