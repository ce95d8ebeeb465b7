//! Predicate names of generated programs.

use std::collections::BTreeSet;

use crate::model::Schema;
use crate::program::AspProgram;

use super::EncodeError;

/// `g^c`.
pub fn conflict(g: &str) -> String {
    format!("{g}_c")
}

/// `g^r`.
pub fn repaired(g: &str) -> String {
    format!("{g}_r")
}

/// `g^{label-π}`, e.g. `g_r_p1_2`; `g_r_p` for the empty projection.
pub fn projected(g: &str, label: &str, positions: &BTreeSet<usize>) -> String {
    let idx: Vec<String> = positions.iter().map(ToString::to_string).collect();
    format!("{g}_{label}_p{}", idx.join("_"))
}

/// `q_cqa`.
pub fn query(q: &str) -> String {
    format!("{q}_cqa")
}

/// Fails when a generated predicate has the name of a schema relation.
pub fn check_collisions(program: &AspProgram, schema: &Schema) -> Result<(), EncodeError> {
    let generated =
        program.idb_predicates().into_iter().map(str::to_string).chain(program.query.iter().map(|q| q.name.clone()));
    for name in generated {
        if schema.get(&name).is_some() {
            return Err(EncodeError::NameCollision(name));
        }
    }
    Ok(())
}

/// `g^sr`, the full-width semi-repair.
pub fn semi_repaired(g: &str) -> String {
    format!("{g}_sr")
}
