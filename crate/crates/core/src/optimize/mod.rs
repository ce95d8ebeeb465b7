//! Query-driven optimized encodings and the loosely-exact equivalence check.

mod cm;
mod equivalence;
mod graph;
mod ls;
mod relevance;
mod rules;

pub use cm::encode_cm_optimized;
pub use equivalence::{le_equivalence_holds, LeCase};
pub use graph::{build_query_graph, Arc, ArcLabel, Node, QueryGraph};
pub use ls::encode_ls_optimized;
pub use relevance::relevant_indices;

use crate::encode::EncodeError;
use crate::model::{Database, Schema, Semantics, UnionQuery};
use crate::program::AspProgram;

/// The optimized program for `semantics`; loosely-exact goes through the
/// CM-complete encoding where the two coincide.
pub fn encode_optimized(
    schema: &Schema,
    q: &UnionQuery,
    semantics: Semantics,
    data: Option<&Database>,
) -> Result<AspProgram, EncodeError> {
    crate::encode::check_encodable(schema, q, semantics, data)?;
    match semantics {
        Semantics::LooselySound => encode_ls_optimized(schema, q),
        _ => encode_cm_optimized(schema, q),
    }
}
