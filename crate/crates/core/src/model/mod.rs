//! Schemas, constraints, databases and queries, plus IND classification and
//! the decidability gate.

pub mod classify;
pub mod consistency;
pub mod database;
pub mod graph;
pub mod matching;
pub mod query;
pub mod schema;
pub mod term;
pub mod value;

pub use classify::{classify_ind, decidability_gate, profile_row, GateResult, IndClass, IndTag, ProfileRow, Semantics};
pub use consistency::{check_consistency, first_violation, is_consistent, ConstraintId, Violation};
pub use database::{Database, Fact};
pub use graph::{cyclic_components, ind_dependency_graph, IndGraph};
pub use matching::{for_each_match, Binding, FactIndex};
pub use query::{Conjunction, QueryError, UnionQuery};
pub use schema::{DenialConstraint, InclusionDependency, RelationSig, Schema, SchemaError};
pub use term::{Atom, CmpOp, Comparison, Term};
pub use value::{tuple, Constant, Tuple, NULL_PREFIX};
