//! GAV mappings and the retrieved global database.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{Database, Fact, UnionQuery};
use crate::oracle::eval_ucq;

/// Each global relation defined by a union of conjunctive queries over the
/// sources.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GavMapping {
    pub queries: BTreeMap<String, UnionQuery>,
    /// Declared source relations with arities, when the mapping file lists
    /// them.
    pub sources: Option<BTreeMap<String, usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("mapping for {global} references undeclared source relation {source_rel}")]
    UndeclaredSource { global: String, source_rel: String },
    #[error("mapping for {global} uses {source_rel} with {found} arguments, declared arity is {expected}")]
    SourceArity { global: String, source_rel: String, expected: usize, found: usize },
}

impl GavMapping {
    pub fn validate(&self) -> Result<(), MappingError> {
        let Some(sources) = &self.sources else { return Ok(()) };
        for (g, q) in &self.queries {
            for a in q.disjuncts.iter().flat_map(|d| &d.atoms) {
                match sources.get(&a.relation) {
                    None => {
                        return Err(MappingError::UndeclaredSource {
                            global: g.clone(),
                            source_rel: a.relation.clone(),
                        })
                    }
                    Some(&n) if n != a.arity() => {
                        return Err(MappingError::SourceArity {
                            global: g.clone(),
                            source_rel: a.relation.clone(),
                            expected: n,
                            found: a.arity(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(())
    }
}

/// `ret(I, F)`: evaluate every mapping query on the source database.
pub fn retrieve(mapping: &GavMapping, source_db: &Database) -> Result<Database, MappingError> {
    mapping.validate()?;
    let mut out = Database::new();
    for (g, q) in &mapping.queries {
        out.extend(eval_ucq(source_db, q).into_iter().map(|t| Fact::new(g.clone(), t)));
    }
    Ok(out)
}
