use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::term::{Atom, Comparison, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unsafe query: head variable {var} does not occur in a relational atom of the body")]
    UnsafeHead { var: String },
    #[error("unsafe query: variable {var} of a comparison does not occur in a relational atom")]
    UnsafeComparison { var: String },
    #[error("query rules disagree on the head: expected {expected}, found {found}")]
    MixedHeads { expected: String, found: String },
}

/// One conjunctive query `head :- atoms, comparisons`.
///
/// Head terms are usually variables but may be constants once unification
/// has bound them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjunction {
    pub head: Vec<Term>,
    pub atoms: Vec<Atom>,
    pub comparisons: Vec<Comparison>,
}

impl Conjunction {
    pub fn new(head: Vec<Term>, atoms: Vec<Atom>, comparisons: Vec<Comparison>) -> Self {
        Conjunction { head, atoms, comparisons }
    }

    pub fn body_vars(&self) -> BTreeSet<&str> {
        self.atoms.iter().flat_map(Atom::vars).collect()
    }

    pub fn head_vars(&self) -> BTreeSet<&str> {
        self.head.iter().filter_map(Term::as_var).collect()
    }

    pub fn validate(&self) -> Result<(), QueryError> {
        let body = self.body_vars();
        if let Some(v) = self.head_vars().into_iter().find(|v| !body.contains(v)) {
            return Err(QueryError::UnsafeHead { var: v.to_string() });
        }
        for cmp in &self.comparisons {
            if let Some(v) = cmp.vars().find(|v| !body.contains(v)) {
                return Err(QueryError::UnsafeComparison { var: v.to_string() });
            }
        }
        Ok(())
    }
}

/// A union of conjunctive queries sharing one head predicate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnionQuery {
    pub name: String,
    pub arity: usize,
    pub disjuncts: Vec<Conjunction>,
}

impl UnionQuery {
    pub fn new(name: impl Into<String>, arity: usize, disjuncts: Vec<Conjunction>) -> Result<Self, QueryError> {
        let name = name.into();
        for d in &disjuncts {
            if d.head.len() != arity {
                return Err(QueryError::MixedHeads {
                    expected: format!("{name}/{arity}"),
                    found: format!("{name}/{}", d.head.len()),
                });
            }
            d.validate()?;
        }
        Ok(UnionQuery { name, arity, disjuncts })
    }

    /// Single-disjunct convenience constructor.
    pub fn single(name: impl Into<String>, head: Vec<Term>, atoms: Vec<Atom>) -> Result<Self, QueryError> {
        let arity = head.len();
        UnionQuery::new(name, arity, vec![Conjunction::new(head, atoms, Vec::new())])
    }

    pub fn has_comparisons(&self) -> bool {
        self.disjuncts.iter().any(|d| !d.comparisons.is_empty())
    }

    pub fn relations(&self) -> BTreeSet<&str> {
        self.disjuncts.iter().flat_map(|d| d.atoms.iter().map(|a| a.relation.as_str())).collect()
    }
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.atoms {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{a}")?;
        }
        for c in &self.comparisons {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// One rule per line, `q(X) :- body.`
impl fmt::Display for UnionQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.disjuncts {
            let head = Atom::new(self.name.clone(), d.head.clone());
            writeln!(f, "{head} :- {d}.")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unsafe_head_rejected() {
        let err = UnionQuery::single("q", vec![Term::var("X")], vec![Atom::new("r", vec![Term::var("Y")])]);
        assert_eq!(err, Err(QueryError::UnsafeHead { var: "X".into() }));
    }

    #[test]
    fn mixed_arity_rejected() {
        let d1 = Conjunction::new(vec![Term::var("X")], vec![Atom::new("r", vec![Term::var("X")])], vec![]);
        let d2 = Conjunction::new(vec![], vec![Atom::new("r", vec![Term::var("X")])], vec![]);
        assert!(matches!(UnionQuery::new("q", 1, vec![d1, d2]), Err(QueryError::MixedHeads { .. })));
    }
}
