use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;

use super::database::{Database, Fact};
use super::matching::{for_each_match, FactIndex};
use super::schema::Schema;
use super::value::Constant;

/// Identifies a constraint of a schema. Keys are named by relation, general
/// DCs and INDs by their 1-based declaration index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintId {
    Key(String),
    Dc(usize),
    Ind(usize),
}

impl fmt::Display for ConstraintId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintId::Key(r) => write!(f, "key of {r}"),
            ConstraintId::Dc(i) => write!(f, "dc #{i}"),
            ConstraintId::Ind(i) => write!(f, "ind #{i}"),
        }
    }
}

/// A violated constraint and the facts witnessing it. For an IND the witness
/// is the unsupported lhs fact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Violation {
    pub constraint: ConstraintId,
    pub facts: Vec<Fact>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facts: Vec<String> = self.facts.iter().map(ToString::to_string).collect();
        write!(f, "{}: {}", self.constraint, facts.join(", "))
    }
}

/// All violations, sorted by constraint then by witnessing facts.
pub fn check_consistency(db: &Database, schema: &Schema) -> Vec<Violation> {
    let mut out = BTreeSet::new();
    let _ = visit_violations(db, schema, &mut |v| {
        out.insert(v);
        ControlFlow::Continue(())
    });
    out.into_iter().collect()
}

pub fn is_consistent(db: &Database, schema: &Schema) -> bool {
    first_violation(db, schema).is_none()
}

/// Some violation, found with early exit; `None` iff `db` is consistent.
pub fn first_violation(db: &Database, schema: &Schema) -> Option<Violation> {
    let mut found = None;
    let _ = visit_violations(db, schema, &mut |v| {
        found = Some(v);
        ControlFlow::Break(())
    });
    found
}

/// Calls `f` on violations: keys first, then general DCs, then INDs.
/// Violations may be reported more than once.
pub fn visit_violations<F>(db: &Database, schema: &Schema, f: &mut F) -> ControlFlow<()>
where
    F: FnMut(Violation) -> ControlFlow<()>,
{
    let by_rel = db.by_relation();

    for sig in schema.keyed_relations() {
        let Some(tuples) = by_rel.get(sig.name.as_str()) else { continue };
        let mut groups: HashMap<Vec<&Constant>, Vec<usize>> = HashMap::new();
        for (i, t) in tuples.iter().enumerate() {
            let key = sig.key.iter().map(|&p| &t[p - 1]).collect();
            groups.entry(key).or_default().push(i);
        }
        let mut conflicting: Vec<&Vec<usize>> = groups.values().filter(|g| g.len() > 1).collect();
        conflicting.sort();
        for group in conflicting {
            for (a, &i) in group.iter().enumerate() {
                for &j in &group[a + 1..] {
                    let facts = vec![
                        Fact::new(sig.name.clone(), tuples[i].clone()),
                        Fact::new(sig.name.clone(), tuples[j].clone()),
                    ];
                    f(Violation { constraint: ConstraintId::Key(sig.name.clone()), facts })?;
                }
            }
        }
    }

    if !schema.dcs().is_empty() {
        let index = FactIndex::from_database(db);
        for (n, dc) in schema.dcs().iter().enumerate() {
            for_each_match(&dc.atoms, &dc.comparisons, &index, &mut |_, matched| {
                let mut facts: Vec<Fact> =
                    dc.atoms.iter().zip(matched).map(|(a, t)| Fact::new(a.relation.clone(), (*t).clone())).collect();
                facts.sort();
                facts.dedup();
                f(Violation { constraint: ConstraintId::Dc(n + 1), facts })
            })?;
        }
    }

    for (n, ind) in schema.inds().iter().enumerate() {
        let Some(lhs) = by_rel.get(ind.lhs.relation.as_str()) else { continue };
        let pairs = ind.position_pairs();
        let supported: HashSet<Vec<&Constant>> = by_rel
            .get(ind.rhs.relation.as_str())
            .map(|ts| ts.iter().map(|t| pairs.iter().map(|&(_, j)| &t[j - 1]).collect()).collect())
            .unwrap_or_default();
        for t in lhs {
            let wanted: Vec<&Constant> = pairs.iter().map(|&(i, _)| &t[i - 1]).collect();
            if !supported.contains(&wanted) {
                let facts = vec![Fact::new(ind.lhs.relation.clone(), (*t).clone())];
                f(Violation { constraint: ConstraintId::Ind(n + 1), facts })?;
            }
        }
    }
    ControlFlow::Continue(())
}
