use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::model::{for_each_match, Database, FactIndex, Term, Tuple, UnionQuery};

/// `ans(q, db)`: all head tuples of homomorphisms of some disjunct into `db`
/// that satisfy its comparisons.
pub fn eval_ucq(db: &Database, q: &UnionQuery) -> BTreeSet<Tuple> {
    let index = FactIndex::from_database(db);
    let mut out = BTreeSet::new();
    for d in &q.disjuncts {
        let _ = for_each_match(&d.atoms, &d.comparisons, &index, &mut |binding, _| {
            let t: Option<Tuple> = d.head.iter().map(|h| h.resolve(binding).cloned()).collect();
            out.insert(t.expect("safe query binds every head variable"));
            ControlFlow::Continue(())
        });
        // A disjunct with no atoms and a ground head is a fact.
        if d.atoms.is_empty() && d.comparisons.is_empty() {
            if let Some(t) =
                d.head.iter().map(|h| if let Term::Const(c) = h { Some(c.clone()) } else { None }).collect()
            {
                out.insert(t);
            }
        }
    }
    out
}

/// `(a − b) ∪ (b − a)`.
pub fn symmetric_difference(a: &Database, b: &Database) -> Database {
    a.difference(b).union(&b.difference(a))
}
