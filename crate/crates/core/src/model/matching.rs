//! Homomorphism search of a conjunction of atoms (plus comparisons) into a
//! set of facts. Shared by query evaluation and constraint checking.

use std::collections::HashMap;
use std::ops::ControlFlow;

use super::database::{Database, Fact};
use super::term::{Atom, Comparison, Term};
use super::value::{Constant, Tuple};

pub type Binding = HashMap<String, Constant>;

/// Tuples indexed by relation name.
#[derive(Debug, Default, Clone)]
pub struct FactIndex<'a> {
    by_relation: HashMap<&'a str, Vec<&'a Tuple>>,
}

impl<'a> FactIndex<'a> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_database(db: &'a Database) -> Self {
        Self::from_facts(db.iter())
    }

    pub fn from_facts(facts: impl IntoIterator<Item = &'a Fact>) -> Self {
        let mut index = FactIndex::new();
        for f in facts {
            index.add(f);
        }
        index
    }

    pub fn add(&mut self, fact: &'a Fact) {
        self.by_relation.entry(fact.relation.as_str()).or_default().push(&fact.tuple);
    }

    pub fn tuples(&self, relation: &str) -> &[&'a Tuple] {
        self.by_relation.get(relation).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Enumerate every binding of the variables of `atoms` such that each atom
/// maps to an indexed fact and every comparison holds. The callback receives
/// the binding and the matched tuple of each atom; returning
/// `ControlFlow::Break` stops the search.
pub fn for_each_match<'a, F>(
    atoms: &[Atom],
    comparisons: &[Comparison],
    index: &FactIndex<'a>,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Binding, &[&'a Tuple]) -> ControlFlow<()>,
{
    let mut binding = Binding::new();
    let mut matched = Vec::with_capacity(atoms.len());
    let mut pending: Vec<&Comparison> = comparisons.iter().collect();
    search(atoms, &mut pending, index, &mut binding, &mut matched, f)
}

fn search<'a, F>(
    atoms: &[Atom],
    pending: &mut Vec<&Comparison>,
    index: &FactIndex<'a>,
    binding: &mut Binding,
    matched: &mut Vec<&'a Tuple>,
    f: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&Binding, &[&'a Tuple]) -> ControlFlow<()>,
{
    // Check every comparison whose operands are now bound.
    let mut decided = Vec::new();
    for (i, cmp) in pending.iter().enumerate() {
        match cmp.eval(binding) {
            Some(true) => decided.push(i),
            Some(false) => return ControlFlow::Continue(()),
            None => {}
        }
    }
    let removed: Vec<&Comparison> = decided.iter().rev().map(|&i| pending.remove(i)).collect();

    let result = match atoms.split_first() {
        None => {
            if pending.is_empty() {
                f(binding, matched)
            } else {
                // Unsafe comparison: some operand never gets bound.
                ControlFlow::Continue(())
            }
        }
        Some((atom, rest)) => {
            let mut flow = ControlFlow::Continue(());
            for &tuple in index.tuples(&atom.relation) {
                if tuple.len() != atom.terms.len() {
                    continue;
                }
                let mut newly_bound = Vec::new();
                let mut ok = true;
                for (term, value) in atom.terms.iter().zip(tuple) {
                    match term {
                        Term::Const(c) => {
                            if c != value {
                                ok = false;
                                break;
                            }
                        }
                        Term::Var(v) => match binding.get(v) {
                            Some(bound) => {
                                if bound != value {
                                    ok = false;
                                    break;
                                }
                            }
                            None => {
                                binding.insert(v.clone(), value.clone());
                                newly_bound.push(v.clone());
                            }
                        },
                    }
                }
                if ok {
                    matched.push(tuple);
                    flow = search(rest, pending, index, binding, matched, f);
                    matched.pop();
                }
                for v in newly_bound {
                    binding.remove(&v);
                }
                if flow.is_break() {
                    break;
                }
            }
            flow
        }
    };

    for (offset, cmp) in decided.iter().zip(removed.into_iter().rev()) {
        pending.insert(*offset, cmp);
    }
    result
}
