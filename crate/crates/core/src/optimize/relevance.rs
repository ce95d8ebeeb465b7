use std::collections::{BTreeMap, BTreeSet};

use crate::model::{Term, UnionQuery};

/// Positions of `g` that `q` constrains: output variables, variables of
/// comparison atoms, variables repeated within a conjunction, constants.
/// Unions over all occurrences; empty when `g` does not occur.
pub fn relevant_indices(q: &UnionQuery, g: &str) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for d in &q.disjuncts {
        let head = d.head_vars();
        let compared: BTreeSet<&str> = d.comparisons.iter().flat_map(|c| c.vars()).collect();
        let mut occurrences: BTreeMap<&str, usize> = BTreeMap::new();
        for v in d.atoms.iter().flat_map(|a| a.vars()) {
            *occurrences.entry(v).or_default() += 1;
        }
        for a in d.atoms.iter().filter(|a| a.relation == g) {
            for (i, t) in a.terms.iter().enumerate() {
                let relevant = match t {
                    Term::Const(_) => true,
                    Term::Var(v) => {
                        head.contains(v.as_str()) || compared.contains(v.as_str()) || occurrences[v.as_str()] > 1
                    }
                };
                if relevant {
                    out.insert(i + 1);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_query, SourceText};

    fn rel(q: &str, g: &str) -> Vec<usize> {
        relevant_indices(&parse_query(&SourceText::inline(q)).unwrap(), g).into_iter().collect()
    }

    #[test]
    fn the_four_conditions() {
        assert_eq!(rel("q(Xc,Xn) :- c(Xc,Xn), e(Xc,Xn).", "e"), vec![1, 2]);
        assert_eq!(rel("q(X) :- e(X,Y), Y > a.", "e"), vec![1, 2]);
        assert_eq!(rel("q(X) :- e(X,Y), f(Y,Z).", "f"), vec![1]);
        assert_eq!(rel("q(X) :- e(X,Y), f(b,Z).", "f"), vec![1]);
        assert_eq!(rel("q(X) :- e(X,Y,Y).", "e"), vec![1, 2, 3]);
        assert_eq!(rel("q(X) :- e(X,Y).", "f"), Vec::<usize>::new());
    }

    #[test]
    fn unions_over_disjuncts() {
        assert_eq!(rel("q(X) :- e(X,Y). q(Y) :- e(X,Y).", "e"), vec![1, 2]);
    }
}
