//! Rule shapes shared by the optimized encodings.

use std::collections::{BTreeMap, BTreeSet};

use crate::encode::names;
use crate::encode::positional_vars;
use crate::model::{Atom, CmpOp, Comparison, InclusionDependency, RelationSig, Term};
use crate::program::{Literal, Rule};

/// `X1..Xn` over `g`.
pub(crate) fn full_atom(relation: &str, arity: usize) -> Atom {
    Atom::new(relation, positional_vars(arity))
}

/// The second copy in a key conflict: `Xk` on key positions, `Yk` elsewhere.
pub(crate) fn key_twin(sig: &RelationSig) -> Vec<Term> {
    (1..=sig.arity)
        .map(|k| if sig.key.contains(&k) { Term::var(format!("X{k}")) } else { Term::var(format!("Y{k}")) })
        .collect()
}

/// `g^{label-π}(terms^π)`.
pub(crate) fn proj(g: &str, label: &str, positions: &BTreeSet<usize>, terms: &[Term]) -> Atom {
    Atom::new(names::projected(g, label, positions), positions.iter().map(|&p| terms[p - 1].clone()).collect())
}

/// Per `i ∈ π_S − key(g)`: `g^{c-π_S}(x1) [v g^{c-π_S}(x2)] :- g^{sr-π_S}(x1), g^{sr-π_S}(x2), x1^i != x2^i.`
pub(crate) fn key_conflict_rules(sig: &RelationSig, pi_s: &BTreeSet<usize>, disjunctive: bool) -> Vec<Rule> {
    let x1 = positional_vars(sig.arity);
    let x2 = key_twin(sig);
    pi_s.iter()
        .filter(|i| !sig.key.contains(i))
        .map(|&i| {
            let mut head = vec![proj(&sig.name, "c", pi_s, &x1)];
            if disjunctive {
                head.push(proj(&sig.name, "c", pi_s, &x2));
            }
            Rule::new(
                head,
                vec![
                    Literal::Pos(proj(&sig.name, "sr", pi_s, &x1)),
                    Literal::Pos(proj(&sig.name, "sr", pi_s, &x2)),
                    Literal::Cmp(Comparison::new(x1[i - 1].clone(), CmpOp::Ne, x2[i - 1].clone())),
                ],
            )
        })
        .collect()
}

/// `g^{r-π_R}(x^π_R) :- g^{sr-π_S}(x^π_S), not g^{c-π_S}(x^π_S).`
pub(crate) fn repaired_from_semi(sig: &RelationSig, pi_r: &BTreeSet<usize>, pi_s: &BTreeSet<usize>) -> Rule {
    let x = positional_vars(sig.arity);
    Rule::new(
        vec![proj(&sig.name, "r", pi_r, &x)],
        vec![Literal::Pos(proj(&sig.name, "sr", pi_s, &x)), Literal::Neg(proj(&sig.name, "c", pi_s, &x))],
    )
}

/// The atom `g1^{r-π_R^d}` for IND `d: g(..) -> g1(..)`, with the shared
/// variables renamed to the positional variables of `g`.
pub(crate) fn support_atom(d: &InclusionDependency) -> Atom {
    let mut rename: BTreeMap<&str, Term> = BTreeMap::new();
    for (i, t) in d.lhs.terms.iter().enumerate() {
        if let Some(v) = t.as_var() {
            rename.insert(v, Term::var(format!("X{}", i + 1)));
        }
    }
    let pi = d.pi_r();
    let terms: Vec<Term> = d
        .rhs
        .terms
        .iter()
        .map(|t| t.as_var().and_then(|v| rename.get(v).cloned()).unwrap_or_else(|| t.clone()))
        .collect();
    proj(&d.rhs.relation, "r", &pi, &terms)
}

/// `g1^{r-π_R^d}(..) :- g1^{r-π_R^{g1}}(..)` when the projections differ.
pub(crate) fn support_projection(
    d: &InclusionDependency,
    rhs_arity: usize,
    pi_r_rhs: &BTreeSet<usize>,
) -> Option<Rule> {
    let pi = d.pi_r();
    if &pi == pi_r_rhs {
        return None;
    }
    let z = positional_vars(rhs_arity);
    Some(Rule::new(
        vec![proj(&d.rhs.relation, "r", &pi, &z)],
        vec![Literal::Pos(proj(&d.rhs.relation, "r", pi_r_rhs, &z))],
    ))
}
