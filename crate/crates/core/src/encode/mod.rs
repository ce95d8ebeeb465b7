//! The general encoding: a program `P_cqa` and query `q_cqa` whose cautious
//! consequences are the consistent answers.

pub mod names;

use thiserror::Error;

use crate::model::{
    classify_ind, Atom, Database, DenialConstraint, InclusionDependency, Schema, SchemaError, Semantics, Term,
    UnionQuery,
};
use crate::optimize::le_equivalence_holds;
use crate::program::{AspProgram, CountAgg, Literal, QueryPred, Rule};
use crate::rewrite::perfect_rewrite;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("{0}")]
    Gate(String),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("{0} encodings require a query without comparison atoms")]
    ComparisonAtoms(Semantics),
    #[error("generated predicate {0} clashes with a relation of the schema")]
    NameCollision(String),
}

/// Checks the hypotheses under which the encodings for `semantics` are
/// correct. `data` is consulted only for loosely-exact case (iii).
pub fn check_encodable(
    schema: &Schema,
    q: &UnionQuery,
    semantics: Semantics,
    data: Option<&Database>,
) -> Result<(), EncodeError> {
    schema.check_query(q)?;
    match semantics {
        Semantics::CmComplete => Ok(()),
        Semantics::LooselySound => {
            if q.has_comparisons() {
                return Err(EncodeError::ComparisonAtoms(semantics));
            }
            if !schema.dcs().is_empty() {
                return Err(EncodeError::Gate(
                    "loosely-sound encodings require the denial constraints to be keys".into(),
                ));
            }
            for d in schema.inds() {
                let class = classify_ind(schema, d)?;
                if !class.is_nkc() {
                    return Err(EncodeError::Gate(format!(
                        "loosely-sound encodings require non-key-conflicting INDs; {d} is {class}"
                    )));
                }
            }
            Ok(())
        }
        Semantics::LooselyExact => {
            if q.has_comparisons() {
                return Err(EncodeError::ComparisonAtoms(semantics));
            }
            if le_equivalence_holds(schema, data).is_none() {
                return Err(EncodeError::Gate(
                    "no loosely-exact encoding: loosely-exact and CM-complete answers are not known to coincide \
                     for this schema (DCs only, INDs only, KDs with FKs over key-consistent data, or KDs with \
                     SFKs)"
                        .into(),
                ));
            }
            Ok(())
        }
    }
}

/// The DC rule `g1^c(x1) v ... v gm^c(xm) :- g1(x1), ..., gm(xm), σ.`
pub(crate) fn dc_rule(
    dc: &DenialConstraint,
    head_rel: impl Fn(&str) -> String,
    body_rel: impl Fn(&str) -> String,
) -> Rule {
    let mut head: Vec<Atom> = Vec::new();
    for a in &dc.atoms {
        let h = Atom::new(head_rel(&a.relation), a.terms.clone());
        if !head.contains(&h) {
            head.push(h);
        }
    }
    let mut body: Vec<Literal> =
        dc.atoms.iter().map(|a| Literal::Pos(Atom::new(body_rel(&a.relation), a.terms.clone()))).collect();
    body.extend(dc.comparisons.iter().cloned().map(Literal::Cmp));
    Rule::new(head, body)
}

/// Rules deleting `g1` tuples left without support in `g2` by IND `d`:
/// a count-equality rule, or two plain rules when no rhs variable is
/// existential.
pub(crate) fn ind_rules(d: &InclusionDependency, lhs_conflict: &str, rhs_conflict: &str) -> Vec<Rule> {
    let lhs = &d.lhs;
    let rhs = &d.rhs;
    let head = Atom::new(lhs_conflict, lhs.terms.clone());
    let existential: Vec<String> =
        d.existential_positions().iter().filter_map(|&j| rhs.terms[j - 1].as_var().map(str::to_string)).collect();
    let rhs_c = Atom::new(rhs_conflict, rhs.terms.clone());
    if existential.is_empty() {
        vec![
            Rule::new(vec![head.clone()], vec![Literal::Pos(lhs.clone()), Literal::Pos(rhs_c)]),
            Rule::new(vec![head], vec![Literal::Pos(lhs.clone()), Literal::Neg(rhs.clone())]),
        ]
    } else {
        let count = Literal::CountEq(
            CountAgg { vars: existential.clone(), atom: rhs_c },
            CountAgg { vars: existential, atom: rhs.clone() },
        );
        vec![Rule::new(vec![head], vec![Literal::Pos(lhs.clone()), count])]
    }
}

pub(crate) fn positional_vars(arity: usize) -> Vec<Term> {
    (1..=arity).map(|i| Term::var(format!("X{i}"))).collect()
}

/// The query rules `q_cqa(head) :- body` with each atom renamed by `rename`.
pub(crate) fn query_rules(q: &UnionQuery, rename: impl Fn(&Atom) -> Atom) -> Vec<Rule> {
    let name = names::query(&q.name);
    q.disjuncts
        .iter()
        .map(|d| {
            let mut body: Vec<Literal> = d.atoms.iter().map(|a| Literal::Pos(rename(a))).collect();
            body.extend(d.comparisons.iter().cloned().map(Literal::Cmp));
            Rule::new(vec![Atom::new(name.clone(), d.head.clone())], body)
        })
        .collect()
}

/// `P_cqa ∪ q_cqa` for `semantics`. Loosely-exact is encoded as
/// CM-complete, and only where the two provably coincide.
pub fn encode_general(
    schema: &Schema,
    q: &UnionQuery,
    semantics: Semantics,
    data: Option<&Database>,
) -> Result<AspProgram, EncodeError> {
    check_encodable(schema, q, semantics, data)?;
    let mut program = AspProgram::new();
    for dc in schema.all_dcs() {
        program.push(dc_rule(&dc, names::conflict, str::to_string));
    }
    if semantics != Semantics::LooselySound {
        for d in schema.inds() {
            for r in ind_rules(d, &names::conflict(&d.lhs.relation), &names::conflict(&d.rhs.relation)) {
                program.push(r);
            }
        }
    }
    for sig in schema.relations() {
        let x = positional_vars(sig.arity);
        program.push(Rule::new(
            vec![Atom::new(names::repaired(&sig.name), x.clone())],
            vec![
                Literal::Pos(Atom::new(sig.name.clone(), x.clone())),
                Literal::Neg(Atom::new(names::conflict(&sig.name), x)),
            ],
        ));
    }
    let query = if semantics == Semantics::LooselySound {
        perfect_rewrite(q, schema.inds()).map_err(|_| EncodeError::ComparisonAtoms(semantics))?
    } else {
        q.clone()
    };
    for r in query_rules(&query, |a| Atom::new(names::repaired(&a.relation), a.terms.clone())) {
        program.push(r);
    }
    program.query = Some(QueryPred { name: names::query(&q.name), arity: q.arity });
    names::check_collisions(&program, schema)?;
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{emit_asp, parse_asp, parse_query, parse_schema, SourceText};

    const EX1: &str = "rel e/2. key e = {1}. rel m/1. m(X) -> e(X,_).";

    fn schema(t: &str) -> Schema {
        parse_schema(&SourceText::inline(t)).unwrap()
    }

    fn query(t: &str) -> UnionQuery {
        parse_query(&SourceText::inline(t)).unwrap()
    }

    #[test]
    fn example_program() {
        let p = encode_general(&schema(EX1), &query("q(X) :- m(X)."), Semantics::CmComplete, None).unwrap();
        assert_eq!(
            emit_asp(&p),
            "e_c(X1,X2) v e_c(X1,Y2) :- e(X1,X2), e(X1,Y2), X2 != Y2.\n\
             e_r(X1,X2) :- e(X1,X2), not e_c(X1,X2).\n\
             m_c(X) :- m(X), #count{A1 : e_c(X,A1)} = #count{A1 : e(X,A1)}.\n\
             m_r(X1) :- m(X1), not m_c(X1).\n\
             q_cqa(X) :- m_r(X).\n\
             q_cqa(X1)?\n"
        );
        assert_eq!(parse_asp(&SourceText::inline(emit_asp(&p))).unwrap(), p.normalized());
    }

    #[test]
    fn loosely_sound_rewrites_instead_of_encoding_inds() {
        let p = encode_general(&schema(EX1), &query("q(X) :- e(X,Y)."), Semantics::LooselySound, None).unwrap();
        let text = emit_asp(&p);
        assert!(!text.contains("#count"));
        assert!(text.contains("q_cqa(X) :- e_r(X,Y).\n"));
        assert!(text.contains("q_cqa(X) :- m_r(X).\n"));
    }

    #[test]
    fn gates() {
        let counter = schema("rel r/2. rel s/2. key s = {1}. r(X,Y) -> s(X,Y).");
        let q = query("q(X,Y) :- s(X,Y).");
        assert!(matches!(encode_general(&counter, &q, Semantics::LooselyExact, None), Err(EncodeError::Gate(_))));
        let q = query("q(X) :- e(X,Y), Y > 1.");
        assert_eq!(
            encode_general(&schema(EX1), &q, Semantics::LooselySound, None),
            Err(EncodeError::ComparisonAtoms(Semantics::LooselySound))
        );
    }

    #[test]
    fn name_collisions_detected() {
        let s = schema("rel e/2. rel e_r/2.");
        let q = query("q(X) :- e(X,Y).");
        assert_eq!(encode_general(&s, &q, Semantics::CmComplete, None), Err(EncodeError::NameCollision("e_r".into())));
    }

    #[test]
    fn no_existentials_gives_two_rules() {
        let s = schema("rel r/2. rel s/2. key s = {1}. r(X,Y) -> s(X,Y).");
        let p = encode_general(&s, &query("q(X) :- r(X,Y)."), Semantics::CmComplete, None).unwrap();
        let text = emit_asp(&p);
        assert!(text.contains("r_c(X,Y) :- r(X,Y), s_c(X,Y).\n"), "{text}");
        assert!(text.contains("r_c(X,Y) :- r(X,Y), not s(X,Y).\n"), "{text}");
    }
}
