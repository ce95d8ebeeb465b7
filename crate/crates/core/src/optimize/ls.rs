use std::collections::BTreeMap;

use crate::encode::{check_encodable, names, query_rules, EncodeError};
use crate::model::{Atom, Schema, Semantics, UnionQuery};
use crate::program::{AspProgram, Literal, QueryPred, Rule};
use crate::rewrite::perfect_rewrite;

use super::relevant_indices;
use super::rules::{full_atom, key_conflict_rules, proj, repaired_from_semi};

/// Rewrites `q` through the INDs, then repairs each relation of the rewriting
/// only on its relevant positions plus the key.
pub fn encode_ls_optimized(schema: &Schema, q: &UnionQuery) -> Result<AspProgram, EncodeError> {
    check_encodable(schema, q, Semantics::LooselySound, None)?;
    let rewritten =
        perfect_rewrite(q, schema.inds()).map_err(|_| EncodeError::ComparisonAtoms(Semantics::LooselySound))?;
    let mut program = AspProgram::new();
    let mut pi_r = BTreeMap::new();
    for g in rewritten.relations() {
        let sig = schema.relation(g)?;
        let r = relevant_indices(&rewritten, g);
        let x = full_atom(g, sig.arity);
        if r.is_subset(&sig.key) {
            program.push(Rule::new(vec![proj(g, "r", &r, &x.terms)], vec![Literal::Pos(x)]));
        } else {
            let mut s = r.clone();
            s.extend(&sig.key);
            program.push(Rule::new(vec![proj(g, "sr", &s, &x.terms)], vec![Literal::Pos(x)]));
            for rule in key_conflict_rules(sig, &s, true) {
                program.push(rule);
            }
            program.push(repaired_from_semi(sig, &r, &s));
        }
        pi_r.insert(g.to_string(), r);
    }
    for rule in query_rules(&rewritten, |a: &Atom| proj(&a.relation, "r", &pi_r[&a.relation], &a.terms)) {
        program.push(rule);
    }
    program.query = Some(QueryPred { name: names::query(&q.name), arity: q.arity });
    names::check_collisions(&program, schema)?;
    Ok(program.normalized())
}
