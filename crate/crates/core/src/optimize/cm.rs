use std::collections::BTreeSet;

use crate::encode::{dc_rule, ind_rules, names, query_rules, EncodeError};
use crate::model::{Atom, Constant, RelationSig, Schema, Term, UnionQuery};
use crate::program::{AspProgram, Literal, QueryPred, Rule};

use super::build_query_graph;
use super::graph::{key_only, Node, QueryGraph};
use super::rules::{full_atom, key_conflict_rules, proj, repaired_from_semi, support_atom, support_projection};

/// The graph-driven program: relations on no cycle are repaired on their
/// relevant projections in dependency order, relations on a cycle follow the
/// general encoding.
pub fn encode_cm_optimized(schema: &Schema, q: &UnionQuery) -> Result<AspProgram, EncodeError> {
    schema.check_query(q)?;
    let graph = build_query_graph(schema, q);
    let mut program = AspProgram::new();
    for g in &graph.cycle_free {
        cycle_free_rules(schema, q, &graph, schema.relation(g)?, &mut program);
    }
    for g in &graph.non_cycle_free {
        cyclic_rules(schema, q, &graph, schema.relation(g)?, &mut program);
    }
    for dc in schema.dcs() {
        if dc.atoms.iter().all(|a| graph.non_cycle_free.contains(&a.relation)) {
            program.push(dc_rule(dc, names::conflict, str::to_string));
        }
    }
    let renamed = query_rules(q, |a: &Atom| proj(&a.relation, "r", &graph.pi_r[&a.relation], &a.terms));
    for rule in renamed {
        program.push(rule);
    }
    program.query = Some(QueryPred { name: names::query(&q.name), arity: q.arity });
    names::check_collisions(&program, schema)?;
    Ok(program.normalized())
}

/// The body `g(x), g1^{r-π_R^{d1}}(..), ...` over the INDs leaving `g`,
/// plus the projection rules those atoms need.
fn supported_body(schema: &Schema, graph: &QueryGraph, sig: &RelationSig, program: &mut AspProgram) -> Vec<Literal> {
    let mut body = vec![Literal::Pos(full_atom(&sig.name, sig.arity))];
    for i in graph.outgoing_inds(&sig.name) {
        let d = &schema.inds()[i];
        body.push(Literal::Pos(support_atom(d)));
        let rhs_arity = d.rhs.arity();
        if let Some(rule) = support_projection(d, rhs_arity, &graph.pi_r[&d.rhs.relation]) {
            program.push(rule);
        }
    }
    body
}

fn cycle_free_rules(schema: &Schema, q: &UnionQuery, graph: &QueryGraph, sig: &RelationSig, program: &mut AspProgram) {
    let g = sig.name.as_str();
    let pi_r = &graph.pi_r[g];
    let x = full_atom(g, sig.arity).terms;
    let body = supported_body(schema, graph, sig, program);
    match &graph.pi_s[g] {
        Some(_) if pi_r.is_subset(&sig.key) => {
            program.push(Rule::new(vec![proj(g, "r", pi_r, &x)], body));
        }
        Some(pi_s) => {
            program.push(Rule::new(vec![proj(g, "sr", pi_s, &x)], body));
            let disjunctive = !conflicts_never_answer(q, graph, sig, pi_r);
            for rule in key_conflict_rules(sig, pi_s, disjunctive) {
                program.push(rule);
            }
            program.push(repaired_from_semi(sig, pi_r, pi_s));
        }
        None => {
            let sr = names::semi_repaired(g);
            program.push(Rule::new(vec![Atom::new(sr.clone(), x.clone())], body));
            let own = schema.dcs().iter().filter(|dc| dc.atoms.iter().any(|a| a.relation == g));
            for dc in schema.key_dcs(sig).iter().chain(own) {
                program.push(dc_rule(dc, names::conflict, |_| sr.clone()));
            }
            program.push(Rule::new(
                vec![proj(g, "r", pi_r, &x)],
                vec![Literal::Pos(Atom::new(sr, x.clone())), Literal::Neg(Atom::new(names::conflict(g), x))],
            ));
        }
    }
}

/// One occurrence of `g` seen from the head: for each relevant position,
/// the head index of its variable or its constant.
#[derive(PartialEq, Eq)]
enum Slot {
    Head(usize),
    Const(Constant),
}

/// When a key group of `g` holds two distinct relevant projections, no tuple
/// built from either is a consistent answer, so every conflicting tuple can
/// be dropped without choosing. This needs `key(g) ⊂ π_R`, no arcs into `g`
/// but the query's, and every occurrence of `g` exposing its relevant
/// positions through the head the same way.
fn conflicts_never_answer(q: &UnionQuery, graph: &QueryGraph, sig: &RelationSig, pi_r: &BTreeSet<usize>) -> bool {
    if !(sig.key.is_subset(pi_r) && sig.key.len() < pi_r.len()) {
        return false;
    }
    if graph.predecessors(&sig.name).any(|n| *n != Node::Query) {
        return false;
    }
    let mut first: Option<Vec<Slot>> = None;
    for d in &q.disjuncts {
        for a in d.atoms.iter().filter(|a| a.relation == sig.name) {
            let mut slots = Vec::new();
            for &p in pi_r {
                match &a.terms[p - 1] {
                    Term::Const(c) => slots.push(Slot::Const(c.clone())),
                    t => match d.head.iter().position(|h| h == t) {
                        Some(i) => slots.push(Slot::Head(i)),
                        None => return false,
                    },
                }
            }
            match &first {
                None => first = Some(slots),
                Some(f) if *f != slots => return false,
                Some(_) => {}
            }
        }
    }
    true
}

fn cyclic_rules(schema: &Schema, q: &UnionQuery, graph: &QueryGraph, sig: &RelationSig, program: &mut AspProgram) {
    let g = sig.name.as_str();
    let x = full_atom(g, sig.arity);
    let conflict = Atom::new(names::conflict(g), x.terms.clone());
    for i in graph.outgoing_inds(g) {
        let d = &schema.inds()[i];
        let target = d.rhs.relation.as_str();
        if graph.cycle_free.contains(target) {
            program
                .push(Rule::new(vec![conflict.clone()], vec![Literal::Pos(x.clone()), Literal::Neg(support_atom(d))]));
            if let Some(rule) = support_projection(d, d.rhs.arity(), &graph.pi_r[target]) {
                program.push(rule);
            }
        } else {
            for rule in ind_rules(d, &names::conflict(g), &names::conflict(target)) {
                program.push(rule);
            }
        }
    }
    for dc in schema.key_dcs(sig) {
        program.push(dc_rule(&dc, names::conflict, str::to_string));
    }
    let referenced = q.relations().contains(g)
        || graph.predecessors(g).any(|n| matches!(n, Node::Rel(r) if graph.cycle_free.contains(r)));
    if referenced {
        program.push(Rule::new(
            vec![proj(g, "r", &graph.pi_r[g], &x.terms)],
            vec![Literal::Pos(x), Literal::Neg(conflict)],
        ));
    }
    debug_assert!(graph.pi_s[g].is_none() || key_only(schema, g));
}
