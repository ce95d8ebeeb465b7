//! Perfect rewriting of a union of conjunctive queries under inclusion
//! dependencies.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::model::{Atom, Conjunction, InclusionDependency, Term, UnionQuery};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("perfect rewriting requires a query without comparison atoms")]
    ComparisonAtoms,
}

/// Fixpoint of atom unification and right-to-left IND application. The
/// input disjuncts come first, then new ones in discovery order; conjunctions
/// equal up to variable renaming and atom order are added once.
pub fn perfect_rewrite(q: &UnionQuery, inds: &[InclusionDependency]) -> Result<UnionQuery, RewriteError> {
    if q.has_comparisons() {
        return Err(RewriteError::ComparisonAtoms);
    }
    let mut seen: HashSet<CanonicalCq> = HashSet::new();
    let mut out: Vec<Conjunction> = Vec::new();
    let mut queue: VecDeque<Conjunction> = VecDeque::new();
    for d in &q.disjuncts {
        if seen.insert(canonical(d)) {
            out.push(d.clone());
            queue.push_back(d.clone());
        }
    }
    while let Some(cq) = queue.pop_front() {
        let mut next = unification_step(&cq);
        next.extend(ind_step(&cq, inds));
        for n in next {
            if seen.insert(canonical(&n)) {
                out.push(n.clone());
                queue.push_back(n);
            }
        }
    }
    Ok(UnionQuery { name: q.name.clone(), arity: q.arity, disjuncts: out })
}

fn unification_step(cq: &Conjunction) -> Vec<Conjunction> {
    let mut out = Vec::new();
    for i in 0..cq.atoms.len() {
        for j in i + 1..cq.atoms.len() {
            if let Some(sigma) = mgu(&cq.atoms[i], &cq.atoms[j]) {
                let apply = |t: &Term| resolve(&sigma, t);
                let head = cq.head.iter().map(apply).collect();
                let mut atoms: Vec<Atom> = Vec::new();
                for a in &cq.atoms {
                    let a = Atom::new(a.relation.clone(), a.terms.iter().map(apply).collect());
                    if !atoms.contains(&a) {
                        atoms.push(a);
                    }
                }
                out.push(Conjunction::new(head, atoms, Vec::new()));
            }
        }
    }
    out
}

fn resolve(sigma: &HashMap<String, Term>, t: &Term) -> Term {
    let mut t = t.clone();
    while let Term::Var(v) = &t {
        match sigma.get(v) {
            Some(next) => t = next.clone(),
            None => break,
        }
    }
    t
}

/// Most general unifier of two atoms, as a triangular substitution.
fn mgu(a: &Atom, b: &Atom) -> Option<HashMap<String, Term>> {
    if a.relation != b.relation || a.arity() != b.arity() {
        return None;
    }
    let mut sigma: HashMap<String, Term> = HashMap::new();
    for (s, t) in a.terms.iter().zip(&b.terms) {
        let s = resolve(&sigma, s);
        let t = resolve(&sigma, t);
        match (&s, &t) {
            _ if s == t => {}
            (Term::Var(v), _) => {
                sigma.insert(v.clone(), t.clone());
            }
            (_, Term::Var(v)) => {
                sigma.insert(v.clone(), s.clone());
            }
            (Term::Const(_), Term::Const(_)) => return None,
        }
    }
    Some(sigma)
}

fn ind_step(cq: &Conjunction, inds: &[InclusionDependency]) -> Vec<Conjunction> {
    let mut occurrences: HashMap<&str, usize> = HashMap::new();
    for v in cq.atoms.iter().flat_map(Atom::vars) {
        *occurrences.entry(v).or_default() += 1;
    }
    let head = cq.head_vars();
    let used: BTreeSet<&str> = cq.body_vars().into_iter().chain(head.iter().copied()).collect();
    let mut out = Vec::new();
    for d in inds {
        let pairs = d.position_pairs();
        let pi_r: BTreeSet<usize> = pairs.iter().map(|&(_, j)| j).collect();
        for (k, atom) in cq.atoms.iter().enumerate() {
            if atom.relation != d.rhs.relation || atom.arity() != d.rhs.arity() {
                continue;
            }
            let applicable =
                atom.terms.iter().enumerate().filter(|(j, _)| !pi_r.contains(&(j + 1))).all(
                    |(_, t)| matches!(t, Term::Var(v) if occurrences[v.as_str()] == 1 && !head.contains(v.as_str())),
                );
            if !applicable {
                continue;
            }
            let mut fresh = 0;
            let mut fresh_var = || loop {
                fresh += 1;
                let name = format!("V{fresh}");
                if !used.contains(name.as_str()) {
                    return Term::Var(name);
                }
            };
            let terms: Vec<Term> = (1..=d.lhs.arity())
                .map(|i| match pairs.iter().find(|&&(l, _)| l == i) {
                    Some(&(_, j)) => atom.terms[j - 1].clone(),
                    None => fresh_var(),
                })
                .collect();
            let mut atoms = cq.atoms.clone();
            atoms[k] = Atom::new(d.lhs.relation.clone(), terms);
            let mut dedup: Vec<Atom> = Vec::new();
            for a in atoms {
                if !dedup.contains(&a) {
                    dedup.push(a);
                }
            }
            out.push(Conjunction::new(cq.head.clone(), dedup, Vec::new()));
        }
    }
    out
}

type CanonicalCq = (Vec<Term>, Vec<Atom>);

/// Representative of a conjunction up to variable renaming and atom order:
/// head variables become `H1..` in head order, body variables `B1..` in order
/// of first occurrence. Up to six atoms the minimum over all atom orders is
/// taken, which makes the form exact; beyond that atoms are pre-sorted by a
/// name-independent shape first.
fn canonical(cq: &Conjunction) -> CanonicalCq {
    let mut head_names: BTreeMap<&str, String> = BTreeMap::new();
    let head: Vec<Term> = cq
        .head
        .iter()
        .map(|t| match t {
            Term::Var(v) => {
                let n = head_names.len() + 1;
                Term::Var(head_names.entry(v.as_str()).or_insert_with(|| format!("H{n}")).clone())
            }
            Term::Const(_) => t.clone(),
        })
        .collect();
    let rename = |order: &[&Atom]| -> Vec<Atom> {
        let mut names: HashMap<&str, String> = HashMap::new();
        order
            .iter()
            .map(|a| {
                let terms = a
                    .terms
                    .iter()
                    .map(|t| match t {
                        Term::Var(v) => match head_names.get(v.as_str()) {
                            Some(h) => Term::Var(h.clone()),
                            None => {
                                let n = names.len() + 1;
                                Term::Var(names.entry(v.as_str()).or_insert_with(|| format!("B{n}")).clone())
                            }
                        },
                        Term::Const(_) => t.clone(),
                    })
                    .collect();
                Atom::new(a.relation.clone(), terms)
            })
            .collect()
    };
    let mut atoms: Vec<&Atom> = cq.atoms.iter().collect();
    let best = if atoms.len() <= 6 {
        let mut best: Option<Vec<Atom>> = None;
        permute(&mut atoms, 0, &mut |order| {
            let r = rename(order);
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        });
        best.unwrap_or_default()
    } else {
        let shape = |a: &Atom| -> (String, Vec<Option<Term>>) {
            let terms = a
                .terms
                .iter()
                .map(|t| match t {
                    Term::Var(v) => head_names.get(v.as_str()).map(|h| Term::Var(h.clone())),
                    Term::Const(_) => Some(t.clone()),
                })
                .collect();
            (a.relation.clone(), terms)
        };
        atoms.sort_by_key(|a| shape(a));
        rename(&atoms)
    };
    (head, best)
}

fn permute<'a, F: FnMut(&[&'a Atom])>(items: &mut Vec<&'a Atom>, k: usize, f: &mut F) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}
