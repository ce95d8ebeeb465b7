use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::ControlFlow;

use crate::model::{for_each_match, Atom, Binding, Comparison, Database, Fact, FactIndex, Term};
use crate::program::{AspProgram, CountAgg, Literal};

use super::AspError;

pub type AtomId = usize;

/// `#count{..} = #count{..}` after instantiation: each side lists its
/// elements, an element being true when any of its atoms is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundCount {
    pub left: Vec<Vec<AtomId>>,
    pub right: Vec<Vec<AtomId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundRule {
    pub head: Vec<AtomId>,
    pub pos: Vec<AtomId>,
    pub neg: Vec<AtomId>,
    pub counts: Vec<GroundCount>,
}

impl GroundRule {
    pub(crate) fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.head
            .iter()
            .chain(&self.pos)
            .chain(&self.neg)
            .chain(self.counts.iter().flat_map(|c| c.left.iter().chain(&c.right).flatten()))
            .copied()
    }
}

/// Ground rules over an interned Herbrand base. Atoms that cannot be
/// derived are left out of the base; negations of them are dropped and
/// positive occurrences discard the rule instance.
#[derive(Clone, Debug, Default)]
pub struct GroundProgram {
    atoms: Vec<Fact>,
    ids: HashMap<Fact, AtomId>,
    pub rules: Vec<GroundRule>,
}

impl GroundProgram {
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, id: AtomId) -> &Fact {
        &self.atoms[id]
    }

    pub fn id(&self, fact: &Fact) -> Option<AtomId> {
        self.ids.get(fact).copied()
    }

    fn intern(&mut self, fact: Fact) -> AtomId {
        if let Some(&id) = self.ids.get(&fact) {
            return id;
        }
        let id = self.atoms.len();
        self.ids.insert(fact.clone(), id);
        self.atoms.push(fact);
        id
    }
}

fn instantiate(atom: &Atom, binding: &Binding) -> Fact {
    let tuple = atom
        .terms
        .iter()
        .map(|t| t.resolve(binding).cloned().expect("grounding binds every variable of a safe rule"))
        .collect();
    Fact::new(atom.relation.clone(), tuple)
}

/// Substitutes the bound variables of `atom`, leaving the others.
fn partially(atom: &Atom, binding: &Binding) -> Atom {
    let terms = atom
        .terms
        .iter()
        .map(|t| match t {
            Term::Var(v) => binding.get(v).map(|c| Term::Const(c.clone())).unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        })
        .collect();
    Atom::new(atom.relation.clone(), terms)
}

struct Split<'r> {
    pos: Vec<Atom>,
    cmps: Vec<Comparison>,
    neg: Vec<&'r Atom>,
    counts: Vec<(&'r CountAgg, &'r CountAgg)>,
}

fn split(body: &[Literal]) -> Split<'_> {
    let mut s = Split { pos: Vec::new(), cmps: Vec::new(), neg: Vec::new(), counts: Vec::new() };
    for l in body {
        match l {
            Literal::Pos(a) => s.pos.push(a.clone()),
            Literal::Neg(a) => s.neg.push(a),
            Literal::Cmp(c) => s.cmps.push(c.clone()),
            Literal::CountEq(l, r) => s.counts.push((l, r)),
        }
    }
    s
}

/// Instantiates `program` over `facts`. The base is the closure of the facts
/// under the rules read positively; it may hold at most `cap` atoms.
pub fn ground(program: &AspProgram, facts: &Database, cap: usize) -> Result<GroundProgram, AspError> {
    if let Some((rule, var)) = program.unsafe_rule() {
        return Err(AspError::Unsafe { rule: rule.to_string(), var: var.to_string() });
    }
    let splits: Vec<Split> = program.rules.iter().map(|r| split(&r.body)).collect();

    let mut possible: BTreeSet<Fact> = facts.iter().cloned().collect();
    if possible.len() > cap {
        return Err(AspError::CapExceeded { cap });
    }
    loop {
        let index = FactIndex::from_facts(possible.iter());
        let mut fresh: Vec<Fact> = Vec::new();
        for (rule, s) in program.rules.iter().zip(&splits) {
            let _ = for_each_match(&s.pos, &s.cmps, &index, &mut |b, _| {
                for h in &rule.head {
                    let f = instantiate(h, b);
                    if !possible.contains(&f) {
                        fresh.push(f);
                    }
                }
                ControlFlow::Continue(())
            });
        }
        if fresh.is_empty() {
            break;
        }
        possible.extend(fresh);
        if possible.len() > cap {
            return Err(AspError::CapExceeded { cap });
        }
    }

    let mut gp = GroundProgram::default();
    for f in &possible {
        gp.intern(f.clone());
    }
    for f in facts.iter() {
        let id = gp.ids[f];
        gp.rules.push(GroundRule { head: vec![id], pos: Vec::new(), neg: Vec::new(), counts: Vec::new() });
    }
    let index = FactIndex::from_facts(possible.iter());
    for (rule, s) in program.rules.iter().zip(&splits) {
        let mut instances = Vec::new();
        let _ = for_each_match(&s.pos, &s.cmps, &index, &mut |b, _| {
            instances.push(b.clone());
            ControlFlow::Continue(())
        });
        for b in instances {
            let head = rule.head.iter().map(|h| gp.ids[&instantiate(h, &b)]).collect();
            let pos = s.pos.iter().map(|a| gp.ids[&instantiate(a, &b)]).collect();
            let neg = s.neg.iter().filter_map(|a| gp.ids.get(&instantiate(a, &b)).copied()).collect();
            let counts = s
                .counts
                .iter()
                .map(|(l, r)| GroundCount { left: elements(l, &b, &index, &gp), right: elements(r, &b, &index, &gp) })
                .collect();
            gp.rules.push(GroundRule { head, pos, neg, counts });
        }
    }
    Ok(gp)
}

/// The elements of `#count{vars : atom}` under `binding`: one per value
/// tuple of `vars`, holding the base atoms that witness it.
fn elements(agg: &CountAgg, binding: &Binding, index: &FactIndex, gp: &GroundProgram) -> Vec<Vec<AtomId>> {
    let atom = partially(&agg.atom, binding);
    let mut groups: BTreeMap<Vec<crate::model::Constant>, Vec<AtomId>> = BTreeMap::new();
    let _ = for_each_match(std::slice::from_ref(&atom), &[], index, &mut |b, _| {
        let key = agg.vars.iter().map(|v| b.get(v).or_else(|| binding.get(v)).cloned().expect("bound")).collect();
        groups.entry(key).or_default().push(gp.ids[&instantiate(&atom, b)]);
        ControlFlow::Continue(())
    });
    groups.into_values().collect()
}
