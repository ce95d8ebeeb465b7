//! Answer sets of ground programs: a backtracking search over supported
//! models with unit propagation, each candidate then checked for
//! minimality against its FLP reduct.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::ground::{AtomId, GroundCount, GroundProgram, GroundRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    Unknown,
    True,
    False,
}

struct Engine<'p> {
    rules: Vec<&'p GroundRule>,
    occ: Vec<Vec<usize>>,
    heads: Vec<Vec<usize>>,
    vals: Vec<Val>,
    trail: Vec<AtomId>,
    qhead: usize,
    /// Atoms that must not all be true.
    not_all: Vec<AtomId>,
    in_not_all: Vec<bool>,
    supported: bool,
}

fn count_side(vals: &[Val], side: &[Vec<AtomId>]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for el in side {
        if el.iter().any(|&a| vals[a] == Val::True) {
            lo += 1;
            hi += 1;
        } else if el.iter().any(|&a| vals[a] == Val::Unknown) {
            hi += 1;
        }
    }
    (lo, hi)
}

fn count_val(vals: &[Val], c: &GroundCount) -> Val {
    let (llo, lhi) = count_side(vals, &c.left);
    let (rlo, rhi) = count_side(vals, &c.right);
    if lhi < rlo || rhi < llo {
        Val::False
    } else if llo == lhi && rlo == rhi {
        Val::True
    } else {
        Val::Unknown
    }
}

fn body_val(vals: &[Val], r: &GroundRule) -> Val {
    let mut unknown = false;
    for &a in &r.pos {
        match vals[a] {
            Val::False => return Val::False,
            Val::Unknown => unknown = true,
            Val::True => {}
        }
    }
    for &a in &r.neg {
        match vals[a] {
            Val::True => return Val::False,
            Val::Unknown => unknown = true,
            Val::False => {}
        }
    }
    for c in &r.counts {
        match count_val(vals, c) {
            Val::False => return Val::False,
            Val::Unknown => unknown = true,
            Val::True => {}
        }
    }
    if unknown {
        Val::Unknown
    } else {
        Val::True
    }
}

impl<'p> Engine<'p> {
    fn new(n: usize, rules: Vec<&'p GroundRule>, supported: bool) -> Self {
        let mut occ = vec![Vec::new(); n];
        let mut heads = vec![Vec::new(); n];
        for (i, r) in rules.iter().enumerate() {
            let mut atoms: Vec<AtomId> = r.atoms().collect();
            atoms.sort_unstable();
            atoms.dedup();
            for a in atoms {
                occ[a].push(i);
            }
            for &h in &r.head {
                if heads[h].last() != Some(&i) {
                    heads[h].push(i);
                }
            }
        }
        Engine {
            rules,
            occ,
            heads,
            vals: vec![Val::Unknown; n],
            trail: Vec::new(),
            qhead: 0,
            not_all: Vec::new(),
            in_not_all: vec![false; n],
            supported,
        }
    }

    fn set_not_all(&mut self, atoms: Vec<AtomId>) {
        for &a in &atoms {
            self.in_not_all[a] = true;
        }
        self.not_all = atoms;
    }

    fn assign(&mut self, a: AtomId, v: Val) -> bool {
        match self.vals[a] {
            Val::Unknown => {
                self.vals[a] = v;
                self.trail.push(a);
                true
            }
            cur => cur == v,
        }
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let a = self.trail.pop().expect("non-empty trail");
            self.vals[a] = Val::Unknown;
        }
        self.qhead = self.qhead.min(len);
    }

    fn check_rule(&mut self, r: usize) -> bool {
        let rule = self.rules[r];
        let body = body_val(&self.vals, rule);
        if body == Val::False {
            return true;
        }
        let mut open = None;
        let mut open_count = 0;
        for &h in &rule.head {
            match self.vals[h] {
                Val::True => return true,
                Val::Unknown => {
                    open = Some(h);
                    open_count += 1;
                }
                Val::False => {}
            }
        }
        match (body, open_count) {
            (Val::True, 0) => false,
            (Val::True, 1) => self.assign(open.expect("one open head"), Val::True),
            (Val::Unknown, 0) => {
                // The body must fail; force its last undecided literal.
                let mut last = None;
                for &a in &rule.pos {
                    if self.vals[a] == Val::Unknown {
                        if last.is_some() {
                            return true;
                        }
                        last = Some((a, Val::False));
                    }
                }
                for &a in &rule.neg {
                    if self.vals[a] == Val::Unknown {
                        if last.is_some() {
                            return true;
                        }
                        last = Some((a, Val::True));
                    }
                }
                if rule.counts.iter().any(|c| count_val(&self.vals, c) == Val::Unknown) {
                    return true;
                }
                match last {
                    Some((a, v)) => self.assign(a, v),
                    None => true,
                }
            }
            _ => true,
        }
    }

    /// An atom can only be true if some rule with a possibly true body has
    /// it as the only true head atom.
    fn check_support(&mut self, a: AtomId) -> bool {
        if !self.supported || self.vals[a] == Val::False {
            return true;
        }
        let vals = &self.vals;
        let possible = self.heads[a].iter().any(|&r| {
            let rule = self.rules[r];
            rule.head.iter().all(|&h| h == a || vals[h] != Val::True) && body_val(vals, rule) != Val::False
        });
        if possible {
            true
        } else {
            self.assign(a, Val::False)
        }
    }

    fn check_not_all(&mut self) -> bool {
        if self.not_all.is_empty() {
            return true;
        }
        let mut open = None;
        for &a in &self.not_all {
            match self.vals[a] {
                Val::False => return true,
                Val::Unknown => {
                    if open.is_some() {
                        return true;
                    }
                    open = Some(a);
                }
                Val::True => {}
            }
        }
        match open {
            Some(a) => self.assign(a, Val::False),
            None => false,
        }
    }

    fn propagate_all(&mut self) -> bool {
        for r in 0..self.rules.len() {
            if !self.check_rule(r) {
                return false;
            }
        }
        for a in 0..self.vals.len() {
            if !self.check_support(a) {
                return false;
            }
        }
        self.check_not_all() && self.propagate()
    }

    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let a = self.trail[self.qhead];
            self.qhead += 1;
            if self.in_not_all[a] && !self.check_not_all() {
                return false;
            }
            if !self.check_support(a) {
                return false;
            }
            for i in 0..self.occ[a].len() {
                let r = self.occ[a][i];
                if !self.check_rule(r) {
                    return false;
                }
                if self.supported {
                    for j in 0..self.rules[r].head.len() {
                        let h = self.rules[r].head[j];
                        if !self.check_support(h) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Visits every total assignment satisfying the rules (and support,
    /// when enabled), false-first.
    fn search(&mut self, visit: &mut dyn FnMut(&[Val]) -> ControlFlow<()>) -> ControlFlow<()> {
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo(mark);
            return ControlFlow::Continue(());
        }
        let Some(a) = self.vals.iter().position(|v| *v == Val::Unknown) else {
            let flow = visit(&self.vals);
            self.undo(mark);
            return flow;
        };
        for v in [Val::False, Val::True] {
            let level = self.trail.len();
            self.assign(a, v);
            let flow = self.search(visit);
            self.undo(level);
            if flow.is_break() {
                self.undo(mark);
                return flow;
            }
        }
        self.undo(mark);
        ControlFlow::Continue(())
    }
}

fn to_model(vals: &[Val]) -> BTreeSet<AtomId> {
    vals.iter().enumerate().filter(|(_, v)| **v == Val::True).map(|(i, _)| i).collect()
}

/// True when no proper subset of `model` satisfies the rules whose bodies
/// `model` makes true.
pub(crate) fn is_minimal(gp: &GroundProgram, model: &BTreeSet<AtomId>) -> bool {
    if model.is_empty() {
        return true;
    }
    let full: Vec<Val> =
        (0..gp.atom_count()).map(|a| if model.contains(&a) { Val::True } else { Val::False }).collect();
    let reduct: Vec<&GroundRule> = gp.rules.iter().filter(|r| body_val(&full, r) == Val::True).collect();
    let mut engine = Engine::new(gp.atom_count(), reduct, false);
    for a in 0..gp.atom_count() {
        if !model.contains(&a) {
            engine.assign(a, Val::False);
        }
    }
    engine.set_not_all(model.iter().copied().collect());
    if !engine.propagate_all() {
        return true;
    }
    let mut smaller = false;
    let _ = engine.search(&mut |_| {
        smaller = true;
        ControlFlow::Break(())
    });
    !smaller
}

/// Visits the answer sets of `gp`, optionally only those in which not all
/// of `not_all` hold.
pub(crate) fn for_each_answer_set(
    gp: &GroundProgram,
    not_all: Option<Vec<AtomId>>,
    visit: &mut dyn FnMut(&BTreeSet<AtomId>) -> ControlFlow<()>,
) {
    let mut engine = Engine::new(gp.atom_count(), gp.rules.iter().collect(), true);
    if let Some(atoms) = not_all {
        if atoms.is_empty() {
            return;
        }
        engine.set_not_all(atoms);
    }
    if !engine.propagate_all() {
        return;
    }
    let _ = engine.search(&mut |vals| {
        let model = to_model(vals);
        if is_minimal(gp, &model) {
            visit(&model)
        } else {
            ControlFlow::Continue(())
        }
    });
}
