//! Reference enumeration straight from the definitions, for small bases.

use std::collections::BTreeSet;

use super::ground::{AtomId, GroundCount, GroundProgram, GroundRule};
use super::AspError;

/// Bases above this size are refused.
pub const EXHAUSTIVE_LIMIT: usize = 20;

fn count(model: &BTreeSet<AtomId>, side: &[Vec<AtomId>]) -> usize {
    side.iter().filter(|el| el.iter().any(|a| model.contains(a))).count()
}

fn count_holds(model: &BTreeSet<AtomId>, c: &GroundCount) -> bool {
    count(model, &c.left) == count(model, &c.right)
}

fn body(model: &BTreeSet<AtomId>, r: &GroundRule) -> bool {
    r.pos.iter().all(|a| model.contains(a))
        && r.neg.iter().all(|a| !model.contains(a))
        && r.counts.iter().all(|c| count_holds(model, c))
}

fn satisfies<'r>(model: &BTreeSet<AtomId>, rules: impl IntoIterator<Item = &'r GroundRule>) -> bool {
    rules.into_iter().all(|r| !body(model, r) || r.head.iter().any(|h| model.contains(h)))
}

/// Every interpretation that is a model and a minimal model of its FLP
/// reduct, checked over all subsets of the base.
pub fn answer_sets_exhaustive(gp: &GroundProgram) -> Result<Vec<BTreeSet<AtomId>>, AspError> {
    let n = gp.atom_count();
    if n > EXHAUSTIVE_LIMIT {
        return Err(AspError::CapExceeded { cap: EXHAUSTIVE_LIMIT });
    }
    let subset = |bits: u32| -> BTreeSet<AtomId> { (0..n).filter(|i| bits >> i & 1 == 1).collect() };
    let mut out = Vec::new();
    for bits in 0u32..(1 << n) {
        let m = subset(bits);
        if !satisfies(&m, &gp.rules) {
            continue;
        }
        let reduct: Vec<&GroundRule> = gp.rules.iter().filter(|r| body(&m, r)).collect();
        // Proper subsets of `bits`.
        let mut sub = bits;
        let mut minimal = true;
        while sub != 0 {
            sub = (sub - 1) & bits;
            if satisfies(&subset(sub), reduct.iter().copied()) {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(m);
        }
    }
    Ok(out)
}
