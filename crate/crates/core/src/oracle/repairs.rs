use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::model::{first_violation, ConstraintId, Database, Fact, Schema, Semantics};

use super::rets::{require_kd_sfsk, RetsIndex};
use super::OracleError;

/// Default bound on visited search states.
pub const DEFAULT_NODE_LIMIT: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchSpace {
    SubsetsOfD,
    SubsetsOfDStar,
}

impl fmt::Display for SearchSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchSpace::SubsetsOfD => "subsets of D",
            SearchSpace::SubsetsOfDStar => "subsets of D*",
        })
    }
}

/// The repairs of a database under one semantics, sorted.
///
/// Under loosely-sound semantics the members are answer-sufficient
/// representatives: for every maximal `B ∩ D`, the ⊆-minimal consistent
/// `B ⊆ D*` realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairSet {
    pub semantics: Semantics,
    pub repairs: Vec<Database>,
    pub search_space: SearchSpace,
}

/// Maximal consistent subsets of `db`.
pub fn enumerate_repairs_cm(db: &Database, schema: &Schema) -> Result<RepairSet, OracleError> {
    let mut search = Search::new(db, schema, None, DEFAULT_NODE_LIMIT);
    search.run()?;
    let repairs = search.finish(Semantics::CmComplete);
    Ok(RepairSet { semantics: Semantics::CmComplete, repairs, search_space: SearchSpace::SubsetsOfD })
}

/// Loosely-sound or loosely-exact repairs contained in `D*`; the schema must
/// have keys and safe foreign superkeys only.
pub fn enumerate_repairs_ls_le(db: &Database, schema: &Schema, semantics: Semantics) -> Result<RepairSet, OracleError> {
    enumerate_repairs_ls_le_limited(db, schema, semantics, DEFAULT_NODE_LIMIT)
}

pub fn enumerate_repairs_ls_le_limited(
    db: &Database,
    schema: &Schema,
    semantics: Semantics,
    node_limit: usize,
) -> Result<RepairSet, OracleError> {
    if semantics == Semantics::CmComplete {
        return enumerate_repairs_cm(db, schema);
    }
    require_kd_sfsk(schema)?;
    let rets = RetsIndex::new(db, schema);
    let mut search = Search::new(db, schema, Some(rets), node_limit);
    search.run()?;
    let repairs = search.finish(semantics);
    Ok(RepairSet { semantics, repairs, search_space: SearchSpace::SubsetsOfDStar })
}

/// Depth-first search over toggle sets `Δ`, with `B = D ⊖ Δ`. Each step
/// repairs one violation of `B`, either by deleting a fact of `D` or, when a
/// representative database is available, by inserting a supporting fact for
/// an unsatisfied IND. Every consistent `Δ*` has a consistent leaf `Δ ⊆ Δ*`.
struct Search<'a> {
    schema: &'a Schema,
    db: &'a Database,
    rets: Option<RetsIndex<'a>>,
    facts: Vec<Fact>,
    in_d: Vec<bool>,
    index_of: HashMap<Fact, usize>,
    supports: HashMap<(usize, Vec<crate::model::Constant>), Vec<usize>>,
    visited: HashSet<Vec<usize>>,
    leaves: Vec<BTreeSet<usize>>,
    node_limit: usize,
}

impl<'a> Search<'a> {
    fn new(db: &'a Database, schema: &'a Schema, rets: Option<RetsIndex<'a>>, node_limit: usize) -> Self {
        let facts: Vec<Fact> = db.iter().cloned().collect();
        let index_of = facts.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let in_d = vec![true; facts.len()];
        Search {
            schema,
            db,
            rets,
            facts,
            in_d,
            index_of,
            supports: HashMap::new(),
            visited: HashSet::new(),
            leaves: Vec::new(),
            node_limit,
        }
    }

    fn intern(&mut self, fact: Fact) -> usize {
        if let Some(&i) = self.index_of.get(&fact) {
            return i;
        }
        let i = self.facts.len();
        self.facts.push(fact.clone());
        self.in_d.push(false);
        self.index_of.insert(fact, i);
        i
    }

    fn database(&self, delta: &BTreeSet<usize>) -> Database {
        let mut b = Database::new();
        for (i, f) in self.facts.iter().enumerate() {
            if self.in_d[i] != delta.contains(&i) {
                b.insert(f.clone());
            }
        }
        b
    }

    fn run(&mut self) -> Result<(), OracleError> {
        let mut stack = vec![BTreeSet::new()];
        while let Some(delta) = stack.pop() {
            let key: Vec<usize> = delta.iter().copied().collect();
            if !self.visited.insert(key) {
                continue;
            }
            if self.visited.len() > self.node_limit {
                return Err(OracleError::SearchLimit(self.node_limit));
            }
            if self.leaves.iter().any(|l| l.is_subset(&delta)) {
                continue;
            }
            let b = self.database(&delta);
            let Some(v) = first_violation(&b, self.schema) else {
                self.leaves.push(delta);
                continue;
            };
            let mut children = Vec::new();
            match v.constraint {
                ConstraintId::Key(_) | ConstraintId::Dc(_) => {
                    for f in &v.facts {
                        let i = self.index_of[f];
                        if self.in_d[i] {
                            children.push(i);
                        }
                    }
                }
                ConstraintId::Ind(n) => {
                    let f = &v.facts[0];
                    let i = self.index_of[f];
                    if self.in_d[i] {
                        children.push(i);
                    }
                    if self.rets.is_some() {
                        children.extend(self.support_candidates(n, f));
                    }
                }
            }
            for c in children.into_iter().rev() {
                if !delta.contains(&c) {
                    let mut next = delta.clone();
                    next.insert(c);
                    stack.push(next);
                }
            }
        }
        Ok(())
    }

    /// Facts of `D* − D` that would satisfy IND number `n` for `f`.
    fn support_candidates(&mut self, n: usize, f: &Fact) -> Vec<usize> {
        let ind = &self.schema.inds()[n - 1];
        let pairs = ind.position_pairs();
        let values: Vec<_> = pairs.iter().map(|&(i, _)| f.tuple[i - 1].clone()).collect();
        let key = (n, values.clone());
        if let Some(c) = self.supports.get(&key) {
            return c.clone();
        }
        let fixed: Vec<_> = pairs.iter().map(|&(_, j)| j).zip(values).collect();
        let rets = self.rets.as_ref().expect("representative database");
        let candidates = rets.matching(&ind.rhs.relation, &fixed);
        let ids: Vec<usize> = candidates.into_iter().filter(|g| !self.db.contains(g)).map(|g| self.intern(g)).collect();
        self.supports.insert(key, ids.clone());
        ids
    }

    fn finish(&self, semantics: Semantics) -> Vec<Database> {
        let minimal = |sets: Vec<&BTreeSet<usize>>| -> Vec<BTreeSet<usize>> {
            sets.iter()
                .filter(|s| !sets.iter().any(|t| t.len() < s.len() && t.is_subset(s)))
                .map(|s| (*s).clone())
                .collect()
        };
        let chosen: Vec<BTreeSet<usize>> = match semantics {
            Semantics::CmComplete | Semantics::LooselyExact => minimal(self.leaves.iter().collect()),
            Semantics::LooselySound => {
                let deleted =
                    |d: &BTreeSet<usize>| -> BTreeSet<usize> { d.iter().copied().filter(|&i| self.in_d[i]).collect() };
                let mut groups: BTreeMap<BTreeSet<usize>, Vec<&BTreeSet<usize>>> = BTreeMap::new();
                for l in &self.leaves {
                    groups.entry(deleted(l)).or_default().push(l);
                }
                let keys: Vec<&BTreeSet<usize>> = groups.keys().collect();
                let best = minimal(keys);
                best.iter().flat_map(|k| minimal(groups[k].clone())).collect()
            }
        };
        let mut out: Vec<Database> = chosen.iter().map(|d| self.database(d)).collect();
        out.sort();
        out.dedup();
        out
    }
}
