use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::model::{cyclic_components, Schema, UnionQuery};

use super::relevant_indices;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Node {
    Query,
    Rel(String),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Query => f.write_str("q"),
            Node::Rel(r) => f.write_str(r),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArcLabel {
    /// Index into `Schema::dcs()`.
    Dc(usize),
    /// Index into `Schema::inds()`.
    Ind(usize),
    Query,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Arc {
    pub from: Node,
    pub to: String,
    pub label: ArcLabel,
}

/// The graph of a query over the schema, restricted to the nodes reachable
/// from the query node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryGraph {
    pub arcs: BTreeSet<Arc>,
    /// Reachable relations on no cycle (the query node is implicit).
    pub cycle_free: BTreeSet<String>,
    /// Reachable relations on some cycle.
    pub non_cycle_free: BTreeSet<String>,
    pub pi_r: BTreeMap<String, BTreeSet<usize>>,
    /// `π_R ∪ key` when the only DCs on the relation are its key.
    pub pi_s: BTreeMap<String, Option<BTreeSet<usize>>>,
}

impl QueryGraph {
    pub fn nodes(&self) -> impl Iterator<Item = &String> {
        self.cycle_free.iter().chain(&self.non_cycle_free)
    }

    pub fn is_reachable(&self, g: &str) -> bool {
        self.cycle_free.contains(g) || self.non_cycle_free.contains(g)
    }

    /// Sources of arcs into `g`.
    pub fn predecessors<'a>(&'a self, g: &'a str) -> impl Iterator<Item = &'a Node> + 'a {
        self.arcs.iter().filter(move |a| a.to == g).map(|a| &a.from)
    }

    /// Indices of the INDs leaving `g`.
    pub fn outgoing_inds<'a>(&'a self, g: &'a str) -> impl Iterator<Item = usize> + 'a {
        self.arcs.iter().filter_map(move |a| match (&a.from, a.label) {
            (Node::Rel(r), ArcLabel::Ind(i)) if r == g => Some(i),
            _ => None,
        })
    }
}

/// True when the only DCs mentioning `g` are its key dependencies.
pub(crate) fn key_only(schema: &Schema, g: &str) -> bool {
    !schema.dcs().iter().any(|dc| dc.atoms.iter().any(|a| a.relation == g))
}

pub fn build_query_graph(schema: &Schema, q: &UnionQuery) -> QueryGraph {
    let mut all: BTreeSet<Arc> = BTreeSet::new();
    for g in q.relations() {
        all.insert(Arc { from: Node::Query, to: g.to_string(), label: ArcLabel::Query });
    }
    for (i, dc) in schema.dcs().iter().enumerate() {
        let rels = dc.relations();
        for a in &rels {
            for b in &rels {
                if a != b {
                    all.insert(Arc { from: Node::Rel(a.to_string()), to: b.to_string(), label: ArcLabel::Dc(i) });
                }
            }
        }
    }
    for (i, d) in schema.inds().iter().enumerate() {
        all.insert(Arc {
            from: Node::Rel(d.lhs.relation.clone()),
            to: d.rhs.relation.clone(),
            label: ArcLabel::Ind(i),
        });
    }

    let mut reachable: BTreeSet<String> = BTreeSet::new();
    let mut queue: VecDeque<Node> = VecDeque::from([Node::Query]);
    while let Some(n) = queue.pop_front() {
        for a in all.iter().filter(|a| a.from == n) {
            if reachable.insert(a.to.clone()) {
                queue.push_back(Node::Rel(a.to.clone()));
            }
        }
    }
    let arcs: BTreeSet<Arc> = all
        .into_iter()
        .filter(|a| match &a.from {
            Node::Query => true,
            Node::Rel(r) => reachable.contains(r),
        })
        .collect();

    let mut edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for a in &arcs {
        if let Node::Rel(r) = &a.from {
            edges.entry(r.clone()).or_default().insert(a.to.clone());
        }
    }
    let non_cycle_free: BTreeSet<String> = cyclic_components(&edges).into_iter().flatten().collect();
    let cycle_free: BTreeSet<String> = reachable.difference(&non_cycle_free).cloned().collect();

    let mut pi_r = BTreeMap::new();
    let mut pi_s = BTreeMap::new();
    for g in &reachable {
        let mut r = relevant_indices(q, g);
        for a in arcs.iter().filter(|a| &a.to == g) {
            if let ArcLabel::Ind(i) = a.label {
                r.extend(schema.inds()[i].pi_r());
            }
        }
        let s = key_only(schema, g).then(|| {
            let mut s = r.clone();
            s.extend(schema.key(g).into_iter().flatten().copied());
            s
        });
        pi_r.insert(g.clone(), r);
        pi_s.insert(g.clone(), s);
    }
    QueryGraph { arcs, cycle_free, non_cycle_free, pi_r, pi_s }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_query, parse_schema, SourceText};

    fn graph(schema: &str, q: &str) -> QueryGraph {
        build_query_graph(
            &parse_schema(&SourceText::inline(schema)).unwrap(),
            &parse_query(&SourceText::inline(q)).unwrap(),
        )
    }

    #[test]
    fn unreachable_nodes_discarded() {
        let g = graph(
            "rel e/2. key e = {1}. rel m/1. rel c/2. key c = {1}. m(X) -> e(X,_).",
            "q(Xc,Xn) :- c(Xc,Xn), e(Xc,Xn).",
        );
        assert_eq!(g.cycle_free, ["c", "e"].iter().map(|s| s.to_string()).collect());
        assert!(g.non_cycle_free.is_empty());
        assert!(!g.is_reachable("m"));
        assert_eq!(g.pi_r["e"], BTreeSet::from([1, 2]));
        assert_eq!(g.pi_s["e"], Some(BTreeSet::from([1, 2])));
    }

    #[test]
    fn no_constraints() {
        let g = graph("rel g/2.", "q(X) :- g(X,Y).");
        assert_eq!(g.arcs.len(), 1);
        assert!(g.non_cycle_free.is_empty());
    }

    #[test]
    fn cycles_and_dc_arcs() {
        let g =
            graph("rel r/2. rel s/2. rel t/1. r(X,Y) -> s(Y,_). s(X,Y) -> r(X,_). :- t(X), r(X,Y).", "q(X) :- t(X).");
        assert_eq!(g.non_cycle_free.len(), 3);
        assert_eq!(g.pi_s["t"], None);
        assert_eq!(g.pi_r["s"], BTreeSet::from([1]));
    }

    #[test]
    fn single_relation_dcs_make_no_cycle() {
        let g = graph("rel r/2. :- r(X,Y), r(Y,X), X < Y.", "q(X) :- r(X,Y).");
        assert!(g.non_cycle_free.is_empty());
    }
}
