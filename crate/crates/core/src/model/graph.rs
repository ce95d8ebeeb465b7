use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::schema::Schema;

/// Directed graph over relation names with an edge `r1 -> r2` per IND
/// `r1 ⊆ r2`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndGraph {
    pub edges: BTreeMap<String, BTreeSet<String>>,
}

impl IndGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(BTreeSet::len).sum()
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.get(from).is_some_and(|s| s.contains(to))
    }

    /// Strongly connected components that contain a cycle.
    pub fn cycles(&self) -> Vec<BTreeSet<String>> {
        cyclic_components(&self.edges)
    }

    pub fn is_cyclic(&self) -> bool {
        !self.cycles().is_empty()
    }
}

pub fn ind_dependency_graph(schema: &Schema) -> IndGraph {
    let mut edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for d in schema.inds() {
        edges.entry(d.lhs.relation.clone()).or_default().insert(d.rhs.relation.clone());
    }
    IndGraph { edges }
}

/// SCCs with more than one node or a self-loop, each as a sorted node set,
/// listed in sorted order.
pub fn cyclic_components(edges: &BTreeMap<String, BTreeSet<String>>) -> Vec<BTreeSet<String>> {
    let mut g: DiGraph<&str, ()> = DiGraph::new();
    let mut ids = BTreeMap::new();
    let names = edges.iter().flat_map(|(k, vs)| std::iter::once(k).chain(vs.iter()));
    for n in names {
        ids.entry(n.as_str()).or_insert_with(|| g.add_node(n.as_str()));
    }
    for (from, tos) in edges {
        for to in tos {
            g.add_edge(ids[from.as_str()], ids[to.as_str()], ());
        }
    }
    let mut out: Vec<BTreeSet<String>> = tarjan_scc(&g)
        .into_iter()
        .filter(|scc| scc.len() > 1 || g.contains_edge(scc[0], scc[0]))
        .map(|scc| scc.into_iter().map(|n| g[n].to_string()).collect())
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(edges: &[(&str, &str)]) -> BTreeMap<String, BTreeSet<String>> {
        let mut m: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (a, b) in edges {
            m.entry(a.to_string()).or_default().insert(b.to_string());
        }
        m
    }

    #[test]
    fn acyclic_has_no_components() {
        assert!(cyclic_components(&graph(&[("r1", "r2"), ("r1", "r3")])).is_empty());
    }

    #[test]
    fn two_cycle_and_self_loop() {
        let cycles = cyclic_components(&graph(&[("r1", "r2"), ("r2", "r1"), ("r3", "r3"), ("r1", "r4")]));
        assert_eq!(
            cycles,
            vec![BTreeSet::from(["r1".to_string(), "r2".to_string()]), BTreeSet::from(["r3".to_string()]),]
        );
    }
}
