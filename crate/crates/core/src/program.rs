//! Disjunctive logic programs with negation and count-equality aggregates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::model::{Atom, Comparison, Term};

/// `#count{vars : atom}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountAgg {
    pub vars: Vec<String>,
    pub atom: Atom,
}

impl fmt::Display for CountAgg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#count{{{} : {}}}", self.vars.join(","), self.atom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
    Cmp(Comparison),
    /// `#count{..} = #count{..}`.
    CountEq(CountAgg, CountAgg),
}

impl Literal {
    pub fn atom(&self) -> Option<&Atom> {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Neg(a) => write!(f, "not {a}"),
            Literal::Cmp(c) => write!(f, "{c}"),
            Literal::CountEq(l, r) => write!(f, "{l} = {r}"),
        }
    }
}

/// `h1 v ... v hk :- body.` An empty head is a constraint, an empty body a
/// fact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub head: Vec<Atom>,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn new(head: Vec<Atom>, body: Vec<Literal>) -> Self {
        Rule { head, body }
    }

    pub fn fact(atom: Atom) -> Self {
        Rule { head: vec![atom], body: Vec::new() }
    }

    pub fn positive_vars(&self) -> BTreeSet<&str> {
        self.body
            .iter()
            .filter_map(|l| match l {
                Literal::Pos(a) => Some(a),
                _ => None,
            })
            .flat_map(Atom::vars)
            .collect()
    }

    /// Every variable outside an aggregate must occur in a positive body
    /// atom. Aggregate-local variables are bound by their own atom.
    pub fn unsafe_var(&self) -> Option<&str> {
        let bound = self.positive_vars();
        let mut global: Vec<&str> = self.head.iter().flat_map(Atom::vars).collect();
        for l in &self.body {
            match l {
                Literal::Pos(_) => {}
                Literal::Neg(a) => global.extend(a.vars()),
                Literal::Cmp(c) => global.extend(c.vars()),
                Literal::CountEq(a, b) => {
                    for agg in [a, b] {
                        let local: BTreeSet<&str> = agg.vars.iter().map(String::as_str).collect();
                        if let Some(v) = local.iter().find(|v| !agg.atom.vars().any(|w| w == **v)) {
                            return Some(v);
                        }
                        global.extend(agg.atom.vars().filter(|v| !local.contains(v)));
                    }
                }
            }
        }
        global.into_iter().find(|v| !bound.contains(v))
    }

    /// The rule with variables renamed `V1, V2, ...` in order of first
    /// occurrence, and each aggregate's own variables `A1, A2, ...`, for
    /// comparisons that ignore variable names.
    pub fn canonical(&self) -> Rule {
        let mut names: HashMap<String, String> = HashMap::new();
        let mut rename = |v: &str| -> String {
            let n = names.len() + 1;
            names.entry(v.to_string()).or_insert_with(|| format!("V{n}")).clone()
        };
        let mut term = |t: &Term, local: &HashMap<&str, String>| match t {
            Term::Var(v) => Term::Var(local.get(v.as_str()).cloned().unwrap_or_else(|| rename(v))),
            Term::Const(_) => t.clone(),
        };
        let none = HashMap::new();
        let atom =
            |a: &Atom, local: &HashMap<&str, String>, term: &mut dyn FnMut(&Term, &HashMap<&str, String>) -> Term| {
                Atom::new(a.relation.clone(), a.terms.iter().map(|t| term(t, local)).collect())
            };
        let head = self.head.iter().map(|a| atom(a, &none, &mut term)).collect();
        let body = self
            .body
            .iter()
            .map(|l| match l {
                Literal::Pos(a) => Literal::Pos(atom(a, &none, &mut term)),
                Literal::Neg(a) => Literal::Neg(atom(a, &none, &mut term)),
                Literal::Cmp(c) => Literal::Cmp(Comparison::new(term(&c.left, &none), c.op, term(&c.right, &none))),
                Literal::CountEq(x, y) => {
                    let mut agg = |g: &CountAgg| {
                        let local: HashMap<&str, String> =
                            g.vars.iter().enumerate().map(|(i, v)| (v.as_str(), format!("A{}", i + 1))).collect();
                        CountAgg {
                            vars: g.vars.iter().map(|v| local[v.as_str()].clone()).collect(),
                            atom: atom(&g.atom, &local, &mut term),
                        }
                    };
                    let x = agg(x);
                    let y = agg(y);
                    Literal::CountEq(x, y)
                }
            })
            .collect();
        Rule { head, body }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self.head.iter().map(ToString::to_string).collect();
        let body: Vec<String> = self.body.iter().map(ToString::to_string).collect();
        match (head.is_empty(), body.is_empty()) {
            (_, true) => write!(f, "{}.", head.join(" v ")),
            (true, false) => write!(f, ":- {}.", body.join(", ")),
            (false, false) => write!(f, "{} :- {}.", head.join(" v "), body.join(", ")),
        }
    }
}

/// Name and arity of the predicate whose cautious consequences are asked.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueryPred {
    pub name: String,
    pub arity: usize,
}

impl fmt::Display for QueryPred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<Term> = (1..=self.arity).map(|i| Term::var(format!("X{i}"))).collect();
        write!(f, "{}?", Atom::new(self.name.clone(), args))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AspProgram {
    pub rules: Vec<Rule>,
    pub query: Option<QueryPred>,
}

impl AspProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    /// Rules sorted and deduplicated; this is the order `Display` emits.
    pub fn normalized(&self) -> AspProgram {
        let rules: BTreeSet<Rule> = self.rules.iter().cloned().collect();
        AspProgram { rules: rules.into_iter().collect(), query: self.query.clone() }
    }

    pub fn is_disjunctive(&self) -> bool {
        self.rules.iter().any(|r| r.head.len() > 1)
    }

    pub fn unsafe_rule(&self) -> Option<(&Rule, &str)> {
        self.rules.iter().find_map(|r| r.unsafe_var().map(|v| (r, v)))
    }

    /// Predicates occurring in some rule head.
    pub fn idb_predicates(&self) -> BTreeSet<&str> {
        self.rules.iter().flat_map(|r| r.head.iter().map(|a| a.relation.as_str())).collect()
    }

    /// True when no predicate depends on itself through negation or an
    /// aggregate.
    pub fn is_stratified(&self) -> bool {
        // Edge (head, body, negative?) for every dependency.
        let mut edges: BTreeMap<&str, BTreeSet<(&str, bool)>> = BTreeMap::new();
        for r in &self.rules {
            for h in &r.head {
                let e = edges.entry(h.relation.as_str()).or_default();
                for h2 in &r.head {
                    // Disjunctive heads depend on each other negatively.
                    if h2.relation != h.relation {
                        e.insert((h2.relation.as_str(), true));
                    }
                }
                for l in &r.body {
                    match l {
                        Literal::Pos(a) => {
                            e.insert((a.relation.as_str(), false));
                        }
                        Literal::Neg(a) => {
                            e.insert((a.relation.as_str(), true));
                        }
                        Literal::Cmp(_) => {}
                        Literal::CountEq(x, y) => {
                            e.insert((x.atom.relation.as_str(), true));
                            e.insert((y.atom.relation.as_str(), true));
                        }
                    }
                }
            }
        }
        let plain: BTreeMap<String, BTreeSet<String>> =
            edges.iter().map(|(k, vs)| (k.to_string(), vs.iter().map(|(v, _)| v.to_string()).collect())).collect();
        let components = crate::model::cyclic_components(&plain);
        let component_of = |p: &str| components.iter().position(|c| c.contains(p));
        edges.iter().all(|(from, tos)| {
            tos.iter().all(|(to, negative)| {
                !*negative || component_of(from).is_none() || component_of(from) != component_of(to)
            })
        })
    }
}

/// Rules in normalized order, then the query statement.
impl fmt::Display for AspProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.normalized().rules {
            writeln!(f, "{r}")?;
        }
        if let Some(q) = &self.query {
            writeln!(f, "{q}")?;
        }
        Ok(())
    }
}
