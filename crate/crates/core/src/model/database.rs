use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::value::{Constant, Tuple};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fact {
    pub relation: String,
    pub tuple: Tuple,
}

impl Fact {
    pub fn new(relation: impl Into<String>, tuple: Tuple) -> Self {
        Fact { relation: relation.into(), tuple }
    }

    /// Shorthand for `Fact::new(rel, tuple(&[..]))`.
    pub fn parse_args(relation: &str, values: &[&str]) -> Self {
        Fact::new(relation, values.iter().map(Constant::new).collect())
    }

    pub fn has_null(&self) -> bool {
        self.tuple.iter().any(Constant::is_null)
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.relation)?;
        if !self.tuple.is_empty() {
            f.write_str("(")?;
            for (i, v) in self.tuple.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A finite set of ground facts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Database {
    facts: BTreeSet<Fact>,
}

impl Database {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, fact: Fact) -> bool {
        self.facts.insert(fact)
    }

    pub fn remove(&mut self, fact: &Fact) -> bool {
        self.facts.remove(fact)
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.facts.contains(fact)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    pub fn facts(&self) -> &BTreeSet<Fact> {
        &self.facts
    }

    pub fn relation<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Tuple> + 'a {
        self.facts.iter().filter(move |f| f.relation == name).map(|f| &f.tuple)
    }

    /// Tuples grouped by relation name.
    pub fn by_relation(&self) -> BTreeMap<&str, Vec<&Tuple>> {
        let mut map: BTreeMap<&str, Vec<&Tuple>> = BTreeMap::new();
        for f in &self.facts {
            map.entry(f.relation.as_str()).or_default().push(&f.tuple);
        }
        map
    }

    /// `vals(D)`: every constant occurring in some fact.
    pub fn values(&self) -> BTreeSet<Constant> {
        self.facts.iter().flat_map(|f| f.tuple.iter().cloned()).collect()
    }

    pub fn union(&self, other: &Database) -> Database {
        self.facts.union(&other.facts).cloned().collect()
    }

    pub fn intersection(&self, other: &Database) -> Database {
        self.facts.intersection(&other.facts).cloned().collect()
    }

    pub fn difference(&self, other: &Database) -> Database {
        self.facts.difference(&other.facts).cloned().collect()
    }

    pub fn is_subset(&self, other: &Database) -> bool {
        self.facts.is_subset(&other.facts)
    }
}

impl FromIterator<Fact> for Database {
    fn from_iter<I: IntoIterator<Item = Fact>>(iter: I) -> Self {
        Database { facts: iter.into_iter().collect() }
    }
}

impl Extend<Fact> for Database {
    fn extend<I: IntoIterator<Item = Fact>>(&mut self, iter: I) {
        self.facts.extend(iter)
    }
}

impl<'a> IntoIterator for &'a Database {
    type Item = &'a Fact;
    type IntoIter = std::collections::btree_set::Iter<'a, Fact>;

    fn into_iter(self) -> Self::IntoIter {
        self.facts.iter()
    }
}

/// One fact per line, `rel(v1,...,vn).`, in sorted order.
impl fmt::Display for Database {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fact in &self.facts {
            writeln!(f, "{fact}.")?;
        }
        Ok(())
    }
}
