use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use super::term::{Atom, CmpOp, Comparison, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("relation {0} is declared twice")]
    DuplicateRelation(String),
    #[error("relation {0} must have positive arity")]
    ZeroArity(String),
    #[error("undeclared relation {0}")]
    UndeclaredRelation(String),
    #[error("{relation} has arity {expected} but is used with {found} arguments")]
    ArityMismatch { relation: String, expected: usize, found: usize },
    #[error("key index {index} out of range for {relation}/{arity}")]
    KeyIndexOutOfRange { relation: String, index: usize, arity: usize },
    #[error("empty key for {0}")]
    EmptyKey(String),
    #[error("duplicate key declaration for {0}")]
    DuplicateKey(String),
    #[error("inclusion dependency {ind}: {reason}")]
    MalformedInd { ind: String, reason: String },
    #[error("denial constraint {dc}: variable {var} of a comparison does not occur in an atom")]
    UnsafeDc { dc: String, var: String },
    #[error("denial constraint without atoms")]
    EmptyDc,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationSig {
    pub name: String,
    pub arity: usize,
    /// 1-based key positions; all positions when no key was declared.
    pub key: BTreeSet<usize>,
    pub key_declared: bool,
}

impl RelationSig {
    /// True when the key constrains something, i.e. it is a proper subset of
    /// the attributes.
    pub fn has_proper_key(&self) -> bool {
        self.key.len() < self.arity
    }

    pub fn non_key_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.arity).filter(|i| !self.key.contains(i))
    }
}

/// `:- atoms, comparisons.`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DenialConstraint {
    pub atoms: Vec<Atom>,
    pub comparisons: Vec<Comparison>,
}

impl DenialConstraint {
    pub fn new(atoms: Vec<Atom>, comparisons: Vec<Comparison>) -> Self {
        DenialConstraint { atoms, comparisons }
    }

    pub fn relations(&self) -> BTreeSet<&str> {
        self.atoms.iter().map(|a| a.relation.as_str()).collect()
    }
}

impl fmt::Display for DenialConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(":- ")?;
        let parts = self
            .atoms
            .iter()
            .map(ToString::to_string)
            .chain(self.comparisons.iter().map(ToString::to_string))
            .collect::<Vec<_>>();
        write!(f, "{}.", parts.join(", "))
    }
}

/// `lhs -> rhs`: variables shared by both sides are universally quantified,
/// rhs-only variables are existential.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InclusionDependency {
    pub lhs: Atom,
    pub rhs: Atom,
}

impl InclusionDependency {
    pub fn new(lhs: Atom, rhs: Atom) -> Self {
        InclusionDependency { lhs, rhs }
    }

    /// Pairs `(i, j)` of 1-based positions with `lhs[i]` and `rhs[j]` the
    /// same shared variable, in lhs order.
    pub fn position_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (i, t) in self.lhs.terms.iter().enumerate() {
            if let Some(v) = t.as_var() {
                if let Some(j) = self.rhs.terms.iter().position(|u| u.as_var() == Some(v)) {
                    pairs.push((i + 1, j + 1));
                }
            }
        }
        pairs
    }

    pub fn pi_l(&self) -> BTreeSet<usize> {
        self.position_pairs().into_iter().map(|(i, _)| i).collect()
    }

    pub fn pi_r(&self) -> BTreeSet<usize> {
        self.position_pairs().into_iter().map(|(_, j)| j).collect()
    }

    /// Existentially quantified rhs positions.
    pub fn existential_positions(&self) -> BTreeSet<usize> {
        let pi_r = self.pi_r();
        (1..=self.rhs.arity()).filter(|j| !pi_r.contains(j)).collect()
    }
}

impl fmt::Display for InclusionDependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}.", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schema {
    relations: BTreeMap<String, RelationSig>,
    dcs: Vec<DenialConstraint>,
    inds: Vec<InclusionDependency>,
}

impl Schema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<(), SchemaError> {
        if self.relations.contains_key(name) {
            return Err(SchemaError::DuplicateRelation(name.to_string()));
        }
        if arity == 0 {
            return Err(SchemaError::ZeroArity(name.to_string()));
        }
        self.relations.insert(
            name.to_string(),
            RelationSig { name: name.to_string(), arity, key: (1..=arity).collect(), key_declared: false },
        );
        Ok(())
    }

    pub fn set_key(&mut self, name: &str, key: impl IntoIterator<Item = usize>) -> Result<(), SchemaError> {
        let sig = self.relations.get_mut(name).ok_or_else(|| SchemaError::UndeclaredRelation(name.to_string()))?;
        if sig.key_declared {
            return Err(SchemaError::DuplicateKey(name.to_string()));
        }
        let key: BTreeSet<usize> = key.into_iter().collect();
        if key.is_empty() {
            return Err(SchemaError::EmptyKey(name.to_string()));
        }
        if let Some(&index) = key.iter().find(|&&i| i == 0 || i > sig.arity) {
            return Err(SchemaError::KeyIndexOutOfRange { relation: name.to_string(), index, arity: sig.arity });
        }
        sig.key = key;
        sig.key_declared = true;
        Ok(())
    }

    pub fn add_dc(&mut self, dc: DenialConstraint) -> Result<(), SchemaError> {
        if dc.atoms.is_empty() {
            return Err(SchemaError::EmptyDc);
        }
        for a in &dc.atoms {
            self.check_atom(a)?;
        }
        let vars: HashSet<&str> = dc.atoms.iter().flat_map(Atom::vars).collect();
        for c in &dc.comparisons {
            if let Some(v) = c.vars().find(|v| !vars.contains(v)) {
                return Err(SchemaError::UnsafeDc { dc: dc.to_string(), var: v.to_string() });
            }
        }
        self.dcs.push(dc);
        Ok(())
    }

    pub fn add_ind(&mut self, ind: InclusionDependency) -> Result<(), SchemaError> {
        self.check_atom(&ind.lhs)?;
        self.check_atom(&ind.rhs)?;
        let malformed = |reason: &str| SchemaError::MalformedInd { ind: ind.to_string(), reason: reason.to_string() };
        for side in [&ind.lhs, &ind.rhs] {
            let mut seen = HashSet::new();
            for t in &side.terms {
                match t {
                    Term::Const(_) => return Err(malformed("constants are not allowed")),
                    Term::Var(v) => {
                        if !seen.insert(v.as_str()) {
                            return Err(malformed("repeated variable within one side"));
                        }
                    }
                }
            }
        }
        self.inds.push(ind);
        Ok(())
    }

    fn check_atom(&self, atom: &Atom) -> Result<(), SchemaError> {
        let sig = self.relation(&atom.relation)?;
        if sig.arity != atom.arity() {
            return Err(SchemaError::ArityMismatch {
                relation: atom.relation.clone(),
                expected: sig.arity,
                found: atom.arity(),
            });
        }
        Ok(())
    }

    pub fn relation(&self, name: &str) -> Result<&RelationSig, SchemaError> {
        self.relations.get(name).ok_or_else(|| SchemaError::UndeclaredRelation(name.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<&RelationSig> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = &RelationSig> {
        self.relations.values()
    }

    pub fn key(&self, name: &str) -> Option<&BTreeSet<usize>> {
        self.relations.get(name).map(|r| &r.key)
    }

    /// Relations whose declared key is a proper subset of their attributes.
    pub fn keyed_relations(&self) -> impl Iterator<Item = &RelationSig> {
        self.relations.values().filter(|r| r.has_proper_key())
    }

    /// General (non-key) denial constraints.
    pub fn dcs(&self) -> &[DenialConstraint] {
        &self.dcs
    }

    pub fn inds(&self) -> &[InclusionDependency] {
        &self.inds
    }

    pub fn has_inds(&self) -> bool {
        !self.inds.is_empty()
    }

    /// True when the only denial constraints are key dependencies.
    pub fn dcs_are_keys_only(&self) -> bool {
        self.dcs.is_empty()
    }

    pub fn has_dcs(&self) -> bool {
        !self.dcs.is_empty() || self.keyed_relations().next().is_some()
    }

    /// The key of `g` as denial constraints, one per non-key position `i`:
    /// `:- g(X1..Xn), g(Z1..Zn), Xi != Zi` where `Zk = Xk` on key positions
    /// and `Zk = Yk` elsewhere.
    pub fn key_dcs(&self, sig: &RelationSig) -> Vec<DenialConstraint> {
        let x: Vec<Term> = (1..=sig.arity).map(|k| Term::var(format!("X{k}"))).collect();
        let z: Vec<Term> = (1..=sig.arity)
            .map(|k| if sig.key.contains(&k) { Term::var(format!("X{k}")) } else { Term::var(format!("Y{k}")) })
            .collect();
        sig.non_key_positions()
            .map(|i| {
                DenialConstraint::new(
                    vec![Atom::new(sig.name.clone(), x.clone()), Atom::new(sig.name.clone(), z.clone())],
                    vec![Comparison::new(x[i - 1].clone(), CmpOp::Ne, z[i - 1].clone())],
                )
            })
            .collect()
    }

    /// The same relations and keys, without general DCs or INDs.
    pub fn keys_only(&self) -> Schema {
        Schema { relations: self.relations.clone(), dcs: Vec::new(), inds: Vec::new() }
    }

    /// The same schema without INDs.
    pub fn without_inds(&self) -> Schema {
        Schema { relations: self.relations.clone(), dcs: self.dcs.clone(), inds: Vec::new() }
    }

    /// Checks that every relation of `q` is declared with the arity used.
    pub fn check_query(&self, q: &crate::model::UnionQuery) -> Result<(), SchemaError> {
        for a in q.disjuncts.iter().flat_map(|d| &d.atoms) {
            self.check_atom(a)?;
        }
        Ok(())
    }

    /// Every denial constraint, keys expanded first (by relation name), then
    /// the general ones in declaration order.
    pub fn all_dcs(&self) -> Vec<DenialConstraint> {
        let mut out: Vec<DenialConstraint> = self.keyed_relations().flat_map(|r| self.key_dcs(r)).collect();
        out.extend(self.dcs.iter().cloned());
        out
    }
}

/// Declarations, keys, DCs and INDs in the schema text format.
impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.relations.values() {
            writeln!(f, "rel {}/{}.", r.name, r.arity)?;
        }
        for r in self.relations.values().filter(|r| r.key_declared) {
            let key: Vec<String> = r.key.iter().map(ToString::to_string).collect();
            writeln!(f, "key {} = {{{}}}.", r.name, key.join(","))?;
        }
        for dc in &self.dcs {
            writeln!(f, "{dc}")?;
        }
        for ind in &self.inds {
            writeln!(f, "{ind}")?;
        }
        Ok(())
    }
}
