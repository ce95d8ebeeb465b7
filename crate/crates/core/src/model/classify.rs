use std::fmt;
use std::str::FromStr;

use super::graph::ind_dependency_graph;
use super::schema::{InclusionDependency, Schema, SchemaError};

/// The three repair semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Semantics {
    CmComplete,
    LooselySound,
    LooselyExact,
}

impl Semantics {
    pub const ALL: [Semantics; 3] = [Semantics::CmComplete, Semantics::LooselySound, Semantics::LooselyExact];

    pub fn short(self) -> &'static str {
        match self {
            Semantics::CmComplete => "cm",
            Semantics::LooselySound => "ls",
            Semantics::LooselyExact => "le",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::CmComplete => "CM-complete",
            Semantics::LooselySound => "loosely-sound",
            Semantics::LooselyExact => "loosely-exact",
        })
    }
}

impl FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cm" | "cm-complete" => Ok(Semantics::CmComplete),
            "ls" | "loosely-sound" => Ok(Semantics::LooselySound),
            "le" | "loosely-exact" => Ok(Semantics::LooselyExact),
            other => Err(format!("unknown semantics {other:?} (expected cm, ls or le)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndTag {
    /// `π_R = key(r2)`.
    Fk,
    /// `π_R ⊋ key(r2)`.
    FskNotFk,
    /// `π_R ⊉ key(r2)`.
    Nkc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndClass {
    pub tag: IndTag,
    /// `π_L ⊆ key(r1)`; only meaningful for foreign superkeys.
    pub safe: bool,
}

impl IndClass {
    pub fn is_fk(self) -> bool {
        self.tag == IndTag::Fk
    }

    pub fn is_fsk(self) -> bool {
        matches!(self.tag, IndTag::Fk | IndTag::FskNotFk)
    }

    /// Non-key-conflicting: `π_R` is not a strict superset of the key. Every
    /// FK is NKC.
    pub fn is_nkc(self) -> bool {
        matches!(self.tag, IndTag::Fk | IndTag::Nkc)
    }

    pub fn is_sfsk(self) -> bool {
        self.is_fsk() && self.safe
    }

    pub fn is_sfk(self) -> bool {
        self.is_fk() && self.safe
    }
}

impl fmt::Display for IndClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.tag, self.safe) {
            (IndTag::Fk, true) => f.write_str("FK, safe (SFK)"),
            (IndTag::Fk, false) => f.write_str("FK, unsafe"),
            (IndTag::FskNotFk, true) => f.write_str("FSK, safe (SFSK)"),
            (IndTag::FskNotFk, false) => f.write_str("FSK, unsafe"),
            (IndTag::Nkc, _) => f.write_str("NKC"),
        }
    }
}

pub fn classify_ind(schema: &Schema, d: &InclusionDependency) -> Result<IndClass, SchemaError> {
    let r1 = schema.relation(&d.lhs.relation)?;
    let r2 = schema.relation(&d.rhs.relation)?;
    let pi_r = d.pi_r();
    let tag = if pi_r == r2.key {
        IndTag::Fk
    } else if pi_r.is_superset(&r2.key) {
        IndTag::FskNotFk
    } else {
        IndTag::Nkc
    };
    let safe = tag != IndTag::Nkc && d.pi_l().is_subset(&r1.key);
    Ok(IndClass { tag, safe })
}

/// Rows of the complexity table, by constraint profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProfileRow {
    /// No denial constraints, any INDs.
    NoDcs,
    /// Keys, no INDs.
    KdOnly,
    /// Keys and NKC INDs.
    KdNkc,
    /// Keys and safe foreign superkeys.
    KdSfsk,
    /// Keys and arbitrary INDs.
    KdAny,
    /// General denial constraints, no INDs.
    DcsOnly,
    /// General denial constraints and INDs.
    AnyAny,
}

impl fmt::Display for ProfileRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileRow::NoDcs => "no DCs, any INDs",
            ProfileRow::KdOnly => "KDs, no INDs",
            ProfileRow::KdNkc => "KDs, NKC INDs",
            ProfileRow::KdSfsk => "KDs, SFSK INDs",
            ProfileRow::KdAny => "KDs, arbitrary INDs",
            ProfileRow::DcsOnly => "arbitrary DCs, no INDs",
            ProfileRow::AnyAny => "arbitrary DCs, arbitrary INDs",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateResult {
    Supported { row: ProfileRow, complexity: &'static str },
    Unsupported { row: ProfileRow, reason: String },
}

impl GateResult {
    pub fn is_supported(&self) -> bool {
        matches!(self, GateResult::Supported { .. })
    }

    pub fn row(&self) -> ProfileRow {
        match self {
            GateResult::Supported { row, .. } | GateResult::Unsupported { row, .. } => *row,
        }
    }
}

impl fmt::Display for GateResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateResult::Supported { row, complexity } => write!(f, "supported ({row}): {complexity}"),
            GateResult::Unsupported { row, reason } => write!(f, "unsupported ({row}): {reason}"),
        }
    }
}

/// The constraint profile of a schema.
pub fn profile_row(schema: &Schema) -> ProfileRow {
    let has_keys = schema.keyed_relations().next().is_some();
    let general = !schema.dcs().is_empty();
    let inds = schema.has_inds();
    if !has_keys && !general {
        return ProfileRow::NoDcs;
    }
    if general {
        return if inds { ProfileRow::AnyAny } else { ProfileRow::DcsOnly };
    }
    if !inds {
        return ProfileRow::KdOnly;
    }
    let classes: Vec<IndClass> =
        schema.inds().iter().map(|d| classify_ind(schema, d).expect("schema is well-formed")).collect();
    if classes.iter().all(|c| c.is_nkc()) {
        ProfileRow::KdNkc
    } else if classes.iter().all(|c| c.is_sfsk()) {
        ProfileRow::KdSfsk
    } else {
        ProfileRow::KdAny
    }
}

/// Data complexity verdict for CQA over the schema under `semantics`; the
/// CM-complete column distinguishes cyclic from acyclic INDs.
pub fn decidability_gate(schema: &Schema, semantics: Semantics) -> GateResult {
    let row = profile_row(schema);
    let cyclic = ind_dependency_graph(schema).is_cyclic();
    let cm = |cyc: &'static str, acyc: &'static str| if cyclic { cyc } else { acyc };
    let complexity = match (row, semantics) {
        (ProfileRow::NoDcs, _) => "in PTIME",
        (ProfileRow::KdOnly | ProfileRow::DcsOnly, _) => "coNP-complete",
        (ProfileRow::KdNkc, Semantics::LooselySound) => "coNP-complete",
        (ProfileRow::KdNkc, Semantics::LooselyExact) => "Pi2p-complete",
        (ProfileRow::KdSfsk, Semantics::LooselySound | Semantics::LooselyExact) => "in Pi2p",
        (ProfileRow::KdNkc | ProfileRow::KdSfsk | ProfileRow::KdAny, Semantics::CmComplete) => cm("in Pi2p", "in coNP"),
        (ProfileRow::AnyAny, Semantics::CmComplete) => cm("Pi2p-complete", "coNP-complete"),
        (ProfileRow::KdAny | ProfileRow::AnyAny, _) => {
            return GateResult::Unsupported {
                row,
                reason: format!("CQA is undecidable under {semantics} semantics for {row}"),
            }
        }
    };
    GateResult::Supported { row, complexity }
}
