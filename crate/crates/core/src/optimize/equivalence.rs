use std::fmt;

use crate::model::{classify_ind, is_consistent, Database, Schema};

/// Which sufficient condition makes loosely-exact answers coincide with
/// CM-complete answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeCase {
    /// (i) denial constraints only.
    DcsOnly,
    /// (ii) inclusion dependencies only.
    IndsOnly,
    /// (iii) keys and foreign keys, with a key-consistent database.
    KdFkConsistent,
    /// (iv) keys and safe foreign keys.
    KdSfk,
}

impl fmt::Display for LeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LeCase::DcsOnly => "(i) DCs only",
            LeCase::IndsOnly => "(ii) INDs only",
            LeCase::KdFkConsistent => "(iii) KDs and FKs, database consistent with the KDs",
            LeCase::KdSfk => "(iv) KDs and SFKs only",
        })
    }
}

/// The matched case, if any. Case (iii) needs the database; without one it
/// is never reported.
pub fn le_equivalence_holds(schema: &Schema, db: Option<&Database>) -> Option<LeCase> {
    if !schema.has_inds() {
        return Some(LeCase::DcsOnly);
    }
    if !schema.has_dcs() {
        return Some(LeCase::IndsOnly);
    }
    if !schema.dcs().is_empty() {
        return None;
    }
    let classes: Vec<_> = schema.inds().iter().map(|d| classify_ind(schema, d).expect("well-formed schema")).collect();
    if classes.iter().all(|c| c.is_sfk()) {
        return Some(LeCase::KdSfk);
    }
    if classes.iter().all(|c| c.is_fk()) {
        let db = db?;
        if is_consistent(db, &schema.keys_only()) {
            return Some(LeCase::KdFkConsistent);
        }
    }
    None
}
