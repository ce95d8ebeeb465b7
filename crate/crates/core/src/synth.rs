//! Synthetic instances over three 4-ary relations with key violations on
//! `r2`, key-conflicting twins in `r3` and optional IND violations.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Constant, Database, Fact, Schema, UnionQuery};
use crate::textio::{parse_query, parse_schema, SourceText};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndMode {
    None,
    Acyclic,
    Cyclic,
}

impl fmt::Display for IndMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndMode::None => "none",
            IndMode::Acyclic => "acyclic",
            IndMode::Cyclic => "cyclic",
        })
    }
}

impl FromStr for IndMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(IndMode::None),
            "acyclic" => Ok(IndMode::Acyclic),
            "cyclic" => Ok(IndMode::Cyclic),
            _ => Err(format!("unknown IND mode {s:?} (expected none, acyclic or cyclic)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchConfig {
    pub ind_mode: IndMode,
    /// Conflicting pairs injected into `r2`.
    pub key_violations: usize,
    /// Share of `r1` and `r3` tuples removed, 0 or 10.
    pub ind_removal_pct: u32,
    pub seed: u64,
    /// Key-consistent `r2` tuples before the violations.
    pub base_tuples: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { ind_mode: IndMode::Acyclic, key_violations: 2, ind_removal_pct: 0, seed: 0, base_tuples: 5 }
    }
}

const BASE_SCHEMA: &str = "rel r1/4. rel r2/4. rel r3/4. key r2 = {1,2}. key r3 = {1}.";
const ACYCLIC: &str = "r1(X1,X2,X3,X4) -> r2(X2,X5,X3,X6). r1(X1,X2,X3,X4) -> r3(X1,X5,X6,X7).";
const CYCLIC_EXTRA: &str = "r2(X1,X2,X3,X4) -> r1(X5,X6,X7,X2).";
const QUERY: &str = "query(X1,X3) :- r1(X1,X2,X3,X4), r2(X2,X3,X5,X6).";

pub fn bench_schema(mode: IndMode) -> Schema {
    let text = match mode {
        IndMode::None => BASE_SCHEMA.to_string(),
        IndMode::Acyclic => format!("{BASE_SCHEMA} {ACYCLIC}"),
        IndMode::Cyclic => format!("{BASE_SCHEMA} {ACYCLIC} {CYCLIC_EXTRA}"),
    };
    parse_schema(&SourceText::inline(text)).expect("fixed schema parses")
}

pub fn bench_query() -> UnionQuery {
    parse_query(&SourceText::inline(QUERY)).expect("fixed query parses")
}

fn fact(rel: &str, vals: [String; 4]) -> Fact {
    Fact::new(rel, vals.iter().map(Constant::new).collect())
}

/// Deterministic for a given config. `r2` is filled first, then `r1` and
/// `r3` take values from it so that every IND of the cyclic set holds
/// before the removal step.
pub fn gen_synthetic(config: &BenchConfig) -> (Schema, Database, UnionQuery) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let pool = config.base_tuples.max(3);
    let v = |rng: &mut ChaCha8Rng| format!("v{}", rng.gen_range(0..pool));

    let mut r2: Vec<[String; 4]> = Vec::new();
    let mut attempts = 0;
    while r2.len() < config.base_tuples && attempts < 100 * (config.base_tuples + 1) {
        attempts += 1;
        let t = [v(&mut rng), v(&mut rng), v(&mut rng), v(&mut rng)];
        if !r2.iter().any(|u| u[0] == t[0] && u[1] == t[1]) {
            r2.push(t);
        }
    }
    let mut injected = 0;
    let mut counter = 0;
    while injected < config.key_violations && !r2.is_empty() {
        let base = r2[rng.gen_range(0..config.base_tuples.min(r2.len()))].clone();
        counter += 1;
        let twin = [base[0].clone(), base[1].clone(), v(&mut rng), format!("w{counter}")];
        r2.push(twin);
        injected += 1;
    }

    let mut r1: Vec<[String; 4]> = Vec::new();
    for (i, t) in r2.iter().enumerate() {
        let row = [format!("k{i}"), t[0].clone(), t[2].clone(), t[1].clone()];
        if !r1.contains(&row) {
            r1.push(row);
        }
    }
    let mut r3: Vec<[String; 4]> = Vec::new();
    for (i, t) in r1.iter().enumerate() {
        r3.push([t[0].clone(), format!("s{i}"), v(&mut rng), v(&mut rng)]);
        r3.push([t[0].clone(), format!("t{i}"), v(&mut rng), v(&mut rng)]);
    }

    if config.ind_removal_pct > 0 {
        let share = |n: usize| (n * config.ind_removal_pct as usize).div_ceil(100);
        r1.shuffle(&mut rng);
        r1.truncate(r1.len() - share(r1.len()));
        // r3 loses whole key groups: dropping one twin alone breaks no IND.
        let mut keys: Vec<String> = r3.iter().map(|t| t[0].clone()).collect();
        keys.dedup();
        keys.shuffle(&mut rng);
        let dropped: Vec<String> = keys.iter().take(share(keys.len())).cloned().collect();
        r3.retain(|t| !dropped.contains(&t[0]));
    }

    let mut db = Database::new();
    for (name, rows) in [("r1", r1), ("r2", r2), ("r3", r3)] {
        for row in rows {
            db.insert(fact(name, row));
        }
    }
    (bench_schema(config.ind_mode), db, bench_query())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_consistency, ind_dependency_graph, ConstraintId};

    #[test]
    fn only_key_conflicts_without_removal() {
        let (schema, db, _) = gen_synthetic(&BenchConfig { ind_mode: IndMode::Cyclic, ..BenchConfig::default() });
        let violations = check_consistency(&db, &schema);
        assert!(!violations.is_empty());
        assert!(violations.iter().all(|v| matches!(v.constraint, ConstraintId::Key(_))));
        let r2 = violations.iter().filter(|v| v.constraint == ConstraintId::Key("r2".into())).count();
        assert_eq!(r2, 2);
    }

    #[test]
    fn cyclic_mode_has_the_r1_r2_cycle() {
        let (schema, _, _) = gen_synthetic(&BenchConfig { ind_mode: IndMode::Cyclic, ..BenchConfig::default() });
        let cycles = ind_dependency_graph(&schema).cycles();
        assert_eq!(cycles, vec![["r1", "r2"].iter().map(|s| s.to_string()).collect()]);
    }

    #[test]
    fn removal_breaks_inds() {
        let config = BenchConfig { ind_removal_pct: 10, base_tuples: 8, ..BenchConfig::default() };
        let (schema, db, _) = gen_synthetic(&config);
        let full = gen_synthetic(&BenchConfig { ind_removal_pct: 0, ..config }).1;
        assert!(db.len() < full.len());
        assert!(check_consistency(&db, &schema).iter().any(|v| matches!(v.constraint, ConstraintId::Ind(_))));
    }

    #[test]
    fn deterministic() {
        let c = BenchConfig { seed: 7, ..BenchConfig::default() };
        assert_eq!(gen_synthetic(&c).1.to_string(), gen_synthetic(&c).1.to_string());
    }
}
