//! Random small instances shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cqa_core::model::{Database, Schema, UnionQuery};
use cqa_core::textio::{parse_facts, parse_query, parse_schema, SourceText};

pub struct Instance {
    pub schema: Schema,
    pub db: Database,
    pub query: UnionQuery,
    /// Schema, facts and query as text, for failure messages.
    pub text: String,
}

#[derive(Clone, Copy)]
pub struct Shape {
    pub relations: usize,
    pub max_arity: usize,
    pub max_inds: usize,
    pub general_dcs: bool,
    pub comparisons: bool,
    pub max_facts_per_relation: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            relations: 3,
            max_arity: 3,
            max_inds: 2,
            general_dcs: true,
            comparisons: true,
            max_facts_per_relation: 3,
        }
    }
}

const DOMAIN: [&str; 3] = ["a", "b", "c"];

pub fn random_instance(seed: u64, shape: Shape) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=shape.relations);
    let arities: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=shape.max_arity)).collect();
    let mut schema = String::new();
    for (i, a) in arities.iter().enumerate() {
        schema.push_str(&format!("rel r{i}/{a}.\n"));
        if *a > 1 && rng.gen_bool(0.7) {
            let k = rng.gen_range(1..*a);
            let mut pos: Vec<usize> = (1..=*a).collect();
            pos.shuffle(&mut rng);
            let mut key: Vec<usize> = pos[..k].to_vec();
            key.sort();
            schema.push_str(&key_decl(i, &key));
        }
    }
    for _ in 0..rng.gen_range(0..=shape.max_inds) {
        let l = rng.gen_range(0..n);
        let r = rng.gen_range(0..n);
        let shared = rng.gen_range(1..=arities[l].min(arities[r]));
        let mut lp: Vec<usize> = (0..arities[l]).collect();
        let mut rp: Vec<usize> = (0..arities[r]).collect();
        lp.shuffle(&mut rng);
        rp.shuffle(&mut rng);
        schema.push_str(&ind_decl(l, arities[l], &lp[..shared], r, arities[r], &rp[..shared]));
    }
    if shape.general_dcs && rng.gen_bool(0.3) {
        let vars = ["X", "Y", "Z"];
        let atoms: Vec<String> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let g = rng.gen_range(0..n);
                let args: Vec<&str> = (0..arities[g]).map(|_| *vars.choose(&mut rng).unwrap()).collect();
                format!("r{g}({})", args.join(","))
            })
            .collect();
        let used: Vec<&str> = vars.iter().copied().filter(|v| atoms.iter().any(|a| a.contains(v))).collect();
        let mut body = atoms.join(", ");
        if used.len() >= 2 && rng.gen_bool(0.6) {
            let op = ["!=", "<"].choose(&mut rng).unwrap();
            body.push_str(&format!(", {} {op} {}", used[0], used[1]));
        }
        schema.push_str(&format!(":- {body}.\n"));
    }
    let facts = random_facts(&mut rng, &arities, &DOMAIN, shape.max_facts_per_relation);
    let query = random_query(&mut rng, &arities, &DOMAIN, shape.comparisons);
    assemble(schema, facts, query)
}

/// Keys on every relation and only safe foreign superkeys: each IND covers
/// the whole key of its target and reads it from key positions of its source.
pub fn random_kd_sfsk_instance(seed: u64, max_facts_per_relation: usize) -> Instance {
    let domain = &DOMAIN[..2];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2usize;
    let arities: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let mut keys = Vec::new();
    let mut schema = String::new();
    for (i, a) in arities.iter().enumerate() {
        schema.push_str(&format!("rel r{i}/{a}.\n"));
        let mut pos: Vec<usize> = (0..*a).collect();
        pos.shuffle(&mut rng);
        let size = if *a > 1 && rng.gen_bool(0.5) { 1 } else { rng.gen_range(1..=*a) };
        let mut key = pos[..size].to_vec();
        key.sort();
        schema.push_str(&key_decl(i, &key.iter().map(|p| p + 1).collect::<Vec<_>>()));
        keys.push(key);
    }
    for _ in 0..rng.gen_range(1..=2) {
        let l = rng.gen_range(0..n);
        // Another relation when its key fits, else a self-IND.
        let r = if keys[1 - l].len() <= keys[l].len() { 1 - l } else { l };
        let mut rp = keys[r].clone();
        let mut extra: Vec<usize> = (0..arities[r]).filter(|p| !keys[r].contains(p)).collect();
        extra.shuffle(&mut rng);
        // Mostly proper superkeys when there is room, so not every IND is a foreign key.
        let room = keys[l].len() - keys[r].len();
        let take = if room > 0 && rng.gen_bool(0.7) { rng.gen_range(1..=room) } else { 0 };
        rp.extend(extra.into_iter().take(take));
        let mut lp = keys[l].clone();
        lp.shuffle(&mut rng);
        lp.truncate(rp.len());
        if l == r && lp == rp {
            continue;
        }
        schema.push_str(&ind_decl(l, arities[l], &lp, r, arities[r], &rp));
    }
    let facts = random_facts(&mut rng, &arities, domain, max_facts_per_relation);
    let query = random_query(&mut rng, &arities, domain, false);
    assemble(schema, facts, query)
}

fn key_decl(rel: usize, key: &[usize]) -> String {
    let key: Vec<String> = key.iter().map(ToString::to_string).collect();
    format!("key r{rel} = {{{}}}.\n", key.join(","))
}

/// `r{l}(X..) -> r{r}(..)` sharing the variable at `lp[k]` with `rp[k]`.
fn ind_decl(l: usize, l_arity: usize, lp: &[usize], r: usize, r_arity: usize, rp: &[usize]) -> String {
    let lhs: Vec<String> = (0..l_arity).map(|p| format!("X{p}")).collect();
    let mut rhs: Vec<String> = (0..r_arity).map(|p| format!("Z{p}")).collect();
    for (a, b) in lp.iter().zip(rp) {
        rhs[*b] = lhs[*a].clone();
    }
    format!("r{l}({}) -> r{r}({}).\n", lhs.join(","), rhs.join(","))
}

fn random_facts(rng: &mut ChaCha8Rng, arities: &[usize], domain: &[&str], max: usize) -> String {
    let mut facts = String::new();
    for (i, a) in arities.iter().enumerate() {
        for _ in 0..rng.gen_range(0..=max) {
            let args: Vec<&str> = (0..*a).map(|_| *domain.choose(rng).unwrap()).collect();
            facts.push_str(&format!("r{i}({}).\n", args.join(",")));
        }
    }
    facts
}

fn random_query(rng: &mut ChaCha8Rng, arities: &[usize], domain: &[&str], comparisons: bool) -> String {
    let vars = ["X", "Y", "Z", "W"];
    let head_arity = rng.gen_range(1..=2);
    let mut query = String::new();
    for _ in 0..rng.gen_range(1..=2) {
        let atoms: Vec<(usize, Vec<String>)> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let g = rng.gen_range(0..arities.len());
                let args = (0..arities[g])
                    .map(|_| {
                        if rng.gen_bool(0.15) {
                            domain.choose(rng).unwrap().to_string()
                        } else {
                            vars.choose(rng).unwrap().to_string()
                        }
                    })
                    .collect();
                (g, args)
            })
            .collect();
        let body_vars: Vec<String> = {
            let mut v: Vec<String> = atoms
                .iter()
                .flat_map(|(_, a)| a.iter().filter(|t| t.starts_with(char::is_uppercase)).cloned())
                .collect();
            v.sort();
            v.dedup();
            v
        };
        let head: Vec<String> =
            (0..head_arity).map(|_| body_vars.choose(rng).cloned().unwrap_or_else(|| domain[0].to_string())).collect();
        let mut body: Vec<String> = atoms.iter().map(|(g, a)| format!("r{g}({})", a.join(","))).collect();
        if comparisons && body_vars.len() >= 2 && rng.gen_bool(0.2) {
            body.push(format!("{} != {}", body_vars[0], body_vars[1]));
        }
        query.push_str(&format!("q({}) :- {}.\n", head.join(","), body.join(", ")));
    }
    query
}

fn assemble(schema: String, facts: String, query: String) -> Instance {
    let schema_v = parse_schema(&SourceText::inline(schema.clone())).expect("generated schema parses");
    let db = parse_facts(&SourceText::inline(facts.clone()), Some(&schema_v)).expect("generated facts parse");
    let q = parse_query(&SourceText::inline(query.clone())).expect("generated query parses");
    Instance { schema: schema_v, db, query: q, text: format!("{schema}---\n{facts}---\n{query}") }
}
