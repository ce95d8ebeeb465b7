use std::collections::BTreeSet;

use crate::model::{classify_ind, Constant, Database, Fact, Schema};

use super::OracleError;

/// The representative database `D*` and its fresh nulls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetsDatabase {
    pub base: Database,
    pub nulls: BTreeSet<Constant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RetsSize {
    pub nulls_count: usize,
    pub facts_count: usize,
    /// `Σ_g (|vals(D)|+1)^arity(g)`.
    pub bound: u128,
    /// `Σ_g (arity−|key|)·n^|key|·(n+1)^(arity−|key|−1)`.
    pub nulls_formula: u128,
    /// `Σ_g n^|key|·(n+1)^(arity−|key|)`.
    pub facts_formula: u128,
}

/// The schema must contain keys and safe foreign superkeys only.
pub fn require_kd_sfsk(schema: &Schema) -> Result<(), OracleError> {
    if !schema.dcs().is_empty() {
        return Err(OracleError::NotKdSfsk("the schema has general denial constraints".into()));
    }
    for d in schema.inds() {
        let class = classify_ind(schema, d).map_err(|e| OracleError::NotKdSfsk(e.to_string()))?;
        if !class.is_sfsk() {
            return Err(OracleError::NotKdSfsk(format!("{d} is {class}, not a safe foreign superkey")));
        }
    }
    Ok(())
}

/// Every fact over `vals(D) ∪ {c}` whose key positions avoid `c`, with each
/// occurrence of `c` replaced by a distinct null `#e1, #e2, ...`. Nulls are
/// numbered by relation, then tuple, then position; `c` sorts after every
/// value of `vals(D)`.
pub fn build_rets(db: &Database, schema: &Schema) -> Result<RetsDatabase, OracleError> {
    require_kd_sfsk(schema)?;
    let vals: Vec<Constant> = db.values().into_iter().collect();
    let mut base = Database::new();
    let mut nulls = BTreeSet::new();
    for sig in schema.relations() {
        // Domain per position: indices into vals, with vals.len() standing for c.
        let domain: Vec<usize> =
            (1..=sig.arity).map(|p| if sig.key.contains(&p) { vals.len() } else { vals.len() + 1 }).collect();
        if domain.contains(&0) {
            continue;
        }
        let mut digits = vec![0usize; sig.arity];
        loop {
            let tuple = digits
                .iter()
                .map(|&d| {
                    if d < vals.len() {
                        vals[d].clone()
                    } else {
                        let null = Constant::null(nulls.len() + 1);
                        nulls.insert(null.clone());
                        null
                    }
                })
                .collect();
            base.insert(Fact::new(sig.name.clone(), tuple));
            // Odometer increment, last position fastest.
            let mut p = sig.arity;
            loop {
                if p == 0 {
                    break;
                }
                digits[p - 1] += 1;
                if digits[p - 1] < domain[p - 1] {
                    break;
                }
                digits[p - 1] = 0;
                p -= 1;
            }
            if p == 0 {
                break;
            }
        }
    }
    Ok(RetsDatabase { base, nulls })
}

/// Actual sizes of `D*` next to the closed-form counts.
pub fn rets_size_check(db: &Database, schema: &Schema) -> Result<RetsSize, OracleError> {
    let rets = build_rets(db, schema)?;
    let n = db.values().len() as u128;
    let (mut bound, mut nulls_formula, mut facts_formula) = (0u128, 0u128, 0u128);
    for sig in schema.relations() {
        let arity = sig.arity as u32;
        let k = sig.key.len() as u32;
        bound += (n + 1).pow(arity);
        facts_formula += n.pow(k) * (n + 1).pow(arity - k);
        if arity > k {
            nulls_formula += u128::from(arity - k) * n.pow(k) * (n + 1).pow(arity - k - 1);
        }
    }
    Ok(RetsSize { nulls_count: rets.nulls.len(), facts_count: rets.base.len(), bound, nulls_formula, facts_formula })
}

/// Lazy view of `D*`: the facts of one relation that agree with given values
/// on given positions, named exactly as `build_rets` names them.
pub(crate) struct RetsIndex<'a> {
    schema: &'a Schema,
    vals: Vec<Constant>,
    digit: std::collections::HashMap<Constant, usize>,
    offsets: std::collections::HashMap<String, u128>,
}

impl<'a> RetsIndex<'a> {
    pub(crate) fn new(db: &Database, schema: &'a Schema) -> Self {
        let vals: Vec<Constant> = db.values().into_iter().collect();
        let digit = vals.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let n = vals.len() as u128;
        let mut offsets = std::collections::HashMap::new();
        let mut acc = 0u128;
        for sig in schema.relations() {
            offsets.insert(sig.name.clone(), acc);
            let (a, k) = (sig.arity as u32, sig.key.len() as u32);
            if a > k && n > 0 {
                acc += u128::from(a - k) * n.pow(k) * (n + 1).pow(a - k - 1);
            }
        }
        RetsIndex { schema, vals, digit, offsets }
    }

    /// Facts of `relation` in `D*` with `fixed[p]` at each fixed position.
    /// Fixed values outside `vals(D)`, or missing key values, yield nothing.
    pub(crate) fn matching(&self, relation: &str, fixed: &[(usize, Constant)]) -> Vec<Fact> {
        let Some(sig) = self.schema.get(relation) else { return Vec::new() };
        let n = self.vals.len();
        let mut choices: Vec<Vec<usize>> = Vec::with_capacity(sig.arity);
        for p in 1..=sig.arity {
            match fixed.iter().find(|(q, _)| *q == p) {
                Some((_, v)) => match self.digit.get(v) {
                    Some(&d) => choices.push(vec![d]),
                    None => return Vec::new(),
                },
                None if sig.key.contains(&p) => choices.push((0..n).collect()),
                None => choices.push((0..=n).collect()),
            }
        }
        if choices.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; sig.arity];
        loop {
            let digits: Vec<usize> = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            out.push(self.fact(relation, &digits));
            let mut p = sig.arity;
            while p > 0 {
                pick[p - 1] += 1;
                if pick[p - 1] < choices[p - 1].len() {
                    break;
                }
                pick[p - 1] = 0;
                p -= 1;
            }
            if p == 0 {
                break;
            }
        }
        out
    }

    /// The fact with the given digits (`n` meaning the null marker), with
    /// nulls numbered as in the odometer enumeration of `build_rets`.
    fn fact(&self, relation: &str, digits: &[usize]) -> Fact {
        let sig = self.schema.get(relation).expect("known relation");
        let n = self.vals.len() as u128;
        let nonkey = |p: usize| !sig.key.contains(&p);
        let size = |p: usize| if nonkey(p) { n + 1 } else { n };
        let mut before = 0u128;
        let mut c_prefix = 0u128;
        for p in 1..=sig.arity {
            let d = digits[p - 1] as u128;
            let after: Vec<usize> = (p + 1..=sig.arity).collect();
            let width: u128 = after.iter().map(|&q| size(q)).product();
            let nk_after = after.iter().filter(|&&q| nonkey(q)).count() as u32;
            let k_after = after.len() as u32 - nk_after;
            let c_within =
                if nk_after == 0 { 0 } else { u128::from(nk_after) * (n + 1).pow(nk_after - 1) * n.pow(k_after) };
            before += d * (c_prefix * width + c_within);
            if nonkey(p) && digits[p - 1] == self.vals.len() {
                c_prefix += 1;
            }
        }
        let offset = self.offsets[relation];
        let mut seen = 0u128;
        let tuple = digits
            .iter()
            .map(|&d| {
                if d < self.vals.len() {
                    self.vals[d].clone()
                } else {
                    seen += 1;
                    Constant::null((offset + before + seen) as usize)
                }
            })
            .collect();
        Fact::new(relation, tuple)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_schema, SourceText};

    #[test]
    fn p2_example() {
        let schema = parse_schema(&SourceText::inline("rel p/2. key p = {1}.")).unwrap();
        let db: Database =
            [Fact::parse_args("p", &["1", "2"]), Fact::parse_args("p", &["2", "1"])].into_iter().collect();
        let rets = build_rets(&db, &schema).unwrap();
        let listed: Vec<String> = rets.base.iter().map(ToString::to_string).collect();
        assert_eq!(listed, ["p(1,1)", "p(1,2)", "p(1,#e1)", "p(2,1)", "p(2,2)", "p(2,#e2)"]);
        let size = rets_size_check(&db, &schema).unwrap();
        assert_eq!((size.nulls_count, size.facts_count, size.bound), (2, 6, 9));
        assert_eq!(size.nulls_formula, 2);
    }

    #[test]
    fn empty_database() {
        let schema = parse_schema(&SourceText::inline("rel p/2. key p = {1}.")).unwrap();
        let size = rets_size_check(&Database::new(), &schema).unwrap();
        assert_eq!((size.nulls_count, size.facts_count), (0, 0));
    }

    #[test]
    fn rejects_unsafe_inds() {
        let schema = parse_schema(&SourceText::inline(
            "rel r1/3. rel r2/3. key r1 = {1,2}. key r2 = {3}. r1(X1,X3,X2) -> r2(X4,X2,X1).",
        ))
        .unwrap();
        assert!(matches!(build_rets(&Database::new(), &schema), Err(OracleError::NotKdSfsk(_))));
    }
}
