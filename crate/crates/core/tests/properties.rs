mod common;

use std::collections::BTreeSet;

use common::{random_instance, random_kd_sfsk_instance, Shape};
use cqa_core::aspeval::{answer_sets, ground, GroundProgram, DEFAULT_GROUND_CAP};
use cqa_core::encode::encode_general;
use cqa_core::mapping::retrieve;
use cqa_core::model::{
    check_consistency, classify_ind, is_consistent, Conjunction, Database, Fact, Semantics, Term, UnionQuery,
};
use cqa_core::optimize::{le_equivalence_holds, relevant_indices};
use cqa_core::oracle::{consistent_answers, enumerate_repairs_cm, eval_ucq};
use cqa_core::rewrite::perfect_rewrite;
use cqa_core::textio::{emit_asp, parse_asp, parse_facts, parse_mapping, parse_schema, SourceText};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

/// True when `model` satisfies every ground rule.
fn is_model(gp: &GroundProgram, model: &BTreeSet<Fact>) -> bool {
    let holds = |a: &usize| model.contains(gp.atom(*a));
    let size = |side: &[Vec<usize>]| side.iter().filter(|e| e.iter().any(holds)).count();
    gp.rules.iter().all(|r| {
        let body = r.pos.iter().all(holds)
            && !r.neg.iter().any(holds)
            && r.counts.iter().all(|c| size(&c.left) == size(&c.right));
        !body || r.head.iter().any(holds)
    })
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn fk_implies_fsk(seed in any::<u64>()) {
        let inst = random_instance(seed, Shape::default());
        for d in inst.schema.inds() {
            let class = classify_ind(&inst.schema, d).unwrap();
            prop_assert!(!class.is_fk() || class.is_fsk(), "{d}: {class}");
            prop_assert!(!class.is_sfk() || class.is_sfsk(), "{d}: {class}");
        }
    }

    #[test]
    fn consistent_iff_own_cm_repair(seed in any::<u64>()) {
        let inst = random_instance(seed, Shape::default());
        let repairs = enumerate_repairs_cm(&inst.db, &inst.schema).unwrap().repairs;
        let alone = repairs.len() == 1 && repairs[0] == inst.db;
        prop_assert_eq!(check_consistency(&inst.db, &inst.schema).is_empty(), alone, "{}", inst.text);
    }

    #[test]
    fn subsets_of_consistent_databases_under_dcs_stay_consistent(seed in any::<u64>(), mask in any::<u64>()) {
        let inst = random_instance(seed, Shape { max_inds: 0, ..Shape::default() });
        let consistent = enumerate_repairs_cm(&inst.db, &inst.schema).unwrap().repairs.remove(0);
        prop_assert!(is_consistent(&consistent, &inst.schema));
        let subset: Database = consistent.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, f)| f.clone()).collect();
        prop_assert!(is_consistent(&subset, &inst.schema), "{}", inst.text);
    }

    #[test]
    fn general_program_round_trips_and_is_safe(seed in any::<u64>()) {
        let inst = random_instance(seed, Shape::default());
        for sem in Semantics::ALL {
            let Ok(p) = encode_general(&inst.schema, &inst.query, sem, Some(&inst.db)) else { continue };
            prop_assert!(p.unsafe_rule().is_none(), "{}", p);
            prop_assert_eq!(parse_asp(&SourceText::inline(emit_asp(&p))).unwrap(), p.normalized());
        }
    }

    #[test]
    fn cm_answer_sets_are_the_repairs(seed in any::<u64>()) {
        let inst = random_instance(seed, Shape::default());
        let p = encode_general(&inst.schema, &inst.query, Semantics::CmComplete, None).unwrap();
        let gp = ground(&p, &inst.db, DEFAULT_GROUND_CAP).unwrap();
        let sets = answer_sets(&gp);
        for (i, m) in sets.iter().enumerate() {
            prop_assert!(is_model(&gp, m), "answer set {i} is not a model\n{}", inst.text);
            for (j, n) in sets.iter().enumerate() {
                prop_assert!(i == j || !m.is_subset(n), "answer sets {i} and {j} are nested\n{}", inst.text);
            }
        }
        let from_sets: BTreeSet<Database> = sets
            .iter()
            .map(|m| {
                m.iter()
                    .filter_map(|f| f.relation.strip_suffix("_r").filter(|g| inst.schema.get(g).is_some()).map(|g| Fact::new(g, f.tuple.clone())))
                    .collect()
            })
            .collect();
        let repairs: BTreeSet<Database> = enumerate_repairs_cm(&inst.db, &inst.schema).unwrap().repairs.into_iter().collect();
        prop_assert_eq!(sets.len(), repairs.len(), "{}", inst.text);
        prop_assert_eq!(from_sets, repairs, "{}", inst.text);
    }

    #[test]
    fn rewriting_keeps_the_original_disjuncts(seed in any::<u64>()) {
        let inst = random_instance(seed, Shape { comparisons: false, ..Shape::default() });
        let rewritten = perfect_rewrite(&inst.query, inst.schema.inds()).unwrap();
        prop_assert_eq!(&rewritten.disjuncts[0], &inst.query.disjuncts[0]);
        // Later input disjuncts may be dropped as renamings of kept ones.
        let all = eval_ucq(&inst.db, &rewritten);
        for d in &inst.query.disjuncts {
            let alone = UnionQuery::new(inst.query.name.clone(), inst.query.arity, vec![d.clone()]).unwrap();
            prop_assert!(rewritten.disjuncts.contains(d) || eval_ucq(&inst.db, &alone).is_subset(&all), "{}", inst.text);
        }
    }

    #[test]
    fn relevance_grows_with_the_output(seed in any::<u64>()) {
        let inst = random_instance(seed, Shape::default());
        let widened: Option<Vec<Conjunction>> = inst
            .query
            .disjuncts
            .iter()
            .map(|d| {
                let v = d.body_vars().into_iter().next()?.to_string();
                let mut d = d.clone();
                d.head.push(Term::var(v));
                Some(d)
            })
            .collect();
        prop_assume!(widened.is_some());
        let wide = UnionQuery::new(inst.query.name.clone(), inst.query.arity + 1, widened.unwrap()).unwrap();
        for sig in inst.schema.relations() {
            let (narrow, wide) = (relevant_indices(&inst.query, &sig.name), relevant_indices(&wide, &sig.name));
            prop_assert!(narrow.is_subset(&wide), "{}: {narrow:?} vs {wide:?}\n{}", sig.name, inst.text);
        }
    }

    #[test]
    fn le_gate_is_sound(seed in any::<u64>()) {
        let inst = random_kd_sfsk_instance(seed, 3);
        prop_assume!(le_equivalence_holds(&inst.schema, Some(&inst.db)).is_some());
        let le = consistent_answers(&inst.db, &inst.schema, &inst.query, Semantics::LooselyExact).unwrap();
        let cm = consistent_answers(&inst.db, &inst.schema, &inst.query, Semantics::CmComplete).unwrap();
        prop_assert_eq!(le, cm, "{}", inst.text);
    }

    #[test]
    fn retrieval_is_monotone_over_source_constants(mask in any::<u16>()) {
        let mapping = parse_mapping(&SourceText::inline(
            "rel emp/2. rel man/2. rel employee/3.
             e(Xc,Xn) :- emp(Xc,Xn). e(Xc,Xn) :- employee(Xc,Xn,_).
             m(Xc) :- man(Xc,_). m(Xc) :- employee(Xc,_,'manager').",
        )).unwrap();
        let sources = parse_facts(&SourceText::inline(
            "emp(e1,john). emp(e2,mary). emp(e3,willy). man(e1,john). man(e4,sue).
             employee(e1,ann,manager). employee(e2,mary,manager). employee(e3,rose,emp). employee(e5,tom,manager).",
        ), None).unwrap();
        let subset: Database = sources.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, f)| f.clone()).collect();
        let (small, full) = (retrieve(&mapping, &subset).unwrap(), retrieve(&mapping, &sources).unwrap());
        prop_assert!(small.is_subset(&full));
        prop_assert!(small.values().is_subset(&subset.values()));
    }

    #[test]
    fn parse_errors_carry_locations(junk in "[a-z(),.:\\- ]{1,30}") {
        if let Err(e) = parse_schema(&SourceText::inline(junk)) {
            prop_assert!(e.line >= 1 && e.column >= 1, "{e}");
        }
    }
}
