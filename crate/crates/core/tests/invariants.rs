//! Property tests over seeds: determinism of the oracle suite, serialization round trips
//! and algebraic invariants of pp solution sets.

use catlogic::fincat::RawCategory;
use catlogic::gen;
use catlogic::limits::classify;
use catlogic::modpp::{pp_implies, pp_solution_set, pp_subgroup, small_modules, FiniteRing};
use catlogic::oracle::{oracle_suite, run_check, CHECK_IDS};
use catlogic::reglogic::{parse_theory, Sequent, Theory, Var};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CHEAP_CHECKS: [&str; 4] = ["exactness", "sheaf", "injectivity", "pp-implies"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reports_are_deterministic(seed in any::<u64>(), i in 0..CHEAP_CHECKS.len()) {
        let a = run_check(CHEAP_CHECKS[i], seed, 40).unwrap();
        let b = run_check(CHEAP_CHECKS[i], seed, 40).unwrap();
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn verdicts_do_not_depend_on_the_seed(seed in any::<u64>(), i in 0..CHEAP_CHECKS.len()) {
        let r = run_check(CHEAP_CHECKS[i], seed, 40).unwrap();
        prop_assert!(r.passed, "{} failed at seed {seed}: {:?}", r.id, r.failures);
        prop_assert_eq!(r.agreements, r.instances);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn category_json_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(c) = gen::random_concrete(&mut rng, 3, 8) {
            let raw = RawCategory::from(&c);
            let text = serde_json::to_string(&raw).unwrap();
            let back: RawCategory = serde_json::from_str(&text).unwrap();
            let d = back.build().unwrap();
            prop_assert_eq!(d.tables(), c.tables());
            let (k, l) = (classify(&c), classify(&d));
            prop_assert_eq!((k.is_lex, k.is_regular, k.is_exact), (l.is_lex, l.is_regular, l.is_exact));
        }
    }

    #[test]
    fn theory_print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sequents = (0..rng.gen_range(1..=3))
            .map(|_| {
                let (lhs, _) = gen::random_formula(&mut rng);
                let (rhs, _) = gen::random_formula(&mut rng);
                Sequent { vars: vec![Var::new("x", 0), Var::new("y", 0)], lhs, rhs }
            })
            .collect();
        let t = Theory { signature: gen::formula_signature(), sequents };
        let printed = t.to_string();
        prop_assert_eq!(parse_theory(&printed).unwrap(), t, "{}", printed);
    }

    #[test]
    fn solution_sets_are_subgroups(seed in any::<u64>(), ring in prop::sample::select(vec!["z4", "z6", "f2x2"])) {
        let ring = FiniteRing::by_name(ring).unwrap();
        let modules = small_modules(&ring, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = &modules[rng.gen_range(0..modules.len())];
        let free = rng.gen_range(1..=2);
        let phi = gen::random_linear_pp(&mut rng, &ring, free, 3);
        let s = pp_solution_set(m, &phi).unwrap();
        prop_assert!(s.contains(&vec![m.zero(); free]));
        for a in s.tuples() {
            for b in s.tuples() {
                let sum: Vec<usize> = a.iter().zip(&b).map(|(&x, &y)| m.add(x, y)).collect();
                prop_assert!(s.contains(&sum));
            }
        }
        prop_assert_eq!(pp_subgroup(m, &phi).unwrap().order(), s.len() as u128);
    }

    #[test]
    fn implication_is_a_preorder_reflected_in_modules(seed in any::<u64>()) {
        let ring = FiniteRing::zn(4);
        let modules = small_modules(&ring, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs: Vec<_> = (0..3).map(|_| gen::random_linear_pp(&mut rng, &ring, 1, 3)).collect();
        for a in &fs {
            prop_assert!(pp_implies(&ring, a, a).unwrap());
            for b in &fs {
                let ab = pp_implies(&ring, a, b).unwrap();
                let included = modules.iter().all(|m| pp_solution_set(m, a).unwrap().is_subset(&pp_solution_set(m, b).unwrap()));
                prop_assert_eq!(ab, included);
                for c in &fs {
                    if ab && pp_implies(&ring, b, c).unwrap() {
                        prop_assert!(pp_implies(&ring, a, c).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn zero_budget_gives_an_empty_passing_report() {
    let checks = oracle_suite(5, 0);
    assert_eq!(checks.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(), CHECK_IDS);
    for c in &checks {
        assert!(c.passed && c.instances == 0, "{}: {} instances", c.id, c.instances);
    }
}
