use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::filters::filters;
use super::literal::literal_classify;
use super::naive::{injective_by_functions, NaiveEval};
use super::sheaf::amalgamates;
use super::sweep::sweep_counterexample;
use crate::completion::{
    corepresentable, ex_lex_completion, for_each_set_functor, is_lex_functor, is_regular_object, lex_functors_bounded, SetFunctor, Variance,
};
use crate::fincat::{is_equivalence, FinCategory, RawCategory};
use crate::gen;
use crate::limits::classify;
use crate::modpp::{
    closure_audit, closure_audit_with, directed_posets, find_retraction, pp_implies, pp_reflection_failure, reduced_product, small_formulas,
    small_modules, test_rings, FiniteModule, FiniteRing, LinearPp, ModuleMap, PpError,
};
use crate::ppcat::{cokernel_exact, ev_summary, kernel_exact, PpCatError, PpCategory, PpMorphism, PpObject};
use crate::reglogic::{
    is_injective, models, pp_normalize, relational_signature, theory_from_injectivity, Evaluator, RawStructure, StructureMorphism,
};
use crate::report::{CheckReport, Failure};
use crate::sites::{canonical_regular_coverage, check_subcanonical, enumerate_points, is_sheaf, saturate, RawFunctor, RawSite, Site};

/// Random concrete categories tried when building the category corpus.
pub const CORPUS_ATTEMPTS: usize = 4000;

/// Budget large enough that every check runs at its nominal size.
pub const DEFAULT_BUDGET: usize = 1000;

/// Check ids in suite order.
pub const CHECK_IDS: [&str; 14] = [
    "exactness",
    "completion",
    "regular-objects",
    "subterminal",
    "sheaf",
    "subcanonical",
    "points",
    "pp-implies",
    "defclass",
    "reduced-product",
    "ev-exact",
    "covers",
    "injectivity",
    "pp-normal",
];

/// Runs one check. Instance counts are capped by `budget`; `budget = 0` checks nothing.
pub fn run_check(id: &str, seed: u64, budget: usize) -> Option<CheckReport> {
    let index = CHECK_IDS.iter().position(|&c| c == id)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let r = match id {
        "exactness" => exactness(&mut rng, budget),
        "completion" => completion(budget),
        "regular-objects" => regular_objects(&mut rng, budget),
        "subterminal" => subterminal(&mut rng, budget),
        "sheaf" => sheaf(&mut rng, budget),
        "subcanonical" => subcanonical(&mut rng, budget),
        "points" => points(budget),
        "pp-implies" => pp_implication(&mut rng, budget),
        "defclass" => defclass(&mut rng, budget),
        "reduced-product" => reduced(&mut rng, budget),
        "ev-exact" => ev_exact(&mut rng, budget),
        "covers" => covers(&mut rng, budget),
        "injectivity" => injectivity(&mut rng, budget),
        "pp-normal" => pp_normal(&mut rng, budget),
        _ => unreachable!("listed in CHECK_IDS"),
    };
    let mut r = r;
    for f in r.failures.iter_mut().filter(|f| f.replay.is_empty()) {
        f.replay = format!("catlogic --seed {seed} oracle --check {id} --budget {budget}");
    }
    Some(r)
}

/// Every check in [`CHECK_IDS`] order.
pub fn oracle_suite(seed: u64, budget: usize) -> Vec<CheckReport> {
    CHECK_IDS.iter().map(|id| run_check(id, seed, budget).expect("known id")).collect()
}

fn category_artifact(c: &FinCategory) -> Value {
    serde_json::to_value(RawCategory::from(c)).expect("categories serialize")
}

fn category_failure(c: &FinCategory, detail: String, command: &str) -> Failure {
    Failure { detail, artifact: category_artifact(c), replay: format!("catlogic {command} artifact.json") }
}

fn corpus(rng: &mut ChaCha8Rng) -> Vec<FinCategory> {
    gen::category_corpus(rng, CORPUS_ATTEMPTS)
}

fn lex_corpus(rng: &mut ChaCha8Rng) -> Vec<FinCategory> {
    corpus(rng).into_iter().filter(|c| classify(c).is_lex).collect()
}

fn exactness(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("exactness", "classify agrees with the literal definitions");
    let cats: Vec<FinCategory> = corpus(rng).into_iter().take(budget).collect();
    let verdicts: Vec<_> = cats.par_iter().map(|c| (classify(c), literal_classify(c))).collect();
    let mut counts = [0usize; 3];
    for (c, (k, lit)) in cats.iter().zip(verdicts) {
        counts[0] += k.is_lex as usize;
        counts[1] += k.is_regular as usize;
        counts[2] += k.is_exact as usize;
        let same = (k.is_lex, k.is_regular, k.is_exact) == (lit.is_lex, lit.is_regular, lit.is_exact);
        r.record(same, || {
            category_failure(
                c,
                format!("classify says {:?}, definitions say {:?}", (k.is_lex, k.is_regular, k.is_exact), lit),
                "classify",
            )
        });
    }
    r.stat("lex", counts[0]);
    r.stat("regular", counts[1]);
    r.stat("exact", counts[2]);
    r
}

fn completion(budget: usize) -> CheckReport {
    let mut r = CheckReport::new("completion", "ex/lex completion of a lattice is equivalent to it and exact");
    let lattices: Vec<FinCategory> = gen::lattices(5).into_iter().take(budget).collect();
    let results: Vec<_> = lattices
        .par_iter()
        .map(|l| {
            let comp = ex_lex_completion(l).expect("lattices are lex");
            (is_equivalence(&comp.unit), classify(&comp.category).is_exact, literal_classify(&comp.category).is_exact)
        })
        .collect();
    for (l, (equiv, exact, lit)) in lattices.iter().zip(results) {
        r.record(equiv && exact && lit, || {
            category_failure(l, format!("unit equivalence {equiv}, exact {exact}, literally exact {lit}"), "complete")
        });
    }
    r
}

fn presheaf_bound(c: &FinCategory) -> usize {
    if c.num_objects() <= 3 {
        3
    } else {
        2
    }
}

fn regular_objects(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("regular-objects", "is_regular_object agrees with completion membership");
    let mut cats = lex_corpus(rng);
    cats.extend(gen::lattices(5));
    cats.truncate(budget);
    let results: Vec<(usize, usize, Option<(SetFunctor, bool)>)> = cats
        .par_iter()
        .map(|c| {
            let comp = ex_lex_completion(c).expect("lex");
            let (mut seen, mut regular, mut bad) = (0, 0, None);
            for_each_set_functor(c, Variance::Contravariant, presheaf_bound(c), &|_| true, &mut |f| {
                let claim = is_regular_object(f);
                let member = comp.find_object(f).is_some();
                seen += 1;
                regular += claim as usize;
                if claim != member && bad.is_none() {
                    bad = Some((f.clone(), claim));
                }
                true
            });
            (seen, regular, bad)
        })
        .collect();
    let (mut total, mut regular) = (0, 0);
    for (c, (seen, reg, bad)) in cats.iter().zip(results) {
        total += seen;
        regular += reg;
        r.record(bad.is_none(), || {
            let (f, claim) = bad.expect("disagreement");
            Failure {
                detail: format!("presheaf with sizes {:?}: is_regular_object = {claim}, completion member = {}", f.sizes(), !claim),
                artifact: json!({ "category": category_artifact(c), "sizes": f.sizes(), "actions": f.actions() }),
                replay: "catlogic complete artifact.json".into(),
            }
        });
    }
    r.stat("presheaves", total);
    r.stat("regular", regular);
    r
}

fn subterminal(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("subterminal", "bounded lex functors into finite sets are subterminal");
    let cats: Vec<FinCategory> = lex_corpus(rng).into_iter().take(budget).collect();
    let results: Vec<_> = cats
        .par_iter()
        .map(|c| {
            let full = lex_functors_bounded(c, 4, false).expect("lex");
            let pruned = lex_functors_bounded(c, 4, true).expect("lex");
            (full, pruned)
        })
        .collect();
    let mut found = 0;
    for (c, (full, pruned)) in cats.iter().zip(results) {
        found += full.len();
        let bad = full.iter().find(|f| !f.is_subterminal() || !is_lex_functor(f).unwrap_or(false));
        r.record(bad.is_none() && full == pruned, || {
            let detail = match bad {
                Some(f) => format!("lex functor with sizes {:?} is not subterminal", f.sizes()),
                None => "pruned and exhaustive searches differ".into(),
            };
            category_failure(c, detail, "site points")
        });
    }
    r.stat("lex_functors", found);
    r
}

/// Random covariant functors on `base` with values of size at most 2, plus the representables.
fn functor_pool(rng: &mut ChaCha8Rng, base: &FinCategory, k: usize) -> Vec<SetFunctor> {
    let mut all = Vec::new();
    for_each_set_functor(base, Variance::Covariant, 2, &|_| true, &mut |f| {
        all.push(f.clone());
        all.len() < 5000
    });
    let mut out: Vec<SetFunctor> = base.objects().map(|x| corepresentable(base, x)).collect();
    for _ in 0..k {
        if all.is_empty() {
            break;
        }
        out.push(all[rng.gen_range(0..all.len())].clone());
    }
    out
}

fn sheaf(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("sheaf", "bijectivity criterion agrees with singleton amalgamation on sites with pushouts");
    let target = budget.min(600);
    let cats = corpus(rng);
    // Sites with a missing pushout of a cover fall outside the criterion; they are sampled
    // alongside and tallied separately.
    let (mut pairs, mut gapped): (Vec<(Site, SetFunctor)>, Vec<(Site, SetFunctor)>) = (Vec::new(), Vec::new());
    while pairs.len() < target {
        let c = &cats[rng.gen_range(0..cats.len())];
        let chosen: Vec<usize> = c.morphisms().filter(|&f| !c.is_identity(f) && rng.gen_bool(0.3)).collect();
        let site = Site::from_fp(c, &saturate(c, &chosen).members).expect("saturated");
        let bucket = if site.gaps().is_empty() { &mut pairs } else { &mut gapped };
        bucket.extend(functor_pool(rng, c, 3).into_iter().map(|f| (site.clone(), f)));
    }
    pairs.truncate(target);
    let verdicts = |ps: &[(Site, SetFunctor)]| -> Vec<(bool, bool)> {
        ps.par_iter().map(|(s, f)| (is_sheaf(s, f).expect("functor on the base"), amalgamates(s, f))).collect()
    };
    let mut sheaves = 0;
    for ((s, f), (lib, oracle)) in pairs.iter().zip(verdicts(&pairs)) {
        sheaves += lib as usize;
        r.record(lib == oracle, || Failure {
            detail: format!("is_sheaf = {lib}, amalgamation = {oracle}"),
            artifact: {
                let mut a = serde_json::to_value(RawSite::from_site(s)).expect("sites serialize");
                a["functor"] = serde_json::to_value(RawFunctor::from_functor(f)).expect("functors serialize");
                a
            },
            replay: "catlogic site sheafcheck artifact.json".into(),
        });
    }
    let divergent = verdicts(&gapped).into_iter().filter(|(lib, oracle)| lib != oracle).count();
    r.stat("sheaves", sheaves);
    r.stat("pairs_on_sites_with_gaps", gapped.len());
    r.stat("divergent_on_sites_with_gaps", divergent);
    r
}

fn subcanonical(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("subcanonical", "representables are sheaves for the canonical regular coverage");
    let cats: Vec<FinCategory> = corpus(rng).into_iter().filter(|c| classify(c).is_exact).take(budget).collect();
    for c in &cats {
        let s = canonical_regular_coverage(c).expect("exact categories are regular");
        let lib = check_subcanonical(&s);
        for x in s.base().objects() {
            let oracle = amalgamates(&s, &corepresentable(s.base(), x));
            r.record(lib && oracle, || {
                category_failure(c, format!("representable at {} fails (library {lib}, amalgamation {oracle})", c.object_name(x)), "classify")
            });
        }
    }
    r.stat("categories", cats.len());
    r
}

fn points(budget: usize) -> CheckReport {
    let mut r = CheckReport::new("points", "points of a trivially covered lattice are its filters");
    for l in gen::lattices(5).into_iter().take(budget) {
        let ids: Vec<usize> = l.objects().map(|x| l.id(x)).collect();
        let p = enumerate_points(&Site::on_category(&l, &ids)).expect("lattices are lex");
        let expected = filters(&l);
        let mut got = p.supports.clone();
        got.sort();
        let order_ok = (0..p.supports.len()).all(|i| {
            (0..p.supports.len()).all(|j| {
                let inc = p.supports[i].iter().all(|x| p.supports[j].contains(x));
                inc == !p.category.hom(i, j).is_empty()
            })
        });
        r.record(got == expected && order_ok, || {
            category_failure(&l, format!("points {got:?} vs filters {expected:?}, order ok {order_ok}"), "site points")
        });
    }
    r
}

fn matrix_syntax(p: &LinearPp) -> String {
    let rows: Vec<Vec<String>> = p.rows().iter().map(|r| r.iter().map(|e| format!("@{e}")).collect()).collect();
    format!("pp n={} m={} rows={}", p.free(), p.bound(), serde_json::to_string(&rows).expect("json"))
}

fn pp_failure(ring: &FiniteRing, phi: &LinearPp, psi: &LinearPp, detail: String, command: &str) -> Failure {
    let (a, b) = (matrix_syntax(phi), matrix_syntax(psi));
    Failure {
        detail,
        artifact: json!({ "ring": ring.name(), "phi": a, "psi": b }),
        replay: format!("catlogic pp {command} --ring {} '{a}' '{b}'", ring.name()),
    }
}

fn pp_implication(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("pp-implies", "pp_implies agrees with the sweep over all modules of size at most 16");
    let per_ring = budget.min(1000);
    let mut holds = 0;
    for ring in test_rings() {
        let modules = small_modules(&ring, 16);
        let pairs: Vec<(LinearPp, LinearPp)> = (0..per_ring).map(|_| gen::random_implication_pair(rng, &ring)).collect();
        let results: Vec<(Result<bool, PpError>, Option<(usize, Vec<usize>)>)> = pairs
            .par_iter()
            .map(|(p, q)| (pp_implies(&ring, p, q), sweep_counterexample(&modules, p, q)))
            .collect();
        for ((p, q), (lib, witness)) in pairs.iter().zip(results) {
            let lib = lib.expect("equal arities");
            holds += lib as usize;
            r.record(lib == witness.is_none(), || {
                pp_failure(&ring, p, q, format!("pp_implies = {lib}, sweep counterexample = {witness:?}"), "implies")
            });
        }
    }
    r.stat("implications_holding", holds);
    r
}

fn defclass(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("defclass", "definable classes are closed within the small-module corpus");
    let per_ring = budget.min(20);
    let (mut products, mut chains) = (0, 0);
    for ring in test_rings() {
        let modules = small_modules(&ring, 16);
        let theories: Vec<_> = (0..per_ring).map(|_| gen::random_theory(rng, &ring)).collect();
        let reports: Vec<_> = theories.par_iter().map(|t| closure_audit(t, &modules).expect("arities match")).collect();
        for (t, rep) in theories.iter().zip(reports) {
            products += rep.products;
            chains += rep.chains;
            r.record(rep.passed(), || {
                let pairs: Vec<Value> = t.iter().map(|p| json!([matrix_syntax(p.phi()), matrix_syntax(p.psi())])).collect();
                Failure {
                    detail: format!("violations {:?}", rep.violations),
                    artifact: Value::Array(pairs),
                    replay: format!("catlogic pp audit --ring {} artifact.json", ring.name()),
                }
            });
        }
        if per_ring > 0 {
            // |M| ≤ 2 is not closed under products, so the audit must object
            let control = closure_audit_with(&modules, |m| Ok::<_, PpError>(m.size() <= 2)).expect("infallible");
            r.record(!control.passed(), || Failure {
                detail: format!("negative control over {} not caught", ring.name()),
                artifact: Value::Null,
                replay: String::new(),
            });
        }
    }
    r.stat("products_checked", products);
    r.stat("chains_checked", chains);
    r
}

/// `h_i` as a map into the actual product over the up-set, when that product is small.
fn embedding_into_product(d: &crate::modpp::ModuleDiagram, i: usize, h: &[Vec<usize>], up: &[usize]) -> Option<ModuleMap> {
    let parts: Vec<&FiniteModule> = up.iter().map(|&j| &d.modules()[j]).collect();
    let size: usize = parts.iter().map(|m| m.size()).product();
    if size > 256 {
        return None;
    }
    let p = FiniteModule::direct_sum(d.modules()[i].ring(), &parts).ok()?;
    let sizes: Vec<usize> = parts.iter().map(|m| m.size()).collect();
    let table = h.iter().map(|t| t.iter().zip(&sizes).fold(0, |acc, (&x, &s)| acc * s + x)).collect();
    ModuleMap::new(&d.modules()[i], &p, table).ok()
}

fn reduced(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("reduced-product", "reduced-product embeddings split and the comparison is pure");
    let per_poset = budget.min(12);
    let posets = directed_posets(4);
    let mut independently_checked = 0;
    for ring in test_rings() {
        let modules = small_modules(&ring, 16);
        let formulas = small_formulas(&ring, 1, 2);
        for poset in &posets {
            for _ in 0..per_poset {
                let d = gen::random_module_diagram(rng, poset, &modules);
                let rp = reduced_product(&d);
                let mut oracle = true;
                for i in 0..poset.len() {
                    if let Some(h) = embedding_into_product(&d, i, &rp.h[i], &rp.up_sets[i]) {
                        independently_checked += 1;
                        oracle &= h.is_injective()
                            && find_retraction(&h).is_some()
                            && pp_reflection_failure(&h, &formulas).expect("same ring").is_none();
                    }
                }
                r.record(rp.passed() && oracle, || Failure {
                    detail: format!(
                        "split {}, connecting {}, comparison {}, pure {}, product oracle {oracle}",
                        rp.all_split, rp.connecting_commute, rp.comparison_commutes, rp.comparison_pure
                    ),
                    artifact: json!({ "ring": ring.name(), "sizes": d.modules().iter().map(|m| m.size()).collect::<Vec<_>>() }),
                    replay: String::new(),
                });
            }
        }
    }
    r.stat("embeddings_checked_in_product", independently_checked);
    r
}

fn object_line(name: &str, x: &PpObject) -> String {
    format!("obj {name} = pair({}, {})", matrix_syntax(x.upper()), matrix_syntax(x.lower()))
}

/// A `.ppc` script that rebuilds `f` and takes its kernel and cokernel.
fn morphism_script(c: &PpCategory, f: &PpMorphism) -> Value {
    let lines = [
        format!("ring {}", c.ring().name()),
        object_line("X", f.source()),
        object_line("Y", f.target()),
        format!("mor f : X -> Y = graph({})", matrix_syntax(f.graph())),
        "ker f".into(),
        "coker f".into(),
    ];
    Value::String(lines.join("\n") + "\n")
}

/// A `.ppc` script for the two-step presentation of `x`.
fn cover_script(c: &PpCategory, x: &PpObject) -> Value {
    let lines =
        [format!("ring {}", c.ring().name()), object_line("X", x), "cover X".into(), "ker cover_X".into(), "cover ker_cover_X".into()];
    Value::String(lines.join("\n") + "\n")
}

fn ev_exact(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("ev-exact", "evaluation sends kernels and cokernels to exact sequences");
    let per_ring = budget.min(200);
    let mut nonzero_kernels = 0;
    for ring in test_rings() {
        let c = PpCategory::new(ring.clone());
        let modules = small_modules(&ring, 16);
        let maps: Vec<PpMorphism> = (0..per_ring)
            .map(|_| {
                let arity = rng.gen_range(1..=2);
                let x = gen::random_pp_object(rng, &c, arity);
                gen::random_pp_morphism(rng, &c, &x)
            })
            .collect();
        let results: Vec<Result<(bool, bool), PpCatError>> = maps
            .par_iter()
            .map(|f| {
                let (k, incl) = c.kernel(f)?;
                let (_, proj) = c.cokernel(f)?;
                let mut ok = true;
                for m in &modules {
                    ok &= kernel_exact(m, f, &incl)? && cokernel_exact(m, f, &proj)?;
                }
                Ok((ok, !c.is_zero(&k)?))
            })
            .collect();
        for (f, res) in maps.iter().zip(results) {
            let (ok, detail) = match res {
                Ok((ok, nz)) => {
                    nonzero_kernels += nz as usize;
                    (ok, "evaluation is not exact on some corpus module".to_string())
                }
                Err(e) => (false, e.to_string()),
            };
            r.record(ok, || Failure {
                detail,
                artifact: morphism_script(&c, f),
                replay: "catlogic ppcat run artifact.ppc".into(),
            });
        }
    }
    r.stat("nonzero_kernels", nonzero_kernels);
    r
}

fn certified_epi(c: &PpCategory, f: &PpMorphism, modules: &[FiniteModule]) -> Result<bool, PpCatError> {
    if !c.is_epi(f)? || !c.is_representable(f.source())? {
        return Ok(false);
    }
    for m in modules {
        let e = ev_summary(m, f)?;
        if !e.well_defined || !e.surjective {
            return Ok(false);
        }
    }
    Ok(true)
}

fn covers(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("covers", "every object has a two-step presentation by representables");
    let per_ring = budget.min(200);
    for ring in test_rings() {
        let c = PpCategory::new(ring.clone());
        let modules = small_modules(&ring, 16);
        let objects: Vec<_> = (0..per_ring)
            .map(|_| {
                let arity = rng.gen_range(1..=2);
                gen::random_pp_object(rng, &c, arity)
            })
            .collect();
        let results: Vec<Result<bool, PpCatError>> = objects
            .par_iter()
            .map(|x| {
                let p = c.representable_cover(x)?;
                let (k, _) = c.kernel(&p)?;
                let q = c.representable_cover(&k)?;
                Ok(certified_epi(&c, &p, &modules)? && certified_epi(&c, &q, &modules)?)
            })
            .collect();
        for (x, res) in objects.iter().zip(results) {
            let ok = matches!(res, Ok(true));
            r.record(ok, || Failure {
                detail: match res {
                    Err(e) => e.to_string(),
                    _ => "cover is not a certified epimorphism".into(),
                },
                artifact: cover_script(&c, x),
                replay: "catlogic ppcat run artifact.ppc".into(),
            });
        }
    }
    r
}

fn injectivity(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("injectivity", "models of the injectivity theory are the injective digraphs");
    let sig = gen::digraph_signature();
    let graphs = gen::digraphs(3);
    let sets: Vec<Vec<StructureMorphism>> = (0..budget.min(60)).map(|_| gen::random_morphism_set(rng)).collect();
    let results: Vec<Vec<(bool, bool, bool)>> = sets
        .par_iter()
        .map(|ms| {
            let t = theory_from_injectivity(&sig, ms);
            graphs
                .iter()
                .map(|k| {
                    let m = models(&t, k).expect("theory over the digraph signature");
                    let lib = ms.iter().all(|h| is_injective(k, h));
                    let brute = ms.iter().all(|h| injective_by_functions(k, h));
                    (m, lib, brute)
                })
                .collect()
        })
        .collect();
    let mut injective = 0;
    for (ms, rows) in sets.iter().zip(results) {
        for (k, (m, lib, brute)) in graphs.iter().zip(rows) {
            injective += brute as usize;
            r.record(m == lib && lib == brute, || Failure {
                detail: format!("models = {m}, is_injective = {lib}, by functions = {brute}"),
                artifact: json!({
                    "structure": RawStructure::from_structure(&sig, k),
                    "morphisms": ms.iter().map(|h| json!({
                        "source": RawStructure::from_structure(&sig, h.source()),
                        "target": RawStructure::from_structure(&sig, h.target()),
                        "map": h.maps()[0],
                    })).collect::<Vec<_>>(),
                }),
                replay: "catlogic logic models theory.rth structure.json".into(),
            });
        }
    }
    r.stat("injective_pairs", injective);
    r
}

fn pp_normal(rng: &mut ChaCha8Rng, budget: usize) -> CheckReport {
    let mut r = CheckReport::new("pp-normal", "pp normal form preserves truth on all small structures");
    let sig = gen::formula_signature();
    let rsig = relational_signature(&sig);
    let structures = gen::formula_structures(3);
    let formulas: Vec<_> = (0..budget.min(200)).map(|_| gen::random_formula(rng)).collect();
    let results: Vec<Option<(usize, Vec<usize>)>> = formulas
        .par_iter()
        .map(|(f, free)| {
            let normal = pp_normalize(&sig, f).to_formula();
            for (si, m) in structures.iter().enumerate() {
                let naive = NaiveEval::new(&sig, m);
                let e = Evaluator::new(&rsig, m, &normal, free).expect("normal form is relational");
                let mut bad = None;
                e.for_each_assignment(|vals, ok| {
                    let mut env: Vec<(String, usize)> = free.iter().map(|v| v.name.clone()).zip(vals.iter().copied()).collect();
                    if naive.holds(f, &mut env) != ok {
                        bad = Some(vals.to_vec());
                        return false;
                    }
                    true
                });
                if let Some(vals) = bad {
                    return Some((si, vals));
                }
            }
            None
        })
        .collect();
    for ((f, free), bad) in formulas.iter().zip(results) {
        r.record(bad.is_none(), || {
            let (si, vals) = bad.expect("disagreement");
            let p = crate::reglogic::Printer { signature: &sig };
            Failure {
                detail: format!("formula {} differs from its normal form at {vals:?}", p.formula(f)),
                artifact: json!({
                    "formula": p.formula(f),
                    "free": free.iter().map(|v| v.name.clone()).collect::<Vec<_>>(),
                    "structure": RawStructure::from_structure(&sig, &structures[si]),
                }),
                replay: "catlogic logic normalize formula.rth".into(),
            }
        });
    }
    r.stat("structures", structures.len());
    r
}
