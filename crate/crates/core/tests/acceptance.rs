//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wheelpath::certify::{emit, verify_certificate};
use wheelpath::construct::Constructor;
use wheelpath::lemmas::{run_lemmas, Fault};
use wheelpath::menger::{max_internally_disjoint_paths, min_vertex_cut, verify_family};
use wheelpath::pairing::{
    pair_structure, pairing_capacity, pi3_formula, pi3_lower, pi3_upper, triple_value, verify_omega_paths, Pi3Report, SampleSpec,
};
use wheelpath::tripod::{exact_pi, solve_tripod, verify_tripod};
use wheelpath::{Budget, CaseId, CayleyGraph, Certificate, ConstructOptions, Family, Permutation, StructureTarget};

const N5_SAMPLES: usize = 1000;
const N5_SEED: u64 = 5;
const N6_SAMPLES: usize = 50;
const N6_SEED: u64 = 6;
const MENGER_PAIRS: usize = 200;
const MENGER_SEED: u64 = 2;
const CAPACITY_MAX: usize = 20;
const FORMULA_MAX_N: usize = 100;
const DETERMINISM_SEEDS: [u64; 4] = [0, 1, 7, 42];

/// Triples at degree 7 whose outside counts put them in the last subcase.
const N7_LAST_SUBCASE: [[&str; 3]; 2] = [
    ["[7,4,3,1,2,6,5]", "[7,3,5,6,1,4,2]", "[4,2,3,6,7,5,1]"],
    ["[5,7,1,6,4,3,2]", "[6,2,7,1,5,3,4]", "[1,7,4,2,5,3,6]"],
];

/// Triples at degree 5 that need the reassigned short-triangle route.
const N5_SHORT_TRIANGLE: [[&str; 3]; 2] = [["e", "(1 2 3)", "(1 3 2)"], ["[5,4,2,3,1]", "[2,4,3,5,1]", "[3,4,5,2,1]"]];

type Outcome = Result<String, String>;

fn strict() -> ConstructOptions {
    ConstructOptions {
        strict: true,
        ..Default::default()
    }
}

fn wheel(n: usize) -> CayleyGraph {
    CayleyGraph::build(n, Family::Wheel).expect("wheel graph")
}

fn parse_triple(g: &CayleyGraph, t: &[&str; 3]) -> [usize; 3] {
    t.map(|s| g.vertex(&Permutation::parse_with_degree(s, g.n()).expect("permutation")).expect("vertex"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let g = wheel(4);
    let lower = pi3_lower(&g, SampleSpec::Exhaustive, strict()).map_err(|e| e.to_string())?;
    ensure(lower.evaluated == 2024, || format!("evaluated {} triples", lower.evaluated))?;
    ensure(lower.value >= 3, || format!("minimum {} at {:?}", lower.value, lower.witness.omega))?;
    let up = pi3_upper(&g);
    ensure(up.value == 3 && up.r == 3, || format!("upper {} with r={}", up.value, up.r))?;
    let exact = exact_pi(&g.full_view(), up.witness).map_err(|e| e.to_string())?;
    ensure(exact == 3, || format!("exact value {exact} at {:?}", up.witness))?;
    Ok(format!(
        "2024 triples, min {} paths; upper {} (r=3 at {:?}); exact value 3 at the witness; formula {}",
        lower.value,
        up.value,
        up.witness,
        pi3_formula(4)
    ))
}

fn criterion_2() -> Outcome {
    let g = wheel(5);
    let spec = SampleSpec::Stratified {
        samples: N5_SAMPLES,
        seed: N5_SEED,
    };
    let lower = pi3_lower(&g, spec, strict()).map_err(|e| e.to_string())?;
    ensure(lower.value >= 5, || format!("minimum {} at {:?}", lower.value, lower.witness.omega))?;
    let cases: BTreeSet<char> = lower.case_counts.keys().filter_map(|c| c.name().strip_prefix("odd-")).map(|s| s.as_bytes()[0] as char).collect();
    ensure(cases.len() == 3, || format!("top-level cases seen {cases:?}"))?;
    let up = pi3_upper(&g);
    ensure(up.value == 5 && up.r == 3, || format!("upper {} with r={}", up.value, up.r))?;
    let tv = triple_value(&g, up.witness, strict()).map_err(|e| e.to_string())?;
    ensure(tv.settled() == Some(5), || format!("witness triple {tv:?}"))?;
    for t in &N5_SHORT_TRIANGLE {
        let omega = parse_triple(&g, t);
        let built = Constructor::new(&g, strict()).and_then(|c| c.build(omega)).map_err(|e| e.to_string())?;
        ensure(built.trace.case_id == CaseId::OddCase1_2_2, || format!("{t:?} took {}", built.trace.case_id))?;
        let k = pair_structure(&g.full_view(), &built.structure).map_err(|e| e.to_string())?.len();
        ensure(k >= 5, || format!("{t:?} gave {k} paths"))?;
    }
    Ok(format!(
        "{} stratified triples, min {} paths, cases {:?}; upper {} (r=3 at {:?}, settled at 5); formula {}",
        lower.evaluated,
        lower.value,
        lower.case_counts.iter().map(|(c, k)| format!("{}={k}", c.name())).collect::<Vec<_>>(),
        up.value,
        up.witness,
        pi3_formula(5)
    ))
}

/// Builds every triple, verifies it against the full graph, and tallies cases.
fn sweep(g: &CayleyGraph, triples: &[[usize; 3]], want: [usize; 3]) -> Result<BTreeMap<CaseId, usize>, String> {
    let builder = Constructor::new(g, strict()).map_err(|e| e.to_string())?;
    let view = g.full_view();
    let target = builder.target();
    let mut cases = BTreeMap::new();
    for &omega in triples {
        let built = builder.build(omega).map_err(|e| format!("{omega:?}: {e}"))?;
        ensure(built.structure.counts() == want, || format!("{omega:?}: counts {:?}", built.structure.counts()))?;
        ensure(built.trace.fallback_reason.is_none(), || format!("{omega:?}: fallback"))?;
        let report = verify_tripod(&view, &built.structure, target);
        ensure(report.passed(), || format!("{omega:?}: {:?}", report.violations))?;
        *cases.entry(built.trace.case_id).or_insert(0) += 1;
    }
    Ok(cases)
}

fn criterion_3() -> Outcome {
    let g4 = wheel(4);
    let all4 = SampleSpec::Exhaustive.triples(&g4);
    let c4 = sweep(&g4, &all4, [2, 2, 2])?;
    // Left translations are automorphisms, so triples through one vertex
    // stand for all of them.
    let g5 = wheel(5);
    let nv = g5.vertex_count();
    let mut through0 = Vec::new();
    for b in 1..nv {
        for c in b + 1..nv {
            through0.push([0, b, c]);
        }
    }
    let c5 = sweep(&g5, &through0, [2, 4, 4])?;
    let g7 = wheel(7);
    let last: Vec<[usize; 3]> = N7_LAST_SUBCASE.iter().map(|t| parse_triple(&g7, t)).collect();
    let c7 = sweep(&g7, &last, [4, 6, 6])?;
    ensure(c7.keys().all(|&c| c == CaseId::OddCase3_3), || format!("degree 7 triples landed in {c7:?}"))?;
    let mut seen: BTreeSet<CaseId> = c5.keys().chain(c4.keys()).chain(c7.keys()).copied().collect();
    seen.insert(CaseId::FallbackGeneric);
    let missing: Vec<&str> = CaseId::ALL.iter().filter(|c| !seen.contains(c)).map(|c| c.name()).collect();
    ensure(missing.is_empty(), || format!("cases never reached: {missing:?}"))?;
    Ok(format!(
        "n=4 {} x (2,2,2); n=5 {} triples through the identity x (2,4,4) {:?}; n=7 last subcase x{}; 0 fallbacks",
        all4.len(),
        through0.len(),
        c5.iter().map(|(c, k)| format!("{}={k}", c.name())).collect::<Vec<_>>(),
        last.len()
    ))
}

fn criterion_4() -> Outcome {
    let mut total = 0;
    for n in [4, 5] {
        let rows = run_lemmas(n, Fault::None).map_err(|e| e.to_string())?;
        if let Some(r) = rows.iter().find(|r| !r.passed) {
            return Err(format!("n={n} {} {}: expected {}, observed {}", r.lemma, r.check, r.expected, r.observed));
        }
        let want_cross = format!("{0}..{0}", if n == 4 { 6 } else { 18 });
        ensure(rows.iter().any(|r| r.lemma == "cross edges" && r.observed == want_cross), || format!("n={n} cross edges"))?;
        let kbs = (2 * (n - 1) - 3).to_string();
        ensure(rows.iter().any(|r| r.check.starts_with("kappa(BS") && r.observed == kbs), || format!("n={n} kappa(BS)"))?;
        total += rows.len();
    }
    let faulty = run_lemmas(4, Fault::DropCrossEdge).map_err(|e| e.to_string())?;
    ensure(faulty.iter().any(|r| !r.passed), || "injected fault went unnoticed".into())?;
    Ok(format!("{total} rows pass at n=4,5; injected fault is caught"))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for x in 0..=CAPACITY_MAX {
        for y in 0..=CAPACITY_MAX {
            for z in 0..=CAPACITY_MAX {
                let mut best = 0;
                for ma in 0..=x.min(y) {
                    for mb in 0..=(x - ma).min(z) {
                        best = best.max(ma + mb + (y - ma).min(z - mb));
                    }
                }
                let got = pairing_capacity(x, y, z);
                ensure(got == best, || format!("capacity({x},{y},{z}) = {got}, brute force {best}"))?;
                checked += 1;
            }
        }
    }
    for n in 4..=FORMULA_MAX_N {
        let [x, y, z] = StructureTarget::for_degree(n).counts();
        let got = pairing_capacity(x, y, z);
        ensure(got == (6 * n - 9) / 4, || format!("n={n}: capacity {got}"))?;
    }
    Ok(format!("{checked} capacity triples match brute force; target capacity equals floor((6n-9)/4) for n=4..={FORMULA_MAX_N}"))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(MENGER_SEED);
    let mut detail = Vec::new();
    for n in [4, 5] {
        let g = wheel(n);
        let view = g.full_view();
        let nv = g.vertex_count();
        let mut done = 0;
        while done < MENGER_PAIRS {
            let (u, v) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
            if u == v || g.has_edge(u, v) {
                continue;
            }
            let fam = max_internally_disjoint_paths(&view, u, v).map_err(|e| e.to_string())?;
            let cut = min_vertex_cut(&view, u, v).map_err(|e| e.to_string())?;
            ensure(fam.len() == cut.len(), || format!("n={n} ({u},{v}): {} paths, cut {}", fam.len(), cut.len()))?;
            let problems = verify_family(&view, &fam, &[u, v]);
            ensure(problems.is_empty(), || format!("n={n} ({u},{v}): {problems:?}"))?;
            let rest = view.without(&cut);
            ensure(rest.shortest_path(u, v).is_none(), || format!("n={n} ({u},{v}): cut does not separate"))?;
            done += 1;
        }
        // Structures from the generic solver and from the construction, and
        // the paths paired out of them, all go through the verifiers.
        let target = StructureTarget::for_degree(n);
        let builder = Constructor::new(&g, strict()).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let omega = wheelpath::pairing::random_triple(nv, rng.gen());
            let sol = solve_tripod(&view, omega, target, Budget::default()).map_err(|e| e.to_string())?;
            let r = verify_tripod(&view, &sol.structure, target);
            ensure(r.passed(), || format!("solver {omega:?}: {:?}", r.violations))?;
            let built = builder.build(omega).map_err(|e| e.to_string())?;
            let set = pair_structure(&view, &built.structure).map_err(|e| e.to_string())?;
            let r = verify_omega_paths(&view, &set);
            ensure(r.passed(), || format!("pairing {omega:?}: {:?}", r.violations))?;
        }
        detail.push(format!("n={n}: {MENGER_PAIRS} pairs"));
    }
    Ok(format!("{}; paths = cut size, every family verified", detail.join(", ")))
}

fn criterion_7() -> Outcome {
    let g = wheel(6);
    let spec = SampleSpec::Stratified {
        samples: N6_SAMPLES,
        seed: N6_SEED,
    };
    let lower = pi3_lower(&g, spec, strict()).map_err(|e| e.to_string())?;
    ensure(lower.value >= 6, || format!("minimum {} at {:?}", lower.value, lower.witness.omega))?;
    let up = pi3_upper(&g);
    ensure(up.value == 6, || format!("upper {} with r={}", up.value, up.r))?;
    Ok(format!("{} triples, min {} paths; upper {} (r={}); formula {}", lower.evaluated, lower.value, up.value, up.r, pi3_formula(6)))
}

fn certificate(n: usize, seed: u64) -> Result<String, String> {
    let g = wheel(n);
    let omega = wheelpath::pairing::random_triple(g.vertex_count(), seed);
    let built = Constructor::new(&g, strict()).and_then(|c| c.build(omega)).map_err(|e| e.to_string())?;
    let paths = pair_structure(&g.full_view(), &built.structure).map_err(|e| e.to_string())?;
    let spec = SampleSpec::Stratified { samples: 30, seed };
    let lower = pi3_lower(&g, spec, strict()).map_err(|e| e.to_string())?;
    let report = Pi3Report::new(n, &lower, &pi3_upper(&g));
    let cert = Certificate::for_structure(&g, &built, &paths, seed).with_report(report);
    let v = verify_certificate(&cert);
    ensure(v.passed(), || format!("n={n} seed {seed}: {:?}", v.violations))?;
    Ok(emit(&cert))
}

fn criterion_8() -> Outcome {
    let mut count = 0;
    for n in [4, 5, 6] {
        for seed in DETERMINISM_SEEDS {
            let first = certificate(n, seed)?;
            let second = certificate(n, seed)?;
            ensure(first == second, || format!("n={n} seed {seed} differs between runs"))?;
            count += 1;
        }
    }
    Ok(format!("{count} certificates byte-identical across two runs"))
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (k, f) in criteria {
        if only.is_some_and(|o| o != k) {
            continue;
        }
        let started = std::time::Instant::now();
        match f() {
            Ok(msg) => println!("criterion {k}: PASS ({:.1}s) {msg}", started.elapsed().as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {k}: FAIL ({:.1}s) {msg}", started.elapsed().as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
