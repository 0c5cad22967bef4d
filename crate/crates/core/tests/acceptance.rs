//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use faultlattice::bridge::verify_topological_minor;
use faultlattice::crossing::enumerate_v_paths_counted;
use faultlattice::graph::Graph;
use faultlattice::lattice::{grid_to_graph, mix_seed, sample_grid, LatticeConfig};
use faultlattice::pipeline::run_pipeline;
use faultlattice::quantum::{graph_state_from, verify_concentration, Basis, GraphState, Outcome, TableauMirror};
use faultlattice::stats::overhead::coupled_crossing_counts;
use faultlattice::stats::{
    crossing_probability, estimate_threshold, largest_component_scaling, max_disjoint_crossings,
    max_disjoint_v_crossings, runtime_scaling, P_C,
};
use faultlattice::width::{cut_rank, ewd_of_components, rank_width_bruteforce, witness_width};
use faultlattice::work::WorkCounter;
use faultlattice::Error;

const SEED: u64 = 20240601;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn threshold() -> Verdict {
    let t = estimate_threshold(&[32, 64, 128], 10_000, SEED).expect("valid sizes");
    let e = t.estimate.expect("three sizes");
    let per: Vec<String> = t.per_size.iter().map(|x| format!("L={} {:.5}", x.size, x.p_half)).collect();
    verdict(
        (e - P_C).abs() <= 0.01,
        format!("estimate {e:.5} ± {:.5} ({})", t.stderr.unwrap_or(0.0), per.join(", ")),
    )
}

fn end_to_end_oracle() -> Verdict {
    let (mut applicable, mut passed, mut attempts) = (0, 0, 0u64);
    let mut other = Vec::new();
    while applicable < 50 && attempts < 1000 {
        let size = 8 + (mix_seed(&[SEED, attempts, 1]) % 7) as usize;
        let grid = sample_grid(LatticeConfig::new(size, 0.85, mix_seed(&[SEED, attempts])).unwrap());
        match verify_concentration(&grid, attempts) {
            Ok(ok) => {
                applicable += 1;
                passed += ok as usize;
            }
            Err(Error::NotApplicable(_)) => {}
            Err(e) => other.push(e.to_string()),
        }
        attempts += 1;
    }
    verdict(
        applicable == 50 && passed == 50 && other.is_empty(),
        format!("{passed}/{applicable} applicable instances agree; {} errors", other.len()),
    )
}

fn pipeline_soundness() -> Verdict {
    let ps = [0.65, 0.75, 0.85, 0.95];
    let (mut runs, mut applicable, mut internal, mut order, mut degree, mut minor) = (0, 0, 0, 0, 0, 0);
    for t in 0..520u64 {
        let size = 20 + (mix_seed(&[SEED, t, 3]) % 45) as usize;
        let p = ps[t as usize % 4];
        let grid = sample_grid(LatticeConfig::new(size, p, mix_seed(&[SEED, t, 4])).unwrap());
        runs += 1;
        match run_pipeline(&grid) {
            Ok(out) => {
                applicable += 1;
                order += (!out.total_order.ok) as usize;
                degree += (out.subgraph.max_degree() > 3) as usize;
                minor += (!verify_topological_minor(&out.subgraph, out.rows(), out.cols())) as usize;
            }
            Err(e) if e.is_internal() => internal += 1,
            Err(_) => {}
        }
    }
    verdict(
        internal == 0 && order == 0 && degree == 0 && minor == 0,
        format!(
            "{runs} runs, {applicable} applicable; internal errors {internal}, order violations {order}, \
             degree violations {degree}, minor failures {minor}"
        ),
    )
}

fn crossing_statistics() -> Verdict {
    let low = crossing_probability(30, 0.3, 10_000, SEED).unwrap();
    let high = crossing_probability(30, 0.9, 10_000, SEED).unwrap();
    verdict(
        low.estimate < 0.05 && high.estimate > 0.99,
        format!("p=0.3: {:.4}, p=0.9: {:.4}", low.estimate, high.estimate),
    )
}

fn overhead_shape() -> Verdict {
    let full = max_disjoint_crossings(&sample_grid(LatticeConfig::new(128, 1.0, 0).unwrap())) as f64 / 128.0;
    let half: f64 = (0..100u64)
        .map(|t| max_disjoint_crossings(&sample_grid(LatticeConfig::new(128, 0.5, mix_seed(&[SEED, t])).unwrap())))
        .sum::<usize>() as f64
        / (100.0 * 128.0);
    let ps: Vec<f64> = (1..=20).map(|i| i as f64 * 0.05).collect();
    let mut violations = 0;
    for t in 0..20 {
        let ms = coupled_crossing_counts(64, &ps, SEED, t);
        violations += ms.windows(2).filter(|w| w[0] > w[1]).count();
    }
    verdict(
        full == 1.0 && half < 0.01 && violations == 0,
        format!("m_L/L at p=1: {full:.3}; at p=0.5, L=128: {half:.5}; monotonicity violations {violations}"),
    )
}

fn wall_follower_maximality() -> Verdict {
    let mut mismatches = 0;
    let n = 1200u64;
    for t in 0..n {
        let size = 5 + (mix_seed(&[SEED, t, 6]) % 60) as usize;
        let p = 0.5 + 0.45 * (mix_seed(&[SEED, t, 7]) % 1000) as f64 / 1000.0;
        let grid = sample_grid(LatticeConfig::new(size, p, mix_seed(&[SEED, t, 8])).unwrap());
        let found = enumerate_v_paths_counted(&grid_to_graph(&grid), &mut WorkCounter::default()).found;
        mismatches += (found != max_disjoint_v_crossings(&grid)) as usize;
    }
    verdict(mismatches == 0, format!("{mismatches} mismatches in {n} samples with L <= 64"))
}

fn linearity() -> Verdict {
    let s = runtime_scaling(&[0.85], &[64, 128, 256, 512], 3, SEED).unwrap();
    let spread = s.spread[0].1;
    let violations: usize = s.rows.iter().map(|r| r.visit_violations).sum();
    let per: Vec<String> = s.rows.iter().map(|r| format!("L={} {:.3}", r.size, r.work_per_site)).collect();
    verdict(
        spread <= 1.5 && violations == 0,
        format!("work per site {}; spread {spread:.3}; visit budget violations {violations}", per.join(", ")),
    )
}

fn subcritical_scaling() -> Verdict {
    let s = largest_component_scaling(&[0.45], &[64, 128, 256, 512], 200, SEED).unwrap();
    let fit = &s.fits[0];
    verdict(
        fit.r_squared >= 0.98,
        format!("mean largest = {:.2} + {:.2} ln N, R^2 = {:.4}", fit.intercept, fit.slope, fit.r_squared),
    )
}

/// Erdos-Renyi graph with edge density drawn from `density`.
fn random_graph(rng: &mut impl Rng, n: usize, density: std::ops::Range<f64>) -> Graph<usize> {
    let density = rng.random_range(density);
    let mut g = Graph::with_vertices(0..n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < density {
                g.add_edge(a, b);
            }
        }
    }
    g
}

fn entanglement_width() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let paths_ok = (2..=8).all(|n| rank_width_bruteforce(&Graph::path(n)).unwrap().width == 1);
    let mut max_rule_failures = 0;
    for _ in 0..200 {
        let (na, nb) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let a = random_graph(&mut rng, na, 0.0..1.0);
        let b = random_graph(&mut rng, nb, 0.0..1.0);
        let (wa, wb) = (rank_width_bruteforce(&a).unwrap().width, rank_width_bruteforce(&b).unwrap().width);
        let union = a.disjoint_union(&b, |v| v + 100);
        let direct = rank_width_bruteforce(&union).map(|r| r.width).ok();
        let by_rule = ewd_of_components(&union).unwrap();
        let expected = wa.max(wb);
        if by_rule != expected || direct.is_some_and(|d| d != expected) {
            max_rule_failures += 1;
        }
    }
    let (mut symmetry, mut witness) = (0, 0);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=8);
        let g = random_graph(&mut rng, n, 0.0..1.0);
        let a: BTreeSet<usize> = (0..n).filter(|_| rng.random::<bool>()).collect();
        let rest: BTreeSet<usize> = (0..n).filter(|v| !a.contains(v)).collect();
        symmetry += (cut_rank(&g, &a) != cut_rank(&g, &rest)) as usize;
        let r = rank_width_bruteforce(&g).unwrap();
        witness += (witness_width(&g, r.witness_tree.as_ref().unwrap()) != Some(r.width)) as usize;
    }
    verdict(
        paths_ok && max_rule_failures == 0 && symmetry == 0 && witness == 0,
        format!(
            "paths width 1: {paths_ok}; max-rule failures {max_rule_failures}/200; \
             symmetry failures {symmetry}, witness failures {witness} in 10000 pairs"
        ),
    )
}

/// A random admissible measurement sequence: Y only on degree-2 qubits.
fn random_plan(rng: &mut impl Rng, state: &GraphState, max_len: usize) -> Vec<(usize, Basis)> {
    let mut s = state.clone();
    let mut plan = Vec::new();
    while plan.len() < max_len {
        let live = s.live_qubits();
        if live.is_empty() {
            break;
        }
        let q = live[rng.random_range(0..live.len())];
        let basis = if s.graph().degree(q) == 2 && rng.random::<bool>() { Basis::Y } else { Basis::Z };
        s.measure(q, basis, Outcome::Plus).unwrap();
        plan.push((q, basis));
    }
    plan
}

fn run_mirrored(state: &GraphState, plan: &[(usize, Basis)], outcomes: impl Fn(usize) -> Outcome) -> (GraphState, bool) {
    let mut s = state.clone();
    let mut mirror = TableauMirror::new(&s);
    for (i, &(q, b)) in plan.iter().enumerate() {
        mirror.record(&s, q, b, outcomes(i)).unwrap();
        s.measure(q, b, outcomes(i)).unwrap();
    }
    let ok = mirror.is_consistent() && mirror.agrees_with(&s).unwrap();
    (s, ok)
}

fn measurement_calculus() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut disagreements = 0;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=10);
        let state = graph_state_from(&random_graph(&mut rng, n, 0.2..0.7));
        let plan = random_plan(&mut rng, &state, n);
        let bits: Vec<bool> = plan.iter().map(|_| rng.random()).collect();
        let (_, ok) = run_mirrored(&state, &plan, |i| Outcome::from_minus(bits[i]));
        disagreements += (!ok) as usize;
    }
    let (mut instances, mut branches, mut topology, mut branch_fail) = (0, 0, 0, 0);
    for _ in 0..60 {
        let n = rng.random_range(4..=12);
        let state = graph_state_from(&random_graph(&mut rng, n, 0.2..0.6));
        let plan = random_plan(&mut rng, &state, n.min(12) - 1);
        instances += 1;
        let (reference, _) = run_mirrored(&state, &plan, |_| Outcome::Plus);
        for mask in 0u32..1 << plan.len() {
            let (s, ok) = run_mirrored(&state, &plan, |i| Outcome::from_minus(mask >> i & 1 == 1));
            branches += 1;
            topology += (s.graph() != reference.graph()) as usize;
            branch_fail += (!ok) as usize;
        }
    }
    verdict(
        disagreements == 0 && topology == 0 && branch_fail == 0,
        format!(
            "{disagreements} disagreements in 10000 random sequences; {instances} instances, {branches} outcome \
             branches: {topology} topology differences, {branch_fail} tableau disagreements"
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("threshold", threshold),
        ("end-to-end oracle", end_to_end_oracle),
        ("pipeline soundness", pipeline_soundness),
        ("crossing statistics", crossing_statistics),
        ("overhead curve shape", overhead_shape),
        ("wall-follower maximality", wall_follower_maximality),
        ("linear work", linearity),
        ("subcritical component scaling", subcritical_scaling),
        ("entanglement width", entanglement_width),
        ("measurement calculus", measurement_calculus),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        failures += (!v.passed) as usize;
        println!(
            "{} {:>2} {name}: {} [{:.1}s]",
            if v.passed { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
