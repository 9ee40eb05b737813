//! End-to-end acceptance checks. Each test prints one `PASS`/`FAIL` line per criterion.
//!
//! The tests take a shared lock so their wall-clock budgets are measured one at a time.

use std::io::Write;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use potts::certify::{
    exact_certify, make_gap_objective, make_hamming_objective, naive_bound, solve_certified_bound, Arithmetic,
    BoundStatus, CertifyOptions, CycleInequality,
};
use potts::expansion::{check_bvz_bound, default_order, optimal_expansion, run_expansion, DEFAULT_MAX_SWEEPS};
use potts::instances::{gen_grid, random_labeling, stereo_build, synthetic_pair, SplitMix64, StereoParams};
use potts::locallp::{build_system, solve_primal_dual, tau_gap};
use potts::model::fixtures;
use potts::num::{int, ratio, to_f64};
use potts::oracle::{self, all_expansion_minima, brute_expansion, brute_map, verify_main_theorem, DEFAULT_BUDGET};
use potts::rounding;
use potts::{hamming, Labeling, PottsInstance};

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn verdict(id: &str, pass: bool, elapsed: Duration, budget: Duration, detail: String) {
    let within = elapsed <= budget;
    let ok = pass && within;
    // Written to the raw handle so the line survives libtest output capture.
    let _ = writeln!(
        std::io::stderr(),
        "{} criterion {id}: {detail}; {:.1}s of {:.0}s budget",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    assert!(pass, "criterion {id} failed: {detail}");
    assert!(within, "criterion {id} exceeded its runtime budget");
}

#[test]
fn criteria_1_and_7_theorem_and_energy_guarantee() {
    let _g = serial();
    let start = Instant::now();
    let (mut passed, mut minima_checked, mut bvz_checked, mut bvz_failures) = (0, 0, 0, 0);
    let mut failed_seeds = Vec::new();
    for seed in 0..1000u64 {
        let inst = gen_grid(2, 3, 3, seed, (0, 10), (0, 5)).unwrap();
        let rep = verify_main_theorem(&inst, DEFAULT_BUDGET).unwrap();
        minima_checked += rep.minima;
        if rep.passed {
            passed += 1;
        } else {
            failed_seeds.push(seed);
        }
        let (x_star, _) = brute_map(&inst, DEFAULT_BUDGET).unwrap();
        for x in all_expansion_minima(&inst, DEFAULT_BUDGET).unwrap() {
            bvz_checked += 1;
            if !check_bvz_bound(&inst, &x, &x_star).unwrap().holds {
                bvz_failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        "1",
        passed == 1000,
        elapsed,
        Duration::from_secs(120),
        format!("{passed}/1000 grids pass, {minima_checked} minima MAP for their perturbation with exact LP equality, failed seeds {failed_seeds:?}"),
    );
    verdict(
        "7",
        bvz_failures == 0 && bvz_checked == minima_checked,
        elapsed,
        Duration::from_secs(120),
        format!("{bvz_checked} minima checked against E(x*) + cut(x*), {bvz_failures} violations"),
    );
}

#[test]
fn criterion_2_counterexample() {
    let _g = serial();
    let start = Instant::now();
    let p4 = fixtures::p4();
    let xs = Labeling::new(vec![0, 3]);
    let h = make_hamming_objective(&p4, &xs).unwrap();
    let g = make_gap_objective(&p4, &xs).unwrap();
    let naive_h = naive_bound(&p4, &xs, &h, DEFAULT_BUDGET).unwrap();
    let cert_h = solve_certified_bound(&p4, &h, &CertifyOptions::default()).unwrap().report;
    let naive_g = naive_bound(&p4, &xs, &g, DEFAULT_BUDGET).unwrap();
    let pass = (naive_h.bound - 1.0).abs() <= 1e-9
        && cert_h.bound.abs() <= 1e-9
        && naive_g.exact_bound == Some(ratio(6, 5))
        && naive_h.status == BoundStatus::Optimal;
    verdict(
        "2",
        pass,
        start.elapsed(),
        Duration::from_secs(1),
        format!(
            "naive Hamming {}, certified Hamming {}, naive gap {:?}",
            naive_h.bound,
            cert_h.bound,
            naive_g.exact_bound.map(|r| r.to_string())
        ),
    );
}

#[test]
fn criterion_3_rounding_lemma() {
    let _g = serial();
    let start = Instant::now();
    let (mut passed, mut improving_checked) = (0, 0);
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let (h, w) = if seed % 2 == 0 { (2, 2) } else { (2, 3) };
        let inst = gen_grid(h, w, 3, 1000 + seed, (0, 10), (0, 5)).unwrap();
        // Half the triples start from an expansion local minimum, half from a random labeling.
        let x0 = random_labeling(inst.vertex_count(), 3, seed);
        let x = if seed % 4 < 2 { x0 } else { run_expansion(&inst, &x0, &default_order(3), DEFAULT_MAX_SWEEPS).unwrap().0 };
        let y = rounding::perturbed_lp_optimum(&inst, &x).unwrap();
        let eps = rounding::default_epsilon(3);
        let marg = rounding::verify_marginal_guarantees(&inst, &x, &y, &eps).unwrap();
        let (lhs, rhs) = rounding::exact_rounding_expectation(&inst, &x, &y, &eps).unwrap();
        let mut ok = marg.holds() && lhs >= rhs;
        if rhs > int(0) {
            improving_checked += 1;
            let ex = inst.energy_exact(&x).unwrap();
            let cells = rounding::rounding_cells(&inst, &x, &y, &eps).unwrap();
            ok &= cells.iter().any(|c| inst.energy_exact(&c.labeling).unwrap() < ex);
        }
        if ok {
            passed += 1;
        } else {
            failures.push(seed);
        }
    }
    verdict(
        "3",
        passed == 100,
        start.elapsed(),
        Duration::from_secs(60),
        format!("{passed}/100 triples satisfy all three guarantees and lhs ≥ rhs exactly ({improving_checked} with rhs > 0 had an improving cell), failures {failures:?}"),
    );
}

#[test]
fn criterion_4_combinatorial_decomposition() {
    let _g = serial();
    let start = Instant::now();
    let (mut pairs, mut violations) = (0usize, 0usize);
    for seed in 0..20u64 {
        let inst = gen_grid(2, 2, 3, 2000 + seed, (0, 10), (0, 5)).unwrap();
        let all: Vec<Labeling> = (0..81usize).map(|code| Labeling::new((0..4).map(|u| code / 3usize.pow(u) % 3).collect())).collect();
        for x in &all {
            for y in &all {
                let (lhs, rhs) = rounding::combinatorial_decomposition(&inst, x, y).unwrap();
                pairs += 1;
                if lhs < rhs {
                    violations += 1;
                }
            }
        }
    }
    verdict(
        "4",
        violations == 0 && pairs == 20 * 6561,
        start.elapsed(),
        Duration::from_secs(60),
        format!("{pairs} labeling pairs on 20 grids, {violations} violations"),
    );
}

struct SoundnessRun {
    passed: usize,
    failures: Vec<(u64, String)>,
    cuts: Vec<(PottsInstance, Vec<CycleInequality>)>,
    elapsed: Duration,
}

fn soundness_run() -> &'static SoundnessRun {
    static RUN: OnceLock<SoundnessRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let mut passed = 0;
        let mut failures = Vec::new();
        let mut cuts = Vec::new();
        for seed in 0..100u64 {
            let inst = gen_grid(3, 3, 3, 3000 + seed, (0, 10), (0, 5)).unwrap();
            let (x_star, _) = brute_map(&inst, DEFAULT_BUDGET).unwrap();
            let f = make_hamming_objective(&inst, &x_star).unwrap();
            let worst = to_f64(&oracle::worst_minimum(&inst, &f, DEFAULT_BUDGET).unwrap().1);
            let exact = exact_certify(&inst, &x_star, &f, DEFAULT_BUDGET).unwrap().bound;
            let run = solve_certified_bound(&inst, &f, &CertifyOptions::default()).unwrap();
            let certified = run.report.bound;
            let naive = naive_bound(&inst, &x_star, &f, DEFAULT_BUDGET).unwrap();
            let tol = tau_gap(certified);
            let chain = worst <= exact + tol
                && exact <= certified + tol
                && certified <= naive.bound + tol
                && naive.status == BoundStatus::Optimal;
            let monotone = run.report.round_values.windows(2).all(|w| w[1] <= w[0] + tau_gap(w[0]));
            if chain && monotone {
                passed += 1;
            } else {
                failures.push((
                    seed,
                    format!("worst {worst} exact {exact} certified {certified} naive {} rounds {:?}", naive.bound, run.report.round_values),
                ));
            }
            cuts.push((inst, run.cuts));
        }
        SoundnessRun { passed, failures, cuts, elapsed: start.elapsed() }
    })
}

#[test]
fn criterion_5_soundness_chain() {
    let _g = serial();
    let run = soundness_run();
    verdict(
        "5",
        run.passed == 100,
        run.elapsed,
        Duration::from_secs(600),
        format!("{}/100 grids satisfy worst ≤ exact ≤ certified ≤ naive, failures {:?}", run.passed, run.failures),
    );
}

#[test]
fn criterion_6_expansion_optimality() {
    let _g = serial();
    let start = Instant::now();
    let shapes = [(1, 2), (1, 3), (2, 2), (1, 4), (1, 5), (2, 3), (1, 6), (1, 7), (2, 4), (1, 8)];
    let (mut moves, mut mismatches) = (0usize, Vec::new());
    for seed in 0..500u64 {
        let mut rng = SplitMix64::new(seed);
        let (h, w) = shapes[rng.below(shapes.len())];
        let k = 2 + rng.below(2);
        let inst = gen_grid(h, w, k, 4000 + seed, (0, 10), (0, 5)).unwrap();
        let n = inst.vertex_count();
        for code in 0..oracle::labeling_count(&inst) as usize {
            let x = Labeling::new((0..n).map(|u| code / k.pow(u as u32) % k).collect());
            for alpha in 0..k {
                let y = optimal_expansion(&inst, &x, alpha).unwrap();
                let (_, best) = brute_expansion(&inst, &x, alpha).unwrap();
                moves += 1;
                if inst.energy_exact(&y).unwrap() != best {
                    mismatches.push((seed, x.clone(), alpha));
                }
            }
        }
    }
    verdict(
        "6",
        mismatches.is_empty(),
        start.elapsed(),
        Duration::from_secs(120),
        format!("{moves} (x, α) moves on 500 instances, {} mismatches {:?}", mismatches.len(), mismatches.iter().take(5).collect::<Vec<_>>()),
    );
}

struct StereoRun {
    map_energy: f64,
    map_gap: f64,
    certified: f64,
    certified_rounds: usize,
    naive: f64,
    naive_status: BoundStatus,
    run_errors: Vec<f64>,
    instance: PottsInstance,
    cuts: Vec<CycleInequality>,
    elapsed: Duration,
}

fn stereo_run() -> &'static StereoRun {
    static RUN: OnceLock<StereoRun> = OnceLock::new();
    RUN.get_or_init(|| {
        let start = Instant::now();
        let k = 3;
        let (left, right, _) = synthetic_pair(30, 40, k, 3, 1).unwrap();
        let inst = stereo_build(&left, &right, k, StereoParams { penalty: 2.0, threshold: 4.0, scale: 50.0 }).unwrap();
        let n = inst.vertex_count();

        let runs: Vec<Labeling> = (0..10u64)
            .map(|s| run_expansion(&inst, &random_labeling(n, k, 100 + s), &default_order(k), DEFAULT_MAX_SWEEPS).unwrap().0)
            .collect();
        let (x_star, _) = run_expansion(&inst, &Labeling::constant(n, 0), &default_order(k), DEFAULT_MAX_SWEEPS).unwrap();
        let x_star = runs.iter().chain(std::iter::once(&x_star)).min_by(|a, b| inst.energy(a).unwrap().total_cmp(&inst.energy(b).unwrap())).unwrap().clone();

        // The naive bound needs a MAP labeling; a repaired local-LP dual certifies x* as one.
        let lp = solve_primal_dual(&build_system(&inst), &inst.objective_vector::<f64>()).unwrap();
        let map_energy = inst.energy(&x_star).unwrap();
        let map_gap = map_energy - lp.dual_value;

        let f = make_hamming_objective(&inst, &x_star).unwrap();
        let opts = CertifyOptions { arithmetic: Arithmetic::Float, ..Default::default() };
        let run = solve_certified_bound(&inst, &f, &opts).unwrap();
        let naive = naive_bound(&inst, &x_star, &f, DEFAULT_BUDGET).unwrap();
        let run_errors = runs.iter().map(|x| hamming(x, &x_star).unwrap()).collect();
        StereoRun {
            map_energy,
            map_gap,
            certified: run.report.bound,
            certified_rounds: run.report.rounds,
            naive: naive.bound,
            naive_status: naive.status,
            run_errors,
            instance: inst,
            cuts: run.cuts,
            elapsed: start.elapsed(),
        }
    })
}

#[test]
fn criterion_8_stereo_bounds() {
    let _g = serial();
    let run = stereo_run();
    let worst_run = run.run_errors.iter().copied().fold(0.0, f64::max);
    // With a heuristic naive value the check certified < value ≤ true naive bound is still strict.
    let map_ok = run.map_gap <= tau_gap(run.map_energy);
    let pass = map_ok && run.certified < run.naive && worst_run <= run.certified + 1e-9 && worst_run <= run.naive + 1e-9;
    verdict(
        "8",
        pass,
        run.elapsed,
        Duration::from_secs(1800),
        format!(
            "30x40 synthetic pair, k=3: certified Hamming {:.4} after {} rounds, naive Hamming {} {:.4}, worst of 10 runs {:.4}, x* energy minus LP lower bound {:.3e}",
            run.certified,
            run.certified_rounds,
            if run.naive_status == BoundStatus::Optimal { "=" } else { "≥" },
            run.naive,
            worst_run,
            run.map_gap
        ),
    );
}

#[test]
fn criterion_9_cut_validity() {
    let _g = serial();
    let (soundness, stereo) = (soundness_run(), stereo_run());
    let start = Instant::now();
    let (mut checked_cuts, mut violations) = (0usize, 0usize);
    for (inst, cuts) in &soundness.cuts {
        let n = inst.vertex_count();
        let k = inst.label_count();
        let labelings: Vec<Vec<usize>> =
            (0..oracle::labeling_count(inst) as usize).map(|code| (0..n).map(|u| code / k.pow(u as u32) % k).collect()).collect();
        for cut in cuts {
            checked_cuts += 1;
            violations += labelings.iter().filter(|x| !cut.holds_for(inst, x)).count();
        }
    }
    let n = stereo.instance.vertex_count();
    let samples: Vec<Labeling> = (0..10_000u64).map(|s| random_labeling(n, stereo.instance.label_count(), 50_000 + s)).collect();
    for cut in &stereo.cuts {
        checked_cuts += 1;
        violations += samples.iter().filter(|x| !cut.holds_for(&stereo.instance, x.labels())).count();
    }
    verdict(
        "9",
        violations == 0,
        start.elapsed(),
        Duration::from_secs(1800),
        format!(
            "{checked_cuts} cuts ({} from the stereo run) checked exhaustively on 3x3 grids and on 10000 random stereo labelings, {violations} violations",
            stereo.cuts.len()
        ),
    );
}
