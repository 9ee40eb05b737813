use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use potts::certify::{self, Arithmetic, CertifyOptions, QualityObjective};
use potts::expansion::{self, default_order};
use potts::instances::{gen_grid, random_labeling, read_instance, read_labeling, write_instance, write_labeling};
use potts::num::{format_rational, parse_rational, to_f64};
use potts::{oracle, rounding, Labeling, PottsInstance};

use crate::report::{emit, VerificationFailed};
use crate::{
    ArithmeticArg, CertifyArgs, GenArgs, InfoArgs, MethodArg, NaiveArgs, ObjectiveArg, RoundCheckArgs, SolveExpansionArgs,
    SolveMapArgs, VerifyArgs,
};

fn load_instance(path: &Path) -> Result<PottsInstance> {
    read_instance(path).with_context(|| format!("reading instance {}", path.display()))
}

fn load_labeling(path: &Path, instance: &PottsInstance) -> Result<Labeling> {
    let (x, k) = read_labeling(path).with_context(|| format!("reading labeling {}", path.display()))?;
    if k != instance.label_count() {
        return Err(potts::Error::InvalidLabeling(format!("labeling has k = {k}, instance has k = {}", instance.label_count())))
            .with_context(|| path.display().to_string());
    }
    instance.check_labeling(&x).with_context(|| path.display().to_string())?;
    Ok(x)
}

fn objective(kind: ObjectiveArg, instance: &PottsInstance, x: &Labeling) -> Result<QualityObjective> {
    Ok(match kind {
        ObjectiveArg::Hamming => certify::make_hamming_objective(instance, x)?,
        ObjectiveArg::Gap => certify::make_gap_objective(instance, x)?,
    })
}

fn path_name(p: &potts::lp::SolverPath) -> &'static str {
    match p {
        potts::lp::SolverPath::Exact => "exact",
        potts::lp::SolverPath::Float => "float",
    }
}

#[derive(Serialize)]
struct GenReport {
    out: String,
    n: usize,
    m: usize,
    k: usize,
    seed: u64,
}

pub fn gen(a: GenArgs) -> Result<()> {
    let inst = gen_grid(a.h, a.w, a.k, a.seed, (a.cost_min, a.cost_max), (a.weight_min, a.weight_max))?;
    write_instance(&inst, &a.out).with_context(|| format!("writing {}", a.out.display()))?;
    let body = GenReport {
        out: a.out.display().to_string(),
        n: inst.vertex_count(),
        m: inst.edge_count(),
        k: inst.label_count(),
        seed: a.seed,
    };
    emit("gen", Some(&inst), "none", body)
}

#[derive(Serialize)]
struct ExpansionReport {
    energy: f64,
    labeling_out: Option<String>,
    #[serde(flatten)]
    stats: expansion::SweepStats,
}

pub fn solve_expansion(a: SolveExpansionArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let (n, k) = (inst.vertex_count(), inst.label_count());
    let init = if a.init == "zeros" {
        Labeling::constant(n, 0)
    } else if let Some(seed) = a.init.strip_prefix("random:") {
        let seed = seed.parse().with_context(|| format!("invalid seed in --init {}", a.init))?;
        random_labeling(n, k, seed)
    } else {
        load_labeling(Path::new(&a.init), &inst)?
    };
    let order = a.order.unwrap_or_else(|| default_order(k));
    let (x, stats) = expansion::run_expansion(&inst, &init, &order, a.max_sweeps)?;
    if let Some(out) = &a.out {
        write_labeling(&x, k, out).with_context(|| format!("writing {}", out.display()))?;
    }
    log::info!("expansion: {} sweeps, {} moves", stats.sweeps, stats.moves_accepted);
    let body = ExpansionReport { energy: inst.energy(&x)?, labeling_out: a.out.map(|p| p.display().to_string()), stats };
    emit("solve-expansion", Some(&inst), "none", body)
}

#[derive(Serialize)]
struct MapReport {
    energy: f64,
    energy_exact: String,
    labeling_out: Option<String>,
    labels: Vec<usize>,
}

pub fn solve_map(a: SolveMapArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let (x, e) = oracle::brute_map(&inst, a.budget)?;
    if let Some(out) = &a.out {
        write_labeling(&x, inst.label_count(), out).with_context(|| format!("writing {}", out.display()))?;
    }
    let body = MapReport {
        energy: to_f64(&e),
        energy_exact: format_rational(&e),
        labeling_out: a.out.map(|p| p.display().to_string()),
        labels: x.into_inner(),
    };
    emit("solve-map", Some(&inst), "exact", body)
}

pub fn certify(a: CertifyArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let x = load_labeling(&a.map, &inst)?;
    let f = objective(a.objective, &inst, &x)?;
    let report = match a.method {
        MethodArg::Exact => certify::exact_certify(&inst, &x, &f, a.budget)?,
        MethodArg::Certified => {
            let arithmetic = match a.arithmetic {
                ArithmeticArg::Auto => Arithmetic::Auto,
                ArithmeticArg::Exact => Arithmetic::Exact,
                ArithmeticArg::Float => Arithmetic::Float,
            };
            let options = CertifyOptions { max_rounds: a.rounds, max_cuts_per_round: a.cuts_per_round, arithmetic };
            certify::solve_certified_bound(&inst, &f, &options)?.report
        }
    };
    emit("certify", Some(&inst), path_name(&report.solver_path), &report)
}

pub fn naive_bound(a: NaiveArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let x = load_labeling(&a.map, &inst)?;
    let f = objective(a.objective, &inst, &x)?;
    let report = certify::naive_bound(&inst, &x, &f, a.budget)?;
    emit("naive-bound", Some(&inst), path_name(&report.solver_path), &report)
}

#[derive(Serialize)]
struct VerifyReport {
    trials: u64,
    seed: u64,
    shape: String,
    k: usize,
    workers: usize,
    instances: usize,
    passed: usize,
    failures: usize,
    minima_checked: usize,
    failed_seeds: Vec<u64>,
    wall_time_secs: f64,
}

pub fn verify_theorem(a: VerifyArgs) -> Result<()> {
    let start = Instant::now();
    let workers = a.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1);
    let seeds: Vec<u64> = (0..a.trials).map(|t| a.seed.wrapping_add(t)).collect();
    let chunk = seeds.len().div_ceil(workers).max(1);
    let (h, w) = a.shape;
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = seeds
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    oracle::theorem_batch(part.iter().copied(), h, w, a.k, (a.cost_min, a.cost_max), (a.weight_min, a.weight_max))
                })
            })
            .collect();
        handles.into_iter().map(|hd| hd.join().expect("worker panicked")).collect::<Vec<_>>()
    });
    let mut body = VerifyReport {
        trials: a.trials,
        seed: a.seed,
        shape: format!("{h}x{w}"),
        k: a.k,
        workers,
        instances: 0,
        passed: 0,
        failures: 0,
        minima_checked: 0,
        failed_seeds: Vec::new(),
        wall_time_secs: 0.0,
    };
    for rep in reports {
        let rep = rep?;
        body.instances += rep.instances;
        body.passed += rep.passed;
        body.failures += rep.failed;
        body.minima_checked += rep.minima_checked;
        body.failed_seeds.extend(rep.entries.iter().filter(|e| !e.passed).map(|e| e.seed));
    }
    body.wall_time_secs = start.elapsed().as_secs_f64();
    let failures = body.failures;
    emit("verify-theorem", None, "exact", body)?;
    if failures > 0 {
        bail!(VerificationFailed(format!("{failures} instance(s) violate the theorem")));
    }
    Ok(())
}

#[derive(Serialize)]
struct RoundCheckReport {
    cases: usize,
    passed: usize,
    marginal_failures: usize,
    expectation_failures: usize,
    decomposition_failures: usize,
    epsilon: Option<String>,
    min_expectation_slack: Option<f64>,
}

pub fn round_check(a: RoundCheckArgs) -> Result<()> {
    let mut cases: Vec<(PottsInstance, Labeling)> = Vec::new();
    let single = a.instance.is_some();
    if let (Some(ip), Some(lp)) = (&a.instance, &a.labeling) {
        let inst = load_instance(ip)?;
        let x = load_labeling(lp, &inst)?;
        cases.push((inst, x));
    } else {
        let (h, w) = a.shape;
        for t in 0..a.trials {
            let seed = a.seed.wrapping_add(t);
            let inst = gen_grid(h, w, a.k, seed, (0, 10), (0, 5))?;
            let x = random_labeling(inst.vertex_count(), a.k, seed);
            cases.push((inst, x));
        }
    }
    let fixed_eps = a
        .epsilon
        .as_deref()
        .map(|s| parse_rational(s).ok_or_else(|| potts::Error::Parameter(format!("invalid epsilon '{s}'"))))
        .transpose()?;

    let mut body = RoundCheckReport {
        cases: cases.len(),
        passed: 0,
        marginal_failures: 0,
        expectation_failures: 0,
        decomposition_failures: 0,
        epsilon: fixed_eps.as_ref().map(format_rational),
        min_expectation_slack: None,
    };
    for (inst, x) in &cases {
        let eps = fixed_eps.clone().unwrap_or_else(|| rounding::default_epsilon(inst.label_count()));
        let y = rounding::perturbed_lp_optimum(inst, x)?;
        let marginals_ok = rounding::verify_marginal_guarantees(inst, x, &y, &eps)?.holds();
        let (lhs, rhs) = rounding::exact_rounding_expectation(inst, x, &y, &eps)?;
        let slack = to_f64(&(&lhs - &rhs));
        body.min_expectation_slack = Some(body.min_expectation_slack.map_or(slack, |m: f64| m.min(slack)));
        let expectation_ok = lhs >= rhs;
        // The decomposition inequality against the integral MAP-side witness argmax(y′).
        let (dl, dr) = rounding::combinatorial_decomposition(inst, x, &y.argmax_labels())?;
        let decomposition_ok = dl >= dr;
        body.marginal_failures += usize::from(!marginals_ok);
        body.expectation_failures += usize::from(!expectation_ok);
        body.decomposition_failures += usize::from(!decomposition_ok);
        body.passed += usize::from(marginals_ok && expectation_ok && decomposition_ok);
    }
    let failed = body.cases - body.passed;
    let inst = single.then(|| &cases[0].0);
    emit("round-check", inst, "exact", body)?;
    if failed > 0 {
        bail!(VerificationFailed(format!("{failed} case(s) failed the rounding checks")));
    }
    Ok(())
}

#[derive(Serialize)]
struct InfoReport {
    n: usize,
    m: usize,
    k: usize,
    dimension: usize,
    cost_min: f64,
    cost_max: f64,
    weight_min: Option<f64>,
    weight_max: Option<f64>,
    weight_total: f64,
    log10_labelings: f64,
}

pub fn info(a: InfoArgs) -> Result<()> {
    let inst = load_instance(&a.instance)?;
    let costs: Vec<f64> = inst.node_costs().iter().map(to_f64).collect();
    let weights: Vec<f64> = inst.weights().iter().map(to_f64).collect();
    let body = InfoReport {
        n: inst.vertex_count(),
        m: inst.edge_count(),
        k: inst.label_count(),
        dimension: inst.dimension(),
        cost_min: costs.iter().copied().fold(f64::INFINITY, f64::min),
        cost_max: costs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        weight_min: weights.iter().copied().reduce(f64::min),
        weight_max: weights.iter().copied().reduce(f64::max),
        weight_total: weights.iter().sum(),
        log10_labelings: inst.vertex_count() as f64 * (inst.label_count() as f64).log10(),
    };
    emit("info", Some(&inst), "none", body)
}
