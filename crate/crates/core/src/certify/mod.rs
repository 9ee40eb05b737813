//! Upper bounds on the quality of every labeling α-expansion can return.
//!
//! Three bounds are offered, from tightest to loosest: [`exact_certify`] searches the
//! labelings that are optimal for their own perturbed instance, [`solve_certified_bound`]
//! solves the LP relaxation of that set tightened by cycle inequalities, and [`naive_bound`]
//! only uses the energy guarantee `E(x) ≤ E(x*) + cut(x*)`.

mod cycles;
mod objective;
mod program;
mod search;

use std::time::Instant;

use serde::Serialize;

pub use cycles::{separate_cycles, CycleInequality, Separator, EPS_CUT};
pub use objective::{make_gap_objective, make_hamming_objective, ObjectiveKind, QualityObjective};
pub use program::{build_certify_program, gauge_fix, CertifyProgram};
pub use search::naive_energy_cap;

use crate::error::{Error, Result};
use crate::lp::{LpScalar, SolverPath};
use crate::model::{Labeling, PottsInstance};
use crate::num::{to_f64, Rational, Scalar};
use crate::oracle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Certified,
    Naive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    /// The reported value is the exact optimum of its program.
    Optimal,
    /// Cut rounds ran out while violated cuts remained; the value is still a valid bound.
    RoundLimit,
    /// The search was cut short; the value is attained by a feasible labeling, so the true
    /// bound is at least this large.
    LowerBoundOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub method: Method,
    pub objective: String,
    pub bound: f64,
    pub rounds: usize,
    pub cuts: usize,
    pub solver_path: SolverPath,
    pub wall_time_secs: f64,
    pub status: BoundStatus,
    /// Bound after each LP solve (certified method only).
    pub round_values: Vec<f64>,
    /// The exact bound when the computation was exact.
    #[serde(skip)]
    pub exact_bound: Option<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Arithmetic {
    /// Exact rationals for small programs, floats otherwise.
    #[default]
    Auto,
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub max_rounds: usize,
    pub max_cuts_per_round: usize,
    pub arithmetic: Arithmetic,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { max_rounds: 20, max_cuts_per_round: 20, arithmetic: Arithmetic::Auto }
    }
}

/// A certified-bound run with the cuts it generated and the final optimizer.
#[derive(Clone, Debug)]
pub struct CertifiedRun {
    pub report: BoundReport,
    pub cuts: Vec<CycleInequality>,
    pub point: Vec<f64>,
}

/// Programs at most this large (rows × variables) use exact arithmetic under `Auto`.
const EXACT_CERTIFY_LIMIT: usize = 6_000;

/// Maximizes `f` over the relaxed certification program, adding violated cycle inequalities
/// for up to `max_rounds` rounds. Every round value is an upper bound on `f` over all
/// labelings that are optimal for their own perturbed instance; the smallest is reported.
pub fn solve_certified_bound(
    instance: &PottsInstance,
    f: &QualityObjective,
    options: &CertifyOptions,
) -> Result<CertifiedRun> {
    if options.max_rounds == 0 {
        return Err(Error::Parameter("max_rounds must be at least 1".into()));
    }
    let exact = match options.arithmetic {
        Arithmetic::Exact => true,
        Arithmetic::Float => false,
        Arithmetic::Auto => {
            let prog = build_certify_program::<f64>(instance, f);
            prog.lp.rows.len() * prog.variable_count() <= EXACT_CERTIFY_LIMIT
        }
    };
    if exact {
        certified_rounds::<Rational>(instance, f, options)
    } else {
        certified_rounds::<f64>(instance, f, options)
    }
}

fn certified_rounds<T: LpScalar>(
    instance: &PottsInstance,
    f: &QualityObjective,
    options: &CertifyOptions,
) -> Result<CertifiedRun> {
    let start = Instant::now();
    let offset = T::from_rational(&f.offset);
    let mut prog = build_certify_program::<T>(instance, f);
    let mut separator = Separator::new();
    let mut all_cuts = Vec::new();
    let mut round_values = Vec::new();
    let mut best: Option<(T, Vec<f64>)> = None;
    let mut rounds = 0;
    let mut status = BoundStatus::Optimal;
    loop {
        let (value, x) = prog.solve()?;
        let raw = value.add(&offset);
        let point: Vec<f64> = x.iter().map(Scalar::to_f64).collect();
        round_values.push(f.scaled(raw.to_f64()));
        log::debug!("certify round {rounds}: bound {}", f.scaled(raw.to_f64()));
        if best.as_ref().is_none_or(|(b, _)| raw < *b) {
            best = Some((raw, point.clone()));
        }
        let cuts = separator.separate(instance, &point, options.max_cuts_per_round);
        if cuts.is_empty() {
            break;
        }
        if rounds == options.max_rounds {
            status = BoundStatus::RoundLimit;
            break;
        }
        for cut in &cuts {
            prog.add_cut(instance, cut);
        }
        all_cuts.extend(cuts);
        rounds += 1;
    }
    let (raw, point) = best.expect("at least one solve");
    Ok(CertifiedRun {
        report: BoundReport {
            method: Method::Certified,
            objective: f.name.clone(),
            bound: f.scaled(raw.to_f64()),
            rounds,
            cuts: all_cuts.len(),
            solver_path: T::PATH,
            wall_time_secs: start.elapsed().as_secs_f64(),
            status,
            round_values,
            exact_bound: exact_scaled(f, &raw),
        },
        cuts: all_cuts,
        point,
    })
}

fn exact_scaled<T: Scalar>(f: &QualityObjective, raw: &T) -> Option<Rational> {
    let any: &dyn std::any::Any = raw;
    any.downcast_ref::<Rational>().map(|r| r * &f.scale)
}

/// Maximum of `f` over labelings with `E(x) ≤ E(x*) + cut(x*)`.
///
/// Enumerates exactly within `budget`; beyond it, returns the best labeling found by a
/// Lagrangian expansion heuristic, flagged [`BoundStatus::LowerBoundOnly`].
pub fn naive_bound(instance: &PottsInstance, x_star: &Labeling, f: &QualityObjective, budget: u128) -> Result<BoundReport> {
    let start = Instant::now();
    let cap = search::naive_energy_cap(instance, x_star)?;
    let (value, status) = if oracle::labeling_count(instance) <= budget {
        let feasible = search::feasible_by_value(instance, f, &cap, budget)?;
        let (_, v) = feasible.into_iter().next().ok_or_else(|| Error::Lp("x* violates its own cap".into()))?;
        (v, BoundStatus::Optimal)
    } else {
        let (_, v) = search::naive_heuristic(instance, x_star, f, &cap)?
            .ok_or_else(|| Error::Lp("x* violates its own cap".into()))?;
        (v, BoundStatus::LowerBoundOnly)
    };
    Ok(BoundReport {
        method: Method::Naive,
        objective: f.name.clone(),
        bound: to_f64(&value),
        rounds: 0,
        cuts: 0,
        solver_path: SolverPath::Exact,
        wall_time_secs: start.elapsed().as_secs_f64(),
        status,
        round_values: Vec::new(),
        exact_bound: Some(value),
    })
}

/// Maximum of `f` over labelings `x` that minimize the energy of their own perturbed
/// instance, by exhaustive search. Candidates come from the naive feasible set (a superset)
/// in decreasing order of `f`; the first one that passes the optimality check is the answer.
pub fn exact_certify(instance: &PottsInstance, x_star: &Labeling, f: &QualityObjective, budget: u128) -> Result<BoundReport> {
    let start = Instant::now();
    let cap = search::naive_energy_cap(instance, x_star)?;
    let candidates = search::feasible_by_value(instance, f, &cap, budget)?;
    let mut found = None;
    for (x, v) in candidates {
        if search::optimal_in_own_perturbation(instance, &x, budget)? {
            found = Some(v);
            break;
        }
    }
    let value = found.ok_or_else(|| Error::Lp("no labeling is optimal for its own perturbation".into()))?;
    Ok(BoundReport {
        method: Method::Exact,
        objective: f.name.clone(),
        bound: to_f64(&value),
        rounds: 0,
        cuts: 0,
        solver_path: SolverPath::Exact,
        wall_time_secs: start.elapsed().as_secs_f64(),
        status: BoundStatus::Optimal,
        round_values: Vec::new(),
        exact_bound: Some(value),
    })
}
