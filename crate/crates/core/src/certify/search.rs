//! Exhaustive and heuristic searches over labelings for the naive and exact bounds.

use crate::error::Result;
use crate::expansion::{expansion_move, run_expansion, strictly_better};
use crate::model::{perturb, Labeling, PottsInstance};
use crate::num::{int, to_f64, Rational};
use crate::oracle;

use super::QualityObjective;

/// `⟨θ, x*⟩ + cut(x*)`: no expansion local minimum has higher energy.
pub fn naive_energy_cap(instance: &PottsInstance, x_star: &Labeling) -> Result<Rational> {
    Ok(instance.energy_exact(x_star)? + instance.cut_cost_exact(x_star.labels()))
}

/// All labelings with energy at most `cap`, paired with the exact value of `f`, sorted by
/// decreasing `f` (enumeration order on ties).
pub(crate) fn feasible_by_value(
    instance: &PottsInstance,
    f: &QualityObjective,
    cap: &Rational,
    budget: u128,
) -> Result<Vec<(Labeling, Rational)>> {
    let mut out: Vec<(Labeling, Rational)> = oracle::labelings_within(instance, cap, budget)?
        .into_iter()
        .map(|x| {
            let v = f.evaluate_labeling(instance, &x);
            (x, v)
        })
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1));
    Ok(out)
}

/// Whether `x` minimizes the energy of its own perturbed instance. Cheap expansion moves
/// rule most labelings out before the exhaustive check.
pub(crate) fn optimal_in_own_perturbation(instance: &PottsInstance, x: &Labeling, budget: u128) -> Result<bool> {
    let pert = perturb(instance, x)?.into_instance();
    for alpha in 0..instance.label_count() {
        let y = expansion_move(&pert, x.labels(), alpha);
        if strictly_better(&pert, y.labels(), x.labels()) {
            return Ok(false);
        }
    }
    oracle::is_global_minimum(&pert, x, budget)
}

/// Feasible labelings for the naive program found by Lagrangian α-expansion: the node costs
/// are discounted by `λ` off `x*`, and `λ` is bisected against the energy cap. A greedy pass
/// then flips single vertices away from `x*` while the cap allows.
pub(crate) fn naive_heuristic(
    instance: &PottsInstance,
    x_star: &Labeling,
    f: &QualityObjective,
    cap: &Rational,
) -> Result<Option<(Labeling, Rational)>> {
    let k = instance.label_count();
    let n = instance.vertex_count();
    let cap_f = to_f64(cap);
    let order: Vec<usize> = (0..k).collect();
    let mut best: Option<(Labeling, Rational)> = None;
    let consider = |x: Labeling, best: &mut Option<(Labeling, Rational)>| -> Result<bool> {
        if instance.energy_exact(&x)? > *cap {
            return Ok(false);
        }
        let v = f.evaluate_labeling(instance, &x);
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            *best = Some((x, v));
        }
        Ok(true)
    };
    consider(x_star.clone(), &mut best)?;

    let spread = instance.node_costs().iter().map(to_f64).fold(0.0f64, |a, c| a.max(c.abs()));
    let degree_weight = (0..n)
        .map(|u| instance.neighbors(u).iter().map(|&(_, e)| instance.weight_f64(e)).sum::<f64>())
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (0.0f64, 2.0 * spread + 2.0 * degree_weight + 1.0);
    for _ in 0..30 {
        let lambda = 0.5 * (lo + hi);
        let mut costs = Vec::with_capacity(n * k);
        for u in 0..n {
            for i in 0..k {
                let c = instance.node_cost(u, i).clone();
                costs.push(if i == x_star[u] { c } else { c - Rational::from_float(lambda).unwrap_or_else(|| int(0)) });
            }
        }
        let shifted = PottsInstance::new(n, k, instance.edges().to_vec(), costs, instance.weights().to_vec())?;
        let (x, _) = run_expansion(&shifted, x_star, &order, crate::expansion::DEFAULT_MAX_SWEEPS)?;
        if consider(x, &mut best)? {
            lo = lambda;
        } else {
            hi = lambda;
        }
    }

    // Greedy completion from the best labeling: flip the vertex whose move away from x* adds
    // the least energy, while the cap still holds with a small float margin.
    if let Some((start, _)) = best.clone() {
        let mut x = start.into_inner();
        let mut energy = instance.energy(&Labeling::new(x.clone()))?;
        let margin = 1e-9 * (1.0 + cap_f.abs());
        let delta = |x: &[usize], u: usize, i: usize| {
            let mut d = instance.node_cost_f64(u, i) - instance.node_cost_f64(u, x[u]);
            for &(v, e) in instance.neighbors(u) {
                let w = instance.weight_f64(e);
                d += w * (((i != x[v]) as i32 - (x[u] != x[v]) as i32) as f64);
            }
            d
        };
        loop {
            let mut pick: Option<(usize, usize, f64)> = None;
            for u in (0..n).filter(|&u| x[u] == x_star[u]) {
                for i in (0..k).filter(|&i| i != x[u]) {
                    let d = delta(&x, u, i);
                    if energy + d <= cap_f - margin && pick.is_none_or(|(_, _, pd)| d < pd) {
                        pick = Some((u, i, d));
                    }
                }
            }
            let Some((u, i, d)) = pick else { break };
            x[u] = i;
            energy += d;
        }
        consider(Labeling::new(x), &mut best)?;
    }
    Ok(best)
}
