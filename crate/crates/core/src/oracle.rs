//! Brute-force ground truth by exhaustive enumeration.
//!
//! Labelings are visited in mixed-radix order with vertex 0 least significant. Energies are
//! tracked incrementally in exact integer arithmetic after scaling every cost by the common
//! denominator; instances whose scaled costs do not fit in `i64` fall back to rationals.

use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::certify::QualityObjective;
use crate::error::{Error, Result};
use crate::locallp::{build_system, solve_primal_dual};
use crate::model::{perturb, Labeling, PottsInstance};
use crate::num::{to_f64, Rational};

/// Default enumeration budget, `2^24` labelings.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

/// `k^n`, saturating.
pub fn labeling_count(instance: &PottsInstance) -> u128 {
    let k = instance.label_count() as u128;
    (0..instance.vertex_count()).try_fold(1u128, |acc, _| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

fn check_budget(instance: &PottsInstance, budget: u128) -> Result<()> {
    let required = labeling_count(instance);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

trait Cost: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}
impl Cost for i64 {}
impl Cost for Rational {}

/// Node costs and adjacency with a common cost type.
struct Table<C> {
    n: usize,
    k: usize,
    node: Vec<C>,
    adj: Vec<Vec<(usize, C)>>,
}

impl<C: Cost> Table<C> {
    fn build(instance: &PottsInstance, conv: impl Fn(&Rational) -> C) -> Self {
        let n = instance.vertex_count();
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in instance.edges().iter().enumerate() {
            let w = conv(instance.weight(e));
            adj[u].push((v, w.clone()));
            adj[v].push((u, w));
        }
        Self {
            n,
            k: instance.label_count(),
            node: instance.node_costs().iter().map(conv).collect(),
            adj,
        }
    }

    fn energy(&self, x: &[usize]) -> C {
        let mut total = C::zero();
        for u in 0..self.n {
            total = total + self.node[u * self.k + x[u]].clone();
            for (v, w) in &self.adj[u] {
                if *v > u && x[u] != x[*v] {
                    total = total + w.clone();
                }
            }
        }
        total
    }

    /// Energy change when `x[u]` becomes `b`.
    fn delta(&self, x: &[usize], u: usize, b: usize) -> C {
        let a = x[u];
        let mut d = self.node[u * self.k + b].clone() - self.node[u * self.k + a].clone();
        for (v, w) in &self.adj[u] {
            let xv = x[*v];
            if a == xv {
                d = d + w.clone();
            } else if b == xv {
                d = d - w.clone();
            }
        }
        d
    }

    /// Calls `visit` on every labeling with its energy; stops early when `visit` returns false.
    fn for_each(&self, mut visit: impl FnMut(&[usize], &C) -> bool) {
        let mut x = vec![0usize; self.n];
        let mut e = self.energy(&x);
        loop {
            if !visit(&x, &e) {
                return;
            }
            let mut u = 0;
            loop {
                if u == self.n {
                    return;
                }
                let next = if x[u] + 1 < self.k { x[u] + 1 } else { 0 };
                e = e + self.delta(&x, u, next);
                x[u] = next;
                if next != 0 {
                    break;
                }
                u += 1;
            }
        }
    }

    /// Some `alpha`-expansion of `x` has energy strictly below `e_x`. Walks the subsets of
    /// non-α vertices in Gray-code order.
    fn has_improving_expansion(&self, x: &[usize], e_x: &C, alpha: usize) -> bool {
        let free: Vec<usize> = (0..self.n).filter(|&u| x[u] != alpha).collect();
        if free.iter().any(|&u| self.delta(x, u, alpha) < C::zero()) {
            return true;
        }
        let mut y = x.to_vec();
        let mut e = e_x.clone();
        for step in 1u64..(1u64 << free.len()) {
            let u = free[step.trailing_zeros() as usize];
            let b = if y[u] == alpha { x[u] } else { alpha };
            e = e + self.delta(&y, u, b);
            y[u] = b;
            if e < *e_x {
                return true;
            }
        }
        false
    }

    fn best_expansion(&self, x: &[usize], alpha: usize) -> (Vec<usize>, C) {
        let free: Vec<usize> = (0..self.n).filter(|&u| x[u] != alpha).collect();
        let mut y = x.to_vec();
        let mut e = self.energy(x);
        let (mut best, mut best_e) = (y.clone(), e.clone());
        for step in 1u64..(1u64 << free.len()) {
            let u = free[step.trailing_zeros() as usize];
            let b = if y[u] == alpha { x[u] } else { alpha };
            e = e + self.delta(&y, u, b);
            y[u] = b;
            if e < best_e {
                best_e = e.clone();
                best.clone_from(&y);
            }
        }
        (best, best_e)
    }
}

/// Integer table scaled by the common denominator, if every partial sum fits in `i64`.
fn int_table(instance: &PottsInstance) -> Option<(Table<i64>, BigInt)> {
    let mut den = BigInt::one();
    for r in instance.node_costs().iter().chain(instance.weights()) {
        den = den.lcm(r.denom());
    }
    let scale = |r: &Rational| (r.numer() * (&den / r.denom())).to_i64();
    let mut budget: i128 = 0;
    for r in instance.node_costs().iter().chain(instance.weights()) {
        budget += scale(r)?.unsigned_abs() as i128;
    }
    // Deltas touch at most one node pair plus a vertex's edges twice.
    if budget.checked_mul(4)? > i64::MAX as i128 {
        return None;
    }
    let table = Table::build(instance, |r| scale(r).expect("checked above"));
    Some((table, den))
}

enum AnyTable {
    Int(Table<i64>, BigInt),
    Exact(Table<Rational>),
}

impl AnyTable {
    fn new(instance: &PottsInstance) -> Self {
        match int_table(instance) {
            Some((t, d)) => AnyTable::Int(t, d),
            None => AnyTable::Exact(Table::build(instance, Rational::clone)),
        }
    }
}

/// Minimum-energy labeling, lexicographically smallest among ties.
pub fn brute_map(instance: &PottsInstance, budget: u128) -> Result<(Labeling, Rational)> {
    check_budget(instance, budget)?;
    fn run<C: Cost>(t: &Table<C>) -> (Vec<usize>, C) {
        let mut best: Option<(Vec<usize>, C)> = None;
        t.for_each(|x, e| {
            let better = match &best {
                None => true,
                Some((bx, be)) => e < be || (e == be && x < bx.as_slice()),
            };
            if better {
                best = Some((x.to_vec(), e.clone()));
            }
            true
        });
        best.expect("at least one labeling")
    }
    let (x, e) = match AnyTable::new(instance) {
        AnyTable::Int(t, den) => {
            let (x, e) = run(&t);
            (x, Rational::new(BigInt::from(e), den))
        }
        AnyTable::Exact(t) => run(&t),
    };
    Ok((Labeling::new(x), e))
}

/// Every labeling that no single α-expansion strictly improves, in enumeration order.
pub fn all_expansion_minima(instance: &PottsInstance, budget: u128) -> Result<Vec<Labeling>> {
    check_budget(instance, budget)?;
    fn run<C: Cost>(t: &Table<C>) -> Vec<Labeling> {
        let mut out = Vec::new();
        t.for_each(|x, e| {
            if (0..t.k).all(|a| !t.has_improving_expansion(x, e, a)) {
                out.push(Labeling::new(x.to_vec()));
            }
            true
        });
        out
    }
    Ok(match AnyTable::new(instance) {
        AnyTable::Int(t, _) => run(&t),
        AnyTable::Exact(t) => run(&t),
    })
}

/// Brute-force best `alpha`-expansion of `x` and its exact energy (first minimum in Gray-code
/// order on ties).
pub fn brute_expansion(instance: &PottsInstance, x: &Labeling, alpha: usize) -> Result<(Labeling, Rational)> {
    instance.check_labeling(x)?;
    let free = x.labels().iter().filter(|&&l| l != alpha).count();
    if free >= 40 {
        return Err(Error::BudgetExceeded { required: 1u128 << free, budget: 1u128 << 40 });
    }
    Ok(match AnyTable::new(instance) {
        AnyTable::Int(t, den) => {
            let (y, e) = t.best_expansion(x.labels(), alpha);
            (Labeling::new(y), Rational::new(BigInt::from(e), den))
        }
        AnyTable::Exact(t) => {
            let (y, e) = t.best_expansion(x.labels(), alpha);
            (Labeling::new(y), e)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MinimumCheck {
    pub labeling: Vec<usize>,
    /// Energy of the minimum in its own perturbed instance.
    pub perturbed_energy: f64,
    /// Brute-force minimum of the perturbed instance.
    pub perturbed_optimum: f64,
    pub local_lp_value: f64,
    pub is_global_minimum: bool,
    pub lp_tight: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub minima: usize,
    pub map_energy: f64,
    pub violations: Vec<MinimumCheck>,
    pub passed: bool,
}

/// For every expansion local minimum `x`, checks that `x` is a global minimum of its perturbed
/// instance and that the exact local LP of that instance attains the same value.
pub fn verify_main_theorem(instance: &PottsInstance, budget: u128) -> Result<TheoremReport> {
    let minima = all_expansion_minima(instance, budget)?;
    let (_, map_energy) = brute_map(instance, budget)?;
    let system = build_system(instance);
    let mut violations = Vec::new();
    for x in &minima {
        let check = check_minimum(&system, instance, x, budget)?;
        if !(check.is_global_minimum && check.lp_tight) {
            violations.push(check);
        }
    }
    Ok(TheoremReport {
        minima: minima.len(),
        map_energy: to_f64(&map_energy),
        passed: violations.is_empty(),
        violations,
    })
}

fn check_minimum(
    system: &crate::locallp::ConstraintSystem,
    instance: &PottsInstance,
    x: &Labeling,
    budget: u128,
) -> Result<MinimumCheck> {
    let pert = perturb(instance, x)?.into_instance();
    let own = pert.energy_exact(x)?;
    let (_, opt) = brute_map(&pert, budget)?;
    let lp = solve_primal_dual(system, &pert.objective_vector::<Rational>())?;
    Ok(MinimumCheck {
        labeling: x.labels().to_vec(),
        perturbed_energy: to_f64(&own),
        perturbed_optimum: to_f64(&opt),
        local_lp_value: to_f64(&lp.value),
        is_global_minimum: own == opt,
        lp_tight: lp.value == opt,
    })
}

/// The expansion local minimum maximizing `f`, first in enumeration order on ties.
pub fn worst_minimum(instance: &PottsInstance, f: &QualityObjective, budget: u128) -> Result<(Labeling, Rational)> {
    let minima = all_expansion_minima(instance, budget)?;
    let mut best: Option<(Labeling, Rational)> = None;
    for x in minima {
        let v = f.evaluate_labeling(instance, &x);
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((x, v));
        }
    }
    best.ok_or_else(|| Error::Lp("no expansion local minimum found; the MAP labeling always is one".into()))
}

/// Every labeling with energy at most `cap`, in enumeration order.
pub fn labelings_within(instance: &PottsInstance, cap: &Rational, budget: u128) -> Result<Vec<Labeling>> {
    check_budget(instance, budget)?;
    let mut out = Vec::new();
    match AnyTable::new(instance) {
        AnyTable::Int(t, den) => {
            // e/den ≤ cap  ⇔  e ≤ ⌊cap·den⌋
            let scaled = (cap * Rational::from_integer(den)).floor().to_integer();
            let Some(limit) = scaled.to_i64() else {
                let all_fit = scaled > BigInt::zero();
                t.for_each(|x, _| {
                    if all_fit {
                        out.push(Labeling::new(x.to_vec()));
                    }
                    true
                });
                return Ok(out);
            };
            t.for_each(|x, e| {
                if *e <= limit {
                    out.push(Labeling::new(x.to_vec()));
                }
                true
            });
        }
        AnyTable::Exact(t) => t.for_each(|x, e| {
            if e <= cap {
                out.push(Labeling::new(x.to_vec()));
            }
            true
        }),
    }
    Ok(out)
}

/// Whether no labeling has strictly lower energy than `x`.
pub fn is_global_minimum(instance: &PottsInstance, x: &Labeling, budget: u128) -> Result<bool> {
    instance.check_labeling(x)?;
    check_budget(instance, budget)?;
    fn run<C: Cost>(t: &Table<C>, x: &[usize]) -> bool {
        let target = t.energy(x);
        for u in 0..t.n {
            for b in 0..t.k {
                if t.delta(x, u, b) < C::zero() {
                    return false;
                }
            }
        }
        let mut optimal = true;
        t.for_each(|_, e| {
            optimal = *e >= target;
            optimal
        });
        optimal
    }
    Ok(match AnyTable::new(instance) {
        AnyTable::Int(t, _) => run(&t, x.labels()),
        AnyTable::Exact(t) => run(&t, x.labels()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchEntry {
    pub seed: u64,
    pub passed: bool,
    pub minima: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    pub minima_checked: usize,
    pub entries: Vec<BatchEntry>,
}

/// Runs [`verify_main_theorem`] on seeded random grids.
pub fn theorem_batch(
    seeds: impl IntoIterator<Item = u64>,
    height: usize,
    width: usize,
    k: usize,
    cost_range: (i64, i64),
    weight_range: (i64, i64),
) -> Result<BatchReport> {
    let mut entries = Vec::new();
    for seed in seeds {
        let inst = crate::instances::gen_grid(height, width, k, seed, cost_range, weight_range)?;
        let rep = verify_main_theorem(&inst, DEFAULT_BUDGET)?;
        entries.push(BatchEntry { seed, passed: rep.passed, minima: rep.minima, violations: rep.violations.len() });
    }
    let passed = entries.iter().filter(|e| e.passed).count();
    Ok(BatchReport {
        instances: entries.len(),
        passed,
        failed: entries.len() - passed,
        minima_checked: entries.iter().map(|e| e.minima).sum(),
        entries,
    })
}
