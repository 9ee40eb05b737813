//! The LP-guided expansion rounding and exact checks of its guarantees.
//!
//! The rounding blends a labeling `x` with an LP point `y′` into `x′ = (1−ε)x + εy′`, draws a
//! label `α` uniformly and a threshold `r` uniformly from `(0, 1/k)`, and moves every vertex
//! with `x′_u(α) > r` to `α`. For fixed `α` the outcome only changes when `r` crosses one of
//! the values `x′_u(α)`, so every probability below is computed exactly by enumerating the
//! finitely many `(α, r-interval)` cells.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::locallp::{build_system, solve_primal_dual};
use crate::model::{perturb, FractionalPoint, Labeling, PottsInstance};
use crate::num::{int, ratio, Rational};

/// `1/(2k)`, the midpoint of the admissible range for `ε`.
pub fn default_epsilon(k: usize) -> Rational {
    ratio(1, 2 * k as i64)
}

/// One cell of the rounding: a label, a representative threshold, the labeling it produces,
/// and the probability of landing in the cell.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundingOutcome {
    pub alpha: usize,
    pub threshold: Rational,
    pub labeling: Labeling,
    pub mass: Rational,
}

/// `(1−ε)·embed(x) + ε·y′`.
pub fn blend(
    instance: &PottsInstance,
    x: &Labeling,
    y_prime: &FractionalPoint<Rational>,
    eps: &Rational,
) -> Result<FractionalPoint<Rational>> {
    check_epsilon(instance.label_count(), eps)?;
    if !y_prime.is_feasible(instance) {
        return Err(Error::Parameter("y′ is not in the local polytope".into()));
    }
    let ex = instance.embed::<Rational>(x)?;
    let keep = int(1) - eps;
    let values = ex.values().iter().zip(y_prime.values()).map(|(a, b)| &keep * a + eps * b).collect();
    FractionalPoint::from_values(instance, values)
}

/// A single draw of the rounding with `α` and `r` given.
pub fn round_once(
    instance: &PottsInstance,
    x: &Labeling,
    y_prime: &FractionalPoint<Rational>,
    eps: &Rational,
    alpha: usize,
    r: &Rational,
) -> Result<Labeling> {
    let k = instance.label_count();
    if alpha >= k {
        return Err(Error::Parameter(format!("label {alpha} out of range for k = {k}")));
    }
    if !r.is_positive() || *r >= ratio(1, k as i64) {
        return Err(Error::Parameter(format!("threshold {r} outside (0, 1/{k})")));
    }
    let xp = blend(instance, x, y_prime, eps)?;
    Ok(threshold_labeling(x, &xp, alpha, r))
}

fn threshold_labeling(x: &Labeling, xp: &FractionalPoint<Rational>, alpha: usize, r: &Rational) -> Labeling {
    let labels = (0..x.len()).map(|u| if xp.node(u, alpha) > r { alpha } else { x[u] }).collect();
    Labeling::new(labels)
}

fn check_epsilon(k: usize, eps: &Rational) -> Result<()> {
    if !eps.is_positive() || *eps >= ratio(1, k as i64) {
        return Err(Error::Parameter(format!("ε = {eps} outside (0, 1/{k})")));
    }
    Ok(())
}

/// Every `(α, r-interval)` cell with positive probability. The masses sum to 1.
pub fn rounding_cells(
    instance: &PottsInstance,
    x: &Labeling,
    y_prime: &FractionalPoint<Rational>,
    eps: &Rational,
) -> Result<Vec<RoundingOutcome>> {
    let xp = blend(instance, x, y_prime, eps)?;
    let k = instance.label_count();
    let top = ratio(1, k as i64);
    let mut cells = Vec::new();
    for alpha in 0..k {
        let mut cuts: Vec<Rational> = (0..instance.vertex_count())
            .map(|u| xp.node(u, alpha).clone())
            .filter(|v| v.is_positive() && *v < top)
            .collect();
        cuts.push(int(0));
        cuts.push(top.clone());
        cuts.sort();
        cuts.dedup();
        for pair in cuts.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let r = (a + b) / int(2);
            cells.push(RoundingOutcome {
                alpha,
                labeling: threshold_labeling(x, &xp, alpha, &r),
                threshold: r,
                // P[α] · P[r ∈ (a, b)] = (1/k) · (b − a)·k
                mass: b - a,
            });
        }
    }
    Ok(cells)
}

/// `(E[⟨θ, x − x^α⟩], ε·⟨θˣ, x − y′⟩)`, both exact. When `y′` is an LP optimum of the
/// perturbed instance the first is at least the second.
pub fn exact_rounding_expectation(
    instance: &PottsInstance,
    x: &Labeling,
    y_prime: &FractionalPoint<Rational>,
    eps: &Rational,
) -> Result<(Rational, Rational)> {
    let cells = rounding_cells(instance, x, y_prime, eps)?;
    let ex = instance.energy_exact(x)?;
    let mut lhs = int(0);
    for cell in &cells {
        lhs += &cell.mass * (&ex - instance.energy_exact(&cell.labeling)?);
    }
    let pert = perturb(instance, x)?.into_instance();
    let rhs = eps * (pert.energy_exact(x)? - pert.evaluate(y_prime));
    Ok((lhs, rhs))
}

/// An exact LP optimum of the instance perturbed at `x`.
pub fn perturbed_lp_optimum(instance: &PottsInstance, x: &Labeling) -> Result<FractionalPoint<Rational>> {
    let pert = perturb(instance, x)?.into_instance();
    let res = solve_primal_dual(&build_system(&pert), &pert.objective_vector::<Rational>())?;
    Ok(res.primal)
}

/// Exact outcome of the three per-vertex and per-edge guarantees of the rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalReport {
    pub total_mass: Rational,
    /// `(u, i)` with `P[x^α(u) = i] ≠ x′_u(i)`.
    pub node_mismatches: Vec<(usize, usize)>,
    /// Edges uncut by `x` with `P[x^α(u) ≠ x^α(v)] > 2d(u,v)`.
    pub uncut_violations: Vec<usize>,
    /// Edges cut by `x` with `P[x^α(u) = x^α(v)] ≠ 1 − d(u,v)`.
    pub cut_mismatches: Vec<usize>,
}

impl MarginalReport {
    pub fn holds(&self) -> bool {
        self.total_mass == int(1)
            && self.node_mismatches.is_empty()
            && self.uncut_violations.is_empty()
            && self.cut_mismatches.is_empty()
    }
}

/// `½ Σ_i |a_i − b_i|`.
fn half_l1(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum::<Rational>() / int(2)
}

pub fn verify_marginal_guarantees(
    instance: &PottsInstance,
    x: &Labeling,
    y_prime: &FractionalPoint<Rational>,
    eps: &Rational,
) -> Result<MarginalReport> {
    let cells = rounding_cells(instance, x, y_prime, eps)?;
    let xp = blend(instance, x, y_prime, eps)?;
    let (n, k) = (instance.vertex_count(), instance.label_count());

    let mut node_prob = vec![int(0); n * k];
    let mut edge_same = vec![int(0); instance.edge_count()];
    for cell in &cells {
        let l = cell.labeling.labels();
        for u in 0..n {
            node_prob[u * k + l[u]] += &cell.mass;
        }
        for (e, &(u, v)) in instance.edges().iter().enumerate() {
            if l[u] == l[v] {
                edge_same[e] += &cell.mass;
            }
        }
    }

    let total_mass: Rational = cells.iter().map(|c| c.mass.clone()).sum();
    let node_mismatches =
        (0..n).flat_map(|u| (0..k).map(move |i| (u, i))).filter(|&(u, i)| node_prob[u * k + i] != *xp.node(u, i)).collect();
    let mut uncut_violations = Vec::new();
    let mut cut_mismatches = Vec::new();
    for (e, &(u, v)) in instance.edges().iter().enumerate() {
        let d = half_l1(xp.node_marginals(u), xp.node_marginals(v));
        if x[u] == x[v] {
            if int(1) - &edge_same[e] > &d * int(2) {
                uncut_violations.push(e);
            }
        } else if edge_same[e] != int(1) - d {
            cut_mismatches.push(e);
        }
    }
    Ok(MarginalReport { total_mass, node_mismatches, uncut_violations, cut_mismatches })
}

/// Cheapest Potts edge cost of a coupling between two distributions, with a coupling that
/// attains it: the overlap on the diagonal, the residual routed by the northwest-corner rule.
pub fn pairwise_min_cost(zu: &[Rational], zv: &[Rational]) -> Result<(Rational, Vec<Vec<Rational>>)> {
    if zu.len() != zv.len() {
        return Err(Error::SizeMismatch { expected: zu.len(), found: zv.len() });
    }
    for z in [zu, zv] {
        if z.iter().any(Signed::is_negative) || z.iter().sum::<Rational>() != int(1) {
            return Err(Error::Parameter("marginals must be nonnegative and sum to 1".into()));
        }
    }
    let k = zu.len();
    let mut coupling = vec![vec![int(0); k]; k];
    let mut ru = Vec::with_capacity(k);
    let mut rv = Vec::with_capacity(k);
    for i in 0..k {
        let m = zu[i].clone().min(zv[i].clone());
        ru.push(&zu[i] - &m);
        rv.push(&zv[i] - &m);
        coupling[i][i] = m;
    }
    let (mut i, mut j) = (0, 0);
    while i < k && j < k {
        let t = ru[i].clone().min(rv[j].clone());
        if !t.is_zero() {
            coupling[i][j] += &t;
            ru[i] -= &t;
            rv[j] -= &t;
        }
        if ru[i].is_zero() {
            i += 1;
        } else {
            j += 1;
        }
    }
    let value = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| coupling[i][j].clone()).sum();
    Ok((value, coupling))
}

/// For labelings `x` and `y`, `(Σ_α ⟨θ, x − x^α⟩, ⟨θˣ, x − y⟩)` where `x^α` moves the vertices
/// `y` labels `α` to `α`. The first is never smaller than the second.
pub fn combinatorial_decomposition(instance: &PottsInstance, x: &Labeling, y: &Labeling) -> Result<(Rational, Rational)> {
    instance.check_labeling(x)?;
    instance.check_labeling(y)?;
    let ex = instance.energy_exact(x)?;
    let mut lhs = int(0);
    for alpha in 0..instance.label_count() {
        let labels = x.labels().iter().zip(y.labels()).map(|(&a, &b)| if b == alpha { alpha } else { a }).collect();
        lhs += &ex - instance.energy_exact(&Labeling::new(labels))?;
    }
    let pert = perturb(instance, x)?.into_instance();
    let rhs = pert.energy_exact(x)? - pert.energy_exact(y)?;
    Ok((lhs, rhs))
}
