//! The local polytope `L(G)` as an explicit equality system `Ax = b, x ≥ 0`, solved with
//! primal and dual certificates.
//!
//! Rows are ordered per edge `e = (u, v)`: `k` rows `Σ_i x_e(i,j) − x_v(j) = 0` for ascending
//! `j`, then `k` rows `Σ_j x_e(i,j) − x_u(i) = 0` for ascending `i`. The `n` normalization rows
//! `Σ_i x_u(i) = 1` follow, in vertex order. Columns follow [`PottsInstance::dimension`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{Cmp, LinearProgram, LpScalar, LpStatus, Sense, SolverPath};
use crate::model::{dot, FractionalPoint, PottsInstance};
use crate::num::{Rational, Scalar};

/// Absolute feasibility tolerance on the float path.
pub const TAU_FEAS: f64 = 1e-9;

/// Duality-gap tolerance on the float path.
pub fn tau_gap(value: f64) -> f64 {
    1e-7 * (1.0 + value.abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    /// `Σ_i x_e(i,j) = x_v(j)` for edge `e = (u, v)`.
    ToSecond { edge: usize, label: usize },
    /// `Σ_j x_e(i,j) = x_u(i)`.
    ToFirst { edge: usize, label: usize },
    Normalize { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    n: usize,
    k: usize,
    edges: Vec<(usize, usize)>,
}

pub fn build_system(instance: &PottsInstance) -> ConstraintSystem {
    ConstraintSystem {
        n: instance.vertex_count(),
        k: instance.label_count(),
        edges: instance.edges().to_vec(),
    }
}

impl ConstraintSystem {
    pub fn column_count(&self) -> usize {
        self.n * self.k + self.edges.len() * self.k * self.k
    }

    pub fn row_count(&self) -> usize {
        2 * self.edges.len() * self.k + self.n
    }

    pub fn label_count(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn node_col(&self, u: usize, i: usize) -> usize {
        u * self.k + i
    }

    fn edge_col(&self, e: usize, i: usize, j: usize) -> usize {
        self.n * self.k + e * self.k * self.k + i * self.k + j
    }

    pub fn row_kind(&self, r: usize) -> RowKind {
        let per_edge = 2 * self.k;
        if r < self.edges.len() * per_edge {
            let (edge, off) = (r / per_edge, r % per_edge);
            if off < self.k {
                RowKind::ToSecond { edge, label: off }
            } else {
                RowKind::ToFirst { edge, label: off - self.k }
            }
        } else {
            RowKind::Normalize { vertex: r - self.edges.len() * per_edge }
        }
    }

    pub fn row_index(&self, kind: RowKind) -> usize {
        match kind {
            RowKind::ToSecond { edge, label } => edge * 2 * self.k + label,
            RowKind::ToFirst { edge, label } => edge * 2 * self.k + self.k + label,
            RowKind::Normalize { vertex } => self.edges.len() * 2 * self.k + vertex,
        }
    }

    /// Sparse row `r` as `(column, coefficient)` pairs.
    pub fn row(&self, r: usize) -> Vec<(usize, i8)> {
        let k = self.k;
        match self.row_kind(r) {
            RowKind::ToSecond { edge, label: j } => {
                let v = self.edges[edge].1;
                let mut row: Vec<(usize, i8)> = (0..k).map(|i| (self.edge_col(edge, i, j), 1)).collect();
                row.push((self.node_col(v, j), -1));
                row
            }
            RowKind::ToFirst { edge, label: i } => {
                let u = self.edges[edge].0;
                let mut row: Vec<(usize, i8)> = (0..k).map(|j| (self.edge_col(edge, i, j), 1)).collect();
                row.push((self.node_col(u, i), -1));
                row
            }
            RowKind::Normalize { vertex } => (0..k).map(|i| (self.node_col(vertex, i), 1)).collect(),
        }
    }

    pub fn rhs(&self, r: usize) -> i64 {
        matches!(self.row_kind(r), RowKind::Normalize { .. }) as i64
    }

    pub fn rhs_vector<T: Scalar>(&self) -> Vec<T> {
        (0..self.row_count()).map(|r| T::from_i64(self.rhs(r))).collect()
    }

    /// `Ax`.
    pub fn apply<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        (0..self.row_count())
            .map(|r| {
                self.row(r).into_iter().fold(T::zero(), |acc, (c, a)| {
                    if a > 0 {
                        acc.add(&x[c])
                    } else {
                        acc.sub(&x[c])
                    }
                })
            })
            .collect()
    }

    /// `Aᵀν`.
    pub fn transpose_apply<T: Scalar>(&self, nu: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.column_count()];
        for (r, y) in nu.iter().enumerate() {
            if y.is_exact_zero() {
                continue;
            }
            for (c, a) in self.row(r) {
                out[c] = if a > 0 { out[c].add(y) } else { out[c].sub(y) };
            }
        }
        out
    }

    /// `⟨b, ν⟩`, the sum of the normalization multipliers.
    pub fn dual_objective<T: Scalar>(&self, nu: &[T]) -> T {
        let start = 2 * self.edges.len() * self.k;
        nu[start..].iter().fold(T::zero(), |a, b| a.add(b))
    }

    /// Rows implied by the others (`ToSecond` with label 0). Dropping them removes the
    /// `m`-dimensional null space of `Aᵀ` without changing the feasible set.
    pub fn is_redundant_row(&self, r: usize) -> bool {
        matches!(self.row_kind(r), RowKind::ToSecond { label: 0, .. })
    }

    /// Appends the rows of `L(G)` over variables `offset..offset + column_count()` and
    /// returns the LP row index of each system row (`None` where skipped).
    pub(crate) fn push_rows<T: Scalar>(
        &self,
        lp: &mut LinearProgram<T>,
        offset: usize,
        skip_redundant: bool,
    ) -> Vec<Option<usize>> {
        (0..self.row_count())
            .map(|r| {
                if skip_redundant && self.is_redundant_row(r) {
                    return None;
                }
                let coeffs = self
                    .row(r)
                    .into_iter()
                    .map(|(c, a)| (offset + c, T::from_i64(a as i64)))
                    .collect();
                Some(lp.add_row(coeffs, Cmp::Eq, T::from_i64(self.rhs(r))))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution<T> {
    pub nu: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct LpResult<T> {
    pub primal: FractionalPoint<T>,
    pub dual: DualSolution<T>,
    /// `⟨θ, y⟩` at the primal point.
    pub value: T,
    /// `⟨b, ν⟩`.
    pub dual_value: T,
    pub integral: bool,
    pub path: SolverPath,
    pub primal_violation: f64,
    pub dual_violation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpSummary {
    pub value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub integral: bool,
    pub solver_path: SolverPath,
}

impl<T: Scalar> LpResult<T> {
    pub fn summary(&self) -> LpSummary {
        let (v, d) = (self.value.to_f64(), self.dual_value.to_f64());
        LpSummary {
            value: v,
            dual_value: d,
            gap: (v - d).abs(),
            integral: self.integral,
            solver_path: self.path,
        }
    }
}

/// Largest positive entry of `Aᵀν − θ` (zero when dual feasible).
pub fn dual_violation<T: Scalar>(system: &ConstraintSystem, theta: &[T], nu: &[T]) -> f64 {
    system
        .transpose_apply(nu)
        .iter()
        .zip(theta)
        .map(|(a, t)| a.to_f64() - t.to_f64())
        .fold(0.0, f64::max)
}

/// Shifts multipliers down until `Aᵀν ≤ θ` holds, first on edge columns (through the
/// `ToSecond` multipliers), then on node columns (through the normalization multipliers).
/// The result is dual feasible up to float rounding and `⟨b,ν⟩` stays a valid lower bound.
fn repair_dual(system: &ConstraintSystem, theta: &[f64], nu: &mut [f64]) {
    let k = system.k;
    for e in 0..system.edges.len() {
        for j in 0..k {
            let r2 = system.row_index(RowKind::ToSecond { edge: e, label: j });
            let excess = (0..k)
                .map(|i| {
                    let r1 = system.row_index(RowKind::ToFirst { edge: e, label: i });
                    nu[r1] + nu[r2] - theta[system.edge_col(e, i, j)]
                })
                .fold(0.0, f64::max);
            nu[r2] -= excess;
        }
    }
    let at = system.transpose_apply(nu);
    for u in 0..system.n {
        let excess = (0..k)
            .map(|i| at[system.node_col(u, i)] - theta[system.node_col(u, i)])
            .fold(0.0, f64::max);
        let r = system.row_index(RowKind::Normalize { vertex: u });
        nu[r] -= excess;
    }
}

/// Minimizes `⟨θ, x⟩` over `L(G)` and verifies the returned certificates.
///
/// Rationals run the exact simplex on the full row set; floats drop the redundant rows,
/// repair the dual, and check both residuals against [`TAU_FEAS`] and [`tau_gap`].
pub fn solve_primal_dual<T: LpScalar>(system: &ConstraintSystem, theta: &[T]) -> Result<LpResult<T>> {
    let cols = system.column_count();
    if theta.len() != cols {
        return Err(Error::SizeMismatch { expected: cols, found: theta.len() });
    }
    let mut lp = LinearProgram::new(Sense::Minimize, theta.to_vec());
    let skip = !T::EXACT;
    let lp_rows = system.push_rows(&mut lp, 0, skip);
    let sol = T::solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("local LP reported {:?}; L(G) is nonempty and bounded", sol.status)));
    }
    let mut nu: Vec<T> = lp_rows
        .iter()
        .map(|r| r.map_or_else(T::zero, |r| sol.duals[r].clone()))
        .collect();
    let mut x = sol.x;
    if !T::EXACT {
        for v in x.iter_mut() {
            if v.to_f64() < 0.0 {
                *v = T::zero();
            }
        }
        let theta_f: Vec<f64> = theta.iter().map(Scalar::to_f64).collect();
        let mut nu_f: Vec<f64> = nu.iter().map(Scalar::to_f64).collect();
        repair_dual(system, &theta_f, &mut nu_f);
        nu = nu_f.into_iter().map(T::from_f64).collect();
    }
    let value = dot(theta, &x);
    let dual_value = system.dual_objective(&nu);
    let primal_violation = lp.max_violation(&x);
    let dual_violation = dual_violation(system, theta, &nu);
    if T::EXACT {
        if primal_violation > 0.0 || dual_violation > 0.0 || value != dual_value {
            return Err(Error::Lp("exact certificate check failed".into()));
        }
    } else {
        let gap = (value.to_f64() - dual_value.to_f64()).abs();
        if primal_violation > TAU_FEAS || dual_violation > TAU_FEAS || gap > tau_gap(value.to_f64()) {
            return Err(Error::Lp(format!(
                "float certificate check failed: primal {primal_violation:.3e}, dual {dual_violation:.3e}, gap {gap:.3e}"
            )));
        }
    }
    let k = system.k;
    let primal = FractionalPoint::from_parts(system.n, k, system.edges.len(), x);
    let integral = primal.is_integral();
    Ok(LpResult {
        primal,
        dual: DualSolution { nu },
        value,
        dual_value,
        integral,
        path: T::PATH,
        primal_violation,
        dual_violation,
    })
}

/// Local LP minimum of an instance, exact when the problem is small enough for the dense
/// rational simplex and in floating point otherwise.
pub fn local_lp_value(instance: &PottsInstance) -> Result<(f64, SolverPath)> {
    let system = build_system(instance);
    if exact_is_practical(&system) {
        let res = solve_primal_dual(&system, &instance.objective_vector::<Rational>())?;
        Ok((res.value.to_f64(), SolverPath::Exact))
    } else {
        let res = solve_primal_dual(&system, &instance.objective_vector::<f64>())?;
        Ok((res.dual_value, SolverPath::Float))
    }
}

/// Size threshold below which the exact rational simplex is used by default.
pub fn exact_is_practical(system: &ConstraintSystem) -> bool {
    system.row_count() * (system.column_count() + system.row_count()) <= 40_000
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tightness {
    pub tight: bool,
    pub lp_value: f64,
    pub map_value: f64,
    pub value_gap: f64,
    pub solver_path: SolverPath,
}

/// Compares the local LP value with the MAP energy, enumerating the MAP when `map_value` is
/// not supplied.
pub fn check_tightness(instance: &PottsInstance, map_value: Option<&Rational>) -> Result<Tightness> {
    let map = match map_value {
        Some(v) => v.clone(),
        None => {
            let budget = crate::oracle::DEFAULT_BUDGET;
            match crate::oracle::brute_map(instance, budget) {
                Ok((_, e)) => e,
                Err(Error::BudgetExceeded { required, budget }) => {
                    return Err(Error::Unsupported(format!(
                        "MAP enumeration needs {required} labelings (budget {budget}); supply the MAP value"
                    )))
                }
                Err(e) => return Err(e),
            }
        }
    };
    let system = build_system(instance);
    if exact_is_practical(&system) {
        let res = solve_primal_dual(&system, &instance.objective_vector::<Rational>())?;
        let gap = &map - &res.value;
        Ok(Tightness {
            tight: gap == <Rational as num_traits::Zero>::zero(),
            lp_value: res.value.to_f64(),
            map_value: map.to_f64(),
            value_gap: gap.to_f64(),
            solver_path: SolverPath::Exact,
        })
    } else {
        let res = solve_primal_dual(&system, &instance.objective_vector::<f64>())?;
        let gap = map.to_f64() - res.dual_value;
        Ok(Tightness {
            tight: gap.abs() <= tau_gap(res.dual_value),
            lp_value: res.dual_value,
            map_value: map.to_f64(),
            value_gap: gap,
            solver_path: SolverPath::Float,
        })
    }
}
