//! Linear programs and the solvers behind them.
//!
//! [`solve_exact`] runs a dense two-phase tableau simplex over exact rationals with Bland's
//! rule. [`solve_float`] runs the same simplex in `f64` for moderate sizes and hands larger
//! problems to the sparse interior-point backend.

mod ipm;
mod simplex;

pub use simplex::solve_dense;

use crate::error::Result;
use crate::num::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<(usize, T)>,
    pub cmp: Cmp,
    pub rhs: T,
}

/// `optimize c·x + offset` subject to the rows; variables are `x ≥ 0` unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    pub sense: Sense,
    pub objective: Vec<T>,
    pub free: Vec<bool>,
    pub rows: Vec<Constraint<T>>,
}

impl<T: Scalar> LinearProgram<T> {
    pub fn new(sense: Sense, objective: Vec<T>) -> Self {
        let n = objective.len();
        Self { sense, objective, free: vec![false; n], rows: Vec::new() }
    }

    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    /// Appends a variable and returns its index.
    pub fn add_var(&mut self, cost: T, free: bool) -> usize {
        self.objective.push(cost);
        self.free.push(free);
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vec<(usize, T)>, cmp: Cmp, rhs: T) -> usize {
        self.rows.push(Constraint { coeffs, cmp, rhs });
        self.rows.len() - 1
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LinearProgram<U> {
        LinearProgram {
            sense: self.sense,
            objective: self.objective.iter().map(&f).collect(),
            free: self.free.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| Constraint {
                    coeffs: r.coeffs.iter().map(|(j, c)| (*j, f(c))).collect(),
                    cmp: r.cmp,
                    rhs: f(&r.rhs),
                })
                .collect(),
        }
    }

    /// Largest violation of any row or sign constraint at `x`.
    pub fn max_violation(&self, x: &[T]) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, v) in x.iter().enumerate() {
            if !self.free[j] {
                worst = worst.max(-v.to_f64());
            }
        }
        for r in &self.rows {
            let lhs: f64 = r.coeffs.iter().map(|(j, c)| c.to_f64() * x[*j].to_f64()).sum();
            let diff = lhs - r.rhs.to_f64();
            let viol = match r.cmp {
                Cmp::Le => diff,
                Cmp::Ge => -diff,
                Cmp::Eq => diff.abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Which arithmetic produced a result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverPath {
    Exact,
    Float,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub status: LpStatus,
    /// Primal values (empty unless optimal).
    pub x: Vec<T>,
    /// One multiplier per row, signed so that the objective equals `Σ duals·rhs` and, for
    /// minimization, `c − Aᵀy` is nonnegative on nonnegative variables.
    pub duals: Vec<T>,
    pub value: T,
    pub iterations: usize,
}

impl<T: Scalar> LpSolution<T> {
    pub(crate) fn without_point(status: LpStatus, iterations: usize) -> Self {
        Self { status, x: Vec::new(), duals: Vec::new(), value: T::zero(), iterations }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn solve_exact(lp: &LinearProgram<Rational>) -> Result<LpSolution<Rational>> {
    solve_dense(lp)
}

/// Dense simplex is used while the tableau stays under this many entries.
pub const DENSE_LIMIT: usize = 3_000_000;

pub fn solve_float(lp: &LinearProgram<f64>) -> Result<LpSolution<f64>> {
    let rows = lp.rows.len();
    let cols = lp.var_count() + lp.free.iter().filter(|f| **f).count() + 2 * rows;
    if rows * cols <= DENSE_LIMIT {
        solve_dense(lp)
    } else {
        ipm::solve(lp)
    }
}

/// Scalars with a default solver: exact simplex for rationals, [`solve_float`] for `f64`.
pub trait LpScalar: Scalar {
    const PATH: SolverPath;
    fn solve(lp: &LinearProgram<Self>) -> Result<LpSolution<Self>>;
}

impl LpScalar for Rational {
    const PATH: SolverPath = SolverPath::Exact;
    fn solve(lp: &LinearProgram<Self>) -> Result<LpSolution<Self>> {
        solve_exact(lp)
    }
}

impl LpScalar for f64 {
    const PATH: SolverPath = SolverPath::Float;
    fn solve(lp: &LinearProgram<Self>) -> Result<LpSolution<Self>> {
        solve_float(lp)
    }
}

/// Forces the sparse backend regardless of size.
pub fn solve_sparse(lp: &LinearProgram<f64>) -> Result<LpSolution<f64>> {
    ipm::solve(lp)
}
