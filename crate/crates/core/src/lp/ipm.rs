//! Sparse interior-point backend (Clarabel) for LPs too large for the dense tableau.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

use crate::error::{Error, Result};

use super::{Cmp, LinearProgram, LpSolution, LpStatus, Sense};

pub fn solve(lp: &LinearProgram<f64>) -> Result<LpSolution<f64>> {
    let n = lp.var_count();
    let flip = lp.sense == Sense::Maximize;
    let q: Vec<f64> = lp.objective.iter().map(|&c| if flip { -c } else { c }).collect();

    // Clarabel form: A x + s = b with s in {0}^eq x R+^ineq. Equalities first.
    let mut rows_i = Vec::new();
    let mut cols_j = Vec::new();
    let mut vals = Vec::new();
    let mut b = Vec::new();
    // (original row, sign applied) for each Clarabel row that came from an LP row.
    let mut origin: Vec<(usize, f64)> = Vec::new();
    let mut push_row = |coeffs: &[(usize, f64)], sign: f64, rhs: f64, b: &mut Vec<f64>| {
        let r = b.len();
        for &(j, c) in coeffs {
            rows_i.push(r);
            cols_j.push(j);
            vals.push(sign * c);
        }
        b.push(sign * rhs);
    };
    for (r, row) in lp.rows.iter().enumerate() {
        if row.cmp == Cmp::Eq {
            push_row(&row.coeffs, 1.0, row.rhs, &mut b);
            origin.push((r, 1.0));
        }
    }
    let n_eq = b.len();
    for (r, row) in lp.rows.iter().enumerate() {
        let sign = match row.cmp {
            Cmp::Eq => continue,
            Cmp::Le => 1.0,
            Cmp::Ge => -1.0,
        };
        push_row(&row.coeffs, sign, row.rhs, &mut b);
        origin.push((r, sign));
    }
    for j in 0..n {
        if !lp.free[j] {
            push_row(&[(j, -1.0)], 1.0, 0.0, &mut b);
        }
    }
    let m = b.len();
    let a = CscMatrix::new_from_triplets(m, n, rows_i, cols_j, vals);
    let p = CscMatrix::zeros((n, n));
    let cones = [SupportedConeT::ZeroConeT(n_eq), SupportedConeT::NonnegativeConeT(m - n_eq)];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(400)
        .tol_gap_abs(1e-10)
        .tol_gap_rel(1e-10)
        .tol_feas(1e-10)
        .build()
        .map_err(|e| Error::Lp(format!("clarabel settings: {e:?}")))?;
    let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings)
        .map_err(|e| Error::Lp(format!("clarabel setup: {e:?}")))?;
    solver.solve();
    let sol = &solver.solution;
    let iterations = sol.iterations as usize;
    match sol.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {}
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            return Ok(LpSolution::without_point(LpStatus::Infeasible, iterations));
        }
        SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
            return Ok(LpSolution::without_point(LpStatus::Unbounded, iterations));
        }
        other => return Err(Error::Lp(format!("clarabel stopped with {other:?}"))),
    }
    let x = sol.x.clone();
    let mut duals = vec![0.0; lp.rows.len()];
    for (k, &(r, sign)) in origin.iter().enumerate() {
        let y = -sign * sol.z[k];
        duals[r] = if flip { -y } else { y };
    }
    let value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution { status: LpStatus::Optimal, x, duals, value, iterations })
}
