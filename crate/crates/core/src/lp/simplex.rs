//! Dense two-phase tableau simplex, generic over the scalar type.
//!
//! Exact scalars use Bland's rule throughout. Floats use Dantzig pricing and fall back to
//! Bland after a run of degenerate pivots.

use crate::error::{Error, Result};
use crate::num::Scalar;

use super::{Cmp, LinearProgram, LpSolution, LpStatus, Sense};

const DEGENERATE_RUN_BEFORE_BLAND: usize = 50;

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    /// Reduced costs; the last entry holds minus the objective value.
    obj: Vec<T>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    ncols: usize,
    iterations: usize,
    max_iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, r: usize) -> &T {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, p: usize, q: usize) {
        let piv = self.rows[p][q].clone();
        let ncols = self.ncols;
        let mut prow: Vec<(usize, T)> = Vec::new();
        for j in 0..=ncols {
            let v = &self.rows[p][j];
            if !v.is_exact_zero() {
                let mut s = v.div(&piv);
                s.snap();
                prow.push((j, s));
            }
        }
        for v in self.rows[p].iter_mut() {
            *v = T::zero();
        }
        for (j, v) in &prow {
            self.rows[p][*j] = v.clone();
        }
        self.rows[p][q] = T::one();

        let eliminate = |row: &mut Vec<T>| {
            let f = row[q].clone();
            if f.is_exact_zero() {
                return;
            }
            for (j, v) in &prow {
                row[*j].sub_mul(&f, v);
                row[*j].snap();
            }
            row[q] = T::zero();
        };
        for (r, row) in self.rows.iter_mut().enumerate() {
            if r != p {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[p] = q;
        self.iterations += 1;
    }

    fn entering(&self, allowed: &dyn Fn(usize) -> bool, bland: bool) -> Option<usize> {
        if bland || T::EXACT {
            return (0..self.ncols).find(|&j| allowed(j) && self.obj[j].is_negative());
        }
        let mut best: Option<usize> = None;
        for j in 0..self.ncols {
            if allowed(j) && self.obj[j].is_negative() {
                if best.map_or(true, |b| self.obj[j] < self.obj[b]) {
                    best = Some(j);
                }
            }
        }
        best
    }

    fn leaving(&self, q: usize, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for r in 0..self.rows.len() {
            let a = &self.rows[r][q];
            if !a.is_positive() {
                continue;
            }
            let ratio = self.rhs(r).div(a);
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    let tie = ratio.approx_eq(&bratio) && (T::EXACT || {
                        let d = ratio.to_f64() - bratio.to_f64();
                        d.abs() <= 1e-12 * (1.0 + bratio.to_f64().abs())
                    });
                    if tie {
                        let prefer = if T::EXACT || bland {
                            self.basis[r] < self.basis[br]
                        } else {
                            a.abs() > self.rows[br][q].abs()
                        };
                        if prefer {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    } else if ratio < bratio {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        best.map(|(r, _)| r)
    }

    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<Outcome> {
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations > self.max_iterations {
                return Err(Error::Lp(format!("iteration limit {} reached", self.max_iterations)));
            }
            let bland = degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND;
            let Some(q) = self.entering(allowed, bland) else {
                return Ok(Outcome::Optimal);
            };
            let Some(p) = self.leaving(q, bland) else {
                return Ok(Outcome::Unbounded);
            };
            if self.rhs(p).is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(p, q);
        }
    }

    fn reset_objective(&mut self, costs: &[T]) {
        let mut obj: Vec<T> = costs.to_vec();
        obj.push(T::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_exact_zero() {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                if !v.is_exact_zero() {
                    obj[j].sub_mul(cb, v);
                }
            }
        }
        for v in obj.iter_mut() {
            v.snap();
        }
        self.obj = obj;
    }
}

/// Solves `lp` with the dense tableau simplex.
pub fn solve_dense<T: Scalar>(lp: &LinearProgram<T>) -> Result<LpSolution<T>> {
    let n = lp.var_count();
    let m = lp.rows.len();

    // Column layout: x+ (n), x- for free vars, slack/surplus, artificials.
    let mut neg_col = vec![None; n];
    let mut ncols = n;
    for j in 0..n {
        if lp.free[j] {
            neg_col[j] = Some(ncols);
            ncols += 1;
        }
    }
    let mut kinds = vec![ColKind::Structural; ncols];
    let mut row_sign = Vec::with_capacity(m);
    let mut row_cmp = Vec::with_capacity(m);
    let mut slack_col = vec![None; m];
    for (r, row) in lp.rows.iter().enumerate() {
        let flip = row.rhs.is_negative();
        let cmp = match (row.cmp, flip) {
            (Cmp::Le, true) => Cmp::Ge,
            (Cmp::Ge, true) => Cmp::Le,
            (c, _) => c,
        };
        row_sign.push(flip);
        row_cmp.push(cmp);
        if cmp != Cmp::Eq {
            slack_col[r] = Some(ncols);
            kinds.push(ColKind::Slack);
            ncols += 1;
        }
    }
    let mut identity_col = vec![0; m];
    let mut basis = vec![0; m];
    for r in 0..m {
        match row_cmp[r] {
            Cmp::Le => identity_col[r] = slack_col[r].unwrap(),
            _ => {
                identity_col[r] = ncols;
                kinds.push(ColKind::Artificial);
                ncols += 1;
            }
        }
        basis[r] = identity_col[r];
    }

    let mut rows = vec![vec![T::zero(); ncols + 1]; m];
    for (r, row) in lp.rows.iter().enumerate() {
        let sign = |v: &T| if row_sign[r] { v.neg() } else { v.clone() };
        let dst = &mut rows[r];
        for (j, c) in &row.coeffs {
            let c = sign(c);
            dst[*j] = dst[*j].add(&c);
            if let Some(nj) = neg_col[*j] {
                dst[nj] = dst[nj].sub(&c);
            }
        }
        if let Some(s) = slack_col[r] {
            dst[s] = if row_cmp[r] == Cmp::Ge { T::one().neg() } else { T::one() };
        }
        dst[identity_col[r]] = T::one();
        dst[ncols] = sign(&row.rhs);
    }

    let max_iterations = 50_000 + 50 * (m + ncols);
    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        kinds: kinds.clone(),
        ncols,
        iterations: 0,
        max_iterations,
    };

    // Phase 1: minimize the sum of artificials.
    let has_artificial = kinds.iter().any(|k| *k == ColKind::Artificial);
    if has_artificial {
        let costs: Vec<T> = kinds
            .iter()
            .map(|k| if *k == ColKind::Artificial { T::one() } else { T::zero() })
            .collect();
        tab.reset_objective(&costs);
        tab.run(&|_| true)?;
        let infeasibility = tab.obj[ncols].neg();
        let infeasible = if T::EXACT {
            infeasibility.is_positive()
        } else {
            let scale = lp.rows.iter().map(|r| r.rhs.to_f64().abs()).fold(1.0, f64::max);
            infeasibility.to_f64() > 1e-7 * scale
        };
        if infeasible {
            return Ok(LpSolution::without_point(LpStatus::Infeasible, tab.iterations));
        }
        // Drive remaining artificials out of the basis; rows with no structural entry are
        // redundant and keep their (zero-valued) artificial.
        for r in 0..m {
            if tab.kinds[tab.basis[r]] != ColKind::Artificial {
                continue;
            }
            let mut best: Option<usize> = None;
            for j in 0..ncols {
                if tab.kinds[j] == ColKind::Artificial || !tab.rows[r][j].is_positive() && !tab.rows[r][j].is_negative() {
                    continue;
                }
                if T::EXACT {
                    best = Some(j);
                    break;
                }
                if best.map_or(true, |b| tab.rows[r][j].abs() > tab.rows[r][b].abs()) {
                    best = Some(j);
                }
            }
            if let Some(j) = best {
                tab.pivot(r, j);
            }
        }
    }

    // Phase 2.
    let mut costs = vec![T::zero(); ncols];
    for j in 0..n {
        let c = match lp.sense {
            Sense::Minimize => lp.objective[j].clone(),
            Sense::Maximize => lp.objective[j].neg(),
        };
        if let Some(nj) = neg_col[j] {
            costs[nj] = c.neg();
        }
        costs[j] = c;
    }
    tab.reset_objective(&costs);
    let kinds_ref = &kinds;
    let outcome = tab.run(&|j| kinds_ref[j] != ColKind::Artificial)?;
    if let Outcome::Unbounded = outcome {
        return Ok(LpSolution::without_point(LpStatus::Unbounded, tab.iterations));
    }

    let mut col_value = vec![T::zero(); ncols];
    for (r, &b) in tab.basis.iter().enumerate() {
        col_value[b] = tab.rhs(r).clone();
    }
    let x: Vec<T> = (0..n)
        .map(|j| match neg_col[j] {
            Some(nj) => col_value[j].sub(&col_value[nj]),
            None => col_value[j].clone(),
        })
        .collect();
    let value = super::super::model::dot(&lp.objective, &x);
    let duals = (0..m)
        .map(|r| {
            // y_std = c_id − d_id with c_id = 0 for slack and artificial columns.
            let y = tab.obj[identity_col[r]].neg();
            let y = if row_sign[r] { y.neg() } else { y };
            match lp.sense {
                Sense::Minimize => y,
                Sense::Maximize => y.neg(),
            }
        })
        .collect();
    Ok(LpSolution { status: LpStatus::Optimal, x, duals, value, iterations: tab.iterations })
}
