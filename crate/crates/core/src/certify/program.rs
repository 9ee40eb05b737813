//! The relaxed certification LP over `(x, ν)`: `x` in the local polytope with strong duality
//! against `ν`, and `ν` dual feasible for the perturbation that `x` induces.

use crate::error::{Error, Result};
use crate::locallp::{build_system, ConstraintSystem, RowKind};
use crate::lp::{Cmp, LinearProgram, LpScalar, LpStatus, Sense};
use crate::model::PottsInstance;
use crate::num::Scalar;

use super::cycles::CycleInequality;
use super::QualityObjective;

/// The certification LP with its variable layout.
///
/// Variables `0..D` are the polytope coordinates. Each constraint-system row `r` owns a free
/// multiplier `ν_r`, except the `ToSecond` rows with label 0: those multipliers span the null
/// space of `Aᵀ` and are fixed at zero.
#[derive(Clone, Debug)]
pub struct CertifyProgram<T> {
    pub lp: LinearProgram<T>,
    system: ConstraintSystem,
    nu_var: Vec<Option<usize>>,
    cuts: usize,
}

pub fn build_certify_program<T: Scalar>(instance: &PottsInstance, f: &QualityObjective) -> CertifyProgram<T> {
    let system = build_system(instance);
    let d = system.column_count();
    let mut lp = LinearProgram::new(Sense::Maximize, f.coeffs.iter().map(T::from_rational).collect());
    let nu_var: Vec<Option<usize>> = (0..system.row_count())
        .map(|r| (!system.is_redundant_row(r)).then(|| lp.add_var(T::zero(), true)))
        .collect();

    system.push_rows(&mut lp, 0, true);

    // ⟨θ, x⟩ − ⟨b, ν⟩ = 0.
    let theta = instance.objective_vector::<T>();
    let mut coeffs: Vec<(usize, T)> =
        theta.iter().enumerate().filter(|(_, t)| !t.is_exact_zero()).map(|(j, t)| (j, t.clone())).collect();
    for u in 0..instance.vertex_count() {
        let r = system.row_index(RowKind::Normalize { vertex: u });
        coeffs.push((nu_var[r].expect("normalization rows are kept"), T::one().neg()));
    }
    lp.add_row(coeffs, Cmp::Eq, T::zero());

    // Aᵀν ≤ θ^x, one row per column of A.
    let mut at: Vec<Vec<(usize, T)>> = vec![Vec::new(); d];
    for (r, var) in nu_var.iter().enumerate() {
        if let Some(var) = var {
            for (c, a) in system.row(r) {
                at[c].push((*var, T::from_i64(a as i64)));
            }
        }
    }
    let k = instance.label_count();
    for u in 0..instance.vertex_count() {
        for i in 0..k {
            let c = instance.node_col(u, i);
            lp.add_row(std::mem::take(&mut at[c]), Cmp::Le, T::from_rational(instance.node_cost(u, i)));
        }
    }
    for e in 0..instance.edge_count() {
        let w = T::from_rational(instance.weight(e));
        let cut_cols: Vec<usize> =
            (0..k).flat_map(|p| (0..k).filter(move |&q| q != p).map(move |q| (p, q))).map(|(p, q)| instance.edge_col(e, p, q)).collect();
        for i in 0..k {
            for j in 0..k {
                let c = instance.edge_col(e, i, j);
                let mut row = std::mem::take(&mut at[c]);
                if i == j || w.is_exact_zero() {
                    lp.add_row(row, Cmp::Le, T::zero());
                } else {
                    // (Aᵀν)_e(i,j) + w·Σ_{p≠q} x_e(p,q) ≤ 2w
                    row.extend(cut_cols.iter().map(|&cc| (cc, w.clone())));
                    lp.add_row(row, Cmp::Le, w.add(&w));
                }
            }
        }
    }
    CertifyProgram { lp, system, nu_var, cuts: 0 }
}

impl<T: LpScalar> CertifyProgram<T> {
    pub fn column_count(&self) -> usize {
        self.system.column_count()
    }

    pub fn variable_count(&self) -> usize {
        self.lp.var_count()
    }

    pub fn cut_count(&self) -> usize {
        self.cuts
    }

    pub fn add_cut(&mut self, instance: &PottsInstance, cut: &CycleInequality) {
        let (coeffs, rhs) = cut.row::<T>(instance, 0);
        self.lp.add_row(coeffs, Cmp::Ge, rhs);
        self.cuts += 1;
    }

    /// Full LP variable vector for a point `x` and a multiplier vector over every system row.
    /// `ν` is first shifted along the null space of `Aᵀ` so the fixed multipliers vanish.
    pub fn assemble(&self, x: &[T], nu: &[T]) -> Vec<T> {
        let nu = gauge_fix(&self.system, nu);
        let mut v = x.to_vec();
        v.resize(self.lp.var_count(), T::zero());
        for (r, var) in self.nu_var.iter().enumerate() {
            if let Some(var) = var {
                v[*var] = nu[r].clone();
            }
        }
        v
    }

    /// Solves the current LP and returns `(optimal raw objective, x-part)`.
    pub fn solve(&self) -> Result<(T, Vec<T>)> {
        let sol = T::solve(&self.lp)?;
        match sol.status {
            LpStatus::Optimal => {}
            s => return Err(Error::Lp(format!("certification LP reported {s:?}"))),
        }
        let x = sol.x[..self.column_count()].to_vec();
        Ok((sol.value, x))
    }
}

/// Moves `ν` along the null space of `Aᵀ` so every `ToSecond` multiplier with label 0 is zero;
/// `Aᵀν` and `⟨b, ν⟩` are unchanged.
pub fn gauge_fix<T: Scalar>(system: &ConstraintSystem, nu: &[T]) -> Vec<T> {
    let mut out = nu.to_vec();
    let k = system.label_count();
    for (e, &(u, v)) in system.edges().iter().enumerate() {
        let c = out[system.row_index(RowKind::ToSecond { edge: e, label: 0 })].clone();
        if c.is_exact_zero() {
            continue;
        }
        for l in 0..k {
            let r = system.row_index(RowKind::ToSecond { edge: e, label: l });
            out[r] = out[r].sub(&c);
            let r = system.row_index(RowKind::ToFirst { edge: e, label: l });
            out[r] = out[r].add(&c);
        }
        let rv = system.row_index(RowKind::Normalize { vertex: v });
        out[rv] = out[rv].sub(&c);
        let ru = system.row_index(RowKind::Normalize { vertex: u });
        out[ru] = out[ru].add(&c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::make_hamming_objective;
    use crate::locallp::solve_primal_dual;
    use crate::model::{fixtures, perturb, Labeling};
    use crate::num::Rational;

    #[test]
    fn gauge_fix_preserves_dual_image() {
        let inst = crate::instances::gen_grid(2, 2, 3, 5, (0, 10), (0, 5)).unwrap();
        let s = build_system(&inst);
        let nu: Vec<Rational> = (0..s.row_count()).map(|r| crate::num::ratio(r as i64 * 7 % 11 - 5, 3)).collect();
        let fixed = gauge_fix(&s, &nu);
        assert_eq!(s.transpose_apply(&nu), s.transpose_apply(&fixed));
        assert_eq!(s.dual_objective(&nu), s.dual_objective(&fixed));
        for r in 0..s.row_count() {
            if s.is_redundant_row(r) {
                assert_eq!(fixed[r], Rational::from_integer(0.into()));
            }
        }
    }

    #[test]
    fn t1_variable_count() {
        let t1 = fixtures::t1();
        let f = make_hamming_objective(&t1, &Labeling::new(vec![0, 1])).unwrap();
        let prog = build_certify_program::<Rational>(&t1, &f);
        // 8 coordinates and 6 multipliers, one of which is fixed by the gauge.
        assert_eq!(prog.column_count() + build_system(&t1).row_count(), 8 + 6);
        assert_eq!(prog.variable_count(), 8 + 5);
    }

    #[test]
    fn map_with_perturbed_dual_is_feasible() {
        let mut cases = vec![(fixtures::t1(), Labeling::new(vec![0, 1])), (fixtures::p4(), Labeling::new(vec![0, 3]))];
        for seed in 0..5 {
            let inst = crate::instances::gen_grid(2, 3, 3, seed, (0, 10), (0, 5)).unwrap();
            let (x, _) = crate::oracle::brute_map(&inst, crate::oracle::DEFAULT_BUDGET).unwrap();
            cases.push((inst, x));
        }
        for (inst, xs) in cases {
            let f = make_hamming_objective(&inst, &xs).unwrap();
            let prog = build_certify_program::<Rational>(&inst, &f);
            let pert = perturb(&inst, &xs).unwrap().into_instance();
            let lp = solve_primal_dual(&build_system(&pert), &pert.objective_vector::<Rational>()).unwrap();
            let point = prog.assemble(inst.embed::<Rational>(&xs).unwrap().values(), &lp.dual.nu);
            assert_eq!(prog.lp.max_violation(&point), 0.0);
        }
    }

    #[test]
    fn p4_non_map_has_no_witness() {
        // Certified Hamming bound 0 on P4 implies embed((1,2)) admits no multiplier vector;
        // pinning x to it must make the LP infeasible.
        let p4 = fixtures::p4();
        let f = make_hamming_objective(&p4, &Labeling::new(vec![0, 3])).unwrap();
        let mut prog = build_certify_program::<Rational>(&p4, &f);
        let target = p4.embed::<Rational>(&Labeling::new(vec![1, 2])).unwrap();
        for (j, v) in target.values().iter().enumerate() {
            prog.lp.add_row(vec![(j, crate::num::int(1))], Cmp::Eq, v.clone());
        }
        assert!(matches!(prog.solve(), Err(Error::Lp(_))));
    }
}
