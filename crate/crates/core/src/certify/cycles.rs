//! Cycle inequalities over singleton k-projections, separated by shortest paths in the
//! doubled projection graph.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use crate::model::PottsInstance;
use crate::num::Scalar;

/// Minimum violation for a cut to be reported.
pub const EPS_CUT: f64 = 1e-6;

/// `Σ_{e∈F} (1 − χ_e(x)) + Σ_{e∉F} χ_e(x) ≥ 1` around a closed walk of projection nodes.
///
/// Node `t` is `(vertex, q)` with the singleton partition `{q}` vs the rest; `edges[t]` joins
/// node `t` to node `t + 1` (cyclically) and `crossing[t]` marks membership in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleInequality {
    pub nodes: Vec<(usize, usize)>,
    pub edges: Vec<usize>,
    pub crossing: Vec<bool>,
}

impl CycleInequality {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Partitions for step `t`, oriented as the instance edge `(a, b)`.
    fn oriented(&self, instance: &PottsInstance, t: usize) -> (usize, usize, usize) {
        let e = self.edges[t];
        let (u, q) = self.nodes[t];
        let (_, q2) = self.nodes[(t + 1) % self.len()];
        if instance.edges()[e].0 == u {
            (e, q, q2)
        } else {
            (e, q2, q)
        }
    }

    /// Columns of `χ` for step `t`: every `x_e(i, j)` with `[i = q_a] ≠ [j = q_b]`.
    fn chi_columns(&self, instance: &PottsInstance, t: usize) -> Vec<usize> {
        let (e, qa, qb) = self.oriented(instance, t);
        let k = instance.label_count();
        let mut cols = Vec::with_capacity(2 * (k - 1));
        for i in 0..k {
            for j in 0..k {
                if (i == qa) != (j == qb) {
                    cols.push(instance.edge_col(e, i, j));
                }
            }
        }
        cols
    }

    pub fn lhs<T: Scalar>(&self, instance: &PottsInstance, x: &[T]) -> T {
        let mut total = T::zero();
        for t in 0..self.len() {
            let chi = self.chi_columns(instance, t).iter().fold(T::zero(), |a, &c| a.add(&x[c]));
            total = if self.crossing[t] { total.add(&T::one().sub(&chi)) } else { total.add(&chi) };
        }
        total
    }

    pub fn violation(&self, instance: &PottsInstance, x: &[f64]) -> f64 {
        1.0 - self.lhs(instance, x)
    }

    /// Evaluates the inequality on an integral labeling without building its embedding.
    pub fn holds_for(&self, instance: &PottsInstance, labels: &[usize]) -> bool {
        let mut total = 0usize;
        for t in 0..self.len() {
            let (e, qa, qb) = self.oriented(instance, t);
            let (a, b) = instance.edges()[e];
            let chi = ((labels[a] == qa) != (labels[b] == qb)) as usize;
            total += if self.crossing[t] { 1 - chi } else { chi };
        }
        total >= 1
    }

    /// The cut as `(coeffs, rhs)` meaning `Σ coeffs·x ≥ rhs`, columns shifted by `offset`.
    pub fn row<T: Scalar>(&self, instance: &PottsInstance, offset: usize) -> (Vec<(usize, T)>, T) {
        let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
        let mut crossings = 0i64;
        for t in 0..self.len() {
            let sign = if self.crossing[t] { -1 } else { 1 };
            crossings += self.crossing[t] as i64;
            for c in self.chi_columns(instance, t) {
                *acc.entry(c).or_default() += sign;
            }
        }
        let coeffs = acc
            .into_iter()
            .filter(|(_, v)| *v != 0)
            .map(|(c, v)| (offset + c, T::from_i64(v)))
            .collect();
        (coeffs, T::from_i64(1 - crossings))
    }

    /// Order-independent identity used to avoid adding a cut twice.
    fn key(&self, instance: &PottsInstance) -> Vec<(usize, usize, usize, bool)> {
        let mut key: Vec<_> = (0..self.len())
            .map(|t| {
                let (e, qa, qb) = self.oriented(instance, t);
                (e, qa, qb, self.crossing[t])
            })
            .collect();
        key.sort_unstable();
        key
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Stateful separator that remembers cuts it has already produced.
#[derive(Debug, Default)]
pub struct Separator {
    seen: HashSet<Vec<(usize, usize, usize, bool)>>,
}

impl Separator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Violated cycle inequalities not returned before, most violated first, at most `limit`.
    pub fn separate(&mut self, instance: &PottsInstance, x: &[f64], limit: usize) -> Vec<CycleInequality> {
        let mut found: Vec<(f64, CycleInequality)> = Vec::new();
        for cut in separate_all(instance, x) {
            let key = cut.key(instance);
            if self.seen.contains(&key) {
                continue;
            }
            let v = cut.violation(instance, x);
            if v > EPS_CUT {
                found.push((v, cut));
            }
        }
        found.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut out = Vec::new();
        for (_, cut) in found {
            if out.len() == limit {
                break;
            }
            if self.seen.insert(cut.key(instance)) {
                out.push(cut);
            }
        }
        out
    }
}

/// Every distinct violated inequality found by one shortest-path search per fractional
/// projection node, most violated first.
pub fn separate_cycles(instance: &PottsInstance, x: &[f64]) -> Vec<CycleInequality> {
    let mut cuts: Vec<(f64, CycleInequality)> =
        separate_all(instance, x).into_iter().map(|c| (c.violation(instance, x), c)).collect();
    cuts.sort_by(|a, b| b.0.total_cmp(&a.0));
    cuts.into_iter().map(|(_, c)| c).collect()
}

fn separate_all(instance: &PottsInstance, x: &[f64]) -> Vec<CycleInequality> {
    let n = instance.vertex_count();
    let k = instance.label_count();
    // chi[e][qa * k + qb] in the edge's own orientation.
    let chi: Vec<Vec<f64>> = instance
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| {
            let mut table = vec![0.0; k * k];
            for qa in 0..k {
                for qb in 0..k {
                    let v = x[instance.node_col(a, qa)] + x[instance.node_col(b, qb)]
                        - 2.0 * x[instance.edge_col(e, qa, qb)];
                    table[qa * k + qb] = v.clamp(0.0, 1.0);
                }
            }
            table
        })
        .collect();
    let id = |u: usize, q: usize, p: usize| (u * k + q) * 2 + p;
    let total = n * k * 2;
    let mut dist = vec![f64::INFINITY; total];
    // (previous projection node, instance edge) on the shortest-path tree.
    let mut pred = vec![(usize::MAX, usize::MAX); total];
    let mut touched: Vec<usize> = Vec::new();
    let mut seen = HashSet::new();
    let mut out = Vec::new();

    for u in 0..n {
        let fractional = (0..k).any(|i| {
            let v = x[instance.node_col(u, i)];
            v > 1e-9 && v < 1.0 - 1e-9
        });
        if !fractional || instance.neighbors(u).is_empty() {
            continue;
        }
        for q in 0..k {
            for &t in &touched {
                dist[t] = f64::INFINITY;
                pred[t] = (usize::MAX, usize::MAX);
            }
            touched.clear();
            let (src, dst) = (id(u, q, 0), id(u, q, 1));
            dist[src] = 0.0;
            touched.push(src);
            let mut heap = BinaryHeap::from([Entry { dist: 0.0, node: src }]);
            while let Some(Entry { dist: d, node }) = heap.pop() {
                if d > dist[node] {
                    continue;
                }
                if node == dst || d >= 1.0 - EPS_CUT {
                    break;
                }
                let (vq, p) = (node / 2, node % 2);
                let (v, qv) = (vq / k, vq % k);
                for &(w, e) in instance.neighbors(v) {
                    let forward = instance.edges()[e].0 == v;
                    for qw in 0..k {
                        let c = if forward { chi[e][qv * k + qw] } else { chi[e][qw * k + qv] };
                        for (p2, len) in [(p, c), (1 - p, 1.0 - c)] {
                            let nd = d + len;
                            let target = id(w, qw, p2);
                            if nd < dist[target] {
                                if dist[target].is_infinite() {
                                    touched.push(target);
                                }
                                dist[target] = nd;
                                pred[target] = (node, e);
                                heap.push(Entry { dist: nd, node: target });
                            }
                        }
                    }
                }
            }
            if dist[dst] >= 1.0 - EPS_CUT {
                continue;
            }
            // Walk back from (u,q,1) to (u,q,0).
            let mut path = vec![dst];
            let mut via = Vec::new();
            let mut cur = dst;
            while cur != src {
                let (prev, e) = pred[cur];
                via.push(e);
                path.push(prev);
                cur = prev;
            }
            path.reverse();
            via.reverse();
            let steps = via.len();
            if steps < 3 {
                continue;
            }
            let nodes: Vec<(usize, usize)> = path[..steps].iter().map(|&p| (p / 2 / k, p / 2 % k)).collect();
            let crossing: Vec<bool> = (0..steps).map(|t| path[t] % 2 != path[t + 1] % 2).collect();
            let cut = CycleInequality { nodes, edges: via, crossing };
            if seen.insert(cut.key(instance)) {
                out.push(cut);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{FractionalPoint, Labeling};

    fn triangle(k: usize) -> PottsInstance {
        PottsInstance::from_ints(3, k, vec![(0, 1), (1, 2), (0, 2)], &vec![0; 3 * k], &[1; 3]).unwrap()
    }

    /// Node marginals 1/2 and edge marginals that put all mass off the diagonal: the classic
    /// frustrated-triangle point of the local polytope.
    fn frustrated(inst: &PottsInstance) -> Vec<f64> {
        let mut x = vec![0.0; inst.dimension()];
        for u in 0..3 {
            x[inst.node_col(u, 0)] = 0.5;
            x[inst.node_col(u, 1)] = 0.5;
        }
        for e in 0..3 {
            x[inst.edge_col(e, 0, 1)] = 0.5;
            x[inst.edge_col(e, 1, 0)] = 0.5;
        }
        x
    }

    #[test]
    fn integral_points_have_no_cuts() {
        let inst = triangle(3);
        for code in 0..27 {
            let lab = Labeling::new(vec![code % 3, code / 3 % 3, code / 9]);
            let x = inst.embed::<f64>(&lab).unwrap();
            assert!(separate_cycles(&inst, x.values()).is_empty());
        }
    }

    #[test]
    fn uniform_point_has_no_cuts() {
        let inst = triangle(2);
        let x = FractionalPoint::<f64>::uniform(&inst);
        assert!(separate_cycles(&inst, x.values()).is_empty());
    }

    #[test]
    fn frustrated_triangle_is_cut() {
        let inst = triangle(2);
        let x = frustrated(&inst);
        let cuts = separate_cycles(&inst, &x);
        assert!(!cuts.is_empty());
        for c in &cuts {
            assert!(c.violation(&inst, &x) > 0.9);
            assert!(c.len() >= 3);
            assert_eq!(c.crossing.iter().filter(|b| **b).count() % 2, 1);
            for code in 0..8 {
                assert!(c.holds_for(&inst, &[code & 1, code >> 1 & 1, code >> 2 & 1]));
            }
            let (coeffs, rhs) = c.row::<f64>(&inst, 0);
            let lhs: f64 = coeffs.iter().map(|(j, a)| a * x[*j]).sum();
            assert!((lhs - rhs - (c.lhs(&inst, &x) - 1.0)).abs() < 1e-12);
        }
        let mut sep = Separator::new();
        let first = sep.separate(&inst, &x, 20);
        assert!(!first.is_empty());
        assert!(sep.separate(&inst, &x, 20).is_empty());
    }
}
