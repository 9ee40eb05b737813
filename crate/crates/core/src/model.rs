//! Ferromagnetic Potts MRFs: instances, labelings, pseudomarginal points and the
//! doubled-weight perturbation that makes an expansion local minimum globally optimal.
//!
//! Coordinates of the marginal/local polytope are laid out as
//! `[x_0(0..k), .., x_{n-1}(0..k), x_e0(0..k, 0..k), .., x_e{m-1}(..)]`:
//! node blocks in vertex order, then one row-major `k x k` block per edge in edge order,
//! where the first index belongs to the edge's first endpoint.

use std::collections::HashSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::num::{self, Rational, Scalar};

/// Finite stand-in for an infinite "never choose this label" node cost.
pub const DEFAULT_SENTINEL: f64 = 1e6;

/// A Potts model instance: node costs `θ_u(i)`, nonnegative edge weights `w_uv`, `k` labels.
#[derive(Clone, Debug, PartialEq)]
pub struct PottsInstance {
    n: usize,
    k: usize,
    edges: Vec<(usize, usize)>,
    node_costs: Vec<Rational>,
    weights: Vec<Rational>,
    node_costs_f: Vec<f64>,
    weights_f: Vec<f64>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl PottsInstance {
    /// Builds an instance from exact costs. `node_costs` is row-major, `n` rows of `k`.
    pub fn new(
        n: usize,
        k: usize,
        edges: Vec<(usize, usize)>,
        node_costs: Vec<Rational>,
        weights: Vec<Rational>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("vertex count must be positive".into()));
        }
        if k < 2 {
            return Err(Error::InvalidInstance(format!("label count must be >= 2, got {k}")));
        }
        if node_costs.len() != n * k {
            return Err(Error::InvalidInstance(format!(
                "expected {} node costs ({n} x {k}), got {}",
                n * k,
                node_costs.len()
            )));
        }
        if weights.len() != edges.len() {
            return Err(Error::InvalidInstance(format!(
                "{} edges but {} weights",
                edges.len(),
                weights.len()
            )));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!("edge {e} ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("edge {e} is a self-loop on {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({u},{v})")));
            }
            if num_traits::Signed::is_negative(&weights[e]) {
                return Err(Error::InvalidInstance(format!("edge {e} has negative weight")));
            }
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        let node_costs_f = node_costs.iter().map(num::to_f64).collect();
        let weights_f = weights.iter().map(num::to_f64).collect();
        Ok(Self { n, k, edges, node_costs, weights, node_costs_f, weights_f, adjacency })
    }

    /// Builds an instance from floats; each value is taken as its shortest decimal.
    pub fn from_f64(
        n: usize,
        k: usize,
        edges: Vec<(usize, usize)>,
        node_costs: &[f64],
        weights: &[f64],
    ) -> Result<Self> {
        let conv = |v: f64| {
            num::from_f64(v).ok_or_else(|| Error::InvalidInstance(format!("non-finite value {v}")))
        };
        let nc = node_costs.iter().map(|&v| conv(v)).collect::<Result<Vec<_>>>()?;
        let w = weights.iter().map(|&v| conv(v)).collect::<Result<Vec<_>>>()?;
        Self::new(n, k, edges, nc, w)
    }

    pub fn from_ints(
        n: usize,
        k: usize,
        edges: Vec<(usize, usize)>,
        node_costs: &[i64],
        weights: &[i64],
    ) -> Result<Self> {
        let nc = node_costs.iter().map(|&v| num::int(v)).collect();
        let w = weights.iter().map(|&v| num::int(v)).collect();
        Self::new(n, k, edges, nc, w)
    }

    /// Same graph and node costs, new edge weights.
    pub fn with_weights(&self, weights: Vec<Rational>) -> Result<Self> {
        Self::new(self.n, self.k, self.edges.clone(), self.node_costs.clone(), weights)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn label_count(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn node_cost(&self, u: usize, i: usize) -> &Rational {
        &self.node_costs[u * self.k + i]
    }

    pub fn node_cost_f64(&self, u: usize, i: usize) -> f64 {
        self.node_costs_f[u * self.k + i]
    }

    pub fn node_costs(&self) -> &[Rational] {
        &self.node_costs
    }

    pub fn weight(&self, e: usize) -> &Rational {
        &self.weights[e]
    }

    pub fn weight_f64(&self, e: usize) -> f64 {
        self.weights_f[e]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// `(neighbor, edge index)` pairs incident to `u`.
    pub fn neighbors(&self, u: usize) -> &[(usize, usize)] {
        &self.adjacency[u]
    }

    /// Number of polytope coordinates, `nk + mk²`.
    pub fn dimension(&self) -> usize {
        self.n * self.k + self.edges.len() * self.k * self.k
    }

    pub fn node_col(&self, u: usize, i: usize) -> usize {
        u * self.k + i
    }

    pub fn edge_col(&self, e: usize, i: usize, j: usize) -> usize {
        self.n * self.k + e * self.k * self.k + i * self.k + j
    }

    pub fn check_labeling(&self, x: &Labeling) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: x.len() });
        }
        if let Some((u, &l)) = x.labels().iter().enumerate().find(|(_, &l)| l >= self.k) {
            return Err(Error::InvalidLabeling(format!(
                "vertex {u} has label {l}, but only {} labels exist",
                self.k
            )));
        }
        Ok(())
    }

    /// `Σ_u θ_u(x(u)) + Σ_uv w_uv·[x(u) ≠ x(v)]` in double precision.
    pub fn energy(&self, x: &Labeling) -> Result<f64> {
        self.check_labeling(x)?;
        Ok(self.energy_unchecked(x.labels()))
    }

    pub(crate) fn energy_unchecked(&self, x: &[usize]) -> f64 {
        let node: f64 = x.iter().enumerate().map(|(u, &l)| self.node_costs_f[u * self.k + l]).sum();
        let edge: f64 = self
            .edges
            .iter()
            .zip(&self.weights_f)
            .filter(|((u, v), _)| x[*u] != x[*v])
            .map(|(_, w)| *w)
            .sum();
        node + edge
    }

    /// Exact energy.
    pub fn energy_exact(&self, x: &Labeling) -> Result<Rational> {
        self.check_labeling(x)?;
        let labels = x.labels();
        let mut total = <Rational as Zero>::zero();
        for (u, &l) in labels.iter().enumerate() {
            total += &self.node_costs[u * self.k + l];
        }
        total += self.cut_cost_exact(labels);
        Ok(total)
    }

    /// Exact weight of the edges `x` cuts: `Σ_uv θ_uv(x(u), x(v))`.
    pub fn cut_cost_exact(&self, x: &[usize]) -> Rational {
        let mut total = <Rational as Zero>::zero();
        for (&(u, v), w) in self.edges.iter().zip(&self.weights) {
            if x[u] != x[v] {
                total += w;
            }
        }
        total
    }

    /// The objective vector `θ` over the polytope coordinates.
    pub fn objective_vector<T: Scalar>(&self) -> Vec<T> {
        let mut theta = Vec::with_capacity(self.dimension());
        theta.extend(self.node_costs.iter().map(T::from_rational));
        for w in &self.weights {
            let wt = T::from_rational(w);
            for i in 0..self.k {
                for j in 0..self.k {
                    theta.push(if i == j { T::zero() } else { wt.clone() });
                }
            }
        }
        theta
    }

    /// `⟨θ, point⟩` for an arbitrary coordinate vector.
    pub fn evaluate<T: Scalar>(&self, point: &FractionalPoint<T>) -> T {
        let theta = self.objective_vector::<T>();
        dot(&theta, point.values())
    }

    /// Checks that `sentinel` exceeds an achievable finite energy, warning if it does not.
    ///
    /// Costs `>= sentinel` are treated as forbidden. The reference energy is that of the
    /// labeling picking each vertex's cheapest allowed label while paying every edge.
    pub fn sentinel_is_safe(&self, sentinel: &Rational) -> bool {
        let mut bound = <Rational as Zero>::zero();
        for u in 0..self.n {
            let cheapest = (0..self.k)
                .map(|i| self.node_cost(u, i))
                .filter(|c| *c < sentinel)
                .min()
                .cloned()
                .unwrap_or_else(|| sentinel.clone());
            bound += cheapest;
        }
        for w in &self.weights {
            bound += w;
        }
        let safe = &bound < sentinel;
        if !safe {
            log::warn!(
                "sentinel cost {} does not exceed the finite energy bound {}",
                num::format_rational(sentinel),
                num::format_rational(&bound)
            );
        }
        safe
    }

    /// Embeds a labeling as a vertex of the marginal polytope.
    pub fn embed<T: Scalar>(&self, x: &Labeling) -> Result<FractionalPoint<T>> {
        self.check_labeling(x)?;
        let mut values = vec![T::zero(); self.dimension()];
        let labels = x.labels();
        for (u, &l) in labels.iter().enumerate() {
            values[self.node_col(u, l)] = T::one();
        }
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            values[self.edge_col(e, labels[u], labels[v])] = T::one();
        }
        Ok(FractionalPoint { n: self.n, k: self.k, m: self.edges.len(), values })
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

/// An assignment of one label per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling(Vec<usize>);

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Self {
        Self(labels)
    }

    pub fn constant(n: usize, label: usize) -> Self {
        Self(vec![label; n])
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl std::ops::Index<usize> for Labeling {
    type Output = usize;
    fn index(&self, u: usize) -> &usize {
        &self.0[u]
    }
}

impl From<Vec<usize>> for Labeling {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

/// Fraction of vertices on which two labelings disagree.
pub fn hamming(x: &Labeling, y: &Labeling) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch { expected: x.len(), found: y.len() });
    }
    if x.is_empty() {
        return Err(Error::InvalidLabeling("empty labeling".into()));
    }
    let diff = x.labels().iter().zip(y.labels()).filter(|(a, b)| a != b).count();
    Ok(diff as f64 / x.len() as f64)
}

/// Node and edge pseudomarginals over the coordinate layout described at module level.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalPoint<T> {
    n: usize,
    k: usize,
    m: usize,
    values: Vec<T>,
}

impl<T: Scalar> FractionalPoint<T> {
    pub fn from_values(instance: &PottsInstance, values: Vec<T>) -> Result<Self> {
        if values.len() != instance.dimension() {
            return Err(Error::SizeMismatch { expected: instance.dimension(), found: values.len() });
        }
        Ok(Self { n: instance.vertex_count(), k: instance.label_count(), m: instance.edge_count(), values })
    }

    pub(crate) fn from_parts(n: usize, k: usize, m: usize, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), n * k + m * k * k);
        Self { n, k, m, values }
    }

    /// Every node uniform on `[k]`, every edge the independent product.
    pub fn uniform(instance: &PottsInstance) -> Self {
        let k = instance.label_count();
        let p = T::one().div(&T::from_i64(k as i64));
        let p2 = p.mul(&p);
        let mut values = vec![p; instance.vertex_count() * k];
        values.extend(std::iter::repeat(p2).take(instance.edge_count() * k * k));
        Self { n: instance.vertex_count(), k, m: instance.edge_count(), values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn label_count(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn node(&self, u: usize, i: usize) -> &T {
        &self.values[u * self.k + i]
    }

    pub fn node_marginals(&self, u: usize) -> &[T] {
        &self.values[u * self.k..(u + 1) * self.k]
    }

    pub fn edge(&self, e: usize, i: usize, j: usize) -> &T {
        &self.values[self.n * self.k + e * self.k * self.k + i * self.k + j]
    }

    /// Per-vertex argmax label (lowest index on ties).
    pub fn argmax_labels(&self) -> Labeling {
        let labels = (0..self.n)
            .map(|u| {
                let marg = self.node_marginals(u);
                let mut best = 0;
                for i in 1..self.k {
                    if marg[i] > marg[best] {
                        best = i;
                    }
                }
                best
            })
            .collect();
        Labeling(labels)
    }

    /// All coordinates are 0 or 1 (within the scalar's tolerance).
    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.sub(&T::one()).is_zero())
    }

    /// Local-polytope membership: bounds, normalization and both marginalization families.
    pub fn is_feasible(&self, instance: &PottsInstance) -> bool {
        if self.values.len() != instance.dimension() {
            return false;
        }
        if self.values.iter().any(|v| v.is_negative() || v.sub(&T::one()).is_positive()) {
            return false;
        }
        let k = self.k;
        for u in 0..self.n {
            let s = self.node_marginals(u).iter().fold(T::zero(), |a, b| a.add(b));
            if !s.approx_eq(&T::one()) {
                return false;
            }
        }
        for (e, &(u, v)) in instance.edges().iter().enumerate() {
            for j in 0..k {
                let s = (0..k).fold(T::zero(), |a, i| a.add(self.edge(e, i, j)));
                if !s.approx_eq(self.node(v, j)) {
                    return false;
                }
            }
            for i in 0..k {
                let s = (0..k).fold(T::zero(), |a, j| a.add(self.edge(e, i, j)));
                if !s.approx_eq(self.node(u, i)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_f64(&self) -> FractionalPoint<f64> {
        FractionalPoint {
            n: self.n,
            k: self.k,
            m: self.m,
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// The instance with weights doubled on every edge `reference` leaves uncut.
#[derive(Clone, Debug)]
pub struct PerturbedInstance {
    instance: PottsInstance,
    reference: Labeling,
}

impl PerturbedInstance {
    /// The perturbed Potts instance (same node costs, weights `w^x`).
    pub fn instance(&self) -> &PottsInstance {
        &self.instance
    }

    pub fn reference(&self) -> &Labeling {
        &self.reference
    }

    pub fn weights(&self) -> &[Rational] {
        self.instance.weights()
    }

    pub fn into_instance(self) -> PottsInstance {
        self.instance
    }
}

/// `w^x_uv = w_uv` on edges cut by `x`, `2·w_uv` on uncut edges; node costs unchanged.
pub fn perturb(instance: &PottsInstance, x: &Labeling) -> Result<PerturbedInstance> {
    instance.check_labeling(x)?;
    let labels = x.labels();
    let weights = instance
        .edges()
        .iter()
        .zip(instance.weights())
        .map(|(&(u, v), w)| if labels[u] != labels[v] { w.clone() } else { w + w })
        .collect();
    Ok(PerturbedInstance { instance: instance.with_weights(weights)?, reference: x.clone() })
}

/// Small named instances used throughout the tests and the CLI.
pub mod fixtures {
    use super::*;

    /// Two vertices, one edge of weight 1, `k = 2`, `θ_s = (0, 2)`, `θ_t = (2, 0)`.
    pub fn t1() -> PottsInstance {
        PottsInstance::from_ints(2, 2, vec![(0, 1)], &[0, 2, 2, 0], &[1]).expect("valid fixture")
    }

    /// The two-vertex `k = 4` instance where the naive bound is 1 but the certified bound is 0:
    /// `θ_s = (0, ε, M, M)`, `θ_t = (M, M, ε, 0)`, `w_st = 1`, `ε = 0.1`, `M = 1e6`.
    pub fn p4() -> PottsInstance {
        let eps = num::ratio(1, 10);
        let big = num::int(DEFAULT_SENTINEL as i64);
        let nc = vec![
            num::int(0),
            eps.clone(),
            big.clone(),
            big.clone(),
            big.clone(),
            big,
            eps,
            num::int(0),
        ];
        PottsInstance::new(2, 4, vec![(0, 1)], nc, vec![num::int(1)]).expect("valid fixture")
    }

    /// A single vertex with `k` labels and zero costs.
    pub fn singleton(k: usize) -> PottsInstance {
        PottsInstance::from_ints(1, k, vec![], &vec![0; k], &[]).expect("valid fixture")
    }

    /// All costs and weights zero on an `h x w` grid.
    pub fn zero_grid(h: usize, w: usize, k: usize) -> PottsInstance {
        let edges = crate::instances::grid_edges(h, w);
        let m = edges.len();
        PottsInstance::from_ints(h * w, k, edges, &vec![0; h * w * k], &vec![0; m])
            .expect("valid fixture")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::num::{int, ratio};

    fn all_labelings(n: usize, k: usize) -> Vec<Labeling> {
        let total = k.pow(n as u32);
        (0..total)
            .map(|mut c| {
                let mut v = vec![0; n];
                for slot in v.iter_mut() {
                    *slot = c % k;
                    c /= k;
                }
                Labeling::new(v)
            })
            .collect()
    }

    #[test]
    fn t1_energies_by_enumeration() {
        let t1 = t1();
        let energies: Vec<f64> =
            all_labelings(2, 2).iter().map(|x| t1.energy(x).unwrap()).collect();
        // (0,0), (1,0), (0,1), (1,1)
        assert_eq!(energies, vec![2.0, 5.0, 1.0, 2.0]);
        assert_eq!(t1.energy(&Labeling::new(vec![0, 1])).unwrap(), 1.0);
        assert_eq!(t1.energy(&Labeling::new(vec![0, 0])).unwrap(), 2.0);
    }

    #[test]
    fn zero_instance_has_zero_energy() {
        let z = zero_grid(2, 2, 3);
        for x in all_labelings(4, 3) {
            assert_eq!(z.energy(&x).unwrap(), 0.0);
        }
    }

    #[test]
    fn energy_rejects_out_of_range_labels() {
        let t1 = t1();
        assert!(matches!(t1.energy(&Labeling::new(vec![0, 2])), Err(Error::InvalidLabeling(_))));
        assert!(matches!(t1.energy(&Labeling::new(vec![0])), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn constructor_rejects_bad_graphs() {
        let nc = [0i64; 4];
        assert!(PottsInstance::from_ints(2, 2, vec![(0, 0)], &nc, &[1]).is_err());
        assert!(PottsInstance::from_ints(2, 2, vec![(0, 1), (1, 0)], &nc, &[1, 1]).is_err());
        assert!(PottsInstance::from_ints(2, 2, vec![(0, 1)], &nc, &[-1]).is_err());
        assert!(PottsInstance::from_ints(2, 1, vec![], &[0, 0], &[]).is_err());
        assert!(PottsInstance::from_ints(2, 2, vec![], &[0, 0, 0], &[]).is_err());
        assert!(PottsInstance::from_f64(1, 2, vec![], &[0.0, f64::NAN], &[]).is_err());
    }

    #[test]
    fn hamming_examples() {
        let a = Labeling::new(vec![0, 1]);
        let b = Labeling::new(vec![0, 0]);
        let c = Labeling::new(vec![1, 0]);
        assert_eq!(hamming(&a, &a).unwrap(), 0.0);
        assert_eq!(hamming(&a, &c).unwrap(), 1.0);
        assert_eq!(hamming(&a, &b).unwrap(), 0.5);
        assert!(hamming(&a, &Labeling::new(vec![0])).is_err());
    }

    #[test]
    fn perturb_cut_and_uncut_branches() {
        let t1 = t1();
        let cut = perturb(&t1, &Labeling::new(vec![0, 1])).unwrap();
        assert_eq!(cut.weights(), &[int(1)]);
        let uncut = perturb(&t1, &Labeling::new(vec![0, 0])).unwrap();
        assert_eq!(uncut.weights(), &[int(2)]);
        assert_eq!(uncut.instance().node_costs(), t1.node_costs());
    }

    #[test]
    fn perturb_constant_labeling_doubles_everything() {
        let inst = crate::instances::gen_grid(3, 3, 3, 11, (0, 10), (0, 5)).unwrap();
        let p = perturb(&inst, &Labeling::constant(9, 2)).unwrap();
        for (w, wx) in inst.weights().iter().zip(p.weights()) {
            assert_eq!(wx, &(w * int(2)));
        }
    }

    #[test]
    fn embed_examples() {
        let t1 = t1();
        let p = t1.embed::<Rational>(&Labeling::new(vec![0, 1])).unwrap();
        assert_eq!(p.node_marginals(0), &[int(1), int(0)]);
        assert_eq!(p.node_marginals(1), &[int(0), int(1)]);
        assert_eq!(p.edge(0, 0, 1), &int(1));
        assert_eq!(p.edge(0, 0, 0), &int(0));
        assert_eq!(p.edge(0, 1, 0), &int(0));
        assert_eq!(p.edge(0, 1, 1), &int(0));
        assert!(p.is_feasible(&t1));
        assert!(p.is_integral());

        let single = singleton(3);
        let q = single.embed::<Rational>(&Labeling::new(vec![2])).unwrap();
        assert_eq!(q.values(), &[int(0), int(0), int(1)]);
    }

    #[test]
    fn embed_argmax_round_trip_on_grid() {
        let inst = crate::instances::gen_grid(2, 2, 3, 5, (0, 10), (0, 5)).unwrap();
        for x in all_labelings(4, 3) {
            let p = inst.embed::<f64>(&x).unwrap();
            assert!(p.is_feasible(&inst));
            assert_eq!(p.argmax_labels(), x);
        }
    }

    #[test]
    fn labeling_and_vector_forms_agree() {
        let inst = crate::instances::gen_grid(2, 3, 3, 99, (0, 10), (0, 5)).unwrap();
        for x in all_labelings(6, 3).iter().step_by(7) {
            let p = inst.embed::<Rational>(x).unwrap();
            assert_eq!(inst.evaluate(&p), inst.energy_exact(x).unwrap());
            let px = perturb(&inst, x).unwrap();
            assert_eq!(px.instance().evaluate(&p), inst.energy_exact(x).unwrap());
        }
    }

    #[test]
    fn p4_fixture_values() {
        let p4 = p4();
        assert_eq!(p4.energy_exact(&Labeling::new(vec![1, 2])).unwrap(), ratio(12, 10));
        assert_eq!(p4.energy_exact(&Labeling::new(vec![0, 3])).unwrap(), int(1));
        // The sentinel must beat the cheapest finite labeling (0 + 0 + 1).
        assert!(p4.sentinel_is_safe(&int(1_000_000)));
        assert!(!p4.sentinel_is_safe(&int(1)));
    }

    #[test]
    fn uniform_point_is_feasible() {
        let inst = crate::instances::gen_grid(2, 2, 3, 1, (0, 10), (0, 5)).unwrap();
        assert!(FractionalPoint::<Rational>::uniform(&inst).is_feasible(&inst));
        assert!(!FractionalPoint::<Rational>::uniform(&inst).is_integral());
    }
}
