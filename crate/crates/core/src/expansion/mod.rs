//! α-expansion: optimal single-label moves by min-cut, the sweep loop, and local-minimum tests.

mod maxflow;

pub use maxflow::FlowNetwork;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Labeling, PottsInstance};
use crate::num::{to_f64, Rational};

pub const DEFAULT_MAX_SWEEPS: usize = 100;

/// Whether `y` is an `alpha`-expansion of `x`.
pub fn is_expansion_of(x: &Labeling, y: &Labeling, alpha: usize) -> bool {
    x.len() == y.len()
        && x.labels().iter().zip(y.labels()).all(|(&a, &b)| {
            if a == alpha {
                b == alpha
            } else {
                b == alpha || b == a
            }
        })
}

/// Energy-minimizing `alpha`-expansion of `x`. Vertices on the source side of the min cut
/// keep their label, so ties resolve toward `x`.
pub fn optimal_expansion(instance: &PottsInstance, x: &Labeling, alpha: usize) -> Result<Labeling> {
    instance.check_labeling(x)?;
    if alpha >= instance.label_count() {
        return Err(Error::Parameter(format!(
            "label {alpha} out of range for k = {}",
            instance.label_count()
        )));
    }
    Ok(expansion_move(instance, x.labels(), alpha))
}

pub(crate) fn expansion_move(instance: &PottsInstance, x: &[usize], alpha: usize) -> Labeling {
    let n = instance.vertex_count();
    let mut index = vec![usize::MAX; n];
    let mut free = Vec::new();
    for u in 0..n {
        if x[u] != alpha {
            index[u] = free.len();
            free.push(u);
        }
    }
    if free.is_empty() {
        return Labeling::new(x.to_vec());
    }
    let (s, t) = (free.len(), free.len() + 1);
    let mut net = FlowNetwork::new(free.len() + 2, s, t);
    // lin[i]: energy change of vertex free[i] switching to alpha, pairwise shares included.
    let mut lin: Vec<f64> = free
        .iter()
        .map(|&u| instance.node_cost_f64(u, alpha) - instance.node_cost_f64(u, x[u]))
        .collect();
    for (e, &(u, v)) in instance.edges().iter().enumerate() {
        let w = instance.weight_f64(e);
        if w == 0.0 {
            continue;
        }
        match (x[u] == alpha, x[v] == alpha) {
            (true, true) => {}
            (false, true) => lin[index[u]] -= w,
            (true, false) => lin[index[v]] -= w,
            (false, false) => {
                // Binary table A=w[x_u≠x_v], B=C=w, D=0.
                let a = if x[u] != x[v] { w } else { 0.0 };
                lin[index[u]] += w - a;
                lin[index[v]] -= w;
                net.add_edge(index[u], index[v], 2.0 * w - a, 0.0);
            }
        }
    }
    for (i, &d) in lin.iter().enumerate() {
        if d > 0.0 {
            net.add_edge(s, i, d, 0.0);
        } else if d < 0.0 {
            net.add_edge(i, t, -d, 0.0);
        }
    }
    net.max_flow();
    let keep = net.source_side();
    let mut y = x.to_vec();
    for (i, &u) in free.iter().enumerate() {
        if !keep[i] {
            y[u] = alpha;
        }
    }
    Labeling::new(y)
}

/// `E(y) < E(x)`, decided exactly when the float energies are too close to call.
pub(crate) fn strictly_better(instance: &PottsInstance, y: &[usize], x: &[usize]) -> bool {
    if y == x {
        return false;
    }
    let (ey, ex) = (instance.energy_unchecked(y), instance.energy_unchecked(x));
    let scale = 1.0 + ex.abs().max(ey.abs());
    if (ex - ey).abs() > 1e-9 * scale {
        return ey < ex;
    }
    exact_energy(instance, y) < exact_energy(instance, x)
}

fn exact_energy(instance: &PottsInstance, x: &[usize]) -> Rational {
    let mut total = instance.cut_cost_exact(x);
    for (u, &l) in x.iter().enumerate() {
        total += instance.node_cost(u, l);
    }
    total
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepStats {
    pub sweeps: usize,
    pub moves_accepted: usize,
    pub initial_energy: f64,
    pub final_energy: f64,
    /// Energy at the end of each sweep.
    pub energy_trace: Vec<f64>,
    /// A full sweep ran without an accepted move.
    pub converged: bool,
}

/// Runs α-expansion sweeps over `order` until a sweep accepts no move or `max_sweeps` is hit.
pub fn run_expansion(
    instance: &PottsInstance,
    init: &Labeling,
    order: &[usize],
    max_sweeps: usize,
) -> Result<(Labeling, SweepStats)> {
    instance.check_labeling(init)?;
    let k = instance.label_count();
    let mut seen = vec![false; k];
    if order.len() != k || order.iter().any(|&a| a >= k || std::mem::replace(&mut seen[a], true)) {
        return Err(Error::Parameter(format!("label order {order:?} is not a permutation of 0..{k}")));
    }
    if max_sweeps == 0 {
        return Err(Error::Parameter("max_sweeps must be at least 1".into()));
    }
    let mut x = init.labels().to_vec();
    let initial_energy = instance.energy_unchecked(&x);
    let mut stats = SweepStats {
        sweeps: 0,
        moves_accepted: 0,
        initial_energy,
        final_energy: initial_energy,
        energy_trace: Vec::new(),
        converged: false,
    };
    while stats.sweeps < max_sweeps {
        stats.sweeps += 1;
        let mut improved = false;
        for &alpha in order {
            let y = expansion_move(instance, &x, alpha);
            if strictly_better(instance, y.labels(), &x) {
                x = y.into_inner();
                stats.moves_accepted += 1;
                improved = true;
            }
        }
        stats.energy_trace.push(instance.energy_unchecked(&x));
        if !improved {
            stats.converged = true;
            break;
        }
    }
    stats.final_energy = instance.energy_unchecked(&x);
    log::debug!(
        "expansion: {} sweeps, {} moves, energy {} -> {}",
        stats.sweeps,
        stats.moves_accepted,
        stats.initial_energy,
        stats.final_energy
    );
    Ok((Labeling::new(x), stats))
}

/// Ascending label order `0..k`.
pub fn default_order(k: usize) -> Vec<usize> {
    (0..k).collect()
}

/// True iff no single α-expansion strictly lowers the energy of `x`.
pub fn is_local_minimum(instance: &PottsInstance, x: &Labeling) -> Result<bool> {
    instance.check_labeling(x)?;
    Ok((0..instance.label_count())
        .all(|alpha| !strictly_better(instance, expansion_move(instance, x.labels(), alpha).labels(), x.labels())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BvzCheck {
    /// `E(x) ≤ E(x*) + cut(x*)`.
    pub holds: bool,
    /// `E(x*) + cut(x*) − E(x)`.
    pub slack: f64,
    #[serde(skip)]
    pub slack_exact: Rational,
    /// `E(x) ≤ 2·E(x*)`, checked only when every node cost is nonnegative.
    pub two_approximation: Option<bool>,
}

/// Checks the approximation guarantee of an expansion local minimum `x` against a MAP `x_star`.
pub fn check_bvz_bound(instance: &PottsInstance, x: &Labeling, x_star: &Labeling) -> Result<BvzCheck> {
    let ex = instance.energy_exact(x)?;
    let estar = instance.energy_exact(x_star)?;
    let cut = instance.cut_cost_exact(x_star.labels());
    let slack_exact = &estar + &cut - &ex;
    let two_approximation = instance
        .node_costs()
        .iter()
        .all(|c| !c.is_negative())
        .then(|| ex <= &estar + &estar);
    Ok(BvzCheck {
        holds: !slack_exact.is_negative(),
        slack: to_f64(&slack_exact),
        slack_exact,
        two_approximation,
    })
}
