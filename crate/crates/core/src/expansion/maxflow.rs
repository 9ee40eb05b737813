//! Dinic max-flow on a residual arc list.

use std::collections::VecDeque;

/// A directed network with paired residual arcs (`a` and `a ^ 1`).
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    node_count: usize,
    source: usize,
    sink: usize,
    to: Vec<usize>,
    cap: Vec<f64>,
    adj: Vec<Vec<usize>>,
    eps: f64,
}

impl FlowNetwork {
    /// A network over `node_count` nodes; the source and sink must be among them.
    pub fn new(node_count: usize, source: usize, sink: usize) -> Self {
        assert!(source < node_count && sink < node_count && source != sink);
        Self {
            node_count,
            source,
            sink,
            to: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); node_count],
            eps: 0.0,
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.to.len() / 2
    }

    /// Adds `u → v` with capacity `cap` and `v → u` with capacity `rev_cap`.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: f64, rev_cap: f64) {
        debug_assert!(cap >= 0.0 && rev_cap >= 0.0 && cap.is_finite() && rev_cap.is_finite());
        if cap == 0.0 && rev_cap == 0.0 {
            return;
        }
        let a = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.to.push(u);
        self.cap.push(rev_cap);
        self.adj[u].push(a);
        self.adj[v].push(a + 1);
        self.eps = self.eps.max(cap.max(rev_cap) * 1e-12);
    }

    fn levels(&self) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.node_count];
        level[self.source] = 0;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > self.eps && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[self.sink] != usize::MAX).then_some(level)
    }

    /// Pushes a blocking flow along level-increasing arcs; iterative to keep stack use flat.
    fn blocking_flow(&mut self, level: &mut [usize]) -> f64 {
        let mut next = vec![0usize; self.node_count];
        let mut path: Vec<usize> = Vec::new();
        let mut total = 0.0;
        loop {
            let u = path.last().map_or(self.source, |&a| self.to[a]);
            if u == self.sink {
                let push = path.iter().map(|&a| self.cap[a]).fold(f64::INFINITY, f64::min);
                total += push;
                let mut cut_at = None;
                for (i, &a) in path.iter().enumerate() {
                    self.cap[a] -= push;
                    self.cap[a ^ 1] += push;
                    if cut_at.is_none() && self.cap[a] <= self.eps {
                        cut_at = Some(i);
                    }
                }
                path.truncate(cut_at.unwrap_or(0));
                continue;
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let a = self.adj[u][next[u]];
                let v = self.to[a];
                if self.cap[a] > self.eps && level[v] == level[u] + 1 {
                    path.push(a);
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                level[u] = usize::MAX;
                match path.pop() {
                    Some(a) => next[self.to[a ^ 1]] += 1,
                    None => break,
                }
            }
        }
        total
    }

    /// Runs max-flow to completion and returns the flow value.
    pub fn max_flow(&mut self) -> f64 {
        let mut flow = 0.0;
        while let Some(mut level) = self.levels() {
            let pushed = self.blocking_flow(&mut level);
            if pushed <= 0.0 {
                break;
            }
            flow += pushed;
        }
        flow
    }

    /// Nodes reachable from the source in the residual network (the source side of a min cut
    /// once [`max_flow`](Self::max_flow) has run).
    pub fn source_side(&self) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        seen[self.source] = true;
        let mut stack = vec![self.source];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let v = self.to[a];
                if self.cap[a] > self.eps && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}
