//! Integral maximum flow on a directed network with exact `u128`
//! capacities.
//!
//! Augmentation follows shortest paths, grouped into phases by BFS distance
//! (blocking flows on the level graph). Arcs are explored in insertion
//! order, so results are reproducible.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type ArcId = usize;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u128,
    flow: u128,
}

/// Residual arcs are stored in pairs: arc `2i` is the forward arc added by
/// [`FlowNetwork::add_arc`], arc `2i + 1` its reverse.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    adj: Vec<Vec<ArcId>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        Self {
            arcs: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of forward arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len() / 2
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: u128) -> ArcId {
        assert!(from < self.adj.len() && to < self.adj.len(), "arc endpoint out of range");
        let id = self.arcs.len();
        self.arcs.push(Arc { to, cap, flow: 0 });
        self.arcs.push(Arc { to: from, cap: 0, flow: 0 });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }

    pub fn tail(&self, arc: ArcId) -> usize {
        self.arcs[arc ^ 1].to
    }

    pub fn head(&self, arc: ArcId) -> usize {
        self.arcs[arc].to
    }

    pub fn capacity(&self, arc: ArcId) -> u128 {
        self.arcs[arc].cap
    }

    pub fn flow(&self, arc: ArcId) -> u128 {
        self.arcs[arc].flow
    }

    /// Forward arcs leaving `node`, in insertion order.
    pub fn out_arcs(&self, node: usize) -> impl Iterator<Item = ArcId> + '_ {
        self.adj[node].iter().copied().filter(|a| a % 2 == 0)
    }

    fn residual(&self, id: ArcId) -> u128 {
        let a = &self.arcs[id];
        if id % 2 == 0 {
            a.cap - a.flow
        } else {
            self.arcs[id ^ 1].flow
        }
    }

    fn push(&mut self, id: ArcId, amount: u128) {
        if id % 2 == 0 {
            self.arcs[id].flow += amount;
        } else {
            self.arcs[id ^ 1].flow -= amount;
        }
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let v = self.arcs[id].to;
                if level[v] == u32::MAX && self.residual(id) > 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    /// One augmenting path on the level graph, found iteratively; returns
    /// the amount pushed (zero when the level graph is exhausted).
    fn augment(&mut self, s: usize, t: usize, level: &[u32], next: &mut [usize]) -> u128 {
        let mut path: Vec<ArcId> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let amount = path.iter().map(|&a| self.residual(a)).min().unwrap_or(0);
                for &a in &path {
                    self.push(a, amount);
                }
                return amount;
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let id = self.adj[u][next[u]];
                let v = self.arcs[id].to;
                if self.residual(id) > 0 && level[v] == level[u] + 1 {
                    path.push(id);
                    u = v;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                // Dead end: retreat and skip the arc that led here.
                match path.pop() {
                    None => return 0,
                    Some(id) => {
                        u = self.tail(id);
                        next[u] += 1;
                    }
                }
            }
        }
    }

    /// Maximum flow value from `s` to `t`; per-arc flows are left in place.
    pub fn max_flow(&mut self, s: usize, t: usize) -> u128 {
        assert_ne!(s, t, "source and sink must differ");
        let mut total = 0u128;
        while let Some(level) = self.levels(s, t) {
            let mut next = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.augment(s, t, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }

    /// Checks capacity bounds and conservation at every node other than
    /// `s` and `t`; returns the net flow out of `s`.
    pub fn check_flow(&self, s: usize, t: usize) -> Result<u128> {
        let mut balance = vec![0i128; self.adj.len()];
        for id in (0..self.arcs.len()).step_by(2) {
            let a = &self.arcs[id];
            if a.flow > a.cap {
                return Err(Error::Internal(format!("arc {id} carries {} over capacity {}", a.flow, a.cap)));
            }
            let f = i128::try_from(a.flow).map_err(|_| Error::Internal("flow exceeds i128".into()))?;
            balance[self.tail(id)] -= f;
            balance[a.to] += f;
        }
        for (v, b) in balance.iter().enumerate() {
            if v != s && v != t && *b != 0 {
                return Err(Error::Internal(format!("flow not conserved at node {v} (excess {b})")));
            }
        }
        Ok((-balance[s]) as u128)
    }
}
