//! s-t maximum flow and minimum cut over real capacities.
//!
//! The solver is Dinic's algorithm (shortest augmenting paths found in
//! phases over BFS level graphs). An arc is usable while its residual
//! capacity is strictly positive. Every augmentation drives its bottleneck
//! arc to exactly zero (`r - r == 0` in IEEE arithmetic), so the phase count
//! is bounded as in exact arithmetic and no cutoff is needed; capacities many
//! orders of magnitude below the largest one still take part in the cut.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

const SOURCE: usize = 0;
const SINK: usize = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("capacity {0} is invalid: capacities must be finite and non-negative")]
    InvalidCapacity(f64),
    #[error("arc endpoints must differ (got {0:?} twice)")]
    SelfArc(Endpoint),
    #[error("arcs between the source and the sink are not supported")]
    TerminalArc,
    #[error("node {0} does not exist")]
    UnknownNode(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Source,
    Sink,
    Node(NodeId),
}

impl From<NodeId> for Endpoint {
    fn from(n: NodeId) -> Self {
        Endpoint::Node(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    SourceSide,
    SinkSide,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub flow_value: f64,
    /// Side of every non-terminal node, indexed by node id.
    pub side: Vec<Side>,
}

impl CutResult {
    pub fn is_source_side(&self, node: NodeId) -> bool {
        self.side[node.0] == Side::SourceSide
    }
}

/// One paired arc `tail -> head` as seen from outside the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcView {
    pub tail: Endpoint,
    pub head: Endpoint,
    pub capacity: f64,
    pub reverse_capacity: f64,
    /// Net flow from tail to head after the last solve; negative when the
    /// flow runs head to tail.
    pub flow: f64,
}

#[derive(Debug, Clone)]
struct HalfArc {
    head: usize,
    capacity: f64,
    residual: f64,
}

/// Capacitated directed network with a distinguished source and sink.
///
/// Arcs are stored as pairs of half-arcs: index `2k` runs in the direction
/// of the first insertion, `2k + 1` is its reverse.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    node_count: usize,
    arcs: Vec<HalfArc>,
    adjacency: Vec<Vec<usize>>,
    pairs: HashMap<(usize, usize), usize>,
}

impl FlowNetwork {
    pub fn new() -> Self {
        FlowNetwork {
            node_count: 0,
            arcs: Vec::new(),
            adjacency: vec![Vec::new(), Vec::new()],
            pairs: HashMap::new(),
        }
    }

    pub fn with_nodes(n: usize) -> Self {
        let mut net = Self::new();
        for _ in 0..n {
            net.add_node();
        }
        net
    }

    pub fn add_node(&mut self) -> NodeId {
        self.adjacency.push(Vec::new());
        self.node_count += 1;
        NodeId(self.node_count - 1)
    }

    /// Number of non-terminal nodes.
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of distinct endpoint pairs carrying arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len() / 2
    }

    fn index(&self, e: Endpoint) -> Result<usize, NetworkError> {
        match e {
            Endpoint::Source => Ok(SOURCE),
            Endpoint::Sink => Ok(SINK),
            Endpoint::Node(NodeId(n)) if n < self.node_count => Ok(n + 2),
            Endpoint::Node(NodeId(n)) => Err(NetworkError::UnknownNode(n)),
        }
    }

    fn endpoint(index: usize) -> Endpoint {
        match index {
            SOURCE => Endpoint::Source,
            SINK => Endpoint::Sink,
            n => Endpoint::Node(NodeId(n - 2)),
        }
    }

    /// Adds capacity `cap_uv` on `u -> v` and `cap_vu` on `v -> u`.
    /// Repeated calls on the same pair accumulate.
    pub fn add_edge(
        &mut self,
        u: impl Into<Endpoint>,
        v: impl Into<Endpoint>,
        cap_uv: f64,
        cap_vu: f64,
    ) -> Result<(), NetworkError> {
        let (u, v) = (u.into(), v.into());
        for cap in [cap_uv, cap_vu] {
            if !(cap.is_finite() && cap >= 0.0) {
                return Err(NetworkError::InvalidCapacity(cap));
            }
        }
        if u == v {
            return Err(NetworkError::SelfArc(u));
        }
        let (ui, vi) = (self.index(u)?, self.index(v)?);
        if ui.max(vi) == SINK {
            return Err(NetworkError::TerminalArc);
        }
        let key = (ui.min(vi), ui.max(vi));
        match self.pairs.get(&key) {
            Some(&pair) => {
                let (fwd, bwd) = if self.arcs[2 * pair + 1].head == vi {
                    // Stored in the opposite orientation.
                    (2 * pair + 1, 2 * pair)
                } else {
                    (2 * pair, 2 * pair + 1)
                };
                self.arcs[fwd].capacity += cap_uv;
                self.arcs[fwd].residual += cap_uv;
                self.arcs[bwd].capacity += cap_vu;
                self.arcs[bwd].residual += cap_vu;
            }
            None => {
                let pair = self.arcs.len() / 2;
                self.arcs.push(HalfArc {
                    head: vi,
                    capacity: cap_uv,
                    residual: cap_uv,
                });
                self.arcs.push(HalfArc {
                    head: ui,
                    capacity: cap_vu,
                    residual: cap_vu,
                });
                self.adjacency[ui].push(2 * pair);
                self.adjacency[vi].push(2 * pair + 1);
                self.pairs.insert(key, pair);
            }
        }
        Ok(())
    }

    /// Total capacity on `u -> v`, zero when no arc joins them.
    pub fn capacity(&self, u: impl Into<Endpoint>, v: impl Into<Endpoint>) -> f64 {
        let (Ok(ui), Ok(vi)) = (self.index(u.into()), self.index(v.into())) else {
            return 0.0;
        };
        match self.pairs.get(&(ui.min(vi), ui.max(vi))) {
            Some(&pair) if self.arcs[2 * pair].head == vi => self.arcs[2 * pair].capacity,
            Some(&pair) => self.arcs[2 * pair + 1].capacity,
            None => 0.0,
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcView> + '_ {
        self.arcs.chunks_exact(2).map(|pair| {
            let (fwd, bwd) = (&pair[0], &pair[1]);
            ArcView {
                tail: Self::endpoint(bwd.head),
                head: Self::endpoint(fwd.head),
                capacity: fwd.capacity,
                reverse_capacity: bwd.capacity,
                flow: fwd.capacity - fwd.residual,
            }
        })
    }

    /// Residual capacity of every half-arc after the last solve.
    pub fn residuals(&self) -> impl Iterator<Item = f64> + '_ {
        self.arcs.iter().map(|a| a.residual)
    }

    /// Capacity crossing from `{S} ∪ source side` to `{T} ∪ sink side`, where
    /// `source_side[k]` tells whether node `k` sits with the source.
    pub fn cut_capacity(&self, source_side: &[bool]) -> f64 {
        assert_eq!(source_side.len(), self.node_count, "one side flag per node");
        let on_source = |idx: usize| match idx {
            SOURCE => true,
            SINK => false,
            n => source_side[n - 2],
        };
        let mut total = 0.0;
        for pair in self.arcs.chunks_exact(2) {
            let (tail, head) = (pair[1].head, pair[0].head);
            match (on_source(tail), on_source(head)) {
                (true, false) => total += pair[0].capacity,
                (false, true) => total += pair[1].capacity,
                _ => {}
            }
        }
        total
    }

    /// BFS distances from the source over arcs with positive residual.
    fn levels(&self) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adjacency.len()];
        let mut queue = VecDeque::new();
        level[SOURCE] = 0;
        queue.push_back(SOURCE);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adjacency[u] {
                let arc = &self.arcs[a];
                if arc.residual > 0.0 && level[arc.head] == usize::MAX {
                    level[arc.head] = level[u] + 1;
                    queue.push_back(arc.head);
                }
            }
        }
        level
    }

    /// Blocking-flow DFS along the level graph, iterative to keep deep
    /// networks off the call stack.
    fn augment(&mut self, level: &[usize], next: &mut [usize]) -> f64 {
        let mut pushed_total = 0.0;
        let mut path: Vec<usize> = Vec::new();
        let mut u = SOURCE;
        loop {
            if u == SINK {
                let bottleneck = path
                    .iter()
                    .map(|&a| self.arcs[a].residual)
                    .fold(f64::INFINITY, f64::min);
                for &a in &path {
                    self.arcs[a].residual -= bottleneck;
                    self.arcs[a ^ 1].residual += bottleneck;
                }
                pushed_total += bottleneck;
                // Restart from the tail of the first saturated arc.
                let cut = path
                    .iter()
                    .position(|&a| self.arcs[a].residual <= 0.0)
                    .unwrap_or(0);
                path.truncate(cut);
                u = path.last().map_or(SOURCE, |&a| self.arcs[a].head);
                continue;
            }
            let mut advanced = false;
            while next[u] < self.adjacency[u].len() {
                let a = self.adjacency[u][next[u]];
                let arc = &self.arcs[a];
                if arc.residual > 0.0 && level[arc.head] == level[u] + 1 {
                    path.push(a);
                    u = arc.head;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if !advanced {
                if u == SOURCE {
                    return pushed_total;
                }
                // Dead end: retreat and skip the arc that led here.
                let a = path
                    .pop()
                    .expect("non-source node has an incoming path arc");
                u = self.arcs[a ^ 1].head;
                next[u] += 1;
            }
        }
    }

    /// Computes a maximum flow and the source-minimal minimum cut.
    ///
    /// Residual state is reset first, so solving twice gives the same result.
    /// A node is on the source side iff it is reachable from the source in
    /// the final residual network.
    pub fn max_flow(&mut self) -> CutResult {
        for arc in &mut self.arcs {
            arc.residual = arc.capacity;
        }
        let mut flow_value = 0.0;
        let mut next = vec![0; self.adjacency.len()];
        loop {
            let level = self.levels();
            if level[SINK] == usize::MAX {
                let side = (0..self.node_count)
                    .map(|n| {
                        if level[n + 2] == usize::MAX {
                            Side::SinkSide
                        } else {
                            Side::SourceSide
                        }
                    })
                    .collect();
                return CutResult { flow_value, side };
            }
            next.iter_mut().for_each(|n| *n = 0);
            flow_value += self.augment(&level, &mut next);
        }
    }
}
