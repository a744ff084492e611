#![allow(dead_code)]

use lpcut::energy::{evaluate_powered, EnergyFunction, Labeling};
use lpcut::mincut::{Endpoint, FlowNetwork, NodeId};
use rand::Rng;

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub fn all_labelings(n: usize) -> impl Iterator<Item = Labeling> {
    (0..1u64 << n).map(move |m| Labeling::from_mask(n, m))
}

/// Independent exhaustive minimum over every labeling, evaluated term by term.
pub fn enumerate_min(e: &EnergyFunction, p: f64) -> f64 {
    all_labelings(e.vertex_count())
        .map(|x| evaluate_powered(e, &x, p).unwrap())
        .fold(f64::INFINITY, f64::min)
}

/// Arc list `(tail, head, cap, reverse_cap)` kept alongside the network so
/// cut capacities can be recomputed without going through the solver.
#[derive(Debug, Clone)]
pub struct RandomNetwork {
    pub nodes: usize,
    pub arcs: Vec<(Endpoint, Endpoint, f64, f64)>,
}

impl RandomNetwork {
    pub fn generate<R: Rng>(rng: &mut R, max_nodes: usize) -> Self {
        let nodes = rng.gen_range(1..=max_nodes);
        let mut arcs = Vec::new();
        let cap = |rng: &mut R| {
            if rng.gen_bool(0.2) {
                0.0
            } else {
                rng.gen_range(0.0..10.0)
            }
        };
        for k in 0..nodes {
            if rng.gen_bool(0.7) {
                let c = cap(rng);
                arcs.push((Endpoint::Source, Endpoint::Node(NodeId(k)), c, 0.0));
            }
            if rng.gen_bool(0.7) {
                let c = cap(rng);
                arcs.push((Endpoint::Node(NodeId(k)), Endpoint::Sink, c, 0.0));
            }
        }
        let density = rng.gen_range(0.1..0.8);
        for i in 0..nodes {
            for j in 0..nodes {
                if i != j && rng.gen_bool(density / 2.0) {
                    let forward = cap(rng);
                    let backward = if rng.gen_bool(0.5) { cap(rng) } else { 0.0 };
                    arcs.push((
                        Endpoint::Node(NodeId(i)),
                        Endpoint::Node(NodeId(j)),
                        forward,
                        backward,
                    ));
                }
            }
        }
        RandomNetwork { nodes, arcs }
    }

    pub fn build(&self) -> FlowNetwork {
        let mut net = FlowNetwork::with_nodes(self.nodes);
        for &(u, v, c, r) in &self.arcs {
            net.add_edge(u, v, c, r).unwrap();
        }
        net
    }

    /// Capacity from `{S} ∪ {k : bit k of mask}` to the rest.
    pub fn cut(&self, mask: u64) -> f64 {
        let source_side = |e: Endpoint| match e {
            Endpoint::Source => true,
            Endpoint::Sink => false,
            Endpoint::Node(NodeId(k)) => (mask >> k) & 1 == 1,
        };
        self.arcs
            .iter()
            .map(|&(u, v, c, r)| match (source_side(u), source_side(v)) {
                (true, false) => c,
                (false, true) => r,
                _ => 0.0,
            })
            .sum()
    }

    pub fn exhaustive_min_cut(&self) -> f64 {
        (0..1u64 << self.nodes)
            .map(|m| self.cut(m))
            .fold(f64::INFINITY, f64::min)
    }
}
