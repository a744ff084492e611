//! Graph-cut construction for submodular binary energies and the l_p solve
//! pipeline built on top of it.
//!
//! Vertex `i` becomes network node `i`. A node left on the source side of
//! the cut takes label 0; a node on the sink side takes label 1.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{
    self, check_exponent, normalize, power_transform, EnergyError, EnergyFunction, Labeling,
};
use crate::mincut::{Endpoint, FlowNetwork, NodeId, Side};
use crate::submodularity::{
    certify_all_p, is_submodular_at, submodularity_margin, tolerance_for, Certificate,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Policy {
    #[serde(rename = "certified")]
    /// Every pairwise term must satisfy both submodularity and the max-condition.
    #[default]
    RequireCertified,
    #[serde(rename = "per-p")]
    /// Terms only need `φ^p` to be submodular for the requested `p`.
    AllowPerPCheck,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::RequireCertified => "certified",
            Policy::AllowPerPCheck => "per-p",
        })
    }
}

/// A pairwise term that blocked a solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffendingEdge {
    pub edge: usize,
    pub i: usize,
    pub j: usize,
    pub term: [f64; 4],
    pub certificate: Certificate,
}

impl fmt::Display for OffendingEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.term;
        write!(
            f,
            "edge {} ({}, {}) table ({a}, {b}, {c}, {d}): {}",
            self.edge, self.i, self.j, self.certificate.status
        )
    }
}

fn list(edges: &[OffendingEdge]) -> String {
    edges
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("edge {edge} ({i}, {j}) is not submodular: b + c - a - d = {margin}")]
    NotSubmodular {
        edge: usize,
        i: usize,
        j: usize,
        margin: f64,
    },
    #[error("{} pairwise term(s) rejected under policy {policy} at p = {p}: {}", offending.len(), list(offending))]
    Certification {
        policy: Policy,
        p: f64,
        offending: Vec<OffendingEdge>,
    },
    #[error("numeric overflow at p = {p}: {detail}; try a smaller p")]
    Numeric { p: f64, detail: String },
    #[error(transparent)]
    Energy(#[from] EnergyError),
}

/// Flow network whose cut capacities, plus `offset`, reproduce the energy.
#[derive(Debug, Clone)]
pub struct NetworkBuild {
    pub network: FlowNetwork,
    pub offset: f64,
}

impl NetworkBuild {
    /// Cut capacity of the bipartition induced by `x` (label 0 on the source side).
    pub fn cut_capacity(&self, x: &Labeling) -> f64 {
        let sides: Vec<bool> = x.labels().iter().map(|&l| l == 0).collect();
        self.network.cut_capacity(&sides)
    }
}

/// Builds the network for `e` taken at face value (no powering).
///
/// Each table first gives its row minima to `i` (`min(A, B)` for label 0,
/// `min(C, D)` for label 1) and then the column minima of what is left to
/// `j`. For a submodular table the remainder is zero except at `(0, 1)` and
/// `(1, 0)`, which become the arcs `i -> j` and `j -> i`. Every piece is
/// non-negative, so tiny powered terms are never computed as differences of
/// large ones. Unary pairs are then shifted by their minimum into `offset`.
pub fn build_network(e: &EnergyFunction) -> Result<NetworkBuild, SolveError> {
    let n = e.vertex_count();
    let mut network = FlowNetwork::with_nodes(n);
    let mut cost0: Vec<f64> = e.unaries().iter().map(|u| u.cost0()).collect();
    let mut cost1: Vec<f64> = e.unaries().iter().map(|u| u.cost1()).collect();

    for (edge, (i, j, t)) in e.edges().enumerate() {
        let margin = submodularity_margin(t);
        if margin < -tolerance_for(t) {
            return Err(SolveError::NotSubmodular { edge, i, j, margin });
        }
        let [a, b, c, d] = t.values();
        let (i0, i1) = (a.min(b), c.min(d));
        let (a, b, c, d) = (a - i0, b - i0, c - i1, d - i1);
        let (j0, j1) = (a.min(c), b.min(d));
        cost0[i] += i0;
        cost1[i] += i1;
        cost0[j] += j0;
        cost1[j] += j1;
        // Clamping absorbs tolerated near-ties, where the leftover at (0, 0)
        // or (1, 1) is within rounding of zero.
        let forward = (b - j1).max(0.0);
        let backward = (c - j0).max(0.0);
        if forward > 0.0 || backward > 0.0 {
            network
                .add_edge(NodeId(i), NodeId(j), forward, backward)
                .expect("validated topology yields valid n-links");
        }
    }

    let mut offset = 0.0;
    for (i, (&u0, &u1)) in cost0.iter().zip(&cost1).enumerate() {
        let m = u0.min(u1);
        offset += m;
        if u1 - m > 0.0 {
            network
                .add_edge(Endpoint::Source, NodeId(i), u1 - m, 0.0)
                .expect("shifted capacity is finite and non-negative");
        }
        if u0 - m > 0.0 {
            network
                .add_edge(NodeId(i), Endpoint::Sink, u0 - m, 0.0)
                .expect("shifted capacity is finite and non-negative");
        }
    }

    Ok(NetworkBuild { network, offset })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub labeling: Labeling,
    /// Sum of powered terms on the original, unnormalized energy.
    pub powered_energy: f64,
    /// `powered_energy^(1/p)`.
    pub lp_value: f64,
    pub max_term: f64,
    /// Max-flow value on the normalized, powered network.
    pub flow_value: f64,
    pub offset: f64,
    /// Divisor applied by normalization before powering.
    pub scale: f64,
    pub p: f64,
}

/// Rejected edges under `policy`, empty when the energy may be solved.
pub fn offending_edges(
    e: &EnergyFunction,
    p: f64,
    policy: Policy,
) -> Result<Vec<OffendingEdge>, EnergyError> {
    check_exponent(p)?;
    let mut offending = Vec::new();
    for (edge, (i, j, t)) in e.edges().enumerate() {
        let certificate = certify_all_p(t);
        let ok = match policy {
            Policy::RequireCertified => certificate.is_certified(),
            Policy::AllowPerPCheck => is_submodular_at(t, p)?,
        };
        if !ok {
            offending.push(OffendingEdge {
                edge,
                i,
                j,
                term: t.values(),
                certificate,
            });
        }
    }
    Ok(offending)
}

fn labeling_from_cut(side: &[Side]) -> Labeling {
    Labeling::new(
        side.iter()
            .map(|s| match s {
                Side::SourceSide => 0,
                Side::SinkSide => 1,
            })
            .collect(),
    )
    .expect("sides map to binary labels")
}

/// Minimizes the sum of `p`-th powers of all terms of `e` with one min-cut.
///
/// Terms are checked against `policy`, then the energy is normalized,
/// powered, and reduced to a flow network. The reported energies are
/// evaluated on the original terms.
pub fn solve(e: &EnergyFunction, p: f64, policy: Policy) -> Result<Solution, SolveError> {
    check_exponent(p)?;
    let offending = offending_edges(e, p, policy)?;
    if !offending.is_empty() {
        return Err(SolveError::Certification {
            policy,
            p,
            offending,
        });
    }

    let (normalized, scale) = normalize(e);
    let powered = power_transform(&normalized, p).map_err(|err| SolveError::Numeric {
        p,
        detail: err.to_string(),
    })?;
    let NetworkBuild {
        mut network,
        offset,
    } = build_network(&powered)?;
    let cut = network.max_flow();
    let labeling = labeling_from_cut(&cut.side);

    let powered_energy = energy::evaluate_powered(e, &labeling, p)?;
    if !powered_energy.is_finite() {
        return Err(SolveError::Numeric {
            p,
            detail: "powered energy of the original terms is not finite".into(),
        });
    }
    let lp_value = energy::lp_norm(e, &labeling, p)?;
    let max_term = energy::max_term(e, &labeling)?;
    Ok(Solution {
        labeling,
        powered_energy,
        lp_value,
        max_term,
        flow_value: cut.flow_value,
        offset,
        scale,
        p,
    })
}
