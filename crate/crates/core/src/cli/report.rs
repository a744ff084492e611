//! Report structures and their text rendering.

use std::fmt::Write as _;

use serde::Serialize;

use super::problem::GridShape;
use crate::reduction::{Policy, Solution};
use crate::submodularity::{Certificate, CertificateStatus};

#[derive(Debug, Clone, Serialize)]
pub struct EdgeCertificate {
    pub edge: usize,
    pub i: usize,
    pub j: usize,
    pub term: [f64; 4],
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CertificateCounts {
    pub certified_all_p: usize,
    pub submodular_uncertified: usize,
    pub not_submodular: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionSummary {
    pub p: f64,
    pub labeling: String,
    pub powered_energy: f64,
    pub lp_value: f64,
    pub max_term: f64,
    pub flow_value: f64,
    pub offset: f64,
    pub wall_time_ms: f64,
}

impl SolutionSummary {
    pub fn new(s: &Solution, wall_time_ms: f64) -> Self {
        SolutionSummary {
            p: s.p,
            labeling: s.labeling.to_string(),
            powered_energy: s.powered_energy,
            lp_value: s.lp_value,
            max_term: s.max_term,
            flow_value: s.flow_value,
            offset: s.offset,
            wall_time_ms,
        }
    }
}

/// How the solutions of a sweep trade total cost against their largest term.
#[derive(Debug, Clone, Serialize)]
pub struct SweepTrend {
    /// Whether `max_term` never increases as `p` grows.
    pub max_term_non_increasing: bool,
    pub max_term_first: f64,
    pub max_term_last: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub p: f64,
    pub min_value: f64,
    pub minimizers: Vec<String>,
    pub minimax_value: f64,
    pub minimax_labelings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridShape>,
    pub certificate_counts: CertificateCounts,
    pub certificates: Vec<EdgeCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<Policy>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub solutions: Vec<SolutionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepTrend>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
}

impl Report {
    pub fn all_certified(&self) -> bool {
        self.certificate_counts.submodular_uncertified == 0
            && self.certificate_counts.not_submodular == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite data and strings")
            + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.certificate_counts;
        let _ = writeln!(
            out,
            "{}: {} vertices, {} edges",
            self.command, self.vertex_count, self.edge_count
        );
        let _ = writeln!(
            out,
            "certificates: {} CERTIFIED_ALL_P, {} SUBMODULAR_UNCERTIFIED, {} NOT_SUBMODULAR",
            c.certified_all_p, c.submodular_uncertified, c.not_submodular
        );
        for e in self
            .certificates
            .iter()
            .filter(|e| e.certificate.status != CertificateStatus::CertifiedAllP)
        {
            let [a, b, cc, d] = e.term;
            let _ = write!(
                out,
                "  edge {} ({}, {}) [{a}, {b}, {cc}, {d}] {}",
                e.edge, e.i, e.j, e.certificate.status
            );
            match e.certificate.witness {
                Some(p) => {
                    let _ = writeln!(out, " (violated at p = {p})");
                }
                None => out.push('\n'),
            }
        }
        if let Some(policy) = self.policy {
            let _ = writeln!(out, "policy: {policy}");
        }
        if !self.solutions.is_empty() {
            let _ = writeln!(
                out,
                "{:>8} {:>16} {:>14} {:>12} {:>14} {:>14} {:>10}  labeling",
                "p", "powered_energy", "lp_value", "max_term", "flow", "offset", "time_ms"
            );
            for s in &self.solutions {
                let _ = writeln!(
                    out,
                    "{:>8} {:>16.6e} {:>14.6} {:>12.6} {:>14.6e} {:>14.6e} {:>10.3}  {}",
                    s.p,
                    s.powered_energy,
                    s.lp_value,
                    s.max_term,
                    s.flow_value,
                    s.offset,
                    s.wall_time_ms,
                    s.labeling
                );
            }
            if let Some(grid) = self.grid {
                for s in &self.solutions {
                    let _ = writeln!(out, "p = {}:", s.p);
                    for row in s.labeling.as_bytes().chunks(grid.width.max(1)) {
                        let line: String = row
                            .iter()
                            .map(|&b| if b == b'1' { '#' } else { '.' })
                            .collect();
                        let _ = writeln!(out, "  {line}");
                    }
                }
            }
        }
        if let Some(t) = &self.sweep {
            let _ = writeln!(
                out,
                "max_term {} -> {} ({})",
                t.max_term_first,
                t.max_term_last,
                if t.max_term_non_increasing {
                    "non-increasing in p"
                } else {
                    "not monotone in p"
                }
            );
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(out, "oracle p = {}: min {}", o.p, o.min_value);
            for m in &o.minimizers {
                let _ = writeln!(out, "  {m}");
            }
            let _ = writeln!(out, "minimax value {}", o.minimax_value);
            for m in &o.minimax_labelings {
                let _ = writeln!(out, "  {m}");
            }
        }
        out
    }
}
