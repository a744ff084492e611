//! Exact minimization of l_p-norm binary labeling energies with s-t minimum cuts.
//!
//! A pairwise term that is submodular and whose larger "agreeing" entry
//! `max(φ(0,0), φ(1,1))` does not exceed its larger "disagreeing" entry
//! `max(φ(0,1), φ(1,0))` stays submodular after raising it to any power
//! `p >= 1`. Energies built from such terms can therefore be minimized in
//! every l_p norm by powering the terms and computing a single minimum cut.
//!
//! - [`energy`]: energies, labelings, powered evaluation.
//! - [`submodularity`]: per-term tests and the all-p certificate.
//! - [`mincut`]: max-flow / min-cut solver.
//! - [`reduction`]: energy to flow network, and the end-to-end [`solve`].
//! - [`oracle`]: exhaustive minimizers and the seeded instance generator.
//! - [`cli`]: problem files, reports and the `lpcut` command line.

pub mod cli;
pub mod energy;
pub mod mincut;
pub mod oracle;
pub mod reduction;
pub mod submodularity;

pub use energy::{EnergyFunction, Labeling, PairwiseTerm, Topology, UnaryTerm};
pub use reduction::{solve, Policy, Solution, SolveError};
pub use submodularity::{Certificate, CertificateStatus};
