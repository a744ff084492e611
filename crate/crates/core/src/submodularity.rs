//! Submodularity tests for binary pairwise terms and their powers.
//!
//! A table `(a, b, c, d) = (φ(0,0), φ(0,1), φ(1,0), φ(1,1))` is submodular
//! when `a + d <= b + c`. Submodularity of `φ` does not carry over to `φ^p`
//! in general, but it does for every `p >= 1` when additionally
//! `max(a, d) <= max(b, c)`. [`certify_all_p`] applies that sufficient
//! condition; [`find_violation`] probes the remaining terms numerically.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::energy::{check_exponent, EnergyError, PairwiseTerm};

/// Additive slack used by every submodularity comparison, scaled by
/// `max(1, largest table value)`.
pub const SUBMODULAR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertificateStatus {
    /// Submodular and satisfies the max-condition: `φ^p` is submodular for all `p >= 1`.
    CertifiedAllP,
    /// Submodular at `p = 1`, but powers must be checked individually.
    SubmodularUncertified,
    NotSubmodular,
}

impl fmt::Display for CertificateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateStatus::CertifiedAllP => "CERTIFIED_ALL_P",
            CertificateStatus::SubmodularUncertified => "SUBMODULAR_UNCERTIFIED",
            CertificateStatus::NotSubmodular => "NOT_SUBMODULAR",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: CertificateStatus,
    /// Exponent at which an empirical scan found a violation.
    pub witness: Option<f64>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::CertifiedAllP
    }
}

/// Slack for comparing sums of entries of `t`.
pub fn tolerance_for(t: &PairwiseTerm) -> f64 {
    SUBMODULAR_TOLERANCE * t.max_value().max(1.0)
}

/// `b + c - a - d`, the total capacity a graph-cut construction puts between the two nodes.
pub fn submodularity_margin(t: &PairwiseTerm) -> f64 {
    (t.b() + t.c()) - (t.a() + t.d())
}

pub fn is_submodular(t: &PairwiseTerm) -> bool {
    t.a() + t.d() <= t.b() + t.c() + tolerance_for(t)
}

pub fn max_condition(t: &PairwiseTerm) -> bool {
    t.a().max(t.d()) <= t.c().max(t.b())
}

pub fn certify_all_p(t: &PairwiseTerm) -> Certificate {
    let status = if !is_submodular(t) {
        CertificateStatus::NotSubmodular
    } else if max_condition(t) {
        CertificateStatus::CertifiedAllP
    } else {
        CertificateStatus::SubmodularUncertified
    };
    Certificate {
        status,
        witness: None,
    }
}

/// Whether `t^p` is submodular, evaluated on the normalized table so that
/// large `p` stays in floating-point range.
pub fn is_submodular_at(t: &PairwiseTerm, p: f64) -> Result<bool, EnergyError> {
    check_exponent(p)?;
    Ok(is_submodular(&t.normalized().powered(p)))
}

/// Truth value of the implication
/// `a + b <= c + d && max(a, b) <= max(c, d)  =>  a^p + b^p <= c^p + d^p`.
///
/// Inputs are rescaled by their maximum before powering. The conclusion is
/// compared with a relative slack of [`SUBMODULAR_TOLERANCE`] to absorb
/// rounding in `powf`.
pub fn lemma_check(a: f64, b: f64, c: f64, d: f64, p: f64) -> bool {
    let hypotheses = a + b <= c + d && a.max(b) <= c.max(d);
    if !hypotheses {
        return true;
    }
    let m = a.max(b).max(c).max(d);
    if m <= 0.0 {
        return true;
    }
    let lhs = (a / m).powf(p) + (b / m).powf(p);
    let rhs = (c / m).powf(p) + (d / m).powf(p);
    lhs <= rhs + SUBMODULAR_TOLERANCE * rhs.max(1.0)
}

/// Smallest exponent in `p_grid` at which `t^p` fails to be submodular.
pub fn find_violation(t: &PairwiseTerm, p_grid: &[f64]) -> Result<Option<f64>, EnergyError> {
    for &p in p_grid {
        check_exponent(p)?;
    }
    let mut grid = p_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    for p in grid {
        if !is_submodular_at(t, p)? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Certificate with the witness filled from a grid scan when the term is not
/// certified for all exponents.
pub fn certify_with_scan(t: &PairwiseTerm, p_grid: &[f64]) -> Result<Certificate, EnergyError> {
    let mut cert = certify_all_p(t);
    if cert.status != CertificateStatus::CertifiedAllP {
        cert.witness = find_violation(t, p_grid)?;
    }
    Ok(cert)
}
