//! Exhaustive ground truth for small instances and a seeded instance generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{
    check_exponent, EnergyError, EnergyFunction, Labeling, PairwiseTerm, Topology, UnaryTerm,
};
use crate::submodularity::{certify_all_p, is_submodular};

/// Largest vertex count the exhaustive scans accept.
pub const MAX_ORACLE_VERTICES: usize = 20;

/// Relative slack when collecting tied minimizers.
pub const ARGMIN_TOLERANCE: f64 = 1e-12;

/// Upper bound (exclusive) of generated term values.
pub const TERM_RANGE: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{0} vertices exceed the exhaustive oracle limit of {MAX_ORACLE_VERTICES}")]
    TooLarge(usize),
    #[error("powered energy overflowed at p = {0}")]
    Numeric(f64),
    #[error(transparent)]
    Energy(#[from] EnergyError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub min_value: f64,
    /// Every labeling within tolerance of `min_value`, in mask order.
    pub minimizers: Vec<Labeling>,
}

impl OracleResult {
    pub fn is_unique(&self) -> bool {
        self.minimizers.len() == 1
    }

    pub fn contains(&self, x: &Labeling) -> bool {
        self.minimizers.contains(x)
    }
}

fn check_size(e: &EnergyFunction) -> Result<usize, OracleError> {
    let n = e.vertex_count();
    if n > MAX_ORACLE_VERTICES {
        Err(OracleError::TooLarge(n))
    } else {
        Ok(n)
    }
}

/// Scores every labeling with `score(mask)` and collects the argmin set.
fn scan(n: usize, score: impl Fn(u64) -> f64) -> OracleResult {
    let values: Vec<f64> = (0..1u64 << n).map(&score).collect();
    let min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
    let limit = min_value + ARGMIN_TOLERANCE * min_value.abs().max(1.0);
    let minimizers = values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v <= limit)
        .map(|(mask, _)| Labeling::from_mask(n, mask as u64))
        .collect();
    OracleResult {
        min_value,
        minimizers,
    }
}

#[inline]
fn bit(mask: u64, i: usize) -> usize {
    ((mask >> i) & 1) as usize
}

/// Powered tables flattened for the scan: `[cost0, cost1]` per vertex and
/// `[a, b, c, d]` per edge, so a table entry is `table[2 * xi + xj]`.
type Flat = (Vec<[f64; 2]>, Vec<(usize, usize, [f64; 4])>);

fn flatten(e: &EnergyFunction, p: f64) -> Flat {
    let pw = |v: f64| if p == 1.0 { v } else { v.powf(p) };
    let unary = e
        .unaries()
        .iter()
        .map(|u| [pw(u.cost0()), pw(u.cost1())])
        .collect();
    let pairwise = e
        .edges()
        .map(|(i, j, t)| (i, j, t.values().map(pw)))
        .collect();
    (unary, pairwise)
}

/// Exhaustive minimum of the sum of `p`-th powers of all terms.
pub fn brute_force_min(e: &EnergyFunction, p: f64) -> Result<OracleResult, OracleError> {
    check_exponent(p)?;
    let n = check_size(e)?;
    let (unary, pairwise) = flatten(e, p);
    // Same summation order as `evaluate_powered`, so p = 1 agrees bit for bit.
    let result = scan(n, |mask| {
        let u = unary
            .iter()
            .enumerate()
            .fold(0.0, |acc, (i, u)| acc + u[bit(mask, i)]);
        pairwise.iter().fold(u, |acc, &(i, j, t)| {
            acc + t[2 * bit(mask, i) + bit(mask, j)]
        })
    });
    if !result.min_value.is_finite() {
        return Err(OracleError::Numeric(p));
    }
    Ok(result)
}

/// Labelings minimizing the largest active term.
pub fn brute_force_minimax(e: &EnergyFunction) -> Result<OracleResult, OracleError> {
    let n = check_size(e)?;
    let (unary, pairwise) = flatten(e, 1.0);
    Ok(scan(n, |mask| {
        let u = unary
            .iter()
            .enumerate()
            .map(|(i, u)| u[bit(mask, i)])
            .fold(0.0, f64::max);
        pairwise
            .iter()
            .map(|&(i, j, t)| t[2 * bit(mask, i) + bit(mask, j)])
            .fold(u, f64::max)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TermPolicy {
    Any,
    Submodular,
    Certified,
}

impl TermPolicy {
    fn accepts(self, t: &PairwiseTerm) -> bool {
        match self {
            TermPolicy::Any => true,
            TermPolicy::Submodular => is_submodular(t),
            TermPolicy::Certified => certify_all_p(t).is_certified(),
        }
    }
}

/// Pairwise table drawn uniformly from `[0, 10)^4` until `policy` accepts it.
pub fn random_term<R: Rng>(rng: &mut R, policy: TermPolicy) -> PairwiseTerm {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..TERM_RANGE));
        let t = PairwiseTerm::new(v[0], v[1], v[2], v[3]).expect("sampled values are in range");
        if policy.accepts(&t) {
            return t;
        }
    }
}

/// Seeded random instance over `n` vertices.
///
/// Draw order from `ChaCha8Rng::seed_from_u64(seed)`:
/// 1. spanning tree: for `v` in `1..n`, parent `u = gen_range(0..v)`, then a
///    coin `gen_bool(0.5)` choosing orientation `(u, v)` or `(v, u)`;
/// 2. extra edges until `max(n - 1, floor(edge_factor * n))` edges exist
///    (capped at `n (n - 1) / 2`): candidate pairs not yet present are
///    shuffled with `SliceRandom::shuffle` and taken in order;
/// 3. unaries: `(gen_range(0.0..10.0), gen_range(0.0..10.0))` per vertex;
/// 4. pairwise tables per edge via [`random_term`].
pub fn random_instance(
    n: usize,
    edge_factor: f64,
    policy: TermPolicy,
    seed: u64,
) -> EnergyFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut present = std::collections::HashSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
        present.insert((u, v));
    }
    let max_edges = n * n.saturating_sub(1) / 2;
    let target = ((edge_factor.max(0.0) * n as f64).floor() as usize)
        .max(n.saturating_sub(1))
        .min(max_edges);
    if edges.len() < target {
        let mut candidates: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|pair| !present.contains(pair))
            .collect();
        candidates.shuffle(&mut rng);
        edges.extend(candidates.into_iter().take(target - edges.len()));
    }
    let unaries = (0..n)
        .map(|_| {
            let c0 = rng.gen_range(0.0..TERM_RANGE);
            let c1 = rng.gen_range(0.0..TERM_RANGE);
            UnaryTerm::new(c0, c1).expect("sampled values are in range")
        })
        .collect();
    let pairwise = (0..edges.len())
        .map(|_| random_term(&mut rng, policy))
        .collect();
    let topology = Topology::new(n, edges).expect("generator emits a simple graph");
    EnergyFunction::new(topology, unaries, pairwise).expect("lengths match by construction")
}
