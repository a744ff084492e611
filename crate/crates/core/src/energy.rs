//! Binary labeling energies built from unary and pairwise terms.
//!
//! An [`EnergyFunction`] assigns a non-negative cost to every label of every
//! vertex and to every label pair of every edge. The l_p objective of a
//! labeling is the p-norm of the vector of all active term values; minimizing
//! it is equivalent to minimizing the sum of the terms raised to the power p,
//! which is what [`evaluate_powered`] computes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("labeling has {got} entries but the energy has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent p = {0} is outside the supported domain (finite, p >= 1)")]
    InvalidExponent(f64),
    #[error("term value {value} is invalid: values must be finite and non-negative")]
    InvalidValue { value: f64 },
    #[error("edge {index} ({i}, {j}) references a vertex >= vertex count {vertex_count}")]
    EdgeOutOfRange {
        index: usize,
        i: usize,
        j: usize,
        vertex_count: usize,
    },
    #[error("edge {index} is a self loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index} ({i}, {j}) duplicates edge {first}")]
    DuplicateEdge {
        index: usize,
        first: usize,
        i: usize,
        j: usize,
    },
    #[error("{what}: expected {expected} entries, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("label {0} is not binary")]
    InvalidLabel(u8),
    #[error("raising terms to p = {p} overflowed; normalize the energy first or use a smaller p")]
    NumericRange { p: f64 },
}

/// Checks that `p` is a finite exponent no smaller than one.
pub fn check_exponent(p: f64) -> Result<(), EnergyError> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(EnergyError::InvalidExponent(p))
    }
}

fn check_value(value: f64) -> Result<f64, EnergyError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(EnergyError::InvalidValue { value })
    }
}

#[inline]
fn pow(value: f64, p: f64) -> f64 {
    if p == 1.0 {
        value
    } else {
        value.powf(p)
    }
}

/// Undirected graph over `vertex_count` vertices. Edges keep their input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Topology {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, EnergyError> {
        let mut seen = std::collections::HashMap::with_capacity(edges.len());
        for (index, &(i, j)) in edges.iter().enumerate() {
            if i >= vertex_count || j >= vertex_count {
                return Err(EnergyError::EdgeOutOfRange {
                    index,
                    i,
                    j,
                    vertex_count,
                });
            }
            if i == j {
                return Err(EnergyError::SelfLoop { index, vertex: i });
            }
            if let Some(&first) = seen.get(&(i.min(j), i.max(j))) {
                return Err(EnergyError::DuplicateEdge { index, first, i, j });
            }
            seen.insert((i.min(j), i.max(j)), index);
        }
        Ok(Topology {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// Costs of assigning label 0 and label 1 to a single vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnaryTerm {
    cost0: f64,
    cost1: f64,
}

impl UnaryTerm {
    pub fn new(cost0: f64, cost1: f64) -> Result<Self, EnergyError> {
        Ok(UnaryTerm {
            cost0: check_value(cost0)?,
            cost1: check_value(cost1)?,
        })
    }

    pub fn cost0(&self) -> f64 {
        self.cost0
    }

    pub fn cost1(&self) -> f64 {
        self.cost1
    }

    pub fn cost(&self, label: u8) -> f64 {
        if label == 0 {
            self.cost0
        } else {
            self.cost1
        }
    }

    pub fn values(&self) -> [f64; 2] {
        [self.cost0, self.cost1]
    }
}

/// Cost table of an edge, indexed by the labels of its two endpoints.
///
/// `a = φ(0,0)`, `b = φ(0,1)`, `c = φ(1,0)`, `d = φ(1,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairwiseTerm {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl PairwiseTerm {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, EnergyError> {
        Ok(PairwiseTerm {
            a: check_value(a)?,
            b: check_value(b)?,
            c: check_value(c)?,
            d: check_value(d)?,
        })
    }

    /// Potts-style table: zero when the labels agree, `w` otherwise.
    pub fn potts(w: f64) -> Result<Self, EnergyError> {
        Self::new(0.0, w, w, 0.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `[φ(0,0), φ(0,1), φ(1,0), φ(1,1)]`
    pub fn values(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn cost(&self, xi: u8, xj: u8) -> f64 {
        match (xi, xj) {
            (0, 0) => self.a,
            (0, _) => self.b,
            (_, 0) => self.c,
            _ => self.d,
        }
    }

    pub fn max_value(&self) -> f64 {
        self.a.max(self.b).max(self.c).max(self.d)
    }

    /// The table with φ(0,1) and φ(1,0) exchanged.
    pub fn transposed(&self) -> Self {
        PairwiseTerm {
            a: self.a,
            b: self.c,
            c: self.b,
            d: self.d,
        }
    }

    /// Divides every entry by the largest one, leaving all-zero tables alone.
    pub fn normalized(&self) -> Self {
        let m = self.max_value();
        if m > 0.0 {
            PairwiseTerm {
                a: self.a / m,
                b: self.b / m,
                c: self.c / m,
                d: self.d / m,
            }
        } else {
            *self
        }
    }

    /// Entry-wise power. The result may be non-finite for large inputs.
    pub fn powered(&self, p: f64) -> Self {
        PairwiseTerm {
            a: pow(self.a, p),
            b: pow(self.b, p),
            c: pow(self.c, p),
            d: pow(self.d, p),
        }
    }

    pub fn scaled(&self, s: f64) -> Result<Self, EnergyError> {
        Self::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

/// Assignment of a binary label to every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling(Vec<u8>);

impl Labeling {
    pub fn new(labels: Vec<u8>) -> Result<Self, EnergyError> {
        if let Some(&bad) = labels.iter().find(|&&l| l > 1) {
            return Err(EnergyError::InvalidLabel(bad));
        }
        Ok(Labeling(labels))
    }

    pub fn zeros(n: usize) -> Self {
        Labeling(vec![0; n])
    }

    /// Labeling whose vertex `i` takes bit `i` of `mask`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Labeling((0..n).map(|i| ((mask >> i) & 1) as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.0
    }

    /// Renders the labeling row by row, `#` for label 1 and `.` for label 0.
    pub fn raster(&self, width: usize) -> String {
        let mut out = String::with_capacity(self.0.len() + self.0.len() / width.max(1));
        for row in self.0.chunks(width.max(1)) {
            out.extend(row.iter().map(|&l| if l == 1 { '#' } else { '.' }));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.0 {
            f.write_str(if l == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl serde::Serialize for Labeling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Labeling {
    type Err = EnergyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                other => Err(EnergyError::InvalidLabel(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Labeling)
    }
}

/// Sum of unary and pairwise terms over an undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyFunction {
    topology: Topology,
    unaries: Vec<UnaryTerm>,
    pairwise: Vec<PairwiseTerm>,
}

impl EnergyFunction {
    pub fn new(
        topology: Topology,
        unaries: Vec<UnaryTerm>,
        pairwise: Vec<PairwiseTerm>,
    ) -> Result<Self, EnergyError> {
        if unaries.len() != topology.vertex_count() {
            return Err(EnergyError::LengthMismatch {
                what: "unary terms",
                expected: topology.vertex_count(),
                got: unaries.len(),
            });
        }
        if pairwise.len() != topology.edge_count() {
            return Err(EnergyError::LengthMismatch {
                what: "pairwise terms",
                expected: topology.edge_count(),
                got: pairwise.len(),
            });
        }
        Ok(EnergyFunction {
            topology,
            unaries,
            pairwise,
        })
    }

    /// Builds an energy from raw tuples: `(cost0, cost1)` per vertex and
    /// `(i, j, [a, b, c, d])` per edge.
    pub fn from_parts(
        unaries: &[(f64, f64)],
        edges: &[(usize, usize, [f64; 4])],
    ) -> Result<Self, EnergyError> {
        let topology = Topology::new(
            unaries.len(),
            edges.iter().map(|&(i, j, _)| (i, j)).collect(),
        )?;
        let unaries = unaries
            .iter()
            .map(|&(c0, c1)| UnaryTerm::new(c0, c1))
            .collect::<Result<Vec<_>, _>>()?;
        let pairwise = edges
            .iter()
            .map(|&(_, _, [a, b, c, d])| PairwiseTerm::new(a, b, c, d))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(topology, unaries, pairwise)
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn vertex_count(&self) -> usize {
        self.topology.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.topology.edge_count()
    }

    pub fn unaries(&self) -> &[UnaryTerm] {
        &self.unaries
    }

    pub fn pairwise(&self) -> &[PairwiseTerm] {
        &self.pairwise
    }

    /// Iterates `(i, j, term)` in edge order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &PairwiseTerm)> + '_ {
        self.topology
            .edges()
            .iter()
            .zip(&self.pairwise)
            .map(|(&(i, j), t)| (i, j, t))
    }

    /// Largest value stored in any unary or pairwise table, 0 when there are none.
    pub fn max_value(&self) -> f64 {
        let unary = self
            .unaries
            .iter()
            .map(|u| u.cost0.max(u.cost1))
            .fold(0.0, f64::max);
        self.pairwise
            .iter()
            .map(PairwiseTerm::max_value)
            .fold(unary, f64::max)
    }

    /// Number of terms active under any labeling.
    pub fn term_count(&self) -> usize {
        self.vertex_count() + self.edge_count()
    }

    /// Applies `f` to every stored value, revalidating the results.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self, EnergyError> {
        let unaries = self
            .unaries
            .iter()
            .map(|u| UnaryTerm::new(f(u.cost0), f(u.cost1)))
            .collect::<Result<Vec<_>, _>>()?;
        let pairwise = self
            .pairwise
            .iter()
            .map(|t| PairwiseTerm::new(f(t.a), f(t.b), f(t.c), f(t.d)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EnergyFunction {
            topology: self.topology.clone(),
            unaries,
            pairwise,
        })
    }

    /// Every value multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self, EnergyError> {
        self.map_values(|v| v * s)
    }

    fn check_labeling(&self, x: &Labeling) -> Result<(), EnergyError> {
        if x.len() != self.vertex_count() {
            return Err(EnergyError::DimensionMismatch {
                expected: self.vertex_count(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Values of all active terms under `x`: unaries in vertex order, then
    /// pairwise terms in edge order.
    pub fn active_terms<'a>(&'a self, x: &'a Labeling) -> impl Iterator<Item = f64> + 'a {
        let unary = self.unaries.iter().zip(x.labels()).map(|(u, &l)| u.cost(l));
        let pairwise = self
            .edges()
            .map(move |(i, j, t)| t.cost(x.get(i), x.get(j)));
        unary.chain(pairwise)
    }
}

/// Sum of all active terms raised to the power `p`.
pub fn evaluate_powered(e: &EnergyFunction, x: &Labeling, p: f64) -> Result<f64, EnergyError> {
    check_exponent(p)?;
    e.check_labeling(x)?;
    Ok(e.active_terms(x).map(|v| pow(v, p)).sum())
}

/// The l_p norm of the vector of active term values.
pub fn lp_norm(e: &EnergyFunction, x: &Labeling, p: f64) -> Result<f64, EnergyError> {
    let powered = evaluate_powered(e, x, p)?;
    if p == 1.0 {
        Ok(powered)
    } else {
        Ok(powered.powf(1.0 / p))
    }
}

/// Largest active term value under `x` (0 for an energy without terms).
pub fn max_term(e: &EnergyFunction, x: &Labeling) -> Result<f64, EnergyError> {
    e.check_labeling(x)?;
    Ok(e.active_terms(x).fold(0.0, f64::max))
}

/// Replaces every stored value by its `p`-th power.
///
/// Fails with [`EnergyError::NumericRange`] rather than saturating when a
/// powered value is not finite.
pub fn power_transform(e: &EnergyFunction, p: f64) -> Result<EnergyFunction, EnergyError> {
    check_exponent(p)?;
    if p == 1.0 {
        return Ok(e.clone());
    }
    e.map_values(|v| v.powf(p))
        .map_err(|_| EnergyError::NumericRange { p })
}

/// Divides every value by the largest stored value.
///
/// Returns the scaled energy and the divisor. An energy whose values are all
/// zero is returned unchanged with scale 1.
pub fn normalize(e: &EnergyFunction) -> (EnergyFunction, f64) {
    let scale = e.max_value();
    if scale > 0.0 {
        let normalized = e
            .map_values(|v| (v / scale).min(1.0))
            .expect("dividing finite non-negative values by their positive maximum stays in range");
        (normalized, scale)
    } else {
        (e.clone(), 1.0)
    }
}
