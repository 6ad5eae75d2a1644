//! The edge-count histogram invariant, computed by exhaustive subset sweep
//! or through the simulated phase-estimation circuit, plus the spectral
//! invariant it is compared against.

mod charpoly;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{build_qpe, CircuitError, QpeOptions};
use crate::graph::{Graph, Permutation, VertexSubset, MAX_VERTICES};
use crate::simulator::{run, SimConfig, SimError};

pub use charpoly::{char_poly, CharPoly, CHAR_POLY_MAX_VERTICES};

/// Largest graph accepted by [`prop1_check`].
pub const PROP1_MAX_VERTICES: usize = 16;
/// `|p(x)·2^n - round(p(x)·2^n)|` above this means the pipeline is broken.
pub const ROUNDING_GUARD: f64 = 1e-6;
/// Allowed drift of the final state norm.
pub const NORM_GUARD: f64 = 1e-9;

const SWEEP_BLOCK: u32 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("graph has {n} vertices, the limit is {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("vertex counts differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("characteristic polynomial of a {0}-vertex graph overflows 128-bit integers")]
    Overflow(usize),
    #[error("non-integral trace quotient in characteristic polynomial")]
    InexactDivision,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Simulator(#[from] SimError),
    #[error("outcome {outcome}: p·2^n = {scaled} is not an integer")]
    NonIntegralCount { outcome: usize, scaled: f64 },
    #[error("outcome {outcome} exceeds the edge count but has probability {probability}")]
    Leak { outcome: usize, probability: f64 },
    #[error("state norm drifted to {0}")]
    NormDrift(f64),
}

impl InvariantError {
    /// Errors that indicate a bug in the pipeline rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            InvariantError::NonIntegralCount { .. }
                | InvariantError::Leak { .. }
                | InvariantError::NormDrift(_)
                | InvariantError::InexactDivision
        )
    }

    /// Errors raised because an input exceeded a size limit.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            InvariantError::TooManyVertices { .. }
                | InvariantError::Overflow(_)
                | InvariantError::Circuit(CircuitError::TooWide { .. })
                | InvariantError::Simulator(SimError::TooManyQubits { .. })
        )
    }
}

/// Number of vertex subsets inducing exactly `k` edges, for `k = 0..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeHistogram {
    n: usize,
    m: usize,
    counts: Vec<u64>,
}

impl EdgeHistogram {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `counts[k] / 2^n`.
    pub fn probabilities(&self) -> Vec<f64> {
        let total = (1u64 << self.n) as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let counts: Vec<String> = self.counts.iter().map(u64::to_string).collect();
        Fingerprint(format!("n={};m={};h={}", self.n, self.m, counts.join(",")))
    }
}

/// Canonical text form `n=…;m=…;h=c0,c1,…,cm` of a histogram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(String);

impl Fingerprint {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Result of one pass over all `2^n` vertex subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSweep {
    pub histogram: EdgeHistogram,
    /// Largest edgeless subset; among equals, the smallest mask.
    pub max_independent: VertexSubset,
}

#[derive(Clone)]
struct BlockTally {
    counts: Vec<u64>,
    best: (u32, u32),
}

impl BlockTally {
    fn better(a: (u32, u32), b: (u32, u32)) -> (u32, u32) {
        // more vertices wins, then the smaller mask
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    }
}

/// Sweeps every subset, tallying induced edge counts and tracking the
/// largest independent set. Blocks of masks are processed in parallel and
/// merged in block order, so the result does not depend on thread count.
pub fn subset_sweep(g: &Graph) -> Result<SubsetSweep, InvariantError> {
    let n = g.vertex_count();
    if n > MAX_VERTICES {
        return Err(InvariantError::TooManyVertices {
            n,
            cap: MAX_VERTICES,
        });
    }
    let m = g.edge_count();
    let total: u32 = 1 << n;
    let blocks = total.div_ceil(SWEEP_BLOCK);
    let tallies: Vec<BlockTally> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * SWEEP_BLOCK;
            let end = (start + SWEEP_BLOCK).min(total);
            let mut tally = BlockTally {
                counts: vec![0; m + 1],
                best: (0, 0),
            };
            for mask in start..end {
                let k = g.induced_edges_in_mask(mask);
                tally.counts[k] += 1;
                if k == 0 {
                    tally.best = BlockTally::better(tally.best, (mask.count_ones(), mask));
                }
            }
            tally
        })
        .collect();
    let mut counts = vec![0u64; m + 1];
    let mut best = (0, 0);
    for t in tallies {
        for (c, v) in counts.iter_mut().zip(t.counts) {
            *c += v;
        }
        best = BlockTally::better(best, t.best);
    }
    Ok(SubsetSweep {
        histogram: EdgeHistogram { n, m, counts },
        max_independent: VertexSubset::new(best.1, n).expect("mask within vertex range"),
    })
}

/// Brute-force histogram over all `2^n` subsets.
pub fn classical_histogram(g: &Graph) -> Result<EdgeHistogram, InvariantError> {
    Ok(subset_sweep(g)?.histogram)
}

/// Size and witness of a maximum independent set.
pub fn max_independent_set(g: &Graph) -> Result<(usize, VertexSubset), InvariantError> {
    let s = subset_sweep(g)?.max_independent;
    Ok((s.len(), s))
}

pub fn fingerprint(g: &Graph) -> Result<Fingerprint, InvariantError> {
    Ok(classical_histogram(g)?.fingerprint())
}

/// Whether two graphs share vertex count, edge count and histogram.
pub fn invariant_equal(g1: &Graph, g2: &Graph) -> Result<bool, InvariantError> {
    if g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    Ok(classical_histogram(g1)? == classical_histogram(g2)?)
}

/// Whether `f` maps every subset of `g1` to a subset of `g2` inducing the
/// same number of edges.
pub fn prop1_check(g1: &Graph, g2: &Graph, f: &Permutation) -> Result<bool, InvariantError> {
    let n = g1.vertex_count();
    if g2.vertex_count() != n {
        return Err(InvariantError::SizeMismatch(n, g2.vertex_count()));
    }
    if f.len() != n {
        return Err(InvariantError::SizeMismatch(n, f.len()));
    }
    if n > PROP1_MAX_VERTICES {
        return Err(InvariantError::TooManyVertices {
            n,
            cap: PROP1_MAX_VERTICES,
        });
    }
    Ok((0..1u32 << n)
        .all(|mask| g1.induced_edges_in_mask(mask) == g2.induced_edges_in_mask(f.apply_mask(mask))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Source {
    #[serde(rename = "classical")]
    Classical,
    #[serde(rename = "qpe-exact")]
    QpeExact,
    #[serde(rename = "qpe-shots")]
    QpeShots,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Classical => "classical",
            Source::QpeExact => "qpe-exact",
            Source::QpeShots => "qpe-shots",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantumMode {
    Exact,
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QuantumOptions {
    pub fuse: bool,
    pub sim: SimConfig,
}

/// The invariant as reported to users: exact counts when known, and the
/// outcome probabilities of the estimation register for `k = 0..=m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantReport {
    pub n: usize,
    pub m: usize,
    pub counts: Option<Vec<u64>>,
    pub probabilities: Vec<f64>,
    pub source: Source,
}

impl InvariantReport {
    pub fn classical(h: &EdgeHistogram) -> Self {
        InvariantReport {
            n: h.n,
            m: h.m,
            counts: Some(h.counts.clone()),
            probabilities: h.probabilities(),
            source: Source::Classical,
        }
    }

    pub fn histogram(&self) -> Option<EdgeHistogram> {
        self.counts.as_ref().map(|c| EdgeHistogram {
            n: self.n,
            m: self.m,
            counts: c.clone(),
        })
    }
}

/// Runs the phase-estimation circuit for `g` and reads the estimation
/// register.
///
/// In exact mode each probability is scaled by `2^n` and must land within
/// [`ROUNDING_GUARD`] of an integer; outcomes above `m` must carry no
/// weight. Edgeless graphs skip the circuit and return `[2^n]`.
pub fn quantum_histogram(
    g: &Graph,
    mode: QuantumMode,
    opts: QuantumOptions,
) -> Result<InvariantReport, InvariantError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let source = match mode {
        QuantumMode::Exact => Source::QpeExact,
        QuantumMode::Shots { .. } => Source::QpeShots,
    };
    if m == 0 {
        return Ok(InvariantReport {
            n,
            m,
            counts: Some(vec![1u64 << n]),
            probabilities: vec![1.0],
            source,
        });
    }
    let circuit = build_qpe(
        g,
        QpeOptions {
            fuse: opts.fuse,
            max_width: opts.sim.max_qubits,
        },
    )?;
    let state = run(&circuit, opts.sim)?;
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_GUARD {
        return Err(InvariantError::NormDrift(norm));
    }
    let marginal = state.marginal(circuit.measured())?;

    match mode {
        QuantumMode::Exact => {
            let scale = (1u64 << n) as f64;
            let mut counts = Vec::with_capacity(m + 1);
            for (outcome, &p) in marginal.probs.iter().enumerate() {
                let scaled = p * scale;
                let rounded = scaled.round();
                if (scaled - rounded).abs() >= ROUNDING_GUARD {
                    return Err(InvariantError::NonIntegralCount { outcome, scaled });
                }
                if outcome > m {
                    if rounded != 0.0 {
                        return Err(InvariantError::Leak {
                            outcome,
                            probability: p,
                        });
                    }
                } else {
                    counts.push(rounded as u64);
                }
            }
            Ok(InvariantReport {
                n,
                m,
                counts: Some(counts),
                probabilities: marginal.probs[..=m].to_vec(),
                source,
            })
        }
        QuantumMode::Shots { shots, seed } => {
            let result = marginal.sample(shots, seed)?;
            if let Some((&outcome, _)) = result.counts.range(m as u64 + 1..).next() {
                return Err(InvariantError::Leak {
                    outcome: outcome as usize,
                    probability: result.frequency(outcome),
                });
            }
            Ok(InvariantReport {
                n,
                m,
                counts: None,
                probabilities: (0..=m as u64).map(|x| result.frequency(x)).collect(),
                source,
            })
        }
    }
}
