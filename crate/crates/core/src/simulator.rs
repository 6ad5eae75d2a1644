//! Dense statevector simulation.
//!
//! Qubit `i` is bit `i` of the amplitude index. Measurement is never
//! simulated by collapse: [`Statevector::marginal`] gives exact register
//! distributions and [`Statevector::sample`] draws seeded shots from them.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};

/// Hard ceiling on simulated qubits (2^28 amplitudes, 4 GiB).
pub const MAX_QUBITS: usize = 28;
/// Default ceiling; raise with [`SimConfig::max_qubits`].
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Probabilities below this are reported as exactly zero.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// States at least this large are updated in parallel.
const PARALLEL_MIN_AMPS: usize = 1 << 14;
/// Fixed block size for deterministic parallel reductions.
const REDUCE_BLOCK: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("{qubits} qubits requested, the limit is {cap}")]
    TooManyQubits { qubits: usize, cap: usize },
    #[error("a state needs at least one qubit")]
    NoQubits,
    #[error("qubit {qubit} out of range for a {qubits}-qubit state")]
    BadQubit { qubit: usize, qubits: usize },
    #[error("qubit {0} listed twice")]
    RepeatedQubit(usize),
    #[error("amplitude {index} has phase {phase} rad, not a multiple of {theta} rad")]
    PhaseMismatch {
        index: usize,
        phase: f64,
        theta: f64,
    },
    #[error("shot count must be positive")]
    NoShots,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub max_qubits: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl SimConfig {
    fn cap(&self) -> usize {
        self.max_qubits.min(MAX_QUBITS)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |0…0⟩ on `qubits` qubits.
    pub fn new(qubits: usize, config: SimConfig) -> Result<Self, SimError> {
        if qubits == 0 {
            return Err(SimError::NoQubits);
        }
        if qubits > config.cap() {
            return Err(SimError::TooManyQubits {
                qubits,
                cap: config.cap(),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { qubits, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        if amps.len() < 2 || !amps.len().is_power_of_two() {
            return Err(SimError::NoQubits);
        }
        let qubits = amps.len().trailing_zeros() as usize;
        if qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits {
                qubits,
                cap: MAX_QUBITS,
            });
        }
        Ok(Statevector { qubits, amps })
    }

    /// The computational basis state `index`.
    pub fn basis(qubits: usize, index: usize, config: SimConfig) -> Result<Self, SimError> {
        let mut s = Statevector::new(qubits, config)?;
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps
            .par_chunks(REDUCE_BLOCK)
            .map(|c| c.iter().map(Complex64::norm_sqr).sum::<f64>())
            .collect::<Vec<_>>()
            .into_iter()
            .sum()
    }

    fn check_qubit(&self, q: usize) -> Result<(), SimError> {
        if q >= self.qubits {
            Err(SimError::BadQubit {
                qubit: q,
                qubits: self.qubits,
            })
        } else {
            Ok(())
        }
    }

    fn check_distinct(&self, qs: &[usize]) -> Result<(), SimError> {
        for (k, &q) in qs.iter().enumerate() {
            self.check_qubit(q)?;
            if qs[..k].contains(&q) {
                return Err(SimError::RepeatedQubit(q));
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        self.check_distinct(&gate.qubits())?;
        match *gate {
            Gate::H(q) => self.hadamard(q),
            Gate::P(q, p) => self.phase_on_mask(1 << q, p.radians()),
            Gate::CP(a, b, p) => self.phase_on_mask(1 << a | 1 << b, p.radians()),
            Gate::CCP(a, b, c, p) => self.phase_on_mask(1 << a | 1 << b | 1 << c, p.radians()),
            Gate::Swap(a, b) => self.swap(a, b),
            Gate::CX(c, t) => self.cx(c, t),
        }
        Ok(())
    }

    fn hadamard(&mut self, q: usize) {
        let stride = 1usize << q;
        let mix = |a: &mut Complex64, b: &mut Complex64| {
            let (x, y) = (*a, *b);
            *a = (x + y) * FRAC_1_SQRT_2;
            *b = (x - y) * FRAC_1_SQRT_2;
        };
        if self.amps.len() >= PARALLEL_MIN_AMPS {
            self.amps.par_chunks_mut(2 * stride).for_each(|block| {
                let (lo, hi) = block.split_at_mut(stride);
                lo.par_iter_mut()
                    .zip(hi.par_iter_mut())
                    .with_min_len(1024)
                    .for_each(|(a, b)| mix(a, b));
            });
        } else {
            for block in self.amps.chunks_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                lo.iter_mut()
                    .zip(hi.iter_mut())
                    .for_each(|(a, b)| mix(a, b));
            }
        }
    }

    /// Multiplies every amplitude whose index has all `mask` bits set.
    fn phase_on_mask(&mut self, mask: usize, radians: f64) {
        if radians == 0.0 {
            return;
        }
        let factor = Complex64::from_polar(1.0, radians);
        let step = |(i, a): (usize, &mut Complex64)| {
            if i & mask == mask {
                *a *= factor;
            }
        };
        if self.amps.len() >= PARALLEL_MIN_AMPS {
            self.amps
                .par_iter_mut()
                .enumerate()
                .with_min_len(4096)
                .for_each(step);
        } else {
            self.amps.iter_mut().enumerate().for_each(step);
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        let (ba, bb) = (1usize << a, 1usize << b);
        for i in 0..self.amps.len() {
            if i & ba != 0 && i & bb == 0 {
                self.amps.swap(i, i ^ ba ^ bb);
            }
        }
    }

    fn cx(&mut self, control: usize, target: usize) {
        let (bc, bt) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & bc != 0 && i & bt == 0 {
                self.amps.swap(i, i | bt);
            }
        }
    }

    /// Exact outcome distribution of `register`; bit `k` of an outcome is
    /// qubit `register[k]`.
    pub fn marginal(&self, register: &[usize]) -> Result<MarginalDistribution, SimError> {
        self.check_distinct(register)?;
        let outcomes = 1usize << register.len();
        let partials: Vec<Vec<f64>> = self
            .amps
            .par_chunks(REDUCE_BLOCK)
            .enumerate()
            .map(|(block, chunk)| {
                let mut acc = vec![0.0; outcomes];
                let base = block * REDUCE_BLOCK;
                for (off, a) in chunk.iter().enumerate() {
                    let p = a.norm_sqr();
                    if p == 0.0 {
                        continue;
                    }
                    let index = base + off;
                    let x = register
                        .iter()
                        .enumerate()
                        .fold(0usize, |x, (k, &q)| x | (index >> q & 1) << k);
                    acc[x] += p;
                }
                acc
            })
            .collect();
        let mut probs = vec![0.0; outcomes];
        for part in partials {
            for (p, v) in probs.iter_mut().zip(part) {
                *p += v;
            }
        }
        for p in &mut probs {
            if *p < PROBABILITY_FLOOR {
                *p = 0.0;
            }
        }
        Ok(MarginalDistribution {
            register: register.to_vec(),
            probs,
        })
    }

    /// Shots drawn from the marginal of `register`.
    pub fn sample(
        &self,
        register: &[usize],
        shots: u64,
        seed: u64,
    ) -> Result<ShotResult, SimError> {
        self.marginal(register)?.sample(shots, seed)
    }

    /// For each non-negligible amplitude, the integer `k` with
    /// `arg(amp) ≈ k·theta` (mod 2π); `None` for zero amplitudes.
    pub fn phase_table(&self, theta: f64) -> Result<Vec<Option<u64>>, SimError> {
        const TOLERANCE: f64 = 1e-6;
        self.amps
            .iter()
            .enumerate()
            .map(|(index, a)| {
                if a.norm() < 1e-9 {
                    return Ok(None);
                }
                let phase = a.arg().rem_euclid(TAU);
                let k = (phase / theta).round();
                if (phase - k * theta).abs() > TOLERANCE {
                    return Err(SimError::PhaseMismatch {
                        index,
                        phase,
                        theta,
                    });
                }
                // a phase just below 2π rounds to a full turn
                let turn = (TAU / theta).round();
                let k = if (TAU - theta * turn).abs() < TOLERANCE && k == turn {
                    0.0
                } else {
                    k
                };
                Ok(Some(k as u64))
            })
            .collect()
    }

    /// Nonzero amplitudes as `(index, re, im)` records.
    pub fn dump(&self) -> StateDump {
        StateDump {
            qubits: self.qubits,
            amplitudes: self
                .amps
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm_sqr() > 0.0)
                .map(|(index, a)| AmplitudeRecord {
                    index,
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StateDump {
    pub qubits: usize,
    pub amplitudes: Vec<AmplitudeRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplitudeRecord {
    pub index: usize,
    pub re: f64,
    pub im: f64,
}

/// Initialises |0…0⟩ and applies every gate of `c` in order.
pub fn run(c: &Circuit, config: SimConfig) -> Result<Statevector, SimError> {
    let mut s = Statevector::new(c.width(), config)?;
    for g in c.gates() {
        s.apply(g)?;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalDistribution {
    pub register: Vec<usize>,
    pub probs: Vec<f64>,
}

impl MarginalDistribution {
    /// Draws `shots` outcomes by inverse-CDF sampling.
    ///
    /// Uniform variates come from ChaCha8 (`rand_chacha::ChaCha8Rng`)
    /// seeded through `SeedableRng::seed_from_u64`, converted to `f64` in
    /// `[0, 1)` with rand's standard 53-bit conversion. Both are
    /// platform-independent, so a `(seed, shots)` pair always yields the same
    /// counts.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<ShotResult, SimError> {
        if shots == 0 {
            return Err(SimError::NoShots);
        }
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut total = 0.0;
        for &p in &self.probs {
            total += p;
            cdf.push(total);
        }
        let last = self
            .probs
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(self.probs.len() - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tallies = vec![0u64; self.probs.len()];
        for _ in 0..shots {
            let u = rng.random::<f64>() * total;
            let x = cdf.partition_point(|&c| c <= u).min(last);
            tallies[x] += 1;
        }
        let counts = tallies
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(x, c)| (x as u64, c))
            .collect();
        Ok(ShotResult {
            shots,
            seed,
            counts,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotResult {
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl ShotResult {
    pub fn frequency(&self, outcome: u64) -> f64 {
        self.counts.get(&outcome).copied().unwrap_or(0) as f64 / self.shots as f64
    }
}
