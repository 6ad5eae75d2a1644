//! Phase-oracle and phase-estimation circuits for graphs.
//!
//! Qubits `0..n` form the graph register (qubit `i` is vertex `i`); qubits
//! `n..n+t` form the estimation register, with estimation qubit `k`
//! (0-based, absolute index `n + k`) controlling `2^k` applications of the
//! oracle. After the inverse QFT the estimation register, read with qubit
//! `n` as its least significant bit, holds the induced edge count.

mod phase;
mod qasm;

use thiserror::Error;

use crate::graph::Graph;

pub use phase::{Phase, MAX_PHASE_BITS};
pub use qasm::{export_qasm, parse_qasm, CcpStyle, QasmError};

/// Default limit on `n + t` for circuits meant for the simulator.
pub const DEFAULT_MAX_WIDTH: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a circuit of width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("gate {0} uses a qubit more than once")]
    RepeatedQubit(String),
    #[error("circuit needs {width} qubits, the limit is {cap}")]
    TooWide { width: usize, cap: usize },
    #[error("empty graph: no oracle")]
    EmptyGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    /// Phase on |1⟩.
    P(usize, Phase),
    /// Phase on |11⟩ of (control, target).
    CP(usize, usize, Phase),
    /// Phase on |111⟩ of (control, control, target).
    CCP(usize, usize, usize, Phase),
    Swap(usize, usize),
    /// Only produced by the two-qubit lowering of [`Gate::CCP`] in exported
    /// text.
    CX(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::P(q, _) => vec![q],
            Gate::CP(a, b, _) | Gate::Swap(a, b) | Gate::CX(a, b) => vec![a, b],
            Gate::CCP(a, b, c, _) => vec![a, b, c],
        }
    }

    /// Diagonal gates only multiply amplitudes by phases.
    pub fn is_diagonal(&self) -> bool {
        matches!(self, Gate::P(..) | Gate::CP(..) | Gate::CCP(..))
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::P(q, p) => Gate::P(q, -p),
            Gate::CP(a, b, p) => Gate::CP(a, b, -p),
            Gate::CCP(a, b, c, p) => Gate::CCP(a, b, c, -p),
            g @ (Gate::H(_) | Gate::Swap(..) | Gate::CX(..)) => g,
        }
    }

    fn validate(&self, width: usize) -> Result<(), CircuitError> {
        let qs = self.qubits();
        for (k, &q) in qs.iter().enumerate() {
            if q >= width {
                return Err(CircuitError::QubitOutOfRange { qubit: q, width });
            }
            if qs[..k].contains(&q) {
                return Err(CircuitError::RepeatedQubit(format!("{self:?}")));
            }
        }
        Ok(())
    }
}

/// An ordered gate list over a graph register and an estimation register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    graph_qubits: usize,
    est_qubits: usize,
    gates: Vec<Gate>,
    measured: Vec<usize>,
}

impl Circuit {
    pub fn new(graph_qubits: usize, est_qubits: usize) -> Self {
        Circuit {
            graph_qubits,
            est_qubits,
            gates: Vec::new(),
            measured: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.graph_qubits + self.est_qubits
    }

    pub fn graph_qubits(&self) -> usize {
        self.graph_qubits
    }

    pub fn est_qubits(&self) -> usize {
        self.est_qubits
    }

    /// Absolute qubit indices of the estimation register, least significant
    /// first.
    pub fn est_register(&self) -> Vec<usize> {
        (self.graph_qubits..self.width()).collect()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Qubits to be read out at the end, in outcome bit order.
    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.width())?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<(), CircuitError> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn measure(&mut self, qubit: usize) -> Result<(), CircuitError> {
        if qubit >= self.width() {
            return Err(CircuitError::QubitOutOfRange {
                qubit,
                width: self.width(),
            });
        }
        self.measured.push(qubit);
        Ok(())
    }
}

/// Estimation precision for a graph with `edges` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionPlan {
    pub edges: usize,
    pub est_qubits: usize,
    /// Oracle phase quantum, `2π / 2^est_qubits`.
    pub theta: Phase,
    pub oracle_calls: u64,
}

/// `t = max(1, ⌈log₂(m+1)⌉)` estimation qubits, so that `θ·m < 2π` with
/// `θ = 2π/2^t`: a whole subgraph never wraps its phase.
pub fn plan_precision(edges: usize) -> PrecisionPlan {
    let bits = (usize::BITS - edges.leading_zeros()) as usize;
    let t = bits.max(1);
    PrecisionPlan {
        edges,
        est_qubits: t,
        theta: Phase::unit(t as u32),
        oracle_calls: (1u64 << t) - 1,
    }
}

/// One controlled phase per edge, in sorted edge order, over `n` qubits.
pub fn build_oracle(g: &Graph, theta: Phase) -> Circuit {
    let mut c = Circuit::new(g.vertex_count(), 0);
    c.gates = g.edges().map(|(i, j)| Gate::CP(i, j, theta)).collect();
    c
}

/// Inverse QFT on `register` (least significant qubit first): bit-reversal
/// swaps, then for each qubit from least to most significant the
/// controlled `-π/2^d` rotations from lower qubits followed by H.
pub fn inverse_qft(register: &[usize]) -> Vec<Gate> {
    let t = register.len();
    let mut gates = Vec::with_capacity(t / 2 + t * (t + 1) / 2);
    for k in 0..t / 2 {
        gates.push(Gate::Swap(register[k], register[t - 1 - k]));
    }
    for j in 0..t {
        for k in 0..j {
            // -π/2^(j-k) = -(2π / 2^(j-k+1))
            let angle = -Phase::unit((j - k + 1) as u32);
            gates.push(Gate::CP(register[k], register[j], angle));
        }
        gates.push(Gate::H(register[j]));
    }
    gates
}

/// Forward QFT on `register`; the exact inverse of [`inverse_qft`].
pub fn qft(register: &[usize]) -> Vec<Gate> {
    inverse_qft(register)
        .iter()
        .rev()
        .map(Gate::inverse)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QpeOptions {
    /// Emit one `CCP(θ·2^k)` per edge and estimation qubit instead of `2^k`
    /// repeated `CCP(θ)`.
    pub fuse: bool,
    pub max_width: usize,
}

impl Default for QpeOptions {
    fn default() -> Self {
        QpeOptions {
            fuse: false,
            max_width: DEFAULT_MAX_WIDTH,
        }
    }
}

/// The full estimation circuit: H on every qubit, controlled oracle powers,
/// inverse QFT on the estimation register, then its measurement.
pub fn build_qpe(g: &Graph, opts: QpeOptions) -> Result<Circuit, CircuitError> {
    if g.edge_count() == 0 {
        return Err(CircuitError::EmptyGraph);
    }
    let plan = plan_precision(g.edge_count());
    let n = g.vertex_count();
    let t = plan.est_qubits;
    let width = n + t;
    if width > opts.max_width {
        return Err(CircuitError::TooWide {
            width,
            cap: opts.max_width,
        });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut c = Circuit::new(n, t);
    c.extend((0..width).map(Gate::H))?;
    for k in 0..t {
        let control = n + k;
        if opts.fuse {
            let angle = plan.theta.times_pow2(k as u32);
            c.extend(edges.iter().map(|&(i, j)| Gate::CCP(control, i, j, angle)))?;
        } else {
            for _ in 0..1u64 << k {
                c.extend(
                    edges
                        .iter()
                        .map(|&(i, j)| Gate::CCP(control, i, j, plan.theta)),
                )?;
            }
        }
    }
    let register = c.est_register();
    c.extend(inverse_qft(&register))?;
    for q in register {
        c.measure(q)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn precision_examples() {
        let p = plan_precision(4);
        assert_eq!(
            (p.est_qubits, p.theta, p.oracle_calls),
            (3, Phase::unit(3), 7)
        );
        let p = plan_precision(15);
        assert_eq!((p.est_qubits, p.theta), (4, Phase::unit(4)));
        let p = plan_precision(1);
        assert_eq!((p.est_qubits, p.theta), (1, Phase::turns(1, 1)));
        assert_eq!(plan_precision(8).est_qubits, 4);
        assert_eq!(plan_precision(0).est_qubits, 1);
    }

    #[test]
    fn oracle_gates() {
        let c4 = fixtures::c4();
        let oracle = build_oracle(&c4, Phase::unit(3));
        assert_eq!(oracle.width(), 4);
        assert_eq!(oracle.gates().len(), 4);
        assert!(oracle
            .gates()
            .iter()
            .all(|g| matches!(g, Gate::CP(_, _, p) if *p == Phase::unit(3))));
        assert!(build_oracle(&Graph::empty(3).unwrap(), Phase::unit(2))
            .gates()
            .is_empty());
        let petersen = build_oracle(&fixtures::petersen(), Phase::unit(4));
        assert_eq!(petersen.gates().len(), 15);
    }

    #[test]
    fn qpe_shapes() {
        let c4 = fixtures::c4();
        let fused = build_qpe(
            &c4,
            QpeOptions {
                fuse: true,
                ..Default::default()
            },
        )
        .unwrap();
        let plain = build_qpe(&c4, QpeOptions::default()).unwrap();
        let ccp = |c: &Circuit| {
            c.gates()
                .iter()
                .filter(|g| matches!(g, Gate::CCP(..)))
                .count()
        };
        assert_eq!((fused.width(), fused.est_qubits()), (7, 3));
        assert_eq!(ccp(&fused), 12);
        assert_eq!(ccp(&plain), 28);
        assert_eq!(fused.measured(), &[4, 5, 6]);

        let petersen = build_qpe(&fixtures::petersen(), QpeOptions::default()).unwrap();
        assert_eq!(petersen.width(), 14);
        assert_eq!(ccp(&petersen), 15 * 15);

        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(build_qpe(&k2, QpeOptions::default()).unwrap().width(), 3);
    }

    #[test]
    fn qpe_errors() {
        let empty = Graph::empty(3).unwrap();
        assert_eq!(
            build_qpe(&empty, QpeOptions::default()),
            Err(CircuitError::EmptyGraph)
        );
        let petersen = fixtures::petersen();
        let narrow = QpeOptions {
            fuse: false,
            max_width: 13,
        };
        assert_eq!(
            build_qpe(&petersen, narrow),
            Err(CircuitError::TooWide { width: 14, cap: 13 })
        );
    }

    #[test]
    fn inverse_qft_small() {
        assert_eq!(inverse_qft(&[0]), vec![Gate::H(0)]);
        assert_eq!(
            inverse_qft(&[0, 1]),
            vec![
                Gate::Swap(0, 1),
                Gate::H(0),
                Gate::CP(0, 1, -Phase::unit(2)),
                Gate::H(1)
            ]
        );
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2, 1);
        assert!(c.push(Gate::CP(0, 3, Phase::ZERO)).is_err());
        assert!(matches!(
            c.push(Gate::CCP(0, 1, 1, Phase::ZERO)),
            Err(CircuitError::RepeatedQubit(_))
        ));
        assert!(c.push(Gate::Swap(0, 2)).is_ok());
        assert!(c.measure(3).is_err());
    }
}
