//! OpenQASM 3 export and a reader for the exported subset.
//!
//! The graph register is declared as `g`, the estimation register as `e`
//! and the classical outcome register as `c`. Angles are printed in radians
//! with twelve significant digits.

use thiserror::Error;

use super::{Circuit, CircuitError, Gate, Phase};

/// Finest dyadic denominator the reader will reconstruct, `2^16`.
const READ_PHASE_BITS: u32 = 16;

/// How doubly-controlled phases are written out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CcpStyle {
    /// `ctrl @ cp(φ) a, b, c;`
    #[default]
    Native,
    /// Two-qubit lowering: `cp(φ/2) a,c; cp(φ/2) b,c; cx a,b; cp(-φ/2) b,c; cx a,b;`
    Decomposed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("qasm line {line}: {reason}")]
pub struct QasmError {
    pub line: usize,
    pub reason: String,
}

/// Twelve significant digits, plain decimal notation.
fn format_angle(radians: f64) -> String {
    if radians == 0.0 {
        return "0".into();
    }
    let magnitude = radians.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{radians:.decimals$}")
}

fn operand(c: &Circuit, q: usize) -> String {
    if q < c.graph_qubits() {
        format!("g[{q}]")
    } else {
        format!("e[{}]", q - c.graph_qubits())
    }
}

pub fn export_qasm(c: &Circuit, style: CcpStyle) -> String {
    let mut out = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    if c.graph_qubits() > 0 {
        out += &format!("qubit[{}] g;\n", c.graph_qubits());
    }
    if c.est_qubits() > 0 {
        out += &format!("qubit[{}] e;\n", c.est_qubits());
    }
    if !c.measured().is_empty() {
        out += &format!("bit[{}] c;\n", c.measured().len());
    }
    let q = |i| operand(c, i);
    for gate in c.gates() {
        match *gate {
            Gate::H(a) => out += &format!("h {};\n", q(a)),
            Gate::P(a, p) => out += &format!("p({}) {};\n", format_angle(p.radians()), q(a)),
            Gate::CP(a, b, p) => {
                out += &format!("cp({}) {}, {};\n", format_angle(p.radians()), q(a), q(b))
            }
            Gate::Swap(a, b) => out += &format!("swap {}, {};\n", q(a), q(b)),
            Gate::CX(a, b) => out += &format!("cx {}, {};\n", q(a), q(b)),
            Gate::CCP(a, b, t, p) => match style {
                CcpStyle::Native => {
                    out += &format!(
                        "ctrl @ cp({}) {}, {}, {};\n",
                        format_angle(p.radians()),
                        q(a),
                        q(b),
                        q(t)
                    )
                }
                CcpStyle::Decomposed => {
                    let half = format_angle(p.half().radians());
                    let neg_half = format_angle((-p.half()).radians());
                    out += &format!("cp({half}) {}, {};\n", q(a), q(t));
                    out += &format!("cp({half}) {}, {};\n", q(b), q(t));
                    out += &format!("cx {}, {};\n", q(a), q(b));
                    out += &format!("cp({neg_half}) {}, {};\n", q(b), q(t));
                    out += &format!("cx {}, {};\n", q(a), q(b));
                }
            },
        }
    }
    for (k, &m) in c.measured().iter().enumerate() {
        out += &format!("c[{k}] = measure {};\n", q(m));
    }
    out
}

struct Reader {
    graph: Option<usize>,
    est: Option<usize>,
    bits: Option<usize>,
    circuit: Option<Circuit>,
    line: usize,
}

impl Reader {
    fn err(&self, reason: impl Into<String>) -> QasmError {
        QasmError {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn circuit(&mut self) -> &mut Circuit {
        let (g, e) = (self.graph.unwrap_or(0), self.est.unwrap_or(0));
        self.circuit.get_or_insert_with(|| Circuit::new(g, e))
    }

    fn declare(&mut self, kind: &str, rest: &str) -> Result<(), QasmError> {
        // "[4] g"
        let rest = rest.trim();
        let close = rest
            .find(']')
            .ok_or_else(|| self.err("malformed declaration"))?;
        let size: usize = rest[1..close]
            .trim()
            .parse()
            .map_err(|_| self.err("register size is not a number"))?;
        let name = rest[close + 1..].trim();
        if self.circuit.is_some() {
            return Err(self.err("declaration after the first gate"));
        }
        let slot = match (kind, name) {
            ("qubit", "g") => &mut self.graph,
            ("qubit", "e") => &mut self.est,
            ("bit", "c") => &mut self.bits,
            _ => return Err(self.err(format!("unknown register {kind} {name}"))),
        };
        if slot.replace(size).is_some() {
            return Err(self.err(format!("register {name} declared twice")));
        }
        Ok(())
    }

    fn qubit(&self, text: &str) -> Result<usize, QasmError> {
        let text = text.trim();
        let open = text
            .find('[')
            .ok_or_else(|| self.err(format!("bad operand {text:?}")))?;
        if !text.ends_with(']') {
            return Err(self.err(format!("bad operand {text:?}")));
        }
        let idx: usize = text[open + 1..text.len() - 1]
            .trim()
            .parse()
            .map_err(|_| self.err(format!("bad index in {text:?}")))?;
        let (offset, size) = match &text[..open] {
            "g" => (0, self.graph.unwrap_or(0)),
            "e" => (self.graph.unwrap_or(0), self.est.unwrap_or(0)),
            other => return Err(self.err(format!("unknown register {other:?}"))),
        };
        if idx >= size {
            return Err(self.err(format!("{text} out of range")));
        }
        Ok(offset + idx)
    }

    fn angle(&self, text: &str) -> Result<Phase, QasmError> {
        let value: f64 = text
            .trim()
            .parse()
            .map_err(|_| self.err(format!("angle {text:?} is not a number")))?;
        Phase::from_radians(value, READ_PHASE_BITS)
            .ok_or_else(|| self.err(format!("angle {text} is not a dyadic fraction of 2π")))
    }

    fn statement(&mut self, stmt: &str) -> Result<(), QasmError> {
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            return Ok(());
        }
        if let Some(rest) = stmt.strip_prefix("qubit") {
            return self.declare("qubit", rest);
        }
        if let Some(rest) = stmt.strip_prefix("bit") {
            return self.declare("bit", rest);
        }
        if let Some((lhs, rhs)) = stmt.split_once('=') {
            let rhs = rhs
                .trim()
                .strip_prefix("measure")
                .ok_or_else(|| self.err("only measurement assignments are supported"))?;
            let lhs = lhs.trim();
            let k: usize = lhs
                .strip_prefix("c[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| self.err(format!("bad classical target {lhs:?}")))?;
            if k >= self.bits.unwrap_or(0) || k != self.circuit().measured().len() {
                return Err(self.err(format!("classical bit c[{k}] out of order or range")));
            }
            let q = self.qubit(rhs)?;
            return self
                .circuit()
                .measure(q)
                .map_err(|e| self.err(e.to_string()));
        }

        let (head, args) = match stmt.find([' ', '(']) {
            Some(_) if stmt.starts_with("ctrl") => {
                let body = stmt
                    .strip_prefix("ctrl")
                    .and_then(|s| s.trim_start().strip_prefix('@'))
                    .ok_or_else(|| self.err("malformed ctrl modifier"))?;
                ("ctrl@", body.trim())
            }
            Some(pos) => (&stmt[..pos], stmt[pos..].trim()),
            None => return Err(self.err(format!("unrecognised statement {stmt:?}"))),
        };
        let (angle, operands) = if let Some(inner) = args.strip_prefix('(') {
            let close = inner.find(')').ok_or_else(|| self.err("unclosed angle"))?;
            (Some(&inner[..close]), inner[close + 1..].trim())
        } else if head == "ctrl@" {
            let inner = args
                .strip_prefix("cp")
                .map(str::trim_start)
                .and_then(|s| s.strip_prefix('('))
                .ok_or_else(|| self.err("only ctrl @ cp is supported"))?;
            let close = inner.find(')').ok_or_else(|| self.err("unclosed angle"))?;
            (Some(&inner[..close]), inner[close + 1..].trim())
        } else {
            (None, args)
        };
        let qs = operands
            .split(',')
            .map(|s| self.qubit(s))
            .collect::<Result<Vec<_>, _>>()?;
        let phase = angle.map(|a| self.angle(a)).transpose()?;
        let arity = |k: usize| {
            if qs.len() == k {
                Ok(())
            } else {
                Err(self.err(format!("{head} takes {k} qubits, got {}", qs.len())))
            }
        };
        let need_angle = || phase.ok_or_else(|| self.err(format!("{head} needs an angle")));
        let gate = match head {
            "h" => {
                arity(1)?;
                Gate::H(qs[0])
            }
            "p" => {
                arity(1)?;
                Gate::P(qs[0], need_angle()?)
            }
            "cp" => {
                arity(2)?;
                Gate::CP(qs[0], qs[1], need_angle()?)
            }
            "ctrl@" => {
                arity(3)?;
                Gate::CCP(qs[0], qs[1], qs[2], need_angle()?)
            }
            "swap" => {
                arity(2)?;
                Gate::Swap(qs[0], qs[1])
            }
            "cx" => {
                arity(2)?;
                Gate::CX(qs[0], qs[1])
            }
            other => return Err(self.err(format!("unsupported gate {other:?}"))),
        };
        let line = self.line;
        self.circuit()
            .push(gate)
            .map_err(|e: CircuitError| QasmError {
                line,
                reason: e.to_string(),
            })
    }
}

/// Reads text produced by [`export_qasm`] back into a [`Circuit`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut reader = Reader {
        graph: None,
        est: None,
        bits: None,
        circuit: None,
        line: 0,
    };
    for (idx, raw) in text.lines().enumerate() {
        reader.line = idx + 1;
        let code = raw.split("//").next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let stmt = code
            .strip_suffix(';')
            .ok_or_else(|| reader.err("missing ';'"))?
            .trim();
        reader.statement(stmt)?;
    }
    Ok(reader.circuit().clone())
}
