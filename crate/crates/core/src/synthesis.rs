//! Gate-level phase oracles, the diffusion operator and Grover circuits.
//!
//! Qubit `q` carries variable `x{q}`. Circuits are exact: the global phase
//! flip is an explicit gate, so oracle and diffusion match their matrices
//! without a phase ambiguity.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolexpr::{anf, TruthTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("circuit needs at least one qubit")]
    NoQubits,
    #[error("gate {gate} uses qubit {qubit}, circuit has {qubits}")]
    QubitOutOfRange {
        gate: String,
        qubit: usize,
        qubits: usize,
    },
    #[error("multi-controlled Z needs at least 2 distinct qubits, got {0:?}")]
    BadMcz(Vec<usize>),
    #[error("marked count {m} exceeds the {states} basis states")]
    TooManyMarked { m: usize, states: usize },
    #[error("oracle acts on {oracle} qubits, diffusion on {diffusion}")]
    QubitCountMismatch { oracle: usize, diffusion: usize },
    #[error("unknown gate {0:?}")]
    UnknownGate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    /// Negates basis states whose listed qubits are all 1.
    Mcz(Vec<usize>),
    /// Multiplies the whole state by -1.
    GlobalPhaseFlip,
}

impl Gate {
    pub fn qubits(&self) -> &[usize] {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => std::slice::from_ref(q),
            Gate::Mcz(qs) => qs,
            Gate::GlobalPhaseFlip => &[],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Z(_) => "z",
            Gate::Mcz(_) => "mcz",
            Gate::GlobalPhaseFlip => "gphase",
        }
    }

    fn validate(&self, qubits: usize) -> Result<(), SynthesisError> {
        if let Gate::Mcz(qs) = self {
            let mut sorted = qs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if qs.len() < 2 || sorted.len() != qs.len() {
                return Err(SynthesisError::BadMcz(qs.clone()));
            }
        }
        match self.qubits().iter().find(|&&q| q >= qubits) {
            Some(&qubit) => Err(SynthesisError::QubitOutOfRange {
                gate: self.name().into(),
                qubit,
                qubits,
            }),
            None => Ok(()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    g: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    q: Vec<usize>,
}

impl From<&Gate> for GateRecord {
    fn from(g: &Gate) -> Self {
        GateRecord {
            g: g.name().into(),
            q: g.qubits().to_vec(),
        }
    }
}

impl TryFrom<GateRecord> for Gate {
    type Error = SynthesisError;

    fn try_from(r: GateRecord) -> Result<Self, Self::Error> {
        let single = |make: fn(usize) -> Gate| match r.q.as_slice() {
            [q] => Ok(make(*q)),
            _ => Err(SynthesisError::UnknownGate(format!("{} on {:?}", r.g, r.q))),
        };
        match r.g.as_str() {
            "h" => single(Gate::H),
            "x" => single(Gate::X),
            "z" => single(Gate::Z),
            "mcz" => Ok(Gate::Mcz(r.q)),
            "gphase" if r.q.is_empty() => Ok(Gate::GlobalPhaseFlip),
            other => Err(SynthesisError::UnknownGate(other.into())),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitRecord {
    qubits: usize,
    gates: Vec<GateRecord>,
}

/// Ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    qubit_count: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Result<Self, SynthesisError> {
        if qubit_count == 0 {
            return Err(SynthesisError::NoQubits);
        }
        Ok(Circuit {
            qubit_count,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(qubit_count: usize, gates: Vec<Gate>) -> Result<Self, SynthesisError> {
        let mut c = Self::new(qubit_count)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), SynthesisError> {
        gate.validate(self.qubit_count)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<(), SynthesisError> {
        if other.qubit_count != self.qubit_count {
            return Err(SynthesisError::QubitCountMismatch {
                oracle: other.qubit_count,
                diffusion: self.qubit_count,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn to_json(&self) -> String {
        let record = CircuitRecord {
            qubits: self.qubit_count,
            gates: self.gates.iter().map(GateRecord::from).collect(),
        };
        serde_json::to_string(&record).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, SynthesisError> {
        let record: CircuitRecord = serde_json::from_str(text)
            .map_err(|e| SynthesisError::UnknownGate(e.to_string()))?;
        let gates = record
            .gates
            .into_iter()
            .map(Gate::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_gates(record.qubits, gates)
    }

    /// OpenQASM 2.0 text. Multi-controlled Z of arity 3 or more becomes an
    /// opaque `mczK` gate; the global phase flip survives only as a comment.
    pub fn to_qasm(&self) -> String {
        let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        let mut arities: Vec<usize> = self
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::Mcz(qs) if qs.len() >= 3 => Some(qs.len()),
                _ => None,
            })
            .collect();
        arities.sort_unstable();
        arities.dedup();
        for k in arities {
            let params: Vec<String> = (0..k).map(|i| format!("q{i}")).collect();
            let _ = writeln!(out, "// {k}-qubit multi-controlled Z, no native decomposition");
            let _ = writeln!(out, "opaque mcz{k} {};", params.join(","));
        }
        let n = self.qubit_count;
        let _ = writeln!(out, "qreg q[{n}];\ncreg c[{n}];");
        for g in &self.gates {
            let _ = match g {
                Gate::H(q) => writeln!(out, "h q[{q}];"),
                Gate::X(q) => writeln!(out, "x q[{q}];"),
                Gate::Z(q) => writeln!(out, "z q[{q}];"),
                Gate::Mcz(qs) if qs.len() == 2 => writeln!(out, "cz q[{}],q[{}];", qs[0], qs[1]),
                Gate::Mcz(qs) => {
                    let args: Vec<String> = qs.iter().map(|q| format!("q[{q}]")).collect();
                    writeln!(out, "mcz{} {};", qs.len(), args.join(","))
                }
                Gate::GlobalPhaseFlip => writeln!(out, "// global phase -1"),
            };
        }
        let _ = writeln!(out, "measure q -> c;");
        out
    }
}

/// Phase oracle for `t` from its algebraic normal form: the constant term
/// becomes a global phase flip, degree-1 terms `Z`, and higher terms `MCZ`.
pub fn synthesize_phase_oracle(t: &TruthTable) -> Result<Circuit, SynthesisError> {
    let mut c = Circuit::new(t.var_count())?;
    for m in anf(t).monomials() {
        let gate = match m.as_slice() {
            [] => Gate::GlobalPhaseFlip,
            [q] => Gate::Z(*q),
            qs => Gate::Mcz(qs.to_vec()),
        };
        c.push(gate)?;
    }
    Ok(c)
}

/// `2|s><s| - I` on `n` qubits.
pub fn build_diffusion(n: usize) -> Result<Circuit, SynthesisError> {
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        c.push(Gate::H(q))?;
    }
    for q in 0..n {
        c.push(Gate::X(q))?;
    }
    c.push(if n == 1 {
        Gate::Z(0)
    } else {
        Gate::Mcz((0..n).collect())
    })?;
    for q in 0..n {
        c.push(Gate::X(q))?;
    }
    for q in 0..n {
        c.push(Gate::H(q))?;
    }
    // H X MCZ X H alone is I - 2|s><s|
    c.push(Gate::GlobalPhaseFlip)?;
    Ok(c)
}

/// Grover rounds for `m` marked states out of `2^n`:
/// `max(1, floor(pi/4 * sqrt(2^n / m)))`, and 1 when nothing is marked.
pub fn iteration_count(n: usize, m: usize) -> Result<usize, SynthesisError> {
    let states = 1usize << n;
    if m > states {
        return Err(SynthesisError::TooManyMarked { m, states });
    }
    if m == 0 {
        return Ok(1);
    }
    let k = (FRAC_PI_4 * (states as f64 / m as f64).sqrt()).floor() as usize;
    Ok(k.max(1))
}

/// Hadamard layer followed by `iterations` rounds of oracle then diffusion.
pub fn build_grover_circuit(oracle: &Circuit, iterations: usize) -> Result<Circuit, SynthesisError> {
    let n = oracle.qubit_count();
    let diffusion = build_diffusion(n)?;
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        c.push(Gate::H(q))?;
    }
    for _ in 0..iterations {
        c.extend(oracle)?;
        c.extend(&diffusion)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GateStats {
    pub h: usize,
    pub x: usize,
    pub z: usize,
    pub mcz: usize,
    pub gphase: usize,
    /// MCZ count keyed by number of qubits.
    pub mcz_arity: BTreeMap<usize, usize>,
    pub depth: usize,
}

/// Gate counts and greedy-layered depth. Gates on disjoint qubits share a
/// layer; the global phase flip touches no qubit and adds no depth.
pub fn gate_stats(c: &Circuit) -> GateStats {
    let mut stats = GateStats::default();
    let mut layer = vec![0usize; c.qubit_count()];
    for g in c.gates() {
        match g {
            Gate::H(_) => stats.h += 1,
            Gate::X(_) => stats.x += 1,
            Gate::Z(_) => stats.z += 1,
            Gate::Mcz(qs) => {
                stats.mcz += 1;
                *stats.mcz_arity.entry(qs.len()).or_default() += 1;
            }
            Gate::GlobalPhaseFlip => stats.gphase += 1,
        }
        let qs = g.qubits();
        if qs.is_empty() {
            continue;
        }
        let next = qs.iter().map(|&q| layer[q]).max().unwrap_or(0) + 1;
        for &q in qs {
            layer[q] = next;
        }
        stats.depth = stats.depth.max(next);
    }
    stats
}
