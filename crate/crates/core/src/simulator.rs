//! Dense statevector simulation, seeded measurement and Monte Carlo
//! depolarizing noise.
//!
//! Basis index `x` stores qubit 0 in its most significant bit. Every shot
//! draws from its own ChaCha stream (`stream = shot index` under the master
//! seed), so results do not depend on how shots are scheduled across threads.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boolexpr::TruthTable;
use crate::synthesis::{Circuit, Gate};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("qubit {qubit} out of range for {qubits} qubits")]
    QubitOutOfRange { qubit: usize, qubits: usize },
    #[error("truth table has {table} variables, state has {state} qubits")]
    SizeMismatch { table: usize, state: usize },
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("noise probability {name}={value} outside [0, 1]")]
    BadProbability { name: &'static str, value: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    qubit_count: usize,
    amplitudes: Vec<Complex64>,
}

impl Statevector {
    /// `|0...0>` on `n` qubits.
    pub fn new(n: usize) -> Result<Self, SimError> {
        Self::basis(n, 0)
    }

    /// Computational basis state `|x>`.
    pub fn basis(n: usize, x: usize) -> Result<Self, SimError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(SimError::QubitCount(n));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n];
        amplitudes[x] = Complex64::new(1.0, 0.0);
        Ok(Statevector {
            qubit_count: n,
            amplitudes,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    fn bit(&self, q: usize) -> Result<usize, SimError> {
        if q >= self.qubit_count {
            return Err(SimError::QubitOutOfRange {
                qubit: q,
                qubits: self.qubit_count,
            });
        }
        Ok(1 << (self.qubit_count - 1 - q))
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<(), SimError> {
        match gate {
            Gate::H(q) => {
                let bit = self.bit(*q)?;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for x in 0..self.amplitudes.len() {
                    if x & bit == 0 {
                        let a = self.amplitudes[x];
                        let b = self.amplitudes[x | bit];
                        self.amplitudes[x] = (a + b) * s;
                        self.amplitudes[x | bit] = (a - b) * s;
                    }
                }
            }
            Gate::X(q) => {
                let bit = self.bit(*q)?;
                self.flip_bits(bit);
            }
            Gate::Z(q) => {
                let bit = self.bit(*q)?;
                self.negate_where(bit);
            }
            Gate::Mcz(qs) => {
                let mut mask = 0;
                for &q in qs {
                    mask |= self.bit(q)?;
                }
                self.negate_where(mask);
            }
            Gate::GlobalPhaseFlip => self.negate_where(0),
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<(), SimError> {
        if circuit.qubit_count() != self.qubit_count {
            return Err(SimError::QubitCount(circuit.qubit_count()));
        }
        for g in circuit.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    // x -> x ^ bit
    fn flip_bits(&mut self, bit: usize) {
        for x in 0..self.amplitudes.len() {
            if x & bit == 0 {
                self.amplitudes.swap(x, x | bit);
            }
        }
    }

    // negates amplitudes of basis states containing every bit of `mask`
    fn negate_where(&mut self, mask: usize) {
        for (x, a) in self.amplitudes.iter_mut().enumerate() {
            if x & mask == mask {
                *a = -*a;
            }
        }
    }

    /// Multiplies amplitude `x` by `(-1)^t[x]` without building a circuit.
    pub fn apply_diagonal_oracle(&mut self, t: &TruthTable) -> Result<(), SimError> {
        if t.var_count() != self.qubit_count {
            return Err(SimError::SizeMismatch {
                table: t.var_count(),
                state: self.qubit_count,
            });
        }
        for (x, a) in self.amplitudes.iter_mut().enumerate() {
            if t.get(x) {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// Born-rule probabilities per basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(Complex64::norm_sqr).collect()
    }

    /// `[[re, im], ...]` for inspection.
    pub fn to_json(&self) -> String {
        let pairs: Vec<[f64; 2]> = self.amplitudes.iter().map(|a| [a.re, a.im]).collect();
        serde_json::to_string(&pairs).expect("amplitudes serialize")
    }

    fn apply_pauli(&mut self, q: usize, pauli: u8) {
        let bit = 1 << (self.qubit_count - 1 - q);
        // Y = iXZ; the global factor i does not affect sampling
        match pauli {
            0 => self.flip_bits(bit),
            1 => {
                self.negate_where(bit);
                self.flip_bits(bit);
            }
            _ => self.negate_where(bit),
        }
    }
}

/// Runs `circuit` from `|0...0>`.
pub fn simulate(circuit: &Circuit) -> Result<Statevector, SimError> {
    let mut state = Statevector::new(circuit.qubit_count())?;
    state.apply_circuit(circuit)?;
    Ok(state)
}

/// Shot counts keyed by n-bit strings, qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl Histogram {
    fn from_outcomes(outcomes: &[usize], n: usize) -> Self {
        let mut counts = BTreeMap::new();
        for &x in outcomes {
            *counts.entry(format!("{x:0n$b}")).or_insert(0) += 1;
        }
        Histogram {
            shots: outcomes.len() as u64,
            counts,
        }
    }

    /// Bit-string length, or 0 for an empty histogram.
    pub fn qubit_count(&self) -> usize {
        self.counts.keys().next().map_or(0, String::len)
    }

    pub fn probability(&self, bits: &str) -> f64 {
        self.counts.get(bits).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("histogram serializes")
    }

    /// Same counts with every key reversed bitwise.
    pub fn reversed(&self) -> Histogram {
        Histogram {
            shots: self.shots,
            counts: self
                .counts
                .iter()
                .map(|(k, &v)| (k.chars().rev().collect(), v))
                .collect(),
        }
    }
}

fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect()
}

fn sample_index(cdf: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u = rng.gen::<f64>() * cdf.last().copied().unwrap_or(1.0);
    cdf.partition_point(|&c| c <= u).min(cdf.len() - 1)
}

/// Samples `shots` outcomes from the state's Born distribution.
pub fn measure(state: &Statevector, shots: u64, seed: u64) -> Result<Histogram, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let cdf = cumulative(&state.probabilities());
    let outcomes: Vec<usize> = (0..shots)
        .into_par_iter()
        .map(|shot| sample_index(&cdf, &mut shot_rng(seed, shot)))
        .collect();
    Ok(Histogram::from_outcomes(&outcomes, state.qubit_count))
}

/// Symmetric depolarizing noise after each gate plus classical readout flips.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Per-qubit error probability after a single-qubit gate.
    pub p1: f64,
    /// Per-qubit error probability after a multi-qubit gate.
    pub p2: f64,
    /// Probability each measured bit is reported flipped.
    pub readout: f64,
}

impl NoiseModel {
    pub const IDEAL: NoiseModel = NoiseModel {
        p1: 0.0,
        p2: 0.0,
        readout: 0.0,
    };

    pub fn new(p1: f64, p2: f64, readout: f64) -> Result<Self, SimError> {
        for (name, value) in [("p1", p1), ("p2", p2), ("readout", readout)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SimError::BadProbability { name, value });
            }
        }
        Ok(NoiseModel { p1, p2, readout })
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            p1: 0.001,
            p2: 0.01,
            readout: 0.02,
        }
    }
}

/// One trajectory per shot. A gate touching `k` qubits is followed, for each
/// of them, by X, Y or Z with probability `p/3` each (`p = p1` when `k == 1`,
/// else `p2`). Zero probabilities draw nothing, so an ideal model consumes
/// exactly the randomness [`measure`] does and reproduces it bit for bit.
pub fn run_noisy(
    circuit: &Circuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<Histogram, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let noise = NoiseModel::new(noise.p1, noise.p2, noise.readout)?;
    let n = circuit.qubit_count();
    let ideal_cdf = if noise.p1 == 0.0 && noise.p2 == 0.0 {
        Some(cumulative(&simulate(circuit)?.probabilities()))
    } else {
        None
    };
    let outcomes = (0..shots)
        .into_par_iter()
        .map(|shot| {
            let mut rng = shot_rng(seed, shot);
            let mut x = match &ideal_cdf {
                Some(cdf) => sample_index(cdf, &mut rng),
                None => {
                    let state = noisy_trajectory(circuit, &noise, &mut rng)?;
                    sample_index(&cumulative(&state.probabilities()), &mut rng)
                }
            };
            if noise.readout > 0.0 {
                for q in 0..n {
                    if rng.gen::<f64>() < noise.readout {
                        x ^= 1 << (n - 1 - q);
                    }
                }
            }
            Ok(x)
        })
        .collect::<Result<Vec<usize>, SimError>>()?;
    Ok(Histogram::from_outcomes(&outcomes, n))
}

fn noisy_trajectory(
    circuit: &Circuit,
    noise: &NoiseModel,
    rng: &mut ChaCha8Rng,
) -> Result<Statevector, SimError> {
    let mut state = Statevector::new(circuit.qubit_count())?;
    for g in circuit.gates() {
        state.apply_gate(g)?;
        let qs = g.qubits();
        let p = if qs.len() == 1 { noise.p1 } else { noise.p2 };
        if p == 0.0 {
            continue;
        }
        for &q in qs {
            if rng.gen::<f64>() < p {
                state.apply_pauli(q, rng.gen_range(0..3u8));
            }
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::{build_diffusion, build_grover_circuit, synthesize_phase_oracle};

    const EPS: f64 = 1e-12;

    fn close(a: Complex64, re: f64) -> bool {
        (a.re - re).abs() < EPS && a.im.abs() < EPS
    }

    fn two_match_table() -> TruthTable {
        TruthTable::from_fn(3, |x| x == 0b010 || x == 0b011).unwrap()
    }

    #[test]
    fn init() {
        let s = Statevector::new(1).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert!(close(Statevector::new(3).unwrap().amplitudes()[0], 1.0));
        assert_eq!(Statevector::new(0), Err(SimError::QubitCount(0)));
        assert!(Statevector::new(MAX_QUBITS + 1).is_err());
    }

    #[test]
    fn single_gates() {
        let mut s = Statevector::new(1).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!(s.amplitudes().iter().all(|&a| close(a, r)));

        let mut s = Statevector::new(3).unwrap();
        for q in 0..3 {
            s.apply_gate(&Gate::H(q)).unwrap();
        }
        assert!(s.amplitudes().iter().all(|&a| close(a, 1.0 / 8f64.sqrt())));

        let mut s = Statevector::basis(2, 0b11).unwrap();
        s.apply_gate(&Gate::Mcz(vec![0, 1])).unwrap();
        assert!(close(s.amplitudes()[3], -1.0));

        // qubit 0 is the most significant index bit
        let mut s = Statevector::new(3).unwrap();
        s.apply_gate(&Gate::X(0)).unwrap();
        assert!(close(s.amplitudes()[0b100], 1.0));

        assert!(s.apply_gate(&Gate::Z(3)).is_err());
    }

    #[test]
    fn diagonal_oracle() {
        let mut s = simulate(&build_grover_circuit(&Circuit::new(3).unwrap(), 0).unwrap()).unwrap();
        let before = s.clone();
        s.apply_diagonal_oracle(&TruthTable::zeros(3).unwrap()).unwrap();
        assert_eq!(s, before);

        s.apply_diagonal_oracle(&two_match_table()).unwrap();
        let a = 1.0 / 8f64.sqrt();
        for (x, amp) in s.amplitudes().iter().enumerate() {
            let want = if x == 2 || x == 3 { -a } else { a };
            assert!(close(*amp, want), "{x}");
        }

        let mut t = before.clone();
        t.apply_diagonal_oracle(&TruthTable::from_fn(3, |_| true).unwrap()).unwrap();
        assert!(t.amplitudes().iter().zip(before.amplitudes()).all(|(a, b)| *a == -*b));

        assert!(s.apply_diagonal_oracle(&TruthTable::zeros(2).unwrap()).is_err());
    }

    #[test]
    fn two_and_one_match_probabilities() {
        let oracle = synthesize_phase_oracle(&two_match_table()).unwrap();
        let p = simulate(&build_grover_circuit(&oracle, 1).unwrap())
            .unwrap()
            .probabilities();
        for (x, &px) in p.iter().enumerate() {
            let want = if x == 2 || x == 3 { 0.5 } else { 0.0 };
            assert!((px - want).abs() < 1e-9, "{x}: {px}");
        }

        let one = TruthTable::from_fn(3, |x| x == 0).unwrap();
        let oracle = synthesize_phase_oracle(&one).unwrap();
        let p = simulate(&build_grover_circuit(&oracle, 2).unwrap())
            .unwrap()
            .probabilities();
        let want = (5.0 * (1.0 / 8f64.sqrt()).asin()).sin().powi(2);
        assert!((p[0] - want).abs() < 1e-12);
        assert!((p[0] - 0.9453).abs() < 1e-4);
    }

    #[test]
    fn diffusion_fixes_uniform_state() {
        let mut s = Statevector::new(2).unwrap();
        s.apply_gate(&Gate::H(0)).unwrap();
        s.apply_gate(&Gate::H(1)).unwrap();
        let before = s.clone();
        s.apply_circuit(&build_diffusion(2).unwrap()).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < EPS);
        }
    }

    #[test]
    fn measurement() {
        let s = Statevector::basis(3, 0b010).unwrap();
        let h = measure(&s, 100, 1).unwrap();
        assert_eq!(h.counts, BTreeMap::from([("010".to_string(), 100)]));
        assert!(measure(&s, 0, 1).is_err());

        let mut u = Statevector::new(3).unwrap();
        for q in 0..3 {
            u.apply_gate(&Gate::H(q)).unwrap();
        }
        assert_eq!(measure(&u, 500, 9).unwrap(), measure(&u, 500, 9).unwrap());
        assert_ne!(measure(&u, 500, 9).unwrap(), measure(&u, 500, 10).unwrap());
        // binomial(8000, 1/8): sigma = sqrt(8000 * 1/8 * 7/8)
        let sigma = (8000.0f64 * 0.125 * 0.875).sqrt();
        for seed in 0..5 {
            let h = measure(&u, 8000, seed).unwrap();
            assert_eq!(h.counts.len(), 8);
            for &c in h.counts.values() {
                assert!((c as f64 - 1000.0).abs() < 5.0 * sigma, "{c}");
            }
        }
    }

    #[test]
    fn ideal_noise_matches_measure() {
        let oracle = synthesize_phase_oracle(&two_match_table()).unwrap();
        let c = build_grover_circuit(&oracle, 1).unwrap();
        let state = simulate(&c).unwrap();
        let mut u = Statevector::new(3).unwrap();
        for q in 0..3 {
            u.apply_gate(&Gate::H(q)).unwrap();
        }
        let uniform = build_grover_circuit(&Circuit::new(3).unwrap(), 0).unwrap();
        assert_eq!(
            run_noisy(&uniform, &NoiseModel::IDEAL, 777, 4).unwrap(),
            measure(&u, 777, 4).unwrap()
        );
        assert_eq!(
            run_noisy(&c, &NoiseModel::IDEAL, 300, 4).unwrap(),
            measure(&state, 300, 4).unwrap()
        );
    }

    #[test]
    fn noisy_runs() {
        let oracle = synthesize_phase_oracle(&two_match_table()).unwrap();
        let c = build_grover_circuit(&oracle, 1).unwrap();
        let noise = NoiseModel::default();
        let h = run_noisy(&c, &noise, 1024, 7).unwrap();
        assert_eq!(h.counts.values().sum::<u64>(), 1024);
        assert_eq!(h, run_noisy(&c, &noise, 1024, 7).unwrap());
        let mut ranked: Vec<_> = h.counts.iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(a.1));
        let top: Vec<&str> = ranked[..2].iter().map(|(k, _)| k.as_str()).collect();
        assert!(top.contains(&"010") && top.contains(&"011"), "{top:?}");

        let control = build_grover_circuit(&Circuit::new(3).unwrap(), 1).unwrap();
        let c = synthesize_phase_oracle(&TruthTable::zeros(3).unwrap()).unwrap();
        assert!(c.gates().is_empty());
        let h = run_noisy(&control, &noise, 1024, 7).unwrap();
        let max = *h.counts.values().max().unwrap() as f64 / 1024.0;
        assert!(max < 0.25, "{max}");

        assert!(NoiseModel::new(1.5, 0.0, 0.0).is_err());
        let bad = NoiseModel {
            p1: -0.1,
            p2: 0.0,
            readout: 0.0,
        };
        assert!(run_noisy(&control, &bad, 10, 1).is_err());
    }

    #[test]
    fn full_readout_flip_inverts_outcome() {
        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::X(1)).unwrap();
        let noise = NoiseModel::new(0.0, 0.0, 1.0).unwrap();
        let h = run_noisy(&c, &noise, 50, 3).unwrap();
        assert_eq!(h.counts, BTreeMap::from([("101".to_string(), 50)]));
    }

    #[test]
    fn pauli_y_flips_and_phases() {
        let mut s = Statevector::new(1).unwrap();
        s.apply_pauli(0, 1);
        assert!(close(s.amplitudes()[1], 1.0) || close(s.amplitudes()[1], -1.0));
        assert!(close(s.amplitudes()[0], 0.0));
    }

    #[test]
    fn histogram_json() {
        let h = Histogram {
            shots: 3,
            counts: BTreeMap::from([("01".into(), 1), ("10".into(), 2)]),
        };
        assert_eq!(h.to_json(), r#"{"shots":3,"counts":{"01":1,"10":2}}"#);
        assert_eq!(h.reversed().counts.get("01"), Some(&2));
        assert_eq!(Statevector::new(1).unwrap().to_json(), "[[1.0,0.0],[0.0,0.0]]");
    }
}
