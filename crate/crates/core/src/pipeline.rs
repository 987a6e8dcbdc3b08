//! End-to-end search: dataset and terms in, Grover circuit, simulation and
//! verdicts out. Shared by the CLI and the integration tests.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    consistency, decode_results, verify_against_classical, TrialReport, Verdict, Verification,
};
use crate::boolexpr::{truth_table, BoolExpr, TruthTable};
use crate::encoding::{
    build_codec, build_oracle_expression, classical_match, encode_dataset, encode_term,
    AlphabetCodec, BinaryEntitySet, WildcardTerm,
};
use crate::simulator::{run_noisy, simulate, Histogram, NoiseModel};
use crate::synthesis::{build_grover_circuit, iteration_count, synthesize_phase_oracle, Circuit};
use crate::Error;

/// Seed used when none is configured.
pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SHOTS: u64 = 1024;
pub const DEFAULT_TRIALS: usize = 6;

/// The three loaded entities of the 3-bit walkthrough dataset plus `000`.
pub const TABLE1_DATASET: [&str; 4] = ["000", "010", "011", "111"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub dataset: Vec<String>,
    pub terms: Vec<WildcardTerm>,
}

impl Scenario {
    pub fn new(name: &str, dataset: &[&str], terms: &[&str]) -> Result<Self, Error> {
        Ok(Scenario {
            name: name.to_string(),
            dataset: dataset.iter().map(|s| s.to_string()).collect(),
            terms: terms
                .iter()
                .map(|t| t.parse())
                .collect::<Result<_, _>>()?,
        })
    }
}

/// No-match, one-match and two-match searches over the walkthrough dataset,
/// plus the substring `*1*` search (three matches).
pub fn bundled_scenarios() -> Vec<Scenario> {
    [
        ("no-match", "10*"),
        ("one-match", "00*"),
        ("two-match", "01*"),
        ("substring-1", "*1*"),
    ]
    .iter()
    .map(|(name, term)| Scenario::new(name, &TABLE1_DATASET, &[term]).expect("bundled term"))
    .collect()
}

#[derive(Debug, Clone, Default)]
pub struct CompileOptions {
    pub codec: Option<AlphabetCodec>,
    pub iterations: Option<usize>,
    /// Marks the wrong states before synthesis; exercises the failure path.
    pub corrupt_oracle: bool,
}

#[derive(Debug, Clone)]
pub struct CompiledSearch {
    pub codec: AlphabetCodec,
    pub entities: BinaryEntitySet,
    pub terms: Vec<WildcardTerm>,
    pub expression: BoolExpr,
    /// Truth table of `expression` over the entity bits.
    pub table: TruthTable,
    /// Extra trailing qubits that dilute the marked fraction to at most 1/4.
    pub padding: usize,
    /// `table` extended by `padding` variables, as synthesized.
    pub search_table: TruthTable,
    pub marked: usize,
    pub iterations: usize,
    pub oracle: Circuit,
    pub circuit: Circuit,
}

/// Smallest `p` with `4m <= 2^(n+p)`.
pub fn padding_for(n: usize, m: usize) -> usize {
    let mut p = 0;
    while 4 * m > 1usize << (n + p) {
        p += 1;
    }
    p
}

pub fn compile(
    dataset: &[String],
    terms: &[WildcardTerm],
    opts: &CompileOptions,
) -> Result<CompiledSearch, Error> {
    let codec = match &opts.codec {
        Some(c) => c.clone(),
        None => build_codec(dataset, None)?,
    };
    let entities = encode_dataset(&codec, dataset)?;
    let chars = entities.entity_chars();
    let searches = terms
        .iter()
        .map(|t| encode_term(&codec, t, chars))
        .collect::<Result<Vec<_>, _>>()?;
    let expression = build_oracle_expression(&entities.data_exprs(), &searches)?;
    let n = entities.entity_bit_length();
    let mut table = truth_table(&expression, n)?;
    if opts.corrupt_oracle {
        // mark the bitwise complements of the true matches, or |0..0> when
        // nothing matches
        let last = table.len() - 1;
        let source = table.clone();
        table = TruthTable::from_fn(n, |x| source.get(x ^ last))?;
        if table.count_ones() == 0 {
            table.set(0, true);
        }
    }
    let marked = table.count_ones();
    let padding = padding_for(n, marked);
    let search_table = table.extend_with_zero_vars(padding)?;
    let iterations = match opts.iterations {
        Some(k) => k,
        None => iteration_count(n + padding, marked)?,
    };
    let oracle = synthesize_phase_oracle(&search_table)?;
    let circuit = build_grover_circuit(&oracle, iterations)?;
    Ok(CompiledSearch {
        codec,
        entities,
        terms: terms.to_vec(),
        expression,
        table,
        padding,
        search_table,
        marked,
        iterations,
        oracle,
        circuit,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Match {
    pub bits: String,
    pub string: String,
    pub probability: f64,
}

impl CompiledSearch {
    pub fn qubits(&self) -> usize {
        self.circuit.qubit_count()
    }

    pub fn entity_bits(&self) -> usize {
        self.table.var_count()
    }

    /// Noiseless search: states with padding bits clear whose probability
    /// exceeds uniform, ranked by probability then bit string.
    pub fn ideal_matches(&self) -> Result<Vec<Match>, Error> {
        let probs = simulate(&self.circuit)?.probabilities();
        let uniform = 1.0 / probs.len() as f64;
        let pad_mask = (1usize << self.padding) - 1;
        let n = self.entity_bits();
        let mut out = Vec::new();
        for (x, &p) in probs.iter().enumerate() {
            if x & pad_mask != 0 || p <= uniform + 1e-9 {
                continue;
            }
            let bits = format!("{:0n$b}", x >> self.padding);
            let string = decode_results(std::slice::from_ref(&bits), &self.codec, false)?.remove(0);
            out.push(Match {
                bits,
                string,
                probability: p,
            });
        }
        out.sort_by(|a, b| b.probability.total_cmp(&a.probability).then_with(|| a.bits.cmp(&b.bits)));
        Ok(out)
    }

    /// Drops the padding bits of a reported state; `None` when any of them
    /// is set, since such a state is never marked.
    pub fn strip_padding(&self, state: &str, reversed: bool) -> Option<String> {
        let (pad, rest) = if reversed {
            state.split_at(self.padding)
        } else {
            let (rest, pad) = state.split_at(state.len() - self.padding);
            (pad, rest)
        };
        pad.bytes().all(|b| b == b'0').then(|| rest.to_string())
    }

    /// Strips padding from reported states and decodes them.
    pub fn decode_reported(&self, states: &[String], reversed: bool) -> Result<Vec<String>, Error> {
        let stripped: Vec<String> = states
            .iter()
            .map(|s| self.strip_padding(s, reversed).ok_or(Error::PaddedState(s.clone())))
            .collect::<Result<_, _>>()?;
        Ok(decode_results(&stripped, &self.codec, reversed)?)
    }

    /// [`verify_against_classical`] on states with the padding removed.
    pub fn verify(
        &self,
        report: &TrialReport,
        expected: &BTreeSet<String>,
        reversed: bool,
    ) -> Verification {
        let Verdict::Consistent(states) = &report.verdict else {
            return verify_against_classical(report, expected, &self.codec, reversed);
        };
        let stripped: Option<BTreeSet<String>> = states
            .iter()
            .map(|s| self.strip_padding(s, reversed))
            .collect();
        match stripped {
            Some(states) => {
                let report = TrialReport {
                    verdict: Verdict::Consistent(states),
                    ..report.clone()
                };
                verify_against_classical(&report, expected, &self.codec, reversed)
            }
            None => Verification::Fail,
        }
    }
}

/// Per-trial seeds derived from the master seed and the scenario position.
pub fn trial_seeds(master: u64, scenario: usize, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(scenario as u64 + 1);
    (0..trials).map(|_| rng.gen()).collect()
}

#[derive(Debug, Clone)]
pub struct TrialSettings {
    pub shots: u64,
    pub trials: usize,
    pub seed: u64,
    pub noise: NoiseModel,
    pub reversed: bool,
}

impl Default for TrialSettings {
    fn default() -> Self {
        TrialSettings {
            shots: DEFAULT_SHOTS,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            noise: NoiseModel::default(),
            reversed: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub scenario: Scenario,
    pub compiled: CompiledSearch,
    pub expected: BTreeSet<String>,
    /// Histograms in reported bit order.
    pub histograms: Vec<Histogram>,
    pub report: TrialReport,
    pub decoded: Vec<String>,
    pub verification: Verification,
}

/// Runs `settings.trials` simulated trials of one scenario and judges them
/// against the classical matcher. `k` is the classical match count, or 1 when
/// nothing matches.
pub fn run_scenario(
    scenario: &Scenario,
    index: usize,
    opts: &CompileOptions,
    settings: &TrialSettings,
) -> Result<ScenarioOutcome, Error> {
    let compiled = compile(&scenario.dataset, &scenario.terms, opts)?;
    let expected = classical_match(&scenario.dataset, &scenario.terms);
    let histograms = trial_seeds(settings.seed, index, settings.trials)
        .into_iter()
        .map(|seed| {
            let h = run_noisy(&compiled.circuit, &settings.noise, settings.shots, seed)?;
            Ok(if settings.reversed { h.reversed() } else { h })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let k = expected.len().max(1);
    let report = consistency(&histograms, k)?;
    let decoded = compiled.decode_reported(&report.states(), settings.reversed)?;
    let verification = compiled.verify(&report, &expected, settings.reversed);
    Ok(ScenarioOutcome {
        scenario: scenario.clone(),
        compiled,
        expected,
        histograms,
        report,
        decoded,
        verification,
    })
}
