//! Ranking measured states and judging multi-trial consistency.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::encoding::{decode_bits, AlphabetCodec, EncodingError};
use crate::simulator::Histogram;

/// Mass on the agreed set must exceed this multiple of the uniform mass
/// `k / 2^n` for a verdict to be consistent.
pub const UNIFORM_MASS_FACTOR: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("k = {k} outside 1..={states}")]
    KOutOfRange { k: usize, states: usize },
    #[error("consistency needs at least 2 trials, got {0}")]
    TooFewTrials(usize),
    #[error("histogram is empty")]
    EmptyHistogram,
    #[error("trials disagree on qubit count")]
    MixedWidths,
    #[error(transparent)]
    Decode(#[from] EncodingError),
}

pub type Ranked = Vec<(String, f64)>;

/// The `k` most frequent states, by descending count then ascending bit
/// string. States never observed fill in with probability 0.
pub fn top_k(h: &Histogram, k: usize) -> Result<Ranked, AnalysisError> {
    let n = h.qubit_count();
    if n == 0 || h.shots == 0 {
        return Err(AnalysisError::EmptyHistogram);
    }
    let states = 1usize.checked_shl(n as u32).unwrap_or(usize::MAX);
    if k == 0 || k > states {
        return Err(AnalysisError::KOutOfRange { k, states });
    }
    let mut ranked: Vec<(&String, u64)> = h.counts.iter().map(|(s, &c)| (s, c)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let mut out: Ranked = ranked
        .into_iter()
        .take(k)
        .map(|(s, c)| (s.clone(), c as f64 / h.shots as f64))
        .collect();
    let mut x = 0usize;
    while out.len() < k {
        let bits = format!("{x:0n$b}");
        if !h.counts.contains_key(&bits) {
            out.push((bits, 0.0));
        }
        x += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Consistent(BTreeSet<String>),
    Inconsistent(Vec<BTreeSet<String>>),
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub k: usize,
    pub trials: Vec<Ranked>,
    pub verdict: Verdict,
    /// Mean over trials of each trial's top-k probability mass.
    pub mean_mass: f64,
    /// Mass the agreed set had to exceed.
    pub threshold: f64,
}

/// Consistent when every trial's top-`k` set is the same set `S` and the
/// mean probability on `S` exceeds twice the uniform mass.
pub fn consistency(trials: &[Histogram], k: usize) -> Result<TrialReport, AnalysisError> {
    if trials.len() < 2 {
        return Err(AnalysisError::TooFewTrials(trials.len()));
    }
    let n = trials[0].qubit_count();
    if trials.iter().any(|h| h.qubit_count() != n) {
        return Err(AnalysisError::MixedWidths);
    }
    let ranked = trials
        .iter()
        .map(|h| top_k(h, k))
        .collect::<Result<Vec<_>, _>>()?;
    let sets: Vec<BTreeSet<String>> = ranked
        .iter()
        .map(|r| r.iter().map(|(s, _)| s.clone()).collect())
        .collect();

    // sorted summation keeps the mean independent of trial order
    let mut masses: Vec<f64> = ranked
        .iter()
        .map(|r| r.iter().map(|(_, p)| p).sum())
        .collect();
    masses.sort_by(f64::total_cmp);
    let mean_mass = masses.iter().sum::<f64>() / masses.len() as f64;
    let threshold = UNIFORM_MASS_FACTOR * k as f64 / (1u64 << n) as f64;

    let agreed = sets.iter().all(|s| *s == sets[0]);
    let verdict = if agreed && mean_mass > threshold {
        Verdict::Consistent(sets[0].clone())
    } else {
        Verdict::Inconsistent(sets)
    };
    Ok(TrialReport {
        k,
        trials: ranked,
        verdict,
        mean_mass,
        threshold,
    })
}

/// Decodes measured bit strings, reversing each first when `reversed`.
pub fn decode_results(
    states: &[String],
    codec: &AlphabetCodec,
    reversed: bool,
) -> Result<Vec<String>, AnalysisError> {
    states
        .iter()
        .map(|s| {
            let bits: String = if reversed {
                s.chars().rev().collect()
            } else {
                s.clone()
            };
            Ok(decode_bits(codec, &bits)?)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verification {
    Pass,
    Fail,
    ControlPass,
}

impl Verification {
    pub fn ok(self) -> bool {
        self != Verification::Fail
    }
}

pub fn verify_against_classical(
    report: &TrialReport,
    expected: &BTreeSet<String>,
    codec: &AlphabetCodec,
    reversed: bool,
) -> Verification {
    match &report.verdict {
        Verdict::Consistent(states) => {
            let states: Vec<String> = states.iter().cloned().collect();
            match decode_results(&states, codec, reversed) {
                Ok(decoded) if decoded.iter().cloned().collect::<BTreeSet<_>>() == *expected => {
                    Verification::Pass
                }
                _ => Verification::Fail,
            }
        }
        Verdict::Inconsistent(_) if expected.is_empty() => Verification::ControlPass,
        Verdict::Inconsistent(_) => Verification::Fail,
    }
}

#[derive(Serialize)]
pub struct ReportJson<'a> {
    pub k: usize,
    pub trials: &'a [Ranked],
    pub verdict: &'static str,
    pub states: Vec<String>,
    pub decoded: Vec<String>,
}

impl TrialReport {
    /// States of a consistent verdict, otherwise empty.
    pub fn states(&self) -> Vec<String> {
        match &self.verdict {
            Verdict::Consistent(s) => s.iter().cloned().collect(),
            Verdict::Inconsistent(_) => Vec::new(),
        }
    }

    pub fn to_json_value(&self, decoded: Vec<String>) -> ReportJson<'_> {
        ReportJson {
            k: self.k,
            trials: &self.trials,
            verdict: if self.verdict.is_consistent() {
                "consistent"
            } else {
                "inconsistent"
            },
            states: self.states(),
            decoded,
        }
    }
}

/// One CSV row per trial: `trial,scenario,states` with states written as
/// `011 (0.464); 010 (0.351)`.
pub fn write_trials_csv<W: std::io::Write>(
    out: W,
    rows: &[(String, &TrialReport)],
) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trial", "scenario", "states"])?;
    for (scenario, report) in rows {
        for (i, ranked) in report.trials.iter().enumerate() {
            let cells: Vec<String> = ranked.iter().map(|(s, p)| format!("{s} ({p:.3})")).collect();
            w.write_record([(i + 1).to_string(), scenario.clone(), cells.join("; ")])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::build_codec;
    use std::collections::BTreeMap;

    fn hist(pairs: &[(&str, u64)]) -> Histogram {
        Histogram {
            shots: pairs.iter().map(|p| p.1).sum(),
            counts: pairs.iter().map(|&(s, c)| (s.to_string(), c)).collect(),
        }
    }

    /// A 1000-shot trial whose leading states carry the given probabilities,
    /// with the remainder spread over the other states.
    fn trial(top: &[(&str, f64)]) -> Histogram {
        let mut counts: BTreeMap<String, u64> = top
            .iter()
            .map(|&(s, p)| (s.to_string(), (p * 1000.0).round() as u64))
            .collect();
        let used: u64 = counts.values().sum();
        let rest: Vec<String> = (0..8)
            .map(|x| format!("{x:03b}"))
            .filter(|s| !counts.contains_key(s))
            .collect();
        let share = (1000 - used) / rest.len() as u64;
        let mut left = 1000 - used;
        for (i, s) in rest.iter().enumerate() {
            let c = if i + 1 == rest.len() { left } else { share };
            left -= c;
            counts.insert(s.clone(), c);
        }
        Histogram {
            shots: 1000,
            counts,
        }
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ranking() {
        let h = hist(&[("011", 464), ("010", 351), ("000", 100), ("111", 85)]);
        let r = top_k(&h, 2).unwrap();
        assert_eq!(r, vec![("011".to_string(), 0.464), ("010".to_string(), 0.351)]);

        let h = trial(&[("000", 0.179)]);
        assert_eq!(top_k(&h, 1).unwrap(), vec![("000".to_string(), 0.179)]);

        let h = hist(&[("010", 5), ("001", 5), ("111", 1)]);
        assert_eq!(top_k(&h, 2).unwrap()[0].0, "001");
        let all = top_k(&h, 8).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all[3], ("000".to_string(), 0.0));
        assert!(top_k(&h, 0).is_err());
        assert!(top_k(&h, 9).is_err());
    }

    #[test]
    fn trapped_ion_two_match_column() {
        let trials: Vec<Histogram> = [
            (0.464, 0.351),
            (0.468, 0.365),
            (0.466, 0.367),
            (0.454, 0.381),
            (0.456, 0.370),
            (0.431, 0.387),
        ]
        .iter()
        .map(|&(a, b)| trial(&[("011", a), ("010", b)]))
        .collect();
        let r = consistency(&trials, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent(set(&["011", "010"])));
        assert_eq!(r.trials[0][0], ("011".to_string(), 0.464));
    }

    #[test]
    fn trapped_ion_control_column() {
        let trials: Vec<Histogram> = [
            ("101", 0.148),
            ("001", 0.165),
            ("111", 0.161),
            ("101", 0.164),
            ("111", 0.190),
            ("111", 0.187),
        ]
        .iter()
        .map(|&(s, p)| trial(&[(s, p)]))
        .collect();
        let r = consistency(&trials, 1).unwrap();
        assert!(!r.verdict.is_consistent());
        if let Verdict::Inconsistent(sets) = &r.verdict {
            assert_eq!(sets[1], set(&["001"]));
        }
    }

    #[test]
    fn one_match_columns() {
        // winners agree in both columns; only the superconducting column
        // clears twice the uniform mass of 1/8
        let ion: Vec<Histogram> = [0.179, 0.188, 0.197, 0.182, 0.175, 0.215]
            .iter()
            .map(|&p| trial(&[("000", p)]))
            .collect();
        let r = consistency(&ion, 1).unwrap();
        assert!((r.mean_mass - 0.189333).abs() < 1e-6);
        assert_eq!(r.verdict, Verdict::Inconsistent(vec![set(&["000"]); 6]));

        let sc: Vec<Histogram> = [0.210, 0.284, 0.381, 0.380, 0.186, 0.321]
            .iter()
            .map(|&p| trial(&[("000", p)]))
            .collect();
        let r = consistency(&sc, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent(set(&["000"])));
    }

    #[test]
    fn needs_two_trials() {
        let h = trial(&[("000", 0.9)]);
        assert_eq!(
            consistency(&[h], 1).unwrap_err(),
            AnalysisError::TooFewTrials(1)
        );
    }

    #[test]
    fn decoding() {
        let c = build_codec(&["ab".to_string()], None).unwrap();
        assert_eq!(decode_results(&["110".into()], &c, true).unwrap(), vec!["abb"]);
        assert_eq!(decode_results(&["010".into()], &c, true).unwrap(), vec!["aba"]);
        let three = build_codec(&["abc".to_string()], None).unwrap();
        assert!(decode_results(&["11".into()], &three, false).is_err());
    }

    #[test]
    fn verification() {
        let id = build_codec(&["01".to_string()], None).unwrap();
        let report = |verdict| TrialReport {
            k: 2,
            trials: vec![],
            verdict,
            mean_mass: 0.0,
            threshold: 0.0,
        };
        let pass = report(Verdict::Consistent(set(&["010", "011"])));
        assert_eq!(
            verify_against_classical(&pass, &set(&["010", "011"]), &id, false),
            Verification::Pass
        );
        let control = report(Verdict::Inconsistent(vec![]));
        assert_eq!(
            verify_against_classical(&control, &BTreeSet::new(), &id, false),
            Verification::ControlPass
        );
        assert_eq!(
            verify_against_classical(&control, &set(&["000"]), &id, false),
            Verification::Fail
        );
        let wrong = report(Verdict::Consistent(set(&["111"])));
        assert_eq!(
            verify_against_classical(&wrong, &set(&["000"]), &id, false),
            Verification::Fail
        );
    }

    #[test]
    fn csv_rows() {
        let trials = vec![trial(&[("011", 0.464), ("010", 0.351)]); 2];
        let r = consistency(&trials, 2).unwrap();
        let mut buf = Vec::new();
        write_trials_csv(&mut buf, &[("two-match".into(), &r)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().collect::<Vec<_>>(),
            [
                "trial,scenario,states",
                "1,two-match,011 (0.464); 010 (0.351)",
                "2,two-match,011 (0.464); 010 (0.351)"
            ]
        );
    }
}
