//! The `gw` command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{write_trials_csv, ReportJson, Verification};
use crate::encoding::{build_codec, encode_dataset, parse_dataset, AlphabetCodec, WildcardTerm};
use crate::pipeline::{
    bundled_scenarios, compile, run_scenario, CompileOptions, Scenario, ScenarioOutcome,
    TrialSettings, DEFAULT_SEED, DEFAULT_SHOTS, DEFAULT_TRIALS,
};
use crate::simulator::NoiseModel;
use crate::synthesis::gate_stats;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gw",
    version,
    about = "Compile wildcard string searches into Grover phase oracles and simulate them"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the codec and binary entities of a dataset
    Encode(RunConfig),
    /// Build the oracle expression and circuits for search terms
    Compile(RunConfig),
    /// Noiseless search; prints matched strings with probabilities
    Search(RunConfig),
    /// Compare simulated trials against the classical matcher
    Verify(RunConfig),
    /// Noisy multi-trial runs with top-k consistency analysis
    Experiment(RunConfig),
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Dataset file, one string per line
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Search term: `ab*` prefix, `*ab` suffix, `*ab*` substring, `ab` exact
    #[arg(long = "term")]
    pub terms: Vec<String>,
    /// Codec JSON: {"width": w, "code": {"a": "0", ...}}
    #[arg(long)]
    pub codec: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SHOTS, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, env = "GW_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Depolarizing and readout probabilities: p1,p2,readout
    #[arg(long, value_parser = parse_noise)]
    pub noise: Option<NoiseModel>,
    /// Grover rounds instead of the computed count
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Report bit strings in qubit order instead of reversed
    #[arg(long)]
    pub no_reverse: bool,
    /// Also write an OpenQASM 2.0 file (compile)
    #[arg(long)]
    pub emit_qasm: bool,
    /// Output directory for artifacts
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, hide = true)]
    pub corrupt_oracle: bool,
}

fn parse_noise(s: &str) -> Result<NoiseModel, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        &[p1, p2, readout] => NoiseModel::new(p1, p2, readout).map_err(|e| e.to_string()),
        _ => Err("expected three comma-separated probabilities p1,p2,readout".into()),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Encode(cfg) => cmd_encode(cfg, stdout, stderr),
        Command::Compile(cfg) => cmd_compile(cfg, stdout, stderr),
        Command::Search(cfg) => cmd_search(cfg, stdout),
        Command::Verify(cfg) => cmd_verify(cfg, stdout),
        Command::Experiment(cfg) => cmd_experiment(cfg, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

// Everything is rendered before anything is written; each file goes to a
// temporary name first and is renamed into place.
fn write_artifacts(dir: &Path, files: &[(&str, String)]) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for (name, body) in files {
        let target = dir.join(name);
        let tmp = dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, body).map_err(io_err(&tmp))?;
        fs::rename(&tmp, &target).map_err(io_err(&target))?;
    }
    Ok(())
}

fn load_dataset(cfg: &RunConfig) -> Result<Vec<String>, Error> {
    let path = cfg
        .data
        .as_ref()
        .ok_or_else(|| Error::Usage("--data is required".into()))?;
    Ok(parse_dataset(&read_file(path)?))
}

fn load_codec(cfg: &RunConfig) -> Result<Option<AlphabetCodec>, Error> {
    cfg.codec
        .as_ref()
        .map(|p| Ok(AlphabetCodec::from_json(&read_file(p)?)?))
        .transpose()
}

fn parse_terms(cfg: &RunConfig) -> Result<Vec<WildcardTerm>, Error> {
    if cfg.terms.is_empty() {
        return Err(Error::Usage("at least one --term is required".into()));
    }
    Ok(cfg
        .terms
        .iter()
        .map(|t| t.parse())
        .collect::<Result<_, _>>()?)
}

fn compile_options(cfg: &RunConfig) -> Result<CompileOptions, Error> {
    Ok(CompileOptions {
        codec: load_codec(cfg)?,
        iterations: cfg.iterations,
        corrupt_oracle: cfg.corrupt_oracle,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

pub fn cmd_encode(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let dataset = load_dataset(cfg)?;
    let codec = match load_codec(cfg)? {
        Some(c) => c,
        None => build_codec(&dataset, None)?,
    };
    let set = encode_dataset(&codec, &dataset)?;
    if set.duplicates_dropped() {
        let _ = writeln!(err, "warning: duplicate dataset strings dropped");
    }
    let codec_json = to_json(&codec.to_file());
    let entities: String = set
        .entities()
        .iter()
        .map(|e| format!("{e}\n"))
        .collect();
    let _ = writeln!(out, "width: {}", codec.width());
    for &ch in codec.symbols() {
        let _ = writeln!(out, "  {ch:?} -> {}", codec.code_of(ch).unwrap_or_default());
    }
    let _ = writeln!(out, "entities ({} x {} bits):", set.entities().len(), set.entity_bit_length());
    let _ = write!(out, "{entities}");
    if let Some(dir) = &cfg.out {
        write_artifacts(dir, &[("codec.json", codec_json), ("entities.txt", entities)])?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CompileSummary {
    expression: String,
    entity_bits: usize,
    padding: usize,
    qubits: usize,
    marked: usize,
    iterations: usize,
    anf: String,
    oracle_stats: crate::synthesis::GateStats,
    circuit_stats: crate::synthesis::GateStats,
}

pub fn cmd_compile(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let dataset = load_dataset(cfg)?;
    let terms = parse_terms(cfg)?;
    let c = compile(&dataset, &terms, &compile_options(cfg)?)?;
    let summary = CompileSummary {
        expression: c.expression.render(),
        entity_bits: c.entity_bits(),
        padding: c.padding,
        qubits: c.qubits(),
        marked: c.marked,
        iterations: c.iterations,
        anf: crate::boolexpr::anf(&c.search_table).to_string(),
        oracle_stats: gate_stats(&c.oracle),
        circuit_stats: gate_stats(&c.circuit),
    };
    if c.marked == 0 {
        let _ = writeln!(
            err,
            "warning: no entity matches; the circuit is a control and its output stays uniform"
        );
    }
    let _ = writeln!(out, "expression: {}", summary.expression);
    let _ = writeln!(
        out,
        "n = {} (+{} padding), m = {}, iterations = {}",
        summary.entity_bits, summary.padding, summary.marked, summary.iterations
    );
    let _ = writeln!(out, "anf: {}", summary.anf);
    let _ = writeln!(out, "oracle: {}", c.oracle.to_json());
    let _ = writeln!(out, "circuit depth: {}, gates: {}", summary.circuit_stats.depth, c.circuit.gates().len());
    if let Some(dir) = &cfg.out {
        let mut files = vec![
            ("expression.txt", format!("{}\n", summary.expression)),
            ("oracle.json", format!("{}\n", c.oracle.to_json())),
            ("circuit.json", format!("{}\n", c.circuit.to_json())),
            ("summary.json", to_json(&summary)),
        ];
        if cfg.emit_qasm {
            files.push(("circuit.qasm", c.circuit.to_qasm()));
        }
        write_artifacts(dir, &files)?;
    } else if cfg.emit_qasm {
        let _ = write!(out, "{}", c.circuit.to_qasm());
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SearchResult {
    terms: Vec<String>,
    qubits: usize,
    marked: usize,
    iterations: usize,
    matches: Vec<crate::pipeline::Match>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

pub fn cmd_search(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, Error> {
    let dataset = load_dataset(cfg)?;
    let terms = parse_terms(cfg)?;
    let c = compile(&dataset, &terms, &compile_options(cfg)?)?;
    let matches = c.ideal_matches()?;
    let result = SearchResult {
        terms: terms.iter().map(ToString::to_string).collect(),
        qubits: c.qubits(),
        marked: c.marked,
        iterations: c.iterations,
        note: matches
            .is_empty()
            .then_some("no state rises above the uniform distribution"),
        matches,
    };
    let body = to_json(&result);
    let _ = write!(out, "{body}");
    if let Some(dir) = &cfg.out {
        write_artifacts(dir, &[("search.json", body)])?;
    }
    Ok(EXIT_OK)
}

fn scenarios(cfg: &RunConfig) -> Result<Vec<Scenario>, Error> {
    if cfg.data.is_none() {
        if !cfg.terms.is_empty() {
            return Err(Error::Usage("--term needs --data".into()));
        }
        return Ok(bundled_scenarios());
    }
    let dataset = load_dataset(cfg)?;
    Ok(parse_terms(cfg)?
        .into_iter()
        .map(|t| Scenario {
            name: t.to_string(),
            dataset: dataset.clone(),
            terms: vec![t],
        })
        .collect())
}

fn run_all(cfg: &RunConfig, noise: NoiseModel) -> Result<Vec<ScenarioOutcome>, Error> {
    if cfg.trials < 2 {
        return Err(Error::Usage(format!(
            "--trials {} is too few; consistency needs at least 2",
            cfg.trials
        )));
    }
    let settings = TrialSettings {
        shots: cfg.shots,
        trials: cfg.trials,
        seed: cfg.seed,
        noise,
        reversed: !cfg.no_reverse,
    };
    let opts = compile_options(cfg)?;
    scenarios(cfg)?
        .iter()
        .enumerate()
        .map(|(i, s)| run_scenario(s, i, &opts, &settings))
        .collect()
}

#[derive(Serialize)]
struct ScenarioJson<'a> {
    scenario: &'a str,
    terms: Vec<String>,
    expected: Vec<String>,
    verification: Verification,
    #[serde(flatten)]
    report: ReportJson<'a>,
}

fn outcomes_json(outcomes: &[ScenarioOutcome]) -> String {
    let items: Vec<ScenarioJson<'_>> = outcomes
        .iter()
        .map(|o| ScenarioJson {
            scenario: &o.scenario.name,
            terms: o.scenario.terms.iter().map(ToString::to_string).collect(),
            expected: o.expected.iter().cloned().collect(),
            verification: o.verification,
            report: o.report.to_json_value(o.decoded.clone()),
        })
        .collect();
    to_json(&items)
}

fn verdict_line(o: &ScenarioOutcome) -> String {
    let label = match o.verification {
        Verification::Pass => "PASS",
        Verification::ControlPass => "CONTROL_PASS",
        Verification::Fail => "FAIL",
    };
    let states = o.report.states();
    format!(
        "{label} {} [{}] expected {:?} got {:?} (states {:?}, mass {:.3} vs {:.3})",
        o.scenario.name,
        o.scenario
            .terms
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        o.expected,
        o.decoded,
        states,
        o.report.mean_mass,
        o.report.threshold,
    )
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, Error> {
    let outcomes = run_all(cfg, cfg.noise.unwrap_or(NoiseModel::IDEAL))?;
    for o in &outcomes {
        let _ = writeln!(out, "{}", verdict_line(o));
    }
    if let Some(dir) = &cfg.out {
        write_artifacts(dir, &[("verify.json", outcomes_json(&outcomes))])?;
    }
    Ok(if outcomes.iter().all(|o| o.verification.ok()) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

pub fn cmd_experiment(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, Error> {
    let outcomes = run_all(cfg, cfg.noise.unwrap_or_default())?;
    let rows: Vec<(String, &crate::analysis::TrialReport)> = outcomes
        .iter()
        .map(|o| (o.scenario.name.clone(), &o.report))
        .collect();
    let mut csv = Vec::new();
    write_trials_csv(&mut csv, &rows).map_err(|e| Error::Usage(e.to_string()))?;
    let csv = String::from_utf8(csv).expect("csv is utf-8");
    for o in &outcomes {
        let _ = writeln!(out, "{}", verdict_line(o));
    }
    let _ = write!(out, "{csv}");
    if let Some(dir) = &cfg.out {
        write_artifacts(dir, &[("experiment.csv", csv), ("report.json", outcomes_json(&outcomes))])?;
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_flag() {
        let n = parse_noise("0.001,0.01,0.02").unwrap();
        assert_eq!(n, NoiseModel::default());
        assert!(parse_noise("0.1,0.2").is_err());
        assert!(parse_noise("0.1,0.2,2").is_err());
        assert!(parse_noise("a,b,c").is_err());
    }

    #[test]
    fn usage_errors() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["gw", "frobnicate"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["gw", "search", "--iterations", "-1"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["gw", "compile"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["gw", "--help"], &mut out, &mut err), EXIT_OK);
    }
}
