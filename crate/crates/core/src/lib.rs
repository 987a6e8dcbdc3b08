//! Wildcard string search compiled to Grover phase oracles.
//!
//! A dataset of equal-length strings is encoded into fixed-width binary
//! entities, prefix/suffix/substring terms become a boolean oracle
//! expression, and the expression is synthesized through its algebraic
//! normal form into a gate-level phase oracle. The resulting Grover circuit
//! runs on a dense statevector simulator, optionally under depolarizing and
//! readout noise, and multi-trial results are checked against a plain
//! string matcher.
//!
//! Modules, bottom up:
//!
//! - [`boolexpr`]: expression AST, parser, DIMACS CNF, truth tables, ANF
//! - [`encoding`]: codecs, binary entities, wildcard terms, oracle expression
//! - [`synthesis`]: phase oracle, diffusion, Grover circuit, gate stats
//! - [`simulator`]: statevector, measurement, noisy trajectories
//! - [`analysis`]: top-k ranking, trial consistency, verification
//! - [`pipeline`] and [`cli`]: the end-to-end flow and the `gw` binary

pub mod analysis;
pub mod boolexpr;
pub mod cli;
pub mod encoding;
pub mod pipeline;
pub mod simulator;
pub mod synthesis;

use thiserror::Error;

pub use analysis::{consistency, top_k, TrialReport, Verdict, Verification};
pub use boolexpr::{anf, parse, parse_dimacs_cnf, truth_table, AnfForm, BoolExpr, TruthTable};
pub use encoding::{build_codec, classical_match, AlphabetCodec, BinaryEntity, WildcardTerm};
pub use simulator::{measure, run_noisy, simulate, Histogram, NoiseModel, Statevector};
pub use synthesis::{build_diffusion, build_grover_circuit, synthesize_phase_oracle, Circuit, Gate};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] boolexpr::ExprError),
    #[error(transparent)]
    Encoding(#[from] encoding::EncodingError),
    #[error(transparent)]
    Synthesis(#[from] synthesis::SynthesisError),
    #[error(transparent)]
    Sim(#[from] simulator::SimError),
    #[error(transparent)]
    Analysis(#[from] analysis::AnalysisError),
    #[error("state {0} has padding qubits set")]
    PaddedState(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
