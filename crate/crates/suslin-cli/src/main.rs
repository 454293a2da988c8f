//! Command-line front end: parses polynomial and word grammars, runs the
//! factorization / verification / cocycle / fuzz jobs, and emits
//! deterministic JSON reports (schema 1).
//!
//! Exit codes: 0 on success or a verified witness, 1 when verification or a
//! randomized suite fails, 2 on input errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use suslin::chevalley::{minimal_subring_generators, parse_word};
use suslin::cocycle::{
    cocycle_defect, derivation_cocycle, is_in_kernel, reduce_at_zero_value, CocycleValue,
};
use suslin::factorization::{conj_decompose, verify_witness, FactorizationWitness, VerifyStatus};
use suslin::fuzz::{commutator_relation_suite, SuiteReport};
use suslin::matrix::SqMatrix;
use suslin::ring::{parse_poly, CoeffSpec, RingCtx};
use suslin::symplectic::{parse_sp_word, sp_relations_fuzz};

#[derive(Parser)]
#[command(
    name = "suslin",
    version,
    about = "Exact computation in elementary Chevalley groups over polynomial rings",
    long_about = None
)]
struct Cli {
    /// Matrix dimension n; symplectic words use n as the half-dimension
    #[arg(long, default_value_t = 3, global = true)]
    n: usize,

    /// Number of polynomial variables k (variables are named x1..xk)
    #[arg(long, default_value_t = 1, global = true)]
    vars: usize,

    /// Work over Z/m instead of Z (m >= 2)
    #[arg(long = "mod", value_name = "M", global = true)]
    modulus: Option<u64>,

    /// Seed driving all randomness
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    /// Trial count for randomized commands
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    trials: u64,

    /// Write the report to this file instead of stdout
    #[arg(long, value_name = "PATH", global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a word (type A `E(i,j;poly)` tokens, or symplectic
    /// `SpL/SpU/SpD/SpM+/SpM-` tokens) and print its matrix
    Eval { word: String },
    /// Factor `GAMMA e_{i,j}(POLY) GAMMA^-1` into elementary matrices and
    /// emit the verified witness document
    ConjugateFactor {
        gamma: String,
        i: usize,
        j: usize,
        poly: String,
    },
    /// Re-verify a witness file by exact multiplication
    Verify { witness_file: PathBuf },
    /// Run the randomized type-A and type-C relation suites
    RelationsFuzz,
    /// Substitution value, derivation value, and kernel membership of a
    /// type-A word over Z[x1]
    Cocycle { word: String },
    /// The distinct ring parameters appearing in a type-A word
    Subring { word: String },
    /// Measure the derivation-cocycle defect over sample word pairs
    Defect { samples_file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Eval { word } => cmd_eval(cli, word),
        Command::ConjugateFactor { gamma, i, j, poly } => {
            cmd_conjugate_factor(cli, gamma, *i, *j, poly)
        }
        Command::Verify { witness_file } => cmd_verify(cli, witness_file),
        Command::RelationsFuzz => cmd_relations_fuzz(cli),
        Command::Cocycle { word } => cmd_cocycle(cli, word),
        Command::Subring { word } => cmd_subring(cli, word),
        Command::Defect { samples_file } => cmd_defect(cli, samples_file),
    }
}

fn ring_ctx(cli: &Cli) -> Result<RingCtx> {
    let coeff = match cli.modulus {
        None => CoeffSpec::Integers,
        Some(m) => CoeffSpec::modular(m)?,
    };
    Ok(RingCtx::new(coeff, cli.vars))
}

fn emit(cli: &Cli, report: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    emit_raw(cli, &text)
}

fn emit_raw(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn matrix_rows(m: &SqMatrix) -> Vec<Vec<String>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| m.entry(i, j).to_string()).collect())
        .collect()
}

fn int_matrix_rows(m: &CocycleValue) -> Vec<Vec<String>> {
    m.rows()
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.to_string()).collect())
        .collect()
}

#[derive(Serialize)]
struct RingReport {
    k: usize,
    coeff: String,
}

impl RingReport {
    fn new(ctx: RingCtx) -> Self {
        RingReport {
            k: ctx.vars,
            coeff: match ctx.coeff {
                CoeffSpec::Integers => "integers".to_string(),
                CoeffSpec::Mod(m) => format!("mod {m}"),
            },
        }
    }
}

#[derive(Serialize)]
struct EvalReport {
    schema: u32,
    command: &'static str,
    dimension: usize,
    ring: RingReport,
    word_length: usize,
    matrix: Vec<Vec<String>>,
}

fn cmd_eval(cli: &Cli, word: &str) -> Result<u8> {
    let ctx = ring_ctx(cli)?;
    let toks: Vec<&str> = word.split_ascii_whitespace().collect();
    let symplectic = toks.iter().any(|t| t.starts_with("Sp"));
    let type_a = toks.iter().any(|t| !t.starts_with("Sp"));
    if symplectic && type_a {
        bail!("a word must use only type-A tokens or only symplectic tokens");
    }
    let (matrix, length) = if symplectic {
        let w = parse_sp_word(word, ctx, cli.n)?;
        (w.eval(), w.len())
    } else {
        let w = parse_word(word, ctx, cli.n)?;
        (w.eval(), w.len())
    };
    let report = EvalReport {
        schema: 1,
        command: "eval",
        dimension: matrix.dim(),
        ring: RingReport::new(ctx),
        word_length: length,
        matrix: matrix_rows(&matrix),
    };
    emit(cli, &report)?;
    Ok(0)
}

fn cmd_conjugate_factor(cli: &Cli, gamma: &str, i: usize, j: usize, poly: &str) -> Result<u8> {
    let ctx = ring_ctx(cli)?;
    let gamma = parse_word(gamma, ctx, cli.n)?;
    let a = parse_poly(poly, ctx)?;
    let witness = conj_decompose(&gamma, i, j, &a)?;
    let verified = witness.verified() == VerifyStatus::Yes;
    emit_raw(cli, &witness.to_json())?;
    Ok(if verified { 0 } else { 1 })
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    command: &'static str,
    word_length: usize,
    claimed_bound: usize,
    length_within_bound: bool,
    product_matches: bool,
    verified: String,
}

fn cmd_verify(cli: &Cli, witness_file: &PathBuf) -> Result<u8> {
    let text = fs::read_to_string(witness_file)
        .with_context(|| format!("reading {}", witness_file.display()))?;
    let witness = FactorizationWitness::from_json(&text)?;
    let length_ok = witness.word().len() <= witness.claimed_bound();
    let product_ok = witness.word().eval() == *witness.target();
    let verified = verify_witness(&witness);
    let report = VerifyReport {
        schema: 1,
        command: "verify",
        word_length: witness.word().len(),
        claimed_bound: witness.claimed_bound(),
        length_within_bound: length_ok,
        product_matches: product_ok,
        verified: if verified { "yes" } else { "no" }.to_string(),
    };
    emit(cli, &report)?;
    Ok(if verified { 0 } else { 1 })
}

#[derive(Serialize)]
struct SuiteSection {
    trials: u64,
    passes: u64,
    failures: u64,
    first_failure: Option<String>,
}

impl From<SuiteReport> for SuiteSection {
    fn from(r: SuiteReport) -> Self {
        SuiteSection {
            trials: r.trials,
            passes: r.passes,
            failures: r.failures,
            first_failure: r.first_failure,
        }
    }
}

#[derive(Serialize)]
struct FuzzReport {
    schema: u32,
    command: &'static str,
    dimension: usize,
    ring: RingReport,
    seed: u64,
    trials: u64,
    type_a: SuiteSection,
    type_c: SuiteSection,
    all_passed: bool,
}

fn cmd_relations_fuzz(cli: &Cli) -> Result<u8> {
    let ctx = ring_ctx(cli)?;
    let type_a = commutator_relation_suite(ctx, cli.n, cli.seed, cli.trials)?;
    let type_c = sp_relations_fuzz(ctx, cli.n, cli.seed, cli.trials)?;
    let all_passed = type_a.all_passed() && type_c.all_passed();
    let report = FuzzReport {
        schema: 1,
        command: "relations-fuzz",
        dimension: cli.n,
        ring: RingReport::new(ctx),
        seed: cli.seed,
        trials: cli.trials,
        type_a: type_a.into(),
        type_c: type_c.into(),
        all_passed,
    };
    emit(cli, &report)?;
    Ok(if all_passed { 0 } else { 1 })
}

fn require_zx(cli: &Cli) -> Result<RingCtx> {
    if cli.modulus.is_some() || cli.vars != 1 {
        bail!("the derivation cocycle is defined over Z[x1]: use --vars 1 without --mod");
    }
    Ok(RingCtx::integer(1))
}

#[derive(Serialize)]
struct CocycleReport {
    schema: u32,
    command: &'static str,
    dimension: usize,
    pi: Vec<Vec<String>>,
    c: Vec<Vec<String>>,
    in_kernel: bool,
}

fn cmd_cocycle(cli: &Cli, word: &str) -> Result<u8> {
    let ctx = require_zx(cli)?;
    let w = parse_word(word, ctx, cli.n)?;
    let m = w.eval();
    let report = CocycleReport {
        schema: 1,
        command: "cocycle",
        dimension: cli.n,
        pi: int_matrix_rows(&reduce_at_zero_value(&m)?),
        c: int_matrix_rows(&derivation_cocycle(&m)?),
        in_kernel: is_in_kernel(&m)?,
    };
    emit(cli, &report)?;
    Ok(0)
}

#[derive(Serialize)]
struct SubringReport {
    schema: u32,
    command: &'static str,
    ring: RingReport,
    generators: Vec<String>,
}

fn cmd_subring(cli: &Cli, word: &str) -> Result<u8> {
    let ctx = ring_ctx(cli)?;
    let w = parse_word(word, ctx, cli.n)?;
    let report = SubringReport {
        schema: 1,
        command: "subring",
        ring: RingReport::new(ctx),
        generators: minimal_subring_generators(&w)
            .iter()
            .map(|p| p.to_string())
            .collect(),
    };
    emit(cli, &report)?;
    Ok(0)
}

#[derive(Deserialize)]
struct SamplesDoc {
    pairs: Vec<(String, String)>,
}

#[derive(Serialize)]
struct DefectReport {
    schema: u32,
    command: &'static str,
    dimension: usize,
    samples: usize,
    defect: String,
}

fn cmd_defect(cli: &Cli, samples_file: &PathBuf) -> Result<u8> {
    let ctx = require_zx(cli)?;
    let text = fs::read_to_string(samples_file)
        .with_context(|| format!("reading {}", samples_file.display()))?;
    let doc: SamplesDoc = serde_json::from_str(&text)
        .context("samples file must be {\"pairs\": [[\"WORD\", \"WORD\"], ...]}")?;
    let mut samples = Vec::with_capacity(doc.pairs.len());
    for (g_text, h_text) in &doc.pairs {
        let g = parse_word(g_text, ctx, cli.n)?;
        let h = parse_word(h_text, ctx, cli.n)?;
        samples.push((g.eval(), h.eval()));
    }
    let defect = cocycle_defect(derivation_cocycle, &samples)?;
    let report = DefectReport {
        schema: 1,
        command: "defect",
        dimension: cli.n,
        samples: samples.len(),
        defect: defect.to_string(),
    };
    emit(cli, &report)?;
    Ok(0)
}
