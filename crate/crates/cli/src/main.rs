//! `ellgw`: compute, compare and check stationary invariants of the elliptic
//! curve.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ellgw_core::correlator::{expected_genus, expected_weight};
use ellgw_core::fock::connected_correlator_with;
use ellgw_core::graph::{
    bcov_correlator_with, commutator_bracket, propagator_mismatches, self_loop_identity_check,
};
use ellgw_core::jet::{genus_split, kernel_dimension, vertex};
use ellgw_core::modular::{quasimodular_basis, recognize, Recognition, SURPLUS_MARGIN};
use ellgw_core::{CorrelatorRequest, Error, InvariantRecord, NormalForm, Pipeline, QSeries};

#[derive(Parser)]
#[command(name = "ellgw", version, about = "Stationary Gromov-Witten invariants of the elliptic curve")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a connected correlator with one or both pipelines
    Compute(ComputeArgs),
    /// Same as `compute --pipeline both`
    Compare(CorrelatorArgs),
    /// Print the vertex for `τ_k` in normal form, split by genus
    Vertex {
        #[arg(allow_negative_numbers = true)]
        k: i32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Recognize a correlator as a quasi-modular form
    Recognize {
        #[command(flatten)]
        args: CorrelatorArgs,
        /// Defaults to the sum of k_i + 2
        #[arg(long)]
        weight: Option<u32>,
        #[arg(long, value_enum, default_value_t = Which::Fock)]
        pipeline: Which,
    },
    /// Run one of the identity suites
    Check {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Args, Clone)]
struct CorrelatorArgs {
    /// Comma-separated descendant indices, e.g. 2,0,0
    #[arg(long, value_delimiter = ',', required = true)]
    insertions: Vec<u32>,
    #[arg(long, default_value_t = 10)]
    q_order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Per-edge flow cap in the graph sum (testing only)
    #[arg(long)]
    flow_bound: Option<usize>,
    #[arg(long)]
    lambda_order: Option<i64>,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    args: CorrelatorArgs,
    #[arg(long, value_enum, default_value_t = Choice::Fock)]
    pipeline: Choice,
}

#[derive(Clone, Copy, ValueEnum)]
enum Choice {
    Fock,
    Graph,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Fock,
    Graph,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Propagator,
    Selfloop,
    Kernel,
    Commutator,
    All,
}

/// Invalid input (2) or a mathematical failure (1).
enum Failure {
    Input(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Math(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    // exit quietly when piped into `head` and the like
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(c) => compute(&c.args, c.pipeline),
        Command::Compare(args) => compute(&args, Choice::Both),
        Command::Vertex { k, format } => print_vertex(k, format),
        Command::Recognize { args, weight, pipeline } => run_recognize(&args, weight, pipeline),
        Command::Check { suite } => check(suite),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Math(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run_pipeline(args: &CorrelatorArgs, which: Which) -> Result<InvariantRecord, Failure> {
    let ks = &args.insertions;
    match which {
        Which::Fock => {
            let req = CorrelatorRequest::new(ks.clone(), args.q_order);
            Ok(connected_correlator_with(&req, args.lambda_order)?)
        }
        Which::Graph => {
            let bound = args.flow_bound.unwrap_or(args.q_order.max(1));
            let mut by_genus = bcov_correlator_with(ks, args.q_order, bound)?;
            let g = expected_genus(ks);
            if let Some(other) = by_genus.keys().find(|&&k| Some(k) != g) {
                return Err(Failure::Math(format!("graph sum has support at unexpected genus {other}")));
            }
            let rec = g.and_then(|g| by_genus.remove(&g));
            Ok(rec.unwrap_or_else(|| InvariantRecord::new(ks, g, Pipeline::Graph, QSeries::zero(args.q_order))))
        }
    }
}

/// Attaches the quasi-modular form when the order allows recognition.
fn attach_form(rec: &mut InvariantRecord) {
    if rec.genus.is_none() || rec.series.is_zero() {
        return;
    }
    let weight = expected_weight(&rec.insertions);
    let Ok(basis) = quasimodular_basis(weight) else { return };
    if rec.q_order < basis.len() + SURPLUS_MARGIN {
        return;
    }
    if let Ok(Recognition::Recognized { rep, .. }) = recognize(&rec.series, weight) {
        rec.quasi_modular = Some(rep);
    }
}

#[derive(Serialize)]
struct Comparison {
    equal: bool,
    mismatched_coefficients: Vec<usize>,
}

#[derive(Serialize)]
struct ComputeOutput {
    records: Vec<InvariantRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<Comparison>,
}

fn compute(args: &CorrelatorArgs, choice: Choice) -> Result<bool, Failure> {
    if args.insertions.is_empty() {
        return Err(Failure::Input("at least one insertion is required".into()));
    }
    let mut records = match choice {
        Choice::Fock => vec![run_pipeline(args, Which::Fock)?],
        Choice::Graph => vec![run_pipeline(args, Which::Graph)?],
        Choice::Both => {
            let (f, g) = std::thread::scope(|s| {
                let f = s.spawn(|| run_pipeline(args, Which::Fock));
                let g = run_pipeline(args, Which::Graph);
                (f.join().expect("fock worker"), g)
            });
            vec![f?, g?]
        }
    };
    for r in &mut records {
        attach_form(r);
    }
    let comparison = (records.len() == 2).then(|| {
        let mismatched = records[0].mismatches(&records[1]);
        Comparison { equal: mismatched.is_empty(), mismatched_coefficients: mismatched }
    });
    let agree = comparison.as_ref().map_or(true, |c| c.equal);
    match args.format {
        Format::Json => print_json(&ComputeOutput { records, comparison }),
        Format::Table => print_table(&records, comparison.as_ref()),
    }
    Ok(agree)
}

fn print_table(records: &[InvariantRecord], cmp: Option<&Comparison>) {
    let first = &records[0];
    let genus = first.genus.map_or_else(|| "none".to_string(), |g| g.to_string());
    println!("insertions {:?}  genus {genus}", first.insertions);
    let cells: Vec<Vec<String>> = (0..=first.q_order)
        .map(|d| {
            let mut row = vec![d.to_string()];
            row.extend(records.iter().map(|r| r.series.coeff(d).to_string()));
            if let Some(c) = cmp {
                row.push(if c.mismatched_coefficients.contains(&d) { "no" } else { "yes" }.into());
            }
            row
        })
        .collect();
    let mut header = vec!["d".to_string()];
    header.extend(records.iter().map(|r| r.pipeline.to_string()));
    if cmp.is_some() {
        header.push("equal".into());
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|i| cells.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap_or(0))
        .collect();
    let line = |row: &[String]| {
        row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
    };
    println!("{}", line(&header));
    for row in &cells {
        println!("{}", line(row));
    }
}

#[derive(Serialize)]
struct VertexOutput {
    k: i32,
    normal_form: NormalForm,
    genus_split: BTreeMap<u32, NormalForm>,
}

fn print_vertex(k: i32, format: Format) -> Result<bool, Failure> {
    let v = vertex(k)?;
    let split = genus_split(&v)?;
    match format {
        Format::Json => print_json(&VertexOutput { k, normal_form: v, genus_split: split }),
        Format::Table => {
            println!("vertex({k}) = {v}");
            for (g, part) in &split {
                println!("  genus {g}: {part}");
            }
        }
    }
    Ok(true)
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
enum RecognizeOutput {
    Recognized { weight: u32, surplus: usize, form: ellgw_core::QuasiModularRep },
    Failed { weight: u32, certificate: ellgw_core::modular::Certificate },
}

fn run_recognize(args: &CorrelatorArgs, weight: Option<u32>, which: Which) -> Result<bool, Failure> {
    let rec = run_pipeline(args, which)?;
    let weight = weight.unwrap_or_else(|| expected_weight(&args.insertions));
    let out = match recognize(&rec.series, weight)? {
        Recognition::Recognized { rep, surplus } => RecognizeOutput::Recognized { weight, surplus, form: rep },
        Recognition::Failed(certificate) => RecognizeOutput::Failed { weight, certificate },
    };
    let ok = matches!(out, RecognizeOutput::Recognized { .. });
    match args.format {
        Format::Json => print_json(&out),
        Format::Table => match &out {
            RecognizeOutput::Recognized { form, surplus, .. } => {
                println!("weight {weight}, {surplus} surplus coefficients match");
                for t in form.terms() {
                    println!("  {:>12}  E2^{} E4^{} E6^{}", t.coeff.to_string(), t.e2, t.e4, t.e6);
                }
            }
            RecognizeOutput::Failed { certificate, .. } => {
                println!("not quasi-modular of weight {weight}: first mismatch at q^{}", certificate.index);
            }
        },
    }
    Ok(ok)
}

#[derive(Serialize)]
struct SuiteReport {
    suite: &'static str,
    pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
}

fn check(suite: Suite) -> Result<bool, Failure> {
    let suites: Vec<Suite> = match suite {
        Suite::All => vec![Suite::Propagator, Suite::Selfloop, Suite::Kernel, Suite::Commutator],
        s => vec![s],
    };
    let mut reports = Vec::new();
    for s in suites {
        reports.push(run_suite(s)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    print_json(&reports);
    Ok(pass)
}

fn run_suite(suite: Suite) -> Result<SuiteReport, Failure> {
    let (name, failures): (&'static str, Vec<String>) = match suite {
        Suite::Propagator => {
            let bad = propagator_mismatches(10, 10)?;
            ("propagator", bad.into_iter().map(|r| format!("flow {r}")).collect())
        }
        Suite::Selfloop => {
            let residual = self_loop_identity_check(20)?;
            let bad = (residual.min_degree()..=residual.order())
                .filter(|&d| !num_is_zero(&residual.coeff(d)))
                .map(|d| format!("lambda^{d}: {}", residual.coeff(d)))
                .collect();
            ("selfloop", bad)
        }
        Suite::Kernel => {
            let mut bad = Vec::new();
            for d in 1..=12 {
                let info = kernel_dimension(d)?;
                if info.dimension != 1 {
                    bad.push(format!("degree {d}: dimension {}", info.dimension));
                }
            }
            for k in -1..=10 {
                let v = vertex(k)?;
                let e = ellgw_core::jet::apply_e(v.as_poly());
                if !e.is_zero() {
                    bad.push(format!("E vertex({k}) = {e}"));
                }
            }
            ("kernel", bad)
        }
        Suite::Commutator => {
            let mut bad = Vec::new();
            for k1 in -1..=4 {
                for k2 in -1..=4 {
                    for (h, v) in commutator_bracket(k1, k2, 3)? {
                        if !v.is_zero() {
                            bad.push(format!("[{k1},{k2}] at hbar^{h}: {v}"));
                        }
                    }
                }
            }
            ("commutator", bad)
        }
        Suite::All => unreachable!("expanded by caller"),
    };
    Ok(SuiteReport { suite: name, pass: failures.is_empty(), failures })
}

fn num_is_zero(r: &ellgw_core::Rational) -> bool {
    *r == ellgw_core::Rational::from_integer(0.into())
}
