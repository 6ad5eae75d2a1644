mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qgi_core::circuit::{build_qpe, export_qasm, CcpStyle, CircuitError, QpeOptions};
use qgi_core::graph::{are_isomorphic, Graph};
use qgi_core::invariant::{
    char_poly, classical_histogram, quantum_histogram, InvariantError, InvariantReport,
    QuantumMode, QuantumOptions, CHAR_POLY_MAX_VERTICES,
};
use qgi_core::simulator::{run, SimConfig, DEFAULT_MAX_QUBITS};
use qgi_core::survey::{cached_survey, run_survey, SurveyError, SurveyReport, SurveySource};

use input::{Format, InputError};

/// Exact isomorphism is only attempted up to this size in `compare`.
const COMPARE_ISO_MAX_VERTICES: usize = 10;

#[derive(Parser)]
#[command(
    name = "qgi",
    version,
    about = "Edge-count histogram graph invariant via phase estimation"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Input format for graph arguments.
    #[arg(long, global = true, value_enum, default_value_t = Format::Auto)]
    format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Output::Pretty)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Pretty,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Classical,
    Qpe,
    Shots,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Export {
    Qasm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CensusSource {
    Classical,
    QpeExact,
}

#[derive(Subcommand)]
enum Command {
    /// Histogram of induced-subgraph edge counts.
    Invariant {
        /// Fixture name, file path, or inline graph.
        graph: String,
        #[arg(long, value_enum, default_value_t = Mode::Qpe)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replace repeated oracle calls by one scaled phase per edge.
        #[arg(long)]
        fuse: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
        /// Write the final statevector as JSON to this file.
        #[arg(long)]
        dump_state: Option<PathBuf>,
    },
    /// Compare two graphs by invariant, spectrum and exact isomorphism.
    Compare { first: String, second: String },
    /// Emit the phase-estimation circuit.
    Encode {
        graph: String,
        #[arg(long, value_enum, default_value_t = Export::Qasm)]
        export: Export,
        #[arg(long)]
        fuse: bool,
        /// Lower doubly-controlled phases to two-qubit gates.
        #[arg(long)]
        decompose_ccp: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_QUBITS)]
        max_qubits: usize,
    },
    /// Census of all graphs on 1..=N vertices.
    Survey {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = CensusSource::Classical)]
        source: CensusSource,
        /// Cache file (default: $QGI_CACHE_DIR/survey.jsonl).
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, conflicts_with = "cache")]
        no_cache: bool,
    },
}

enum Failure {
    Input(String),
    Cap(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Cap(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        if e.is_resource_cap() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        if e.is_resource_cap() {
            Failure::Cap(e.to_string())
        } else if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::TooWide { .. } => Failure::Cap(e.to_string()),
            CircuitError::EmptyGraph => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<SurveyError> for Failure {
    fn from(e: SurveyError) -> Self {
        if e.is_resource_cap() {
            Failure::Cap(e.to_string())
        } else if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("qgi: {e}");
            return ExitCode::from(4);
        }
    }
    match dispatch(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("qgi: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    let graph = |arg: &str| input::resolve(arg, cli.format).map_err(Failure::from);
    match &cli.command {
        Command::Invariant {
            graph: arg,
            mode,
            shots,
            seed,
            fuse,
            max_qubits,
            dump_state,
        } => {
            let g = graph(arg)?;
            let sim = SimConfig {
                max_qubits: *max_qubits,
            };
            let opts = QuantumOptions { fuse: *fuse, sim };
            let report = match mode {
                Mode::Classical => InvariantReport::classical(&classical_histogram(&g)?),
                Mode::Qpe => quantum_histogram(&g, QuantumMode::Exact, opts)?,
                Mode::Shots => quantum_histogram(
                    &g,
                    QuantumMode::Shots {
                        shots: *shots,
                        seed: *seed,
                    },
                    opts,
                )?,
            };
            if let Some(path) = dump_state {
                if *mode == Mode::Classical {
                    return Err(Failure::Input(
                        "--dump-state needs --mode qpe or shots".into(),
                    ));
                }
                write_state(&g, opts, path)?;
            }
            Ok(render_invariant(&report, cli.output))
        }
        Command::Compare { first, second } => {
            let (a, b) = (graph(first)?, graph(second)?);
            compare(&a, &b, cli.output)
        }
        Command::Encode {
            graph: arg,
            export: Export::Qasm,
            fuse,
            decompose_ccp,
            max_qubits,
        } => {
            let g = graph(arg)?;
            let c = build_qpe(
                &g,
                QpeOptions {
                    fuse: *fuse,
                    max_width: *max_qubits,
                },
            )?;
            let style = if *decompose_ccp {
                CcpStyle::Decomposed
            } else {
                CcpStyle::Native
            };
            Ok(export_qasm(&c, style))
        }
        Command::Survey {
            n,
            source,
            cache,
            no_cache,
        } => {
            let source = match source {
                CensusSource::Classical => SurveySource::Classical,
                CensusSource::QpeExact => SurveySource::QpeExact,
            };
            let cache = if *no_cache {
                None
            } else {
                cache.clone().or_else(default_cache)
            };
            let reports = (1..=*n)
                .map(|k| match &cache {
                    Some(path) => cached_survey(path, k, source),
                    None => run_survey(k, source),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if reports.is_empty() {
                return Err(Failure::Input("--n must be at least 1".into()));
            }
            Ok(render_survey(&reports, cli.output))
        }
    }
}

fn default_cache() -> Option<PathBuf> {
    std::env::var_os("QGI_CACHE_DIR").map(|dir| PathBuf::from(dir).join("survey.jsonl"))
}

fn write_state(g: &Graph, opts: QuantumOptions, path: &PathBuf) -> Result<(), Failure> {
    let c = build_qpe(
        g,
        QpeOptions {
            fuse: opts.fuse,
            max_width: opts.sim.max_qubits,
        },
    )?;
    let state = run(&c, opts.sim).map_err(|e| Failure::from(InvariantError::from(e)))?;
    let text = serde_json::to_string_pretty(&state.dump()).expect("dump serialises");
    std::fs::write(path, text)
        .map_err(|e| Failure::Input(format!("writing {}: {e}", path.display())))
}

fn render_invariant(r: &InvariantReport, output: Output) -> String {
    let count = |k: usize| {
        r.counts
            .as_ref()
            .map_or_else(|| "-".to_owned(), |c| c[k].to_string())
    };
    match output {
        Output::Json => serde_json::to_string(r).expect("report serialises") + "\n",
        Output::Csv => {
            let mut out = String::from("edges,probability_percent,subgraphs\n");
            for (k, p) in r.probabilities.iter().enumerate() {
                let c = r
                    .counts
                    .as_ref()
                    .map_or(String::new(), |c| c[k].to_string());
                out += &format!("{k},{:.2},{c}\n", p * 100.0);
            }
            out
        }
        Output::Pretty => {
            let mut out = format!(
                "{:>8} {:>12} {:>12}\n",
                "#(edges)", "%Probability", "#(subgraphs)"
            );
            for (k, p) in r.probabilities.iter().enumerate() {
                out += &format!("{k:>8} {:>12.2} {:>12}\n", p * 100.0, count(k));
            }
            out
        }
    }
}

fn compare(a: &Graph, b: &Graph, output: Output) -> Result<String, Failure> {
    let same_size = a.vertex_count() == b.vertex_count();
    let invariant_equal = same_size
        && a.edge_count() == b.edge_count()
        && classical_histogram(a)? == classical_histogram(b)?;
    let spectral_equal = if !same_size {
        Some(false)
    } else if a.vertex_count() <= CHAR_POLY_MAX_VERTICES {
        Some(char_poly(a)? == char_poly(b)?)
    } else {
        None
    };
    let isomorphic = if !invariant_equal {
        Some(false)
    } else if a.vertex_count() <= COMPARE_ISO_MAX_VERTICES {
        Some(are_isomorphic(a, b).is_some())
    } else {
        None
    };
    let verdict = match (invariant_equal, isomorphic) {
        (false, _) => "distinguished by invariant",
        (true, Some(true)) => "invariant-equal, isomorphic",
        (true, Some(false)) => "invariant-equal, NOT isomorphic (counterexample)",
        (true, None) => "invariant-equal, isomorphism not checked",
    };
    let show = |v: Option<bool>| match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    };
    Ok(match output {
        Output::Json => {
            json!({
                "invariant_equal": invariant_equal,
                "spectral_equal": spectral_equal,
                "isomorphic": isomorphic,
                "verdict": verdict,
            })
            .to_string()
                + "\n"
        }
        Output::Csv => format!(
            "invariant_equal,spectral_equal,isomorphic,verdict\n{},{},{},{verdict}\n",
            show(Some(invariant_equal)),
            show(spectral_equal),
            show(isomorphic)
        ),
        Output::Pretty => format!(
            "invariant-equal: {}\nspectral-equal:  {}\nisomorphic:      {}\n{verdict}\n",
            show(Some(invariant_equal)),
            show(spectral_equal),
            show(isomorphic)
        ),
    })
}

fn render_survey(reports: &[SurveyReport], output: Output) -> String {
    match output {
        Output::Json => serde_json::to_string(reports).expect("reports serialise") + "\n",
        Output::Csv => {
            let mut out = String::from("n,classes,distinct_quantum,distinct_spectra\n");
            for r in reports {
                out += &format!(
                    "{},{},{},{}\n",
                    r.n, r.classes, r.distinct_quantum, r.distinct_spectra
                );
            }
            out
        }
        Output::Pretty => reports.iter().map(|r| r.row() + "\n").collect(),
    }
}
