use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

use gwalk_core::gwa::{self, GraphWalkingAutomaton, TraceOptions};
use gwalk_core::hardness::{self, SimpleGraph, TmConfiguration, TuringMachine};
use gwalk_core::solver::{self, SearchLimits};
use gwalk_core::star::{self, StarAutomaton, TilingAssignment};
use gwalk_core::{Graph, Signature};

/// Decide emptiness of signatures, star automata and graph-walking automata.
///
/// Inputs and outputs are JSON. Pass `-` as a path to read standard input.
/// Exit status: 0 positive answer, 1 negative answer, 2 bad usage or input,
/// 3 resource limit reached.
#[derive(Parser)]
#[command(name = "gwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an object for structural errors
    #[command(subcommand)]
    Validate(ValidateCmd),
    /// Decide whether an object accepts or admits some graph
    #[command(subcommand)]
    Emptiness(EmptinessCmd),
    /// Run a graph-walking automaton on a graph
    Simulate(SimulateArgs),
    /// Check or search for a star tiling of a graph
    #[command(subcommand)]
    Tile(TileCmd),
    /// Reduce an automaton to a signature
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Generate hardness instances
    #[command(subcommand)]
    Gen(GenCmd),
    /// Brute-force oracles
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand)]
enum ValidateCmd {
    /// Check a signature
    Signature {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check a graph against a signature
    Graph {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check a graph-walking automaton against a signature
    Gwa {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check a star automaton against a signature
    Star {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct Limits {
    /// Maximum number of search states kept in memory
    #[arg(long, default_value_t = SearchLimits::default().max_states)]
    max_frontier: usize,
    /// Maximum number of labels a reduction may generate
    #[arg(long, default_value_t = SearchLimits::default().max_labels)]
    max_labels: usize,
}

impl Limits {
    fn get(&self) -> SearchLimits {
        SearchLimits {
            max_states: self.max_frontier,
            max_labels: self.max_labels,
        }
    }
}

#[derive(Subcommand)]
enum EmptinessCmd {
    /// Is there a graph over the signature? Prints a minimal witness
    Signature {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Does the automaton accept some graph? Prints a witness and its run
    Gwa {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Does some graph admit a tiling? Prints a witness and its tiling
    Star {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    sig: PathBuf,
    #[arg(long)]
    gwa: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    /// Include the sequence of configurations
    #[arg(long)]
    trace: bool,
    /// Maximum number of configurations in the trace
    #[arg(long, default_value_t = 10_000)]
    max_steps: usize,
}

#[derive(Subcommand)]
enum TileCmd {
    /// Check a given tiling
    Check {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        star: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tiling: PathBuf,
    },
    /// Search for a tiling
    Find {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        star: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Signature whose graphs are the tiled graphs of a star automaton
    Star {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Signature whose graphs are the annotated accepted graphs of an automaton
    Gwa {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = SearchLimits::default().max_labels)]
        max_labels: usize,
    },
}

#[derive(Args)]
struct GridArgs {
    /// The grid has side 2^n
    #[arg(long)]
    n: usize,
    /// Turing machine JSON
    #[arg(long)]
    tm: PathBuf,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Signature whose graphs are the 3-colourings of a graph
    #[command(name = "3col")]
    ThreeCol {
        #[arg(long)]
        graph: PathBuf,
    },
    /// One-state star automaton accepting every graph over a signature
    UniversalStar {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Grid signature for a Turing machine
    GridSig {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Grid-checking automaton for a Turing machine and input word
    GridGwa {
        #[command(flatten)]
        grid: GridArgs,
        /// Input word, comma-separated symbols
        #[arg(long, value_delimiter = ',', default_value = "")]
        word: Vec<String>,
        /// Attest that the machine accepts the word within 2^n configurations
        #[arg(long)]
        attest_fits: bool,
    },
    /// Canonical grid graph of an accepting computation
    GridGraph {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_delimiter = ',', default_value = "")]
        word: Vec<String>,
        /// Accepting computation as a JSON list of configurations; searched
        /// for when omitted
        #[arg(long)]
        computation: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// List the graphs over a signature with at most `--max-nodes` nodes
    Enumerate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        max_nodes: usize,
    },
}

enum Failure {
    Input(String),
    Limit(String),
}

impl From<gwalk_core::Error> for Failure {
    fn from(e: gwalk_core::Error) -> Self {
        if e.is_resource_limit() {
            Failure::Limit(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome = Result<bool, Failure>;

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("reading standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("parsing {}: {e}", path.display())))
}

fn emit<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("output types serialize")
    );
}

fn word(w: Vec<String>) -> Vec<String> {
    w.into_iter().filter(|s| !s.is_empty()).collect()
}

fn validate(cmd: ValidateCmd) -> Outcome {
    let report = match cmd {
        ValidateCmd::Signature { input } => read::<Signature>(&input)?.validate(),
        ValidateCmd::Graph { sig, input } => {
            read::<Graph>(&input)?.validate(&read::<Signature>(&sig)?)
        }
        ValidateCmd::Gwa { sig, input } => {
            let sig: Signature = read(&sig)?;
            gwa::validate_gwa(&sig, &read(&input)?)
        }
        ValidateCmd::Star { sig, input } => {
            let sig: Signature = read(&sig)?;
            star::validate_star(&sig, &read(&input)?)
        }
    };
    emit(&report);
    Ok(report.ok)
}

fn emptiness(cmd: EmptinessCmd) -> Outcome {
    match cmd {
        EmptinessCmd::Signature { input, limits } => {
            let v = solver::signature_nonempty(&read(&input)?, &limits.get())?;
            emit(&v);
            Ok(v.is_nonempty())
        }
        EmptinessCmd::Gwa { sig, input, limits } => {
            let a: GraphWalkingAutomaton = read(&input)?;
            let v = gwa::gwa_nonempty(&read(&sig)?, &a, &limits.get())?;
            emit(&v);
            Ok(v.is_nonempty())
        }
        EmptinessCmd::Star { sig, input, limits } => {
            let a: StarAutomaton = read(&input)?;
            let v = star::star_nonempty(&read(&sig)?, &a, &limits.get())?;
            emit(&v);
            Ok(v.is_nonempty())
        }
    }
}

fn simulate(args: SimulateArgs) -> Outcome {
    let sig: Signature = read(&args.sig)?;
    let a: GraphWalkingAutomaton = read(&args.gwa)?;
    let g: Graph = read(&args.graph)?;
    let opts = TraceOptions {
        record: args.trace,
        max_entries: args.max_steps,
    };
    let r = gwa::simulate_with(&sig, &a, &g, opts)?;
    emit(&r);
    Ok(r.is_accept())
}

fn tile(cmd: TileCmd) -> Outcome {
    match cmd {
        TileCmd::Check {
            sig,
            star: a,
            graph,
            tiling,
        } => {
            let t: TilingAssignment = read(&tiling)?;
            let ok = star::check_tiling(&read(&sig)?, &read(&a)?, &read(&graph)?, &t)?;
            emit(&serde_json::json!({ "valid": ok }));
            Ok(ok)
        }
        TileCmd::Find {
            sig,
            star: a,
            graph,
        } => {
            let t = star::find_tiling(&read(&sig)?, &read(&a)?, &read(&graph)?)?;
            let found = t.is_some();
            emit(&serde_json::json!({ "tiling": t }));
            Ok(found)
        }
    }
}

fn reduce(cmd: ReduceCmd) -> Outcome {
    let reduced = match cmd {
        ReduceCmd::Star { sig, input } => {
            let a: StarAutomaton = read(&input)?;
            star::reduce_star_to_signature(&read(&sig)?, &a)?
        }
        ReduceCmd::Gwa {
            sig,
            input,
            max_labels,
        } => {
            let a: GraphWalkingAutomaton = read(&input)?;
            gwa::reduce_gwa_with_limit(&read(&sig)?, &a, max_labels)?
        }
    };
    emit(&reduced);
    Ok(true)
}

fn generate(cmd: GenCmd) -> Outcome {
    match cmd {
        GenCmd::ThreeCol { graph } => {
            let g: SimpleGraph = read(&graph)?;
            emit(&hardness::gen_3col_signature(&g)?);
        }
        GenCmd::UniversalStar { input } => {
            emit(&hardness::gen_universal_star_automaton(&read(&input)?)?);
        }
        GenCmd::GridSig { grid } => {
            let m: TuringMachine = read(&grid.tm)?;
            emit(&hardness::gen_grid_signature(grid.n, &m)?);
        }
        GenCmd::GridGwa {
            grid,
            word: w,
            attest_fits,
        } => {
            let m: TuringMachine = read(&grid.tm)?;
            emit(&hardness::gen_grid_automaton(
                grid.n,
                &m,
                &word(w),
                attest_fits,
            )?);
        }
        GenCmd::GridGraph {
            grid,
            word: w,
            computation,
        } => {
            let m: TuringMachine = read(&grid.tm)?;
            let w = word(w);
            if grid.n == 0 || grid.n > 16 {
                return Err(Failure::Input("--n must be between 1 and 16".into()));
            }
            let side = 1usize << grid.n;
            let run: Vec<TmConfiguration> = match computation {
                Some(path) => read(&path)?,
                None => match hardness::find_accepting_computation(&m, &w, side, side)? {
                    Some(run) => run,
                    None => {
                        eprintln!("no accepting computation fits a grid of side {side}");
                        emit(&serde_json::Value::Null);
                        return Ok(false);
                    }
                },
            };
            emit(&hardness::canonical_grid_graph(grid.n, &m, &w, &run)?);
        }
    }
    Ok(true)
}

fn oracle(cmd: OracleCmd) -> Outcome {
    let OracleCmd::Enumerate { input, max_nodes } = cmd;
    let graphs: Vec<Graph> = solver::enumerate_graphs(&read(&input)?, max_nodes)?.collect();
    let nonempty = !graphs.is_empty();
    emit(&serde_json::json!({ "count": graphs.len(), "graphs": graphs }));
    Ok(nonempty)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Validate(c) => validate(c),
        Command::Emptiness(c) => emptiness(c),
        Command::Simulate(a) => simulate(a),
        Command::Tile(c) => tile(c),
        Command::Reduce(c) => reduce(c),
        Command::Gen(c) => generate(c),
        Command::Oracle(c) => oracle(c),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
