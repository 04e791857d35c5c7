//! `cergraph`: sampling, exact entropies, alignment, and codec simulation for
//! correlated Erdős–Rényi graph pairs.
//!
//! Exit status: 0 success, 1 i/o, 2 bad configuration, 3 enumeration budget
//! exceeded, 4 an experiment's own checks failed.

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cergraph::alignment::{alignment_statistic, map_deanonymize, optimize_alignment, Sense};
use cergraph::codec::{simulate_error_rate, write_simulation_csv};
use cergraph::exact::ExactJoint;
use cergraph::experiments::run_experiment;
use cergraph::model::{entropy_report, sample_pair, ObjectKind, SourceVariant};
use cergraph::permutation::factorial;
use cergraph::rng::{trial_rng, DEFAULT_SEED};
use cergraph::structure::{automorphism_count, enumerate_structures};
use cergraph::{canonicalize, pair_count, Error, LabelledGraph, Permutation};
use clap::{Args, Parser, Subcommand};

use config::{CodecSimFile, ModelArgs};

#[derive(Parser, Debug)]
#[command(
    name = "cergraph",
    version,
    about = "Correlated Erdős–Rényi graph compression toolkit"
)]
struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw one correlated pair (ga, gb).
    Sample {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        model: ModelArgs,
        /// Trial index; each index is an independent stream of the seed.
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Write ga.txt and gb.txt into this directory instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Per-pair entropies of a model, and exact conditional entropies for a given n.
    Entropy {
        #[command(flatten)]
        model: ModelArgs,
        /// Also enumerate all graph pairs on n vertices.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Optimal alignment statistic between two unweighted graphs.
    Align {
        #[command(flatten)]
        graphs: GraphPair,
        #[arg(long, default_value = "max")]
        sense: Sense,
    },
    /// MAP labelling of the structure of gb given ga.
    Deanonymize {
        #[command(flatten)]
        graphs: GraphPair,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Monte Carlo error rate of the binning codec; writes one CSV row.
    CodecSim {
        /// JSON file with any of the fields below; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        variant: Option<SourceVariant>,
        /// Bits per vertex pair; defaults to H(A|B) + 2 delta.
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Runs an experiment described by a JSON file and writes its CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Lists every structure on n vertices with its automorphism and labelling counts.
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: u8,
    },
}

#[derive(Args, Debug)]
struct GraphPair {
    /// Graph file: `n k` then the pair symbols in row-major upper-triangular order.
    #[arg(long)]
    ga: PathBuf,
    #[arg(long)]
    gb: PathBuf,
}

impl GraphPair {
    fn load(&self) -> Result<(LabelledGraph, LabelledGraph), Failure> {
        Ok((read_graph(&self.ga)?, read_graph(&self.gb)?))
    }
}

/// Anything that ends the process with a non-zero status.
#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(String),
    Checks(Vec<String>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) | Failure::Lib(Error::Io(_)) => 1,
            Failure::Lib(Error::Capability { .. }) => 3,
            Failure::Lib(_) => 2,
            Failure::Checks(_) => 4,
        }
    }

    fn report(&self) {
        match self {
            Failure::Lib(e) => eprintln!("error: {e}"),
            Failure::Io(e) => eprintln!("error: {e}"),
            Failure::Checks(items) => {
                eprintln!("error: {} check(s) failed", items.len());
                for item in items {
                    eprintln!("  {item}");
                }
            }
        }
    }
}

fn read_graph(path: &Path) -> Result<LabelledGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(text.parse()?)
}

fn write_or_print(path: Option<&Path>, body: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => Ok(io::stdout().write_all(body)?),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(Error::InvalidArgument("--workers must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    let seed = cli.seed;
    match cli.command {
        Command::Sample {
            n,
            model,
            trial,
            output,
        } => {
            let dist = model.build()?;
            let (ga, gb) = sample_pair(&dist, n, &mut trial_rng(seed.unwrap_or(DEFAULT_SEED), trial))?;
            match output {
                Some(dir) => {
                    fs::create_dir_all(&dir)?;
                    write_or_print(Some(&dir.join("ga.txt")), format!("{ga}\n").as_bytes())?;
                    write_or_print(Some(&dir.join("gb.txt")), format!("{gb}\n").as_bytes())?;
                }
                None => println!("# ga\n{ga}\n# gb\n{gb}"),
            }
        }
        Command::Entropy { model, n } => {
            let dist = model.build()?;
            let r = entropy_report(&dist);
            println!("H(A)={}", r.h_a);
            println!("H(B)={}", r.h_b);
            println!("H(A,B)={}", r.h_ab);
            println!("H(A|B)={}", r.h_a_given_b);
            println!("H(B|A)={}", r.h_b_given_a);
            if let Some(n) = n {
                let exact = ExactJoint::new(n, &dist)?;
                let m = pair_count(n) as f64;
                for variant in SourceVariant::ALL {
                    let h = exact.conditional_entropy(variant.source_kind(), variant.side_kind());
                    println!("{variant}: H={h} per-pair={}", h / m);
                }
                let gs = exact.graph_given_structure(cergraph::model::Side::A);
                println!("H(G)-H(S)={gs} log2(n!)={}", (factorial(n) as f64).log2());
                let hs = exact.entropy(cergraph::model::Side::A, ObjectKind::Structure);
                println!("H(S)={hs}");
            }
        }
        Command::Align { graphs, sense } => {
            let (ga, gb) = graphs.load()?;
            let best = optimize_alignment(&ga, &gb, sense)?;
            let identity = alignment_statistic(&ga, &gb, &Permutation::identity(ga.n()))?;
            println!("value={}", best.value);
            println!("optimal_permutations={}", best.count);
            println!("witness={}", best.witness());
            println!("identity_value={identity}");
        }
        Command::Deanonymize { graphs, model } => {
            let (ga, gb) = graphs.load()?;
            let dist = model.build()?;
            let sb = canonicalize(&gb)?;
            let guess = map_deanonymize(&ga, &sb, &dist)?;
            println!("{guess}");
            println!("recovered={}", guess == gb);
        }
        Command::CodecSim {
            config,
            n,
            model,
            variant,
            rate,
            delta,
            trials,
            output,
        } => {
            let file = match &config {
                Some(path) => CodecSimFile::load(path)?,
                None => CodecSimFile::default(),
            };
            let flags = CodecSimFile {
                n,
                model: model.spec()?,
                variant,
                rate,
                delta,
                trials,
                seed,
                output,
            };
            let (codec, trials, output) = flags.over(file).resolve()?;
            let report = simulate_error_rate(&codec, trials)?;
            let mut buf = Vec::new();
            write_simulation_csv(std::slice::from_ref(&report), &mut buf)?;
            write_or_print(output.as_deref(), &buf)?;
        }
        Command::Experiment { config, trials, output } => {
            let text = fs::read_to_string(&config).map_err(|e| Failure::Io(format!("{}: {e}", config.display())))?;
            let mut spec: cergraph::experiments::ExperimentSpec = serde_json::from_str(&text).map_err(Error::from)?;
            if let Some(s) = seed {
                spec.seed = s;
            }
            if let Some(t) = trials {
                spec.trials = t;
            }
            if output.is_some() {
                spec.output = output;
            }
            let result = run_experiment(&spec)?;
            write_or_print(spec.output.as_deref(), result.to_csv_string()?.as_bytes())?;
            let failures = result.failures();
            if !failures.is_empty() {
                return Err(Failure::Checks(failures));
            }
        }
        Command::Oracle { n, k } => {
            let structures: Vec<_> = enumerate_structures(n, k)?.collect();
            println!("structures={}", structures.len());
            let mut total = 0u64;
            for s in &structures {
                let aut = automorphism_count(s.graph())?;
                let labelings = factorial(n) / aut;
                total += labelings;
                let edges: Vec<String> = s.canonical_edges().iter().map(u8::to_string).collect();
                println!("[{}] automorphisms={aut} labelings={labelings}", edges.join(" "));
            }
            println!("labelled_graphs={total}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            f.report();
            ExitCode::from(f.exit_code())
        }
    }
}
