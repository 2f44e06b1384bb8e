use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use bench_cli::{
    generate_workload, run_campaign, run_queries, run_query, verdict, write_csv, CliError,
    ExperimentConfig, GraphSource, GraphSpec, Query, Thresholds, Workload,
};
use clap::{Parser, Subcommand, ValueEnum};
use dso::{Dso, DsoConfig};
use graph_core::{load_graph, write_graph};

#[derive(Parser)]
#[command(name = "ftdso", version, about = "Build and evaluate an approximate distance sensitivity oracle")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Er,
    Grid,
    Rgg,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in DIMACS format.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        p: f64,
        #[arg(long, default_value_t = 10)]
        w: usize,
        #[arg(long, default_value_t = 10)]
        h: usize,
        #[arg(long, default_value_t = 0.1)]
        r: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep only the largest connected component.
        #[arg(long)]
        lcc: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Preprocess a graph into a serialized oracle.
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        f: usize,
        #[arg(long, default_value_t = 0.4)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        hop_cutoff: Option<usize>,
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        c_forest: f64,
        #[arg(long, default_value_t = 1.0)]
        c_new: f64,
        #[arg(long, default_value_t = 1.0)]
        c_b: f64,
        /// Maximum projected words.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer one query and print it as JSON.
    Query {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        /// Comma-separated failed edge ids.
        #[arg(long, value_delimiter = ',')]
        fail: Vec<u32>,
    },
    /// Run random queries against a built oracle and check the thresholds.
    Verify {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long, default_value_t = 500)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        max_failures: Option<usize>,
        #[arg(long, default_value_t = 0.5)]
        path_bias: f64,
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a full experiment from a JSON config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Generate {
            kind,
            n,
            p,
            w,
            h,
            r,
            seed,
            lcc,
            out,
        } => {
            let source = match kind {
                Kind::Er => GraphSource::Er { n, p },
                Kind::Grid => GraphSource::Grid { w, h },
                Kind::Rgg => GraphSource::Rgg { n, r },
            };
            let g = GraphSpec {
                source,
                seed,
                largest_component: lcc,
            }
            .build()?;
            write_graph(&g, BufWriter::new(File::create(out)?))?;
            eprintln!("{} vertices, {} edges", g.n(), g.m());
            Ok(0)
        }
        Command::Build {
            graph,
            f,
            alpha,
            eps,
            seed,
            hop_cutoff,
            lambda,
            c_forest,
            c_new,
            c_b,
            budget,
            out,
        } => {
            let g = load_graph(&fs::read_to_string(graph)?)?;
            let cfg = DsoConfig {
                sensitivity: f,
                alpha,
                eps,
                seed,
                hop_cutoff,
                lambda,
                c_forest,
                c_new,
                c_b,
                budget,
            };
            let dso = Dso::preprocess(&g, &cfg)?;
            fs::write(out, dso.to_bytes()?)?;
            eprintln!("{}", serde_json::to_string(&dso.space())?);
            Ok(0)
        }
        Command::Query { oracle, s, t, fail } => {
            let dso = Dso::from_bytes(&fs::read(oracle)?)?;
            let rec = run_query(&dso, 0, &Query { s, t, failures: fail })?;
            println!("{}", serde_json::to_string(&rec)?);
            Ok(0)
        }
        Command::Verify {
            oracle,
            queries,
            seed,
            max_failures,
            path_bias,
            threshold,
            report,
        } => {
            let dso = Dso::from_bytes(&fs::read(oracle)?)?;
            let workload = Workload {
                queries,
                max_failures: max_failures.unwrap_or(dso.params().sensitivity),
                path_bias,
            };
            if workload.max_failures > dso.params().sensitivity {
                return Err(CliError::Invalid("max_failures exceeds f".into()));
            }
            if !(0.0..=1.0).contains(&path_bias) || !(0.0..=1.0).contains(&threshold) {
                return Err(CliError::Invalid("path_bias and threshold must lie in [0, 1]".into()));
            }
            let qs = generate_workload(dso.graph(), &workload, seed);
            let (records, _) = run_queries(&dso, &qs)?;
            let summary = bench_cli::summarize(&records, dso.params().eps);
            println!("{}", serde_json::to_string_pretty(&summary)?);
            if let Some(path) = report {
                fs::write(path, serde_json::to_string_pretty(&records)?)?;
            }
            Ok(verdict(
                &summary,
                &Thresholds {
                    max_stretch_violation_rate: threshold,
                },
            ))
        }
        Command::Bench { config, out_dir } => {
            let cfg: ExperimentConfig = serde_json::from_str(&fs::read_to_string(config)?)?;
            let (report, timings) = run_campaign(&cfg)?;
            fs::create_dir_all(&out_dir)?;
            fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(&report)?)?;
            write_csv(&report.records, File::create(out_dir.join("report.csv"))?)?;
            fs::write(out_dir.join("timings.json"), serde_json::to_string_pretty(&timings)?)?;
            println!("{}", serde_json::to_string_pretty(&report.summary)?);
            Ok(verdict(&report.summary, &cfg.thresholds))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

