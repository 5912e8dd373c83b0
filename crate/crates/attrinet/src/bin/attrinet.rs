use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use attrinet::config::{
    comparison_table_csv, compare, run_experiment, ExperimentConfig, Toggles,
};
use attrinet::stats::census;
use attrinet::theory;
use attrinet::{Graph, Result, RngStream};

/// Attributed preferential-attachment network laboratory: exact limit theory,
/// graph generation, Page-rank, sampling schemes, and empirical censuses.
#[derive(Parser)]
#[command(name = "attrinet", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Experiment configuration (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, overriding the configured one
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (or set ATTRINET_THREADS); suites are currently
    /// single-threaded, the value is recorded for forward compatibility
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the limit theory for the configured parameters
    Theory,
    /// Generate one graph and write vertices.csv / edges.csv
    Generate,
    /// Exact Page-rank scores and tail estimates of a generated graph
    Pagerank,
    /// Attribute frequencies under the configured sampling schemes
    Sample,
    /// Degree / homophily / fringe census of a generated graph
    Census,
    /// Ranking bias of subgraph sampling versus the full graph
    Bias,
    /// Exact and asymptotic minority representation for the two-type
    /// rare-minority parameterization
    RareMinority {
        /// minority propensity a
        #[arg(long)]
        a: f64,
        /// scaling constant D (minority share is D sqrt(a))
        #[arg(long = "D")]
        d: f64,
        /// Page-rank damping
        #[arg(long, default_value_t = 0.85)]
        c: f64,
        /// fixed-walk length
        #[arg(long, default_value_t = 1)]
        walk_len: usize,
    },
    /// Run every suite enabled in the configuration
    Run,
    /// Compare a theory artifact against empirical sample reports
    Compare {
        /// theory.json produced by a run
        theory_json: PathBuf,
        /// samples.json produced by a run with the same parameters
        empirical_json: PathBuf,
    },
}

fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("ATTRINET_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(1)
}

fn load_config(g: &GlobalArgs) -> Result<ExperimentConfig> {
    let path = g.config.as_ref().ok_or_else(|| {
        attrinet::Error::MalformedInput("this subcommand needs --config".into())
    })?;
    let mut cfg = ExperimentConfig::from_file(path)?;
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn out_dir(g: &GlobalArgs, cfg: Option<&ExperimentConfig>) -> PathBuf {
    g.out
        .clone()
        .or_else(|| cfg.and_then(|c| c.outputs.clone()))
        .unwrap_or_else(|| PathBuf::from("attrinet-out"))
}

fn run_suites(g: &GlobalArgs, toggles: Toggles, force_write_graph: bool) -> Result<ExitCode> {
    let mut cfg = load_config(g)?;
    cfg.toggles = toggles;
    if force_write_graph {
        cfg.write_graph = true;
    }
    let dir = out_dir(g, Some(&cfg));
    let summary = run_experiment(&cfg, &dir)?;
    for (suite, err) in &summary.suite_errors {
        eprintln!("suite {suite} failed: {err}");
    }
    println!(
        "wrote {} ({} suites, {} errors)",
        dir.display(),
        summary.suites_run.len(),
        summary.suite_errors.len()
    );
    Ok(ExitCode::from(summary.exit_code() as u8))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let _threads = resolve_threads(cli.global.threads);
    match cli.command {
        Command::Theory => {
            let code = run_suites(
                &cli.global,
                Toggles {
                    theory: true,
                    ..Default::default()
                },
                false,
            )?;
            let cfg = load_config(&cli.global)?;
            let sol = theory::solve(&cfg.params, cfg.c)?;
            println!("lambda_c = {}", sol.lambda_c);
            println!("eta      = {:?}", sol.eta);
            println!("phi_a    = {:?}", sol.phi_a);
            Ok(code)
        }
        Command::Generate => run_suites(
            &cli.global,
            Toggles {
                generate: true,
                ..Default::default()
            },
            true,
        ),
        Command::Pagerank => run_suites(
            &cli.global,
            Toggles {
                pagerank: true,
                ..Default::default()
            },
            false,
        ),
        Command::Sample => run_suites(
            &cli.global,
            Toggles {
                theory: true,
                sample: true,
                ..Default::default()
            },
            false,
        ),
        Command::Census => {
            let cfg = load_config(&cli.global)?;
            let dir = out_dir(&cli.global, Some(&cfg));
            fs::create_dir_all(&dir)?;
            let mut rng = RngStream::new(cfg.seed, 0);
            let seed_graph = Graph::singleton_seed(0, cfg.params.k);
            let g = attrinet::generate::generate_p(&cfg.params, cfg.n, &seed_graph, &mut rng)?;
            let cap = if g.is_tree() { cfg.fringe_cap } else { 0 };
            let c = census(&g, cap)?;
            fs::write(dir.join("census.json"), c.to_json()?)?;
            println!("wrote {}", dir.join("census.json").display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bias => run_suites(
            &cli.global,
            Toggles {
                bias: true,
                ..Default::default()
            },
            false,
        ),
        Command::RareMinority { a, d, c, walk_len } => {
            let report = theory::rare_minority(a, d, c, walk_len)?;
            let text = serde_json::to_string_pretty(&report)
                .map_err(attrinet::Error::from)?;
            if let Some(dir) = &cli.global.out {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("rare_minority.json"), &text)?;
            }
            println!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Run => {
            let mut cfg = load_config(&cli.global)?;
            if let Some(seed) = cli.global.seed {
                cfg.seed = seed;
            }
            let dir = out_dir(&cli.global, Some(&cfg));
            let summary = run_experiment(&cfg, &dir)?;
            for (suite, err) in &summary.suite_errors {
                eprintln!("suite {suite} failed: {err}");
            }
            println!(
                "wrote {} ({} suites, {} errors)",
                dir.display(),
                summary.suites_run.len(),
                summary.suite_errors.len()
            );
            Ok(ExitCode::from(summary.exit_code() as u8))
        }
        Command::Compare {
            theory_json,
            empirical_json,
        } => {
            let t = fs::read_to_string(theory_json)?;
            let e = fs::read_to_string(empirical_json)?;
            let rows = compare(&t, &e)?;
            print!("{}", comparison_table_csv(&rows));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
