//! Command-line front end: synthesize comparison instances, rank a single
//! instance, run Monte Carlo sweeps, print feasibility thresholds, and
//! draw SVG figures from results CSVs.
//!
//! Exit codes: 0 success, 1 usage error, 2 structurally sound but
//! infeasible problem (e.g. a disconnected comparison graph), 3 I/O or
//! file-format error.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use btl_topk::bounds::{feasibility_report, RegimeSpec};
use btl_topk::centrality::{default_max_iters, rank_centrality_estimate, DEFAULT_STATIONARY_TOL};
use btl_topk::metrics::{l2_rel_error, linf_error, topk_success, TopKOutcome};
use btl_topk::spectral::{spectral_mle_rank, SpectralMleParams};
use btl_topk::synth::{generate_instance, GenConfig, ScoreScheme};
use btl_topk::top_k_indices;

use btl_topk_cli::config::ConfigFile;
use btl_topk_cli::instance::{read_instance, write_instance, Instance};
use btl_topk_cli::report::{bounds_csv_row, render_report, BOUNDS_HEADER};
use btl_topk_cli::results::read_results;
use btl_topk_cli::svg::{render_figure, FigureKind};
use btl_topk_cli::sweep::{load_experiment_config, run_experiment, Algo};
use btl_topk_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "btl-topk",
    version,
    about = "Top-K ranking from noisy pairwise comparisons",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write synthetic comparison instances described by a config file.
    Simulate {
        /// Key = value file with n, p_obs, l, and optional w_min, w_max,
        /// delta_k, k, seeds (comma list), exact.
        #[arg(long)]
        config: PathBuf,
        /// Output instance path; with several seeds, `-seed<N>` is
        /// inserted before the extension.
        #[arg(long)]
        out: PathBuf,
        /// Generate exactly one instance with this seed, overriding the
        /// config's seed list.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rank the items of one instance file and print its top-K set.
    Rank {
        /// Instance file produced by `simulate` (or by hand).
        instance: PathBuf,
        /// rank-centrality, spectral-mle, or both.
        #[arg(long, default_value = "spectral-mle")]
        algo: String,
        /// Set size; default min(10, n/2), at least 1.
        #[arg(long)]
        k: Option<usize>,
        /// Seed for algorithmic tie-breaking randomness.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the full estimated score vector here (single algorithm
        /// only).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo sweep over a parameter grid, resumably.
    Experiment {
        /// Key = value file with the sweep axes and trial budget.
        #[arg(long)]
        config: PathBuf,
        /// Results CSV; existing rows are kept and their cells skipped.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Stop after computing this many cells (for staged runs).
        #[arg(long)]
        cell_limit: Option<usize>,
    },
    /// Print sample-complexity thresholds for a problem regime.
    Bounds {
        /// Number of items.
        #[arg(long)]
        n: usize,
        /// Edge sampling probability.
        #[arg(long)]
        p_obs: f64,
        /// Comparisons per observed pair.
        #[arg(long)]
        l: f64,
        /// Normalized score gap between ranks K and K+1.
        #[arg(long)]
        delta_k: f64,
        /// Target set size.
        #[arg(long)]
        k: usize,
        /// Lower edge of the score box.
        #[arg(long, default_value_t = 0.5)]
        w_min: f64,
        /// Upper edge of the score box.
        #[arg(long, default_value_t = 1.0)]
        w_max: f64,
        /// Error budget in the impossibility bound.
        #[arg(long, default_value_t = 0.25)]
        epsilon: f64,
        /// Also write the report as a one-row CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw an SVG figure from an experiment results CSV.
    Plot {
        /// Results CSV written by `experiment`.
        results: PathBuf,
        /// linf-vs-L, linf-vs-pobs, or success-vs-deltaK.
        figure: String,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("BTL_TOPK_LOG"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate { config, out, seed } => cmd_simulate(&config, &out, seed),
        Command::Rank { instance, algo, k, seed, out } => {
            cmd_rank(&instance, &algo, k, seed, out.as_deref())
        }
        Command::Experiment { config, out, jobs, cell_limit } => {
            let cfg = load_experiment_config(&config)?;
            let s = run_experiment(&cfg, &out, jobs, cell_limit)?;
            println!(
                "{} cells: {} already present, {} computed -> {}",
                s.cells_total,
                s.cells_skipped,
                s.cells_run,
                out.display()
            );
            Ok(())
        }
        Command::Bounds { n, p_obs, l, delta_k, k, w_min, w_max, epsilon, out } => {
            let spec = RegimeSpec { n, p_obs, l, delta_k, k, w_min, w_max, epsilon };
            cmd_bounds(&spec, out.as_deref())
        }
        Command::Plot { results, figure, out } => cmd_plot(&results, &figure, &out),
    }
}

const SIMULATE_KEYS: &[&str] =
    &["n", "p_obs", "l", "w_min", "w_max", "delta_k", "k", "seeds", "exact"];

fn cmd_simulate(config: &Path, out: &Path, seed_override: Option<u64>) -> CliResult<()> {
    let file = ConfigFile::load(config)?;
    file.ensure_known_keys(SIMULATE_KEYS)?;
    let need =
        |key: &str| CliError::Format(format!("{}: missing required key `{key}`", file.path()));
    let n = file.get_usize("n")?.ok_or_else(|| need("n"))?;
    let p_obs = file.get_f64("p_obs")?.ok_or_else(|| need("p_obs"))?;
    let l = file.get_u64("l")?.ok_or_else(|| need("l"))?;
    let w_min = file.get_f64("w_min")?.unwrap_or(0.5);
    let w_max = file.get_f64("w_max")?.unwrap_or(1.0);
    let exact = file.get_bool("exact")?.unwrap_or(false);
    let scheme = match file.get_f64("delta_k")? {
        Some(delta_k) => {
            let k = file.get_usize("k")?.ok_or_else(|| {
                CliError::Format(format!(
                    "{}: a planted separation (`delta_k`) also needs key `k`",
                    file.path()
                ))
            })?;
            ScoreScheme::Planted { k, delta_k, lo: w_min, hi: w_max }
        }
        None => ScoreScheme::Uniform { lo: w_min, hi: w_max },
    };
    let seeds: Vec<u64> = match seed_override {
        Some(s) => vec![s],
        None => file.get_u64_list("seeds")?.unwrap_or_else(|| vec![0]),
    };
    if seeds.is_empty() {
        return Err(CliError::Format(format!(
            "{}: key `seeds` must list at least one seed",
            file.path()
        )));
    }

    let multi = seeds.len() > 1;
    for &seed in &seeds {
        let mut gen = GenConfig::new(n, p_obs, l, scheme, seed);
        gen.exact_expectation = exact;
        let (truth, _, stats) = generate_instance(&gen).map_err(CliError::from_core_file)?;
        let path = seed_path(out, seed, multi);
        write_instance(&path, &Instance { stats, truth: Some(truth), w_min, w_max })?;
        println!("{}", path.display());
    }
    Ok(())
}

/// Output path for one seed: the requested path as-is for a single seed,
/// `stem-seed<N>.ext` for several.
fn seed_path(out: &Path, seed: u64, multi: bool) -> PathBuf {
    if !multi {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
    let name = match out.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}-seed{seed}.{ext}"),
        None => format!("{stem}-seed{seed}"),
    };
    out.with_file_name(name)
}

fn cmd_rank(
    instance: &Path,
    algo: &str,
    k: Option<usize>,
    seed: u64,
    out: Option<&Path>,
) -> CliResult<()> {
    let algos: Vec<Algo> = match algo {
        "both" => vec![Algo::RankCentrality, Algo::SpectralMle],
        other => vec![Algo::from_label(other).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown --algo `{other}` (expected rank-centrality, spectral-mle, both)"
            ))
        })?],
    };
    if algos.len() > 1 && out.is_some() {
        return Err(CliError::Usage(
            "--out holds one estimate; pick a single algorithm, not `both`".into(),
        ));
    }
    let inst = read_instance(instance)?;
    let n = inst.stats.n();
    let k = k.unwrap_or_else(|| (n / 2).clamp(1, 10));

    let mut metric_lines = Vec::new();
    for &a in &algos {
        let (estimate, selected) = match a {
            Algo::RankCentrality => {
                let rc = rank_centrality_estimate(
                    &inst.stats,
                    inst.w_min,
                    inst.w_max,
                    DEFAULT_STATIONARY_TOL,
                    default_max_iters(n),
                )
                .map_err(CliError::from_core_flags)?;
                let sel =
                    top_k_indices(rc.estimate.scores(), k).map_err(CliError::from_core_flags)?;
                (rc.estimate, sel)
            }
            Algo::SpectralMle => {
                let params = SpectralMleParams::new(k, inst.w_min, inst.w_max);
                let (res, _) = spectral_mle_rank(&inst.stats, &params, seed)
                    .map_err(CliError::from_core_flags)?;
                (res.estimate, res.indices)
            }
        };
        let shown: Vec<String> = selected.iter().map(|i| (i + 1).to_string()).collect();
        println!("top-{k} ({}): {}", a.label(), shown.join(" "));
        if let Some(truth) = &inst.truth {
            let linf =
                linf_error(estimate.scores(), truth.scores()).map_err(CliError::from_core_file)?;
            let l2 = l2_rel_error(estimate.scores(), truth.scores())
                .map_err(CliError::from_core_file)?;
            let success = match topk_success(&selected, truth.scores(), k)
                .map_err(CliError::from_core_file)?
            {
                TopKOutcome::Correct => "true",
                TopKOutcome::Incorrect => "false",
                TopKOutcome::Ambiguous => "ambiguous",
            };
            metric_lines.push(format!("{},{seed},{k},{linf},{l2},{success}", a.label()));
        }
        if let Some(out) = out {
            let mut text = String::new();
            for (i, s) in estimate.scores().iter().enumerate() {
                text.push_str(&format!("{},{s:.16e}\n", i + 1));
            }
            std::fs::write(out, text)
                .map_err(|e| CliError::Format(format!("{}: {e}", out.display())))?;
        }
    }
    if !metric_lines.is_empty() {
        println!("algo,seed,k,linf,l2,success");
        for line in metric_lines {
            println!("{line}");
        }
    }
    Ok(())
}

fn cmd_bounds(spec: &RegimeSpec, out: Option<&Path>) -> CliResult<()> {
    let report = feasibility_report(spec).map_err(CliError::from_core_flags)?;
    print!("{}", render_report(spec, &report));
    if let Some(out) = out {
        let text = format!("{BOUNDS_HEADER}\n{}\n", bounds_csv_row(spec, &report));
        std::fs::write(out, text)
            .map_err(|e| CliError::Format(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn cmd_plot(results: &Path, figure: &str, out: &Path) -> CliResult<()> {
    let kind = FigureKind::from_label(figure).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown figure `{figure}` (expected linf-vs-L, linf-vs-pobs, success-vs-deltaK)"
        ))
    })?;
    let rows = read_results(results)?;
    let svg = render_figure(&rows, kind)?;
    std::fs::write(out, svg).map_err(|e| CliError::Format(format!("{}: {e}", out.display())))?;
    println!("{}", out.display());
    Ok(())
}
