//! The Monte Carlo sweep: a full factorial grid over (n, p_obs, L, Δ_K, K),
//! a fixed trial budget per cell, both estimators on the *same* generated
//! instances (paired comparisons), aggregation, and a resumable CSV.
//!
//! Determinism contract: trial `t` of any cell uses instance seed
//! `base_seed + t`, trials are collected in index order, and aggregation
//! runs sequentially over that ordered collection — so the CSV content is
//! identical across reruns and across `--jobs` settings (only the
//! wall-clock column varies). Cells are emitted in canonical grid order
//! (n, then p_obs, L, Δ_K, K, then algorithm), and a resumed run skips
//! exactly the cells whose rows are already present, which makes an
//! interrupted-then-resumed CSV byte-identical to an uninterrupted one.

use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;

use btl_topk::centrality::{default_max_iters, rank_centrality_estimate, DEFAULT_STATIONARY_TOL};
use btl_topk::metrics::{aggregate, l2_rel_error, linf_error, topk_success, TopKOutcome, TrialRecord};
use btl_topk::spectral::{spectral_mle_rank, SpectralMleParams};
use btl_topk::synth::{generate_instance, GenConfig, ScoreScheme};
use btl_topk::{top_k_indices, PreferenceVector, SufficientStats};

use crate::config::ConfigFile;
use crate::results::{append_rows, read_results, ResultRow};
use crate::{CliError, CliResult};

/// The two estimators the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algo {
    RankCentrality,
    SpectralMle,
}

impl Algo {
    /// Stable label used in CSVs and flags.
    pub fn label(self) -> &'static str {
        match self {
            Algo::RankCentrality => "rank-centrality",
            Algo::SpectralMle => "spectral-mle",
        }
    }

    /// Parses a label.
    pub fn from_label(s: &str) -> Option<Algo> {
        match s {
            "rank-centrality" => Some(Algo::RankCentrality),
            "spectral-mle" => Some(Algo::SpectralMle),
            _ => None,
        }
    }
}

/// A parsed and validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    /// Sweep axes (each nonempty except `delta_ks`).
    pub ns: Vec<usize>,
    pub p_obs: Vec<f64>,
    pub ls: Vec<u64>,
    /// Planted separations; empty means scores drawn uniformly in the box.
    pub delta_ks: Vec<f64>,
    pub ks: Vec<usize>,
    /// Trials per cell.
    pub trials: usize,
    /// Algorithms to run, in CSV row order.
    pub algos: Vec<Algo>,
    /// Base seed; trial `t` uses `seed + t`.
    pub seed: u64,
    /// Score box.
    pub w_min: f64,
    pub w_max: f64,
    /// Sweep-count constant of the refinement stage.
    pub c2: f64,
    /// Threshold-scale constant of the refinement stage.
    pub c3: f64,
    /// Whether the refinement stage splits edges between stages.
    pub split: bool,
}

const EXPERIMENT_KEYS: &[&str] = &[
    "n", "p_obs", "l", "delta_k", "k", "trials", "algos", "seed", "w_min", "w_max", "c2", "c3",
    "split",
];

/// Loads an experiment config file.
pub fn load_experiment_config(path: &Path) -> CliResult<ExperimentConfig> {
    let file = ConfigFile::load(path)?;
    file.ensure_known_keys(EXPERIMENT_KEYS)?;
    let need = |key: &str| {
        CliError::Format(format!("{}: missing required key `{key}`", file.path()))
    };

    let ns = file.get_usize_list("n")?.ok_or_else(|| need("n"))?;
    let p_obs = file.get_f64_list("p_obs")?.ok_or_else(|| need("p_obs"))?;
    let ls = file.get_u64_list("l")?.ok_or_else(|| need("l"))?;
    let delta_ks = file.get_f64_list("delta_k")?.unwrap_or_default();
    let ks = file.get_usize_list("k")?.ok_or_else(|| need("k"))?;
    let trials = file.get_usize("trials")?.unwrap_or(200);
    let algo_names = file
        .get_str_list("algos")
        .unwrap_or_else(|| vec!["rank-centrality".into(), "spectral-mle".into()]);
    let mut algos = Vec::new();
    for name in &algo_names {
        let algo = Algo::from_label(name).ok_or_else(|| {
            CliError::Format(format!(
                "{}: key `algos`: unknown algorithm `{name}` (expected rank-centrality, spectral-mle)",
                file.path()
            ))
        })?;
        if !algos.contains(&algo) {
            algos.push(algo);
        }
    }
    let config = ExperimentConfig {
        ns,
        p_obs,
        ls,
        delta_ks,
        ks,
        trials,
        algos,
        seed: file.get_u64("seed")?.unwrap_or(0),
        w_min: file.get_f64("w_min")?.unwrap_or(0.5),
        w_max: file.get_f64("w_max")?.unwrap_or(1.0),
        c2: file.get_f64("c2")?.unwrap_or(5.0),
        c3: file.get_f64("c3")?.unwrap_or(1.0),
        split: file.get_bool("split")?.unwrap_or(false),
    };
    validate_config(&config, file.path())?;
    Ok(config)
}

fn validate_config(c: &ExperimentConfig, path: &str) -> CliResult<()> {
    let fail = |msg: String| CliError::Format(format!("{path}: {msg}"));
    for (name, empty) in [
        ("n", c.ns.is_empty()),
        ("p_obs", c.p_obs.is_empty()),
        ("l", c.ls.is_empty()),
        ("k", c.ks.is_empty()),
        ("algos", c.algos.is_empty()),
    ] {
        if empty {
            return Err(fail(format!("axis `{name}` must be nonempty")));
        }
    }
    if c.trials < 1 {
        return Err(fail("`trials` must be >= 1".to_string()));
    }
    for &p in &c.p_obs {
        if !(p > 0.0 && p <= 1.0) {
            return Err(fail(format!("p_obs value {p} outside (0, 1]")));
        }
    }
    if !(c.w_min > 0.0 && c.w_min <= c.w_max && c.w_max.is_finite()) {
        return Err(fail(format!("invalid score box [{}, {}]", c.w_min, c.w_max)));
    }
    Ok(())
}

/// One grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub n: usize,
    pub p_obs: f64,
    pub l: u64,
    pub delta_k: Option<f64>,
    pub k: usize,
}

/// The full grid in canonical order: n, then p_obs, L, Δ_K, K.
pub fn grid(config: &ExperimentConfig) -> Vec<Cell> {
    let deltas: Vec<Option<f64>> = if config.delta_ks.is_empty() {
        vec![None]
    } else {
        config.delta_ks.iter().map(|&d| Some(d)).collect()
    };
    let mut cells = Vec::new();
    for &n in &config.ns {
        for &p_obs in &config.p_obs {
            for &l in &config.ls {
                for &delta_k in &deltas {
                    for &k in &config.ks {
                        cells.push(Cell { n, p_obs, l, delta_k, k });
                    }
                }
            }
        }
    }
    cells
}

/// Outcome of one trial for one algorithm.
enum TrialOutcome {
    Done(TrialRecord),
    /// The trial errored; carries the message for the log.
    Failed(String),
}

fn run_estimator(
    algo: Algo,
    stats: &SufficientStats,
    truth: &PreferenceVector,
    cell: &Cell,
    config: &ExperimentConfig,
    trial_seed: u64,
) -> Result<TrialRecord, btl_topk::Error> {
    let started = Instant::now();
    let (estimate, selected, replaced_total) = match algo {
        Algo::RankCentrality => {
            let rc = rank_centrality_estimate(
                stats,
                config.w_min,
                config.w_max,
                DEFAULT_STATIONARY_TOL,
                default_max_iters(cell.n),
            )?;
            let selected = top_k_indices(rc.estimate.scores(), cell.k)?;
            (rc.estimate, selected, None)
        }
        Algo::SpectralMle => {
            let mut params = SpectralMleParams::new(cell.k, config.w_min, config.w_max);
            params.c2 = config.c2;
            params.c3 = config.c3;
            params.split_samples = config.split;
            let (result, trace) = spectral_mle_rank(stats, &params, trial_seed)?;
            (result.estimate, result.indices, Some(trace.replaced_total() as u64))
        }
    };
    let runtime_ms = started.elapsed().as_secs_f64() * 1e3;

    let linf = linf_error(estimate.scores(), truth.scores())?;
    let l2 = l2_rel_error(estimate.scores(), truth.scores())?;
    let success = match topk_success(&selected, truth.scores(), cell.k)? {
        TopKOutcome::Correct => Some(true),
        TopKOutcome::Incorrect => Some(false),
        TopKOutcome::Ambiguous => None,
    };
    Ok(TrialRecord {
        trial_seed,
        algo: algo.label().to_string(),
        linf,
        l2,
        success,
        runtime_ms,
        replaced_total,
    })
}

/// Runs every algorithm on one fresh instance. Per the partial-failure
/// policy, errors become per-algorithm failure markers.
fn run_trial(cell: &Cell, config: &ExperimentConfig, trial: usize) -> Vec<TrialOutcome> {
    let trial_seed = config.seed.wrapping_add(trial as u64);
    let scheme = match cell.delta_k {
        Some(delta_k) => ScoreScheme::Planted {
            k: cell.k,
            delta_k,
            lo: config.w_min,
            hi: config.w_max,
        },
        None => ScoreScheme::Uniform { lo: config.w_min, hi: config.w_max },
    };
    let gen = GenConfig::new(cell.n, cell.p_obs, cell.l, scheme, trial_seed);
    let (truth, _, stats) = match generate_instance(&gen) {
        Ok(parts) => parts,
        Err(e) => {
            // Generation feeds every algorithm, so all of them fail.
            return config
                .algos
                .iter()
                .map(|_| TrialOutcome::Failed(e.to_string()))
                .collect();
        }
    };
    config
        .algos
        .iter()
        .map(|&algo| {
            match run_estimator(algo, &stats, &truth, cell, config, trial_seed) {
                Ok(record) => TrialOutcome::Done(record),
                Err(e) => TrialOutcome::Failed(e.to_string()),
            }
        })
        .collect()
}

fn summarize_cell(
    cell: &Cell,
    config: &ExperimentConfig,
    outcomes: &[Vec<TrialOutcome>],
) -> CliResult<Vec<ResultRow>> {
    let mut rows = Vec::with_capacity(config.algos.len());
    for (ai, &algo) in config.algos.iter().enumerate() {
        let mut records: Vec<TrialRecord> = Vec::new();
        let mut failures = 0usize;
        for per_trial in outcomes {
            match &per_trial[ai] {
                TrialOutcome::Done(r) => records.push(r.clone()),
                TrialOutcome::Failed(msg) => {
                    failures += 1;
                    log::warn!(
                        "trial failed (algo={}, n={}, p_obs={}, L={}): {msg}",
                        algo.label(),
                        cell.n,
                        cell.p_obs,
                        cell.l
                    );
                }
            }
        }
        let summary = aggregate(&records)
            .map_err(|e| CliError::Format(format!("aggregation: {e}")))?
            .pop();
        let row = match summary {
            Some(s) => ResultRow {
                algo: algo.label().to_string(),
                n: cell.n,
                p_obs: cell.p_obs,
                l: cell.l,
                k: cell.k,
                delta_k: cell.delta_k,
                trials: config.trials,
                linf_mean: Some(s.linf_mean),
                linf_se: Some(s.linf_se),
                l2_mean: Some(s.l2_mean),
                l2_se: Some(s.l2_se),
                success_rate: s.success_rate,
                success_ci_lo: s.success_ci.map(|ci| ci.0),
                success_ci_hi: s.success_ci.map(|ci| ci.1),
                ambiguous: s.ambiguous,
                failures,
                runtime_ms: s.runtime_ms_mean,
            },
            None => ResultRow {
                algo: algo.label().to_string(),
                n: cell.n,
                p_obs: cell.p_obs,
                l: cell.l,
                k: cell.k,
                delta_k: cell.delta_k,
                trials: config.trials,
                linf_mean: None,
                linf_se: None,
                l2_mean: None,
                l2_se: None,
                success_rate: None,
                success_ci_lo: None,
                success_ci_hi: None,
                ambiguous: 0,
                failures,
                runtime_ms: 0.0,
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

/// What a sweep run did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    /// Cells in the grid.
    pub cells_total: usize,
    /// Cells skipped because their rows were already in the CSV.
    pub cells_skipped: usize,
    /// Cells computed in this invocation.
    pub cells_run: usize,
}

/// Runs the sweep, appending one row per (cell, algorithm) to `out` in
/// canonical order. Cells whose rows are already present are skipped
/// (resume contract). `jobs` sizes the worker pool (0 = all cores);
/// `cell_limit` stops after that many computed cells, leaving a valid
/// partial CSV for a later resume.
pub fn run_experiment(
    config: &ExperimentConfig,
    out: &Path,
    jobs: usize,
    cell_limit: Option<usize>,
) -> CliResult<RunSummary> {
    let done: HashSet<String> = if out.exists() {
        read_results(out)?.iter().map(|r| r.cell_key()).collect()
    } else {
        HashSet::new()
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build a {jobs}-thread pool: {e}")))?;

    let cells = grid(config);
    let mut summary =
        RunSummary { cells_total: cells.len(), cells_skipped: 0, cells_run: 0 };
    for cell in &cells {
        let missing: Vec<Algo> = config
            .algos
            .iter()
            .copied()
            .filter(|algo| !done.contains(&cell_row_key(cell, *algo)))
            .collect();
        if missing.is_empty() {
            summary.cells_skipped += 1;
            continue;
        }
        if let Some(limit) = cell_limit {
            if summary.cells_run >= limit {
                break;
            }
        }

        let started = Instant::now();
        let outcomes: Vec<Vec<TrialOutcome>> = pool.install(|| {
            (0..config.trials)
                .into_par_iter()
                .map(|t| run_trial(cell, config, t))
                .collect()
        });
        let rows = summarize_cell(cell, config, &outcomes)?;
        // A resumed run recomputes only the rows absent from the file; the
        // instances depend on (cell, trial) alone, so recomputed rows match
        // the ones an uninterrupted run would have written.
        let rows: Vec<ResultRow> =
            rows.into_iter().filter(|r| !done.contains(&r.cell_key())).collect();
        append_rows(out, &rows)?;
        summary.cells_run += 1;
        log::info!(
            "cell n={} p_obs={} L={} delta={:?} k={}: {} trials x {} algos in {:.1}s",
            cell.n,
            cell.p_obs,
            cell.l,
            cell.delta_k,
            cell.k,
            config.trials,
            config.algos.len(),
            started.elapsed().as_secs_f64()
        );
    }
    Ok(summary)
}

fn cell_row_key(cell: &Cell, algo: Algo) -> String {
    let delta = cell.delta_k.map(|d| d.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{delta}",
        algo.label(),
        cell.n,
        cell.p_obs,
        cell.l,
        cell.k
    )
}
