//! End-to-end tests of the `btl-topk` binary: every subcommand is spawned
//! as a real process and judged on exit code, stdout/stderr text, and the
//! files it writes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

use btl_topk_cli::report::parse_bounds_csv;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_btl-topk")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn btl-topk")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

/// Generates one exact-expectation instance (n=10, complete graph) and
/// returns its path. The noiseless outcomes make ranking exact, so tests
/// can assert `success=true` without slack.
fn exact_instance(dir: &TempDir) -> PathBuf {
    let config = dir.path().join("sim.conf");
    write(&config, "n = 10\np_obs = 1.0\nl = 50\nexact = true\n");
    let out = dir.path().join("exact.inst");
    let res = run(&["simulate", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&res), 0, "simulate failed: {}", stderr(&res));
    out
}

#[test]
fn missing_instance_file_is_a_format_error() {
    let res = run(&["rank", "/nonexistent/path.inst"]);
    assert_eq!(code(&res), 3);
    assert!(stderr(&res).starts_with("error: "), "stderr: {}", stderr(&res));
}

#[test]
fn unknown_algo_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let inst = exact_instance(&dir);
    let res = run(&["rank", inst.to_str().unwrap(), "--algo", "bogus"]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("unknown --algo"), "stderr: {}", stderr(&res));
}

#[test]
fn clap_rejections_exit_1_and_help_exits_0() {
    // Missing required flags.
    let res = run(&["bounds", "--n", "10"]);
    assert_eq!(code(&res), 1);
    // Unknown subcommand.
    let res = run(&["frobnicate"]);
    assert_eq!(code(&res), 1);
    // Help is not an error.
    let res = run(&["--help"]);
    assert_eq!(code(&res), 0);
    assert!(stdout(&res).contains("simulate"));
}

#[test]
fn disconnected_instance_is_infeasible() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("split.inst");
    // Two components: {1,2} and {3,4}. Parses fine; no estimator can rank it.
    write(&inst, "n=4\nL=4\nw_min=0.5\nw_max=1\n1,2,0.5\n3,4,0.5\n");
    for algo in ["rank-centrality", "spectral-mle"] {
        let res = run(&["rank", inst.to_str().unwrap(), "--algo", algo]);
        assert_eq!(code(&res), 2, "algo {algo}: {}", stderr(&res));
        assert!(stderr(&res).contains("disconnected"), "stderr: {}", stderr(&res));
    }
}

#[test]
fn simulate_is_deterministic_and_splits_output_per_seed() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("sim.conf");
    write(&config, "n = 12\np_obs = 0.7\nl = 6\nseeds = 11, 12\n");
    let run_once = |sub: &str| -> (String, String, String) {
        let out = dir.path().join(sub).join("inst.txt");
        std::fs::create_dir_all(out.parent().unwrap()).unwrap();
        let res = run(&["simulate", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert_eq!(code(&res), 0, "{}", stderr(&res));
        let a = out.with_file_name("inst-seed11.txt");
        let b = out.with_file_name("inst-seed12.txt");
        // Stdout lists exactly the written paths, in seed order.
        let lines: Vec<String> = stdout(&res).lines().map(String::from).collect();
        assert_eq!(lines, vec![a.display().to_string(), b.display().to_string()]);
        (
            std::fs::read_to_string(&a).unwrap(),
            std::fs::read_to_string(&b).unwrap(),
            stdout(&res),
        )
    };
    let (a1, b1, _) = run_once("first");
    let (a2, b2, _) = run_once("second");
    assert_eq!(a1, a2, "same seed, same bytes");
    assert_eq!(b1, b2);
    assert_ne!(a1, b1, "different seeds differ");

    // --seed overrides the list and writes a single un-suffixed file.
    let out = dir.path().join("single.txt");
    let res = run(&[
        "simulate",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "11",
    ]);
    assert_eq!(code(&res), 0);
    assert_eq!(stdout(&res).trim(), out.display().to_string());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), a1);
}

#[test]
fn rank_on_a_noiseless_instance_recovers_the_truth() {
    let dir = TempDir::new().unwrap();
    let inst = exact_instance(&dir);
    let res = run(&["rank", inst.to_str().unwrap(), "--algo", "both", "--k", "5"]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let text = stdout(&res);
    let tops: Vec<&str> = text.lines().filter(|l| l.starts_with("top-5 (")).collect();
    assert_eq!(tops.len(), 2, "one top-5 line per algorithm:\n{text}");
    // Both algorithms agree on the noiseless instance.
    let suffix = |l: &str| l.split("): ").nth(1).unwrap().to_string();
    assert_eq!(suffix(tops[0]), suffix(tops[1]), "{text}");
    assert!(text.contains("algo,seed,k,linf,l2,success"), "{text}");
    let rows: Vec<&str> =
        text.lines().filter(|l| l.starts_with("rank-centrality,") || l.starts_with("spectral-mle,")).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row.ends_with(",true"), "noiseless ranking must succeed: {row}");
    }

    // --out writes one estimated score per item, 1-based ids.
    let scores = dir.path().join("scores.csv");
    let res = run(&[
        "rank",
        inst.to_str().unwrap(),
        "--algo",
        "rank-centrality",
        "--out",
        scores.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0);
    let text = std::fs::read_to_string(&scores).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.starts_with("1,"));

    // `both` with --out is ambiguous.
    let res = run(&[
        "rank",
        inst.to_str().unwrap(),
        "--algo",
        "both",
        "--out",
        scores.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 1);
}

#[test]
fn bounds_report_prints_and_round_trips_through_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bounds.csv");
    let res = run(&[
        "bounds", "--n", "100", "--p-obs", "0.2", "--l", "5", "--delta-k", "0.3", "--k", "10",
        "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    let text = stdout(&res);
    for needle in ["items (n):", "score box:", "lower bound on L", "verdict:"] {
        assert!(text.contains(needle), "missing `{needle}` in:\n{text}");
    }
    let row = parse_bounds_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(row.n, 100);
    assert_eq!(row.delta_k, 0.3);
    assert!(row.fano_min_l.is_finite());

    // delta_k = 0 puts both thresholds at infinity: below the lower bound.
    let res = run(&["bounds", "--n", "100", "--p-obs", "0.2", "--l", "5", "--delta-k", "0", "--k", "10"]);
    assert_eq!(code(&res), 0);
    let text = stdout(&res);
    assert!(text.contains("inf"), "{text}");
    assert!(text.contains("below lower bound"), "{text}");

    // An error budget outside (0, 1) is a flag error.
    let res = run(&[
        "bounds", "--n", "100", "--p-obs", "0.2", "--l", "5", "--delta-k", "0.3", "--k", "10",
        "--epsilon", "1.5",
    ]);
    assert_eq!(code(&res), 1, "{}", stderr(&res));
}

#[test]
fn experiment_and_plot_cooperate_end_to_end() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("exp.conf");
    write(
        &config,
        "n = 12\np_obs = 0.8\nl = 2, 4\nk = 3\ntrials = 3\nalgos = rank-centrality, spectral-mle\nseed = 5\n",
    );
    let csv = dir.path().join("results.csv");
    let res = run(&["experiment", "--config", config.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    assert!(stdout(&res).contains("2 cells: 0 already present, 2 computed"), "{}", stdout(&res));

    // Re-running the finished sweep computes nothing.
    let res = run(&["experiment", "--config", config.to_str().unwrap(), "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&res), 0);
    assert!(stdout(&res).contains("2 cells: 2 already present, 0 computed"), "{}", stdout(&res));

    // A figure over the swept axis: two algorithms, two points each.
    let svg = dir.path().join("plot.svg");
    let res = run(&["plot", csv.to_str().unwrap(), "linf-vs-L", "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&res), 0, "{}", stderr(&res));
    assert_eq!(stdout(&res).trim(), svg.display().to_string());
    let body = std::fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg"), "{body}");
    assert_eq!(body.matches("<polyline").count(), 2, "one line per algorithm");

    // The separation figure needs planted cells; a uniform sweep lacks them.
    let res = run(&["plot", csv.to_str().unwrap(), "success-vs-deltaK", "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&res), 3, "{}", stderr(&res));
    assert!(stderr(&res).contains("delta_K"), "{}", stderr(&res));

    // Unknown figure name.
    let res = run(&["plot", csv.to_str().unwrap(), "success-vs-n", "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&res), 1);
    assert!(stderr(&res).contains("unknown figure"), "{}", stderr(&res));

    // A CSV with the wrong header is a format error.
    let bogus = dir.path().join("bogus.csv");
    write(&bogus, "a,b,c\n1,2,3\n");
    let res = run(&["plot", bogus.to_str().unwrap(), "linf-vs-L", "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&res), 3);
    assert!(stderr(&res).contains("missing columns"), "{}", stderr(&res));
}
