use std::fs;
use std::process::Command;

use reanneal_core::envs::EnvKind;
use reanneal_core::harness::{
    read_metrics_csv, run_training, RunConfig, MANIFEST_FILE, METRICS_FILE,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reanneal-rl"))
}

fn quick_config(episodes: usize, seed: u64) -> RunConfig {
    let mut config = RunConfig::preset(EnvKind::HoverTrap);
    config.episodes = episodes;
    config.seed = seed;
    config
}

#[test]
fn disabled_reanneal_follows_pure_decay() {
    let mut config = quick_config(80, 3);
    config.reanneal_enabled = false;
    config.decay_rate = 0.95;
    let records = run_training(&config).unwrap();
    let mut last = 1.0;
    for r in &records {
        let want = 0.95f64.powi(r.episode as i32).max(0.01);
        assert!(
            (r.epsilon_at_end - want).abs() < 1e-12,
            "episode {}",
            r.episode
        );
        assert!(r.epsilon_at_end <= last);
        assert!(!r.reannealed_this_episode);
        last = r.epsilon_at_end;
    }
}

#[test]
fn reanneal_episodes_end_at_one() {
    let mut config = quick_config(300, 0);
    config.decay_rate = 0.5;
    let records = run_training(&config).unwrap();
    for r in records.iter().filter(|r| r.reannealed_this_episode) {
        assert_eq!(r.epsilon_at_end, 1.0);
        assert_eq!(r.stuck_count, 0);
    }
    for w in records.windows(2) {
        if w[1].epsilon_at_end > w[0].epsilon_at_end {
            assert!(w[1].reannealed_this_episode);
        }
    }
}

#[test]
fn identical_seeds_give_identical_records() {
    let config = quick_config(30, 9);
    assert_eq!(
        run_training(&config).unwrap(),
        run_training(&config).unwrap()
    );
    let other = quick_config(30, 10);
    assert_ne!(
        run_training(&config).unwrap(),
        run_training(&other).unwrap()
    );
}

#[test]
fn train_writes_fifty_rows_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = bin()
        .args([
            "train",
            "--env",
            "hovertrap",
            "--episodes",
            "50",
            "--seed",
            "1",
            "--no-reanneal",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let records = read_metrics_csv(&out.join(METRICS_FILE)).unwrap();
    assert_eq!(records.len(), 50);
    assert_eq!(records.last().unwrap().episode, 50);

    let manifest = fs::read_to_string(out.join(MANIFEST_FILE)).unwrap();
    let replayed = RunConfig::from_config_text(&manifest, None).unwrap();
    assert!(!replayed.reanneal_enabled);
    assert_eq!(replayed.seed, 1);
    assert_eq!(replayed.episodes, 50);
    assert!(out.join("rewards.svg").exists());
    assert!(out.join("checkpoint").join("online.rqnet").exists());
}

#[test]
fn manifest_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(bin()
        .args([
            "train",
            "--env",
            "hovertrap",
            "--episodes",
            "20",
            "--seed",
            "4",
            "--out"
        ])
        .arg(&a)
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .arg("train")
        .arg("--config")
        .arg(a.join(MANIFEST_FILE))
        .arg("--out")
        .arg(&b)
        .status()
        .unwrap()
        .success());
    assert_eq!(
        fs::read(a.join(METRICS_FILE)).unwrap(),
        fs::read(b.join(METRICS_FILE)).unwrap()
    );
}

#[test]
fn eval_reports_mean_and_std() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    assert!(bin()
        .args(["train", "--env", "hovertrap", "--episodes", "10", "--out"])
        .arg(&out)
        .status()
        .unwrap()
        .success());
    let output = bin()
        .args(["eval", "--greedy", "--episodes", "5", "--checkpoint"])
        .arg(out.join("checkpoint"))
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.contains("mean return") && text.contains('±'), "{text}");
}

#[test]
fn bandit_subcommand_writes_curves() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args(["bandit", "--horizon", "200", "--seeds", "2", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.path().join("regret.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("t,regret_greedy,regret_const,regret_decay")
    );
    assert_eq!(lines.count(), 200);
}

#[test]
fn unknown_subcommand_exits_2() {
    let status = bin().arg("frobnicate").status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("occupied");
    fs::write(&file, "x").unwrap();
    let status = bin()
        .args(["train", "--env", "hovertrap", "--episodes", "1", "--out"])
        .arg(file.join("sub"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
