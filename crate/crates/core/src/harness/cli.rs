//! `reanneal-rl` command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::config::{text_sets_key, RunConfig, SEED_ENV_VAR};
use super::eval::evaluate;
use super::metrics::{moving_average, read_metrics_csv};
use super::plot::emit_reward_plot;
use super::train::{run_training, METRICS_FILE, PLOT_FILE};
use crate::agent::Agent;
use crate::bandit::{mean_curve, run_bandit, BanditSpec, Strategy};
use crate::envs::{AnyEnv, EnvKind, Environment};
use crate::{seeded_rng, Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "reanneal-rl",
    version,
    about = "Deep Q-learning with exploration reannealing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a DQN agent and write metrics, manifest, plot and checkpoint.
    Train(TrainArgs),
    /// Simulate bandit regret for greedy, constant-ε and decaying-ε play.
    Bandit(BanditArgs),
    /// Render the reward/ε plot for a metrics CSV.
    Plot(PlotArgs),
    /// Play episodes with a saved agent and report the mean return.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Config file with [run] and [agent] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// lander or hovertrap.
    #[arg(long)]
    env: Option<EnvKind>,
    #[arg(long)]
    episodes: Option<usize>,
    /// Falls back to $REANNEAL_RL_SEED when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    decay_rate: Option<f64>,
    /// Plain decaying ε-greedy.
    #[arg(long)]
    no_reanneal: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    checkpoint_every: Option<usize>,
    /// Fill wall_time_ms in the metrics (makes them run-dependent).
    #[arg(long)]
    wall_clock: bool,
}

#[derive(Debug, Args)]
struct BanditArgs {
    #[arg(long, default_value_t = 100_000)]
    horizon: usize,
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    #[arg(long)]
    out: PathBuf,
    /// Comma-separated true arm means.
    #[arg(long, default_value = "0,1")]
    arm_means: String,
    #[arg(long, default_value_t = 0.1)]
    noise: f64,
    /// ε of the constant-ε strategy.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// c in ε_t = min(1, c / (δ² t)).
    #[arg(long, default_value_t = 5.0)]
    c: f64,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[arg(long)]
    metrics: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 100)]
    window: usize,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Checkpoint directory written by `train`.
    #[arg(long)]
    checkpoint: PathBuf,
    #[arg(long, default_value_t = 100)]
    episodes: usize,
    /// Act greedily; otherwise ε = 0.01.
    #[arg(long)]
    greedy: bool,
    /// Inferred from the network input size when absent.
    #[arg(long)]
    env: Option<EnvKind>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return err.exit_code();
        }
    };
    let result = match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Bandit(args) => cmd_bandit(args),
        Command::Plot(args) => cmd_plot(args),
        Command::Eval(args) => cmd_eval(args),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

/// Resolves the run config from file, flags and the seed environment variable.
fn resolve_train_config(args: &TrainArgs) -> Result<RunConfig> {
    let (mut config, file_seed) = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            (
                RunConfig::from_config_text(&text, args.env)?,
                text_sets_key(&text, "run.seed")?,
            )
        }
        None => (
            RunConfig::preset(args.env.unwrap_or(EnvKind::HoverTrap)),
            false,
        ),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    } else if !file_seed {
        if let Ok(value) = std::env::var(SEED_ENV_VAR) {
            config.seed = value.trim().parse().map_err(|_| {
                Error::InvalidParameter(format!("{SEED_ENV_VAR}=`{value}` is not an integer"))
            })?;
        }
    }
    if let Some(n) = args.episodes {
        config.episodes = n;
    }
    if let Some(rate) = args.decay_rate {
        config.decay_rate = rate;
    }
    if args.no_reanneal {
        config.reanneal_enabled = false;
    }
    if let Some(out) = &args.out {
        config.output_dir = Some(out.clone());
    }
    if let Some(every) = args.checkpoint_every {
        config.checkpoint_every = every;
    }
    if args.wall_clock {
        config.record_wall_time = true;
    }
    if config.output_dir.is_none() {
        config.output_dir = Some(PathBuf::from(format!(
            "runs/{}-seed{}",
            config.env, config.seed
        )));
    }
    config.validate()?;
    Ok(config)
}

fn cmd_train(args: TrainArgs) -> Result<()> {
    let config = resolve_train_config(&args)?;
    let records = run_training(&config)?;
    let rewards: Vec<f64> = records.iter().map(|r| r.total_reward).collect();
    let smooth = moving_average(&rewards, config.moving_average_window);
    let reanneals = records.iter().filter(|r| r.reannealed_this_episode).count();
    let dir = config.output_dir.as_deref().expect("resolved");
    println!(
        "{} episodes on {} (seed {}): final moving-average reward {:.2}, {} reanneal(s)",
        records.len(),
        config.env,
        config.seed,
        smooth.last().copied().unwrap_or(0.0),
        reanneals
    );
    println!("metrics: {}", dir.join(METRICS_FILE).display());
    println!("plot:    {}", dir.join(PLOT_FILE).display());
    Ok(())
}

fn cmd_bandit(args: BanditArgs) -> Result<()> {
    let means = args
        .arm_means
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad arm mean `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let spec = BanditSpec::new(means, args.noise, args.horizon)?;
    if args.seeds == 0 {
        return Err(Error::InvalidParameter("--seeds must be ≥ 1".into()));
    }
    let strategies = [
        Strategy::Greedy,
        Strategy::ConstantEps(args.epsilon),
        Strategy::DecayingEps(args.c),
    ];
    let mut curves = Vec::with_capacity(strategies.len());
    for strategy in strategies {
        let runs = (0..args.seeds)
            .map(|seed| run_bandit(&spec, strategy, &mut seeded_rng(seed)))
            .collect::<Result<Vec<_>>>()?;
        curves.push(mean_curve(&runs)?);
    }
    fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let path = args.out.join("regret.csv");
    write_regret_csv(
        &path,
        &curves[0].cumulative_regret,
        &curves[1].cumulative_regret,
        &curves[2].cumulative_regret,
    )?;
    println!(
        "L({}) greedy {:.2}, constant-ε {:.2}, decaying-ε {:.2} (mean of {} seeds)",
        args.horizon,
        curves[0].total(),
        curves[1].total(),
        curves[2].total(),
        args.seeds
    );
    println!("regret: {}", path.display());
    Ok(())
}

fn write_regret_csv(path: &Path, greedy: &[f64], constant: &[f64], decaying: &[f64]) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(out, "t,regret_greedy,regret_const,regret_decay").map_err(io)?;
    for (i, ((g, c), d)) in greedy.iter().zip(constant).zip(decaying).enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            super::format_sig6(*g),
            super::format_sig6(*c),
            super::format_sig6(*d)
        )
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let records = read_metrics_csv(&args.metrics)?;
    emit_reward_plot(&records, args.window, &args.out)?;
    println!("plot: {}", args.out.display());
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let (agent, trained_episodes) = Agent::load(&args.checkpoint)?;
    let env_kind = match args.env {
        Some(kind) => kind,
        None => [EnvKind::HoverTrap, EnvKind::Lander]
            .into_iter()
            .find(|k| k.spec().observation_size == agent.online().input_size())
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "no environment takes {} inputs; pass --env",
                    agent.online().input_size()
                ))
            })?,
    };
    let mut env = AnyEnv::new(env_kind);
    let spec = env.spec();
    if spec.observation_size != agent.online().input_size()
        || spec.action_count != agent.online().output_size()
    {
        return Err(Error::InvalidInput(format!(
            "checkpoint network {:?} does not fit {env_kind}",
            agent.online().layer_sizes()
        )));
    }
    let epsilon = if args.greedy { 0.0 } else { 0.01 };
    let summary = evaluate(
        &agent,
        &mut env,
        args.episodes,
        epsilon,
        &mut seeded_rng(args.seed),
    )?;
    println!(
        "{env_kind}: mean return {:.3} ± {:.3} over {} {} episodes (agent trained {} episodes)",
        summary.mean,
        summary.std,
        args.episodes,
        if args.greedy { "greedy" } else { "ε=0.01" },
        trained_episodes
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn train_args(argv: &[&str]) -> TrainArgs {
        let mut full = vec!["reanneal-rl", "train"];
        full.extend_from_slice(argv);
        match Cli::try_parse_from(full).unwrap().command {
            Command::Train(a) => a,
            _ => unreachable!(),
        }
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.cfg");
        fs::write(
            &path,
            "[run]\nenv = hovertrap\nepisodes = 30\nseed = 3\ndecay_rate = 0.95\n",
        )
        .unwrap();
        let p = path.to_str().unwrap();
        let c = resolve_train_config(&train_args(&[
            "--config",
            p,
            "--episodes",
            "5",
            "--no-reanneal",
        ]))
        .unwrap();
        assert_eq!(c.episodes, 5);
        assert_eq!(c.seed, 3);
        assert_eq!(c.decay_rate, 0.95);
        assert!(!c.reanneal_enabled);
        let c = resolve_train_config(&train_args(&[
            "--config",
            p,
            "--seed",
            "9",
            "--decay-rate",
            "0.985",
        ]))
        .unwrap();
        assert_eq!((c.seed, c.decay_rate), (9, 0.985));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(cli_main(["reanneal-rl", "frobnicate"]), 2);
        assert_eq!(cli_main(["reanneal-rl", "train", "--bogus"]), 2);
        assert_eq!(cli_main(["reanneal-rl", "train", "--env", "mars"]), 2);
        assert_eq!(cli_main(["reanneal-rl"]), 2);
    }

    #[test]
    fn runtime_errors_exit_1() {
        assert_eq!(
            cli_main([
                "reanneal-rl",
                "plot",
                "--metrics",
                "/nonexistent/m.csv",
                "--out",
                "/tmp/x.svg"
            ]),
            1
        );
        assert_eq!(
            cli_main([
                "reanneal-rl",
                "train",
                "--episodes",
                "0",
                "--out",
                "/tmp/never"
            ]),
            1
        );
    }
}
