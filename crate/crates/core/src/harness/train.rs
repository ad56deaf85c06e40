//! The training loop with exploration reannealing.
//!
//! Per episode: ε-greedy steps, each storing its transition and running one
//! train step; then the stuck counter is updated with whether the episode
//! hit the time limit; then ε is either reset to 1 (counter reached its
//! threshold) or decayed once. The target network syncs on its episode period.

use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::Rng as _;

use super::config::RunConfig;
use super::metrics::{EpisodeRecord, MetricsWriter};
use super::plot::emit_reward_plot;
use crate::agent::Agent;
use crate::envs::{AnyEnv, Environment};
use crate::explore::{select_epsilon_greedy_lazy, EpsilonSchedule, StuckCounter};
use crate::replay::{Experience, ReplayBuffer};
use crate::{seeded_rng, Error, Result, Rng};

pub const METRICS_FILE: &str = "metrics.csv";
pub const MANIFEST_FILE: &str = "run.cfg";
pub const PLOT_FILE: &str = "rewards.svg";
pub const CHECKPOINT_DIR: &str = "checkpoint";

/// Independent random streams derived from one run seed.
pub struct RunRngs {
    pub init: Rng,
    pub env: Rng,
    pub action: Rng,
    pub sample: Rng,
}

impl RunRngs {
    pub fn new(seed: u64) -> Self {
        let stream = |n: u64| {
            let mut rng = seeded_rng(seed);
            rng.set_stream(n);
            rng
        };
        Self {
            init: stream(1),
            env: stream(2),
            action: stream(3),
            sample: stream(4),
        }
    }
}

/// Records plus the trained agent.
pub struct TrainingOutcome {
    pub records: Vec<EpisodeRecord>,
    pub agent: Agent,
}

/// Runs `config.episodes` episodes on the configured built-in environment,
/// writing metrics, manifest, plot and checkpoints when `output_dir` is set.
pub fn run_training(config: &RunConfig) -> Result<Vec<EpisodeRecord>> {
    let mut env = AnyEnv::new(config.env);
    Ok(train(config, &mut env, |_, _| {})?.records)
}

/// Generic form of [`run_training`]; `observer` sees every finished episode
/// together with the agent as it stands after the episode's bookkeeping.
pub fn train<E, F>(config: &RunConfig, env: &mut E, mut observer: F) -> Result<TrainingOutcome>
where
    E: Environment,
    F: FnMut(&EpisodeRecord, &Agent),
{
    let spec = env.spec();
    config.validate_for(spec)?;

    let mut metrics = match &config.output_dir {
        Some(dir) => Some(prepare_output(config, dir)?),
        None => None,
    };

    let mut rngs = RunRngs::new(config.seed);
    let mut agent = Agent::new(config.agent.clone(), &config.layer_sizes, &mut rngs.init)?;
    let mut buffer = ReplayBuffer::new(config.replay_capacity)?;
    let mut schedule = EpsilonSchedule::new(config.epsilon_min, config.decay_rate)?;
    let mut stuck = StuckCounter::new(config.stuck_threshold)?;

    prefill(
        env,
        &mut buffer,
        config.agent.min_replay_before_training,
        &mut rngs,
    )?;

    let mut records = Vec::with_capacity(config.episodes);
    for episode in 1..=config.episodes {
        let started = Instant::now();
        let mut obs = env.reset(&mut rngs.env);
        let mut steps = 0;
        let mut total_reward = 0.0;
        let mut loss_sum = 0.0;
        let mut loss_count = 0usize;
        let timed_out = loop {
            let epsilon = schedule.epsilon();
            let action =
                select_epsilon_greedy_lazy(spec.action_count, epsilon, &mut rngs.action, || {
                    agent.q_values(&obs)
                })?;
            let step = env.step(action, &mut rngs.env)?;
            steps += 1;
            total_reward += step.reward;
            buffer.push(Experience::new(
                obs,
                action,
                step.reward,
                step.observation.clone(),
                step.done,
                step.timed_out,
            )?);
            match agent.train_step(&buffer, &mut rngs.sample) {
                Ok(Some(loss)) => {
                    loss_sum += loss;
                    loss_count += 1;
                }
                Ok(None) => {}
                Err(Error::NonFinite(what)) => {
                    let record = EpisodeRecord {
                        episode,
                        steps,
                        total_reward,
                        epsilon_at_end: schedule.epsilon(),
                        stuck_count: stuck.count(),
                        reannealed_this_episode: false,
                        mean_loss: Some(f64::NAN),
                        timed_out: false,
                        wall_time_ms: 0,
                    };
                    if let Some(m) = metrics.as_mut() {
                        m.write(&record)?;
                    }
                    return Err(Error::Aborted {
                        episode,
                        reason: format!("non-finite {what} at step {steps}"),
                    });
                }
                Err(e) => return Err(e),
            }
            let finished = step.finished();
            obs = step.observation;
            if finished {
                break step.timed_out;
            }
        };

        let decision = stuck.update(timed_out);
        let reannealed = config.reanneal_enabled && decision.reanneal;
        if reannealed {
            schedule.reanneal();
        } else {
            schedule.decay();
        }
        agent.end_episode();

        let record = EpisodeRecord {
            episode,
            steps,
            total_reward,
            epsilon_at_end: schedule.epsilon(),
            stuck_count: stuck.count(),
            reannealed_this_episode: reannealed,
            mean_loss: (loss_count > 0).then(|| loss_sum / loss_count as f64),
            timed_out,
            wall_time_ms: if config.record_wall_time {
                started.elapsed().as_millis() as u64
            } else {
                0
            },
        };
        if let Some(m) = metrics.as_mut() {
            m.write(&record)?;
        }
        if let Some(dir) = &config.output_dir {
            if config.checkpoint_every > 0 && episode % config.checkpoint_every == 0 {
                agent.save(&dir.join(CHECKPOINT_DIR), episode)?;
            }
        }
        observer(&record, &agent);
        records.push(record);
    }

    if let Some(dir) = &config.output_dir {
        agent.save(&dir.join(CHECKPOINT_DIR), config.episodes)?;
        emit_reward_plot(&records, config.moving_average_window, &dir.join(PLOT_FILE))?;
    }
    Ok(TrainingOutcome { records, agent })
}

fn prepare_output(config: &RunConfig, dir: &Path) -> Result<MetricsWriter> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let manifest = dir.join(MANIFEST_FILE);
    fs::write(&manifest, config.to_config_text()).map_err(|e| Error::io(&manifest, e))?;
    MetricsWriter::create(&dir.join(METRICS_FILE))
}

/// Uniform-random play until the buffer holds `target` transitions.
/// ε and the stuck counter are untouched.
fn prefill<E: Environment>(
    env: &mut E,
    buffer: &mut ReplayBuffer,
    target: usize,
    rngs: &mut RunRngs,
) -> Result<()> {
    let actions = env.spec().action_count;
    let target = target.min(buffer.capacity());
    while buffer.len() < target {
        let mut obs = env.reset(&mut rngs.env);
        loop {
            let action = rngs.action.random_range(0..actions);
            let step = env.step(action, &mut rngs.env)?;
            buffer.push(Experience::new(
                obs,
                action,
                step.reward,
                step.observation.clone(),
                step.done,
                step.timed_out,
            )?);
            let finished = step.finished();
            obs = step.observation;
            if finished || buffer.len() >= target {
                break;
            }
        }
    }
    Ok(())
}
