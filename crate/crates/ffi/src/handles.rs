//! Opaque handles and the functions that operate on them.

use std::ffi::c_char;

use reanneal_core::agent::{Agent, AgentConfig};
use reanneal_core::bandit::{mean_curve, run_bandit, BanditSpec, Strategy};
use reanneal_core::envs::{AnyEnv, EnvKind, Environment, Termination};
use reanneal_core::harness::{moving_average, run_training, RunConfig};
use reanneal_core::{seeded_rng, Rng};

use crate::error::{fail, RqStatus};
use crate::{copy_out, guard, non_null, path_arg, slice, slice_mut, str_arg, OrStatus};

/// Learner hyperparameters, mirroring the core `AgentConfig`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RqAgentConfig {
    pub gamma: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub target_sync_period_episodes: usize,
    pub double_dqn: bool,
    pub kappa: f64,
    pub min_replay_before_training: usize,
}

impl From<RqAgentConfig> for AgentConfig {
    fn from(c: RqAgentConfig) -> Self {
        AgentConfig {
            gamma: c.gamma,
            learning_rate: c.learning_rate,
            batch_size: c.batch_size,
            target_sync_period_episodes: c.target_sync_period_episodes,
            double_dqn: c.double_dqn,
            kappa: c.kappa,
            min_replay_before_training: c.min_replay_before_training,
        }
    }
}

impl From<&AgentConfig> for RqAgentConfig {
    fn from(c: &AgentConfig) -> Self {
        RqAgentConfig {
            gamma: c.gamma,
            learning_rate: c.learning_rate,
            batch_size: c.batch_size,
            target_sync_period_episodes: c.target_sync_period_episodes,
            double_dqn: c.double_dqn,
            kappa: c.kappa,
            min_replay_before_training: c.min_replay_before_training,
        }
    }
}

/// Default learner hyperparameters.
#[no_mangle]
pub extern "C" fn rq_agent_config_default() -> RqAgentConfig {
    RqAgentConfig::from(&AgentConfig::default())
}

/// A DQN learner: online network, target network and optimizer state.
pub struct RqAgent {
    inner: Agent,
}

/// Creates an agent with He-uniform weights drawn from `seed`.
///
/// # Safety
/// `layer_sizes` must be valid for `n_layers` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_agent_new(
    config: RqAgentConfig,
    layer_sizes: *const usize,
    n_layers: usize,
    seed: u64,
    out: *mut *mut RqAgent,
) -> RqStatus {
    guard(|| {
        non_null(out, "out")?;
        // SAFETY: forwarded caller contract.
        let sizes = unsafe { slice(layer_sizes, n_layers, "layer_sizes") }?;
        let agent = Agent::new(config.into(), sizes, &mut seeded_rng(seed)).or_status()?;
        // SAFETY: checked non-null.
        unsafe { *out = Box::into_raw(Box::new(RqAgent { inner: agent })) };
        Ok(())
    })
}

/// Loads an agent checkpoint directory written by `rq_agent_save` or by a
/// training run. `episodes` receives the episode count stored with it and may
/// be null.
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` valid for one write;
/// `episodes` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_agent_load(
    dir: *const c_char,
    out: *mut *mut RqAgent,
    episodes: *mut usize,
) -> RqStatus {
    guard(|| {
        non_null(out, "out")?;
        // SAFETY: forwarded caller contract.
        let dir = unsafe { path_arg(dir, "dir") }?;
        let (agent, n) = Agent::load(&dir).or_status()?;
        // SAFETY: `out` checked; `episodes` checked before writing.
        unsafe {
            if !episodes.is_null() {
                *episodes = n;
            }
            *out = Box::into_raw(Box::new(RqAgent { inner: agent }));
        }
        Ok(())
    })
}

/// Writes the agent to checkpoint directory `dir`, creating it if needed.
///
/// # Safety
/// `agent` must be a live handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn rq_agent_save(
    agent: *const RqAgent,
    dir: *const c_char,
    episodes: usize,
) -> RqStatus {
    guard(|| {
        non_null(agent, "agent")?;
        // SAFETY: forwarded caller contract.
        let dir = unsafe { path_arg(dir, "dir") }?;
        // SAFETY: checked non-null; caller guarantees liveness.
        unsafe { &(*agent).inner }.save(&dir, episodes).or_status()
    })
}

/// Releases an agent. Null is accepted and ignored.
///
/// # Safety
/// `agent` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rq_agent_free(agent: *mut RqAgent) {
    if !agent.is_null() {
        // SAFETY: handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(agent) });
    }
}

/// Network input width and action count of the agent.
///
/// # Safety
/// `agent` must be a live handle; the outputs valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn rq_agent_shape(
    agent: *const RqAgent,
    input_size: *mut usize,
    action_count: *mut usize,
) -> RqStatus {
    guard(|| {
        non_null(agent, "agent")?;
        non_null(input_size, "input_size")?;
        non_null(action_count, "action_count")?;
        // SAFETY: all checked non-null.
        unsafe {
            let online = (*agent).inner.online();
            *input_size = online.input_size();
            *action_count = online.output_size();
        }
        Ok(())
    })
}

/// Online-network Q-values for one observation, written to `q_out`.
///
/// # Safety
/// `agent` must be a live handle; `obs` valid for `obs_len` reads; `q_out`
/// valid for `q_len` writes.
#[no_mangle]
pub unsafe extern "C" fn rq_agent_q_values(
    agent: *const RqAgent,
    obs: *const f64,
    obs_len: usize,
    q_out: *mut f64,
    q_len: usize,
) -> RqStatus {
    guard(|| {
        non_null(agent, "agent")?;
        // SAFETY: forwarded caller contract.
        let (obs, q_out) = unsafe {
            (
                slice(obs, obs_len, "obs")?,
                slice_mut(q_out, q_len, "q_out")?,
            )
        };
        // SAFETY: checked non-null.
        let q = unsafe { &(*agent).inner }.q_values(obs).or_status()?;
        copy_out(&q, q_out)
    })
}

/// Lowest-index argmax of the online Q-values.
///
/// # Safety
/// `agent` must be a live handle; `obs` valid for `obs_len` reads; `action`
/// valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_agent_greedy_action(
    agent: *const RqAgent,
    obs: *const f64,
    obs_len: usize,
    action: *mut usize,
) -> RqStatus {
    guard(|| {
        non_null(agent, "agent")?;
        non_null(action, "action")?;
        // SAFETY: forwarded caller contract.
        let obs = unsafe { slice(obs, obs_len, "obs") }?;
        // SAFETY: checked non-null.
        let a = unsafe { &(*agent).inner }.greedy_action(obs).or_status()?;
        // SAFETY: checked non-null.
        unsafe { *action = a };
        Ok(())
    })
}

/// Copies the online network into the target network.
///
/// # Safety
/// `agent` must be a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn rq_agent_sync_target(agent: *mut RqAgent) -> RqStatus {
    guard(|| {
        non_null(agent, "agent")?;
        // SAFETY: checked non-null; caller guarantees exclusivity.
        unsafe { &mut (*agent).inner }.sync_target();
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RqEnvKind {
    Lander = 0,
    HoverTrap = 1,
}

impl From<RqEnvKind> for EnvKind {
    fn from(k: RqEnvKind) -> Self {
        match k {
            RqEnvKind::Lander => EnvKind::Lander,
            RqEnvKind::HoverTrap => EnvKind::HoverTrap,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RqEnvSpec {
    pub observation_size: usize,
    pub action_count: usize,
    pub max_episode_steps: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RqTermination {
    None = 0,
    Landed = 1,
    Crashed = 2,
    OutOfBounds = 3,
}

/// Scalar part of a step; the observation goes to a caller buffer.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RqStepResult {
    pub reward: f64,
    pub done: bool,
    pub timed_out: bool,
    pub termination: RqTermination,
    /// Terminal reward component; 0 unless `termination` is set.
    pub terminal_bonus: f64,
}

/// An environment instance with its own random stream.
pub struct RqEnv {
    env: AnyEnv,
    rng: Rng,
}

/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_env_new(kind: RqEnvKind, seed: u64, out: *mut *mut RqEnv) -> RqStatus {
    guard(|| {
        non_null(out, "out")?;
        let env = RqEnv {
            env: AnyEnv::new(kind.into()),
            rng: seeded_rng(seed),
        };
        // SAFETY: checked non-null.
        unsafe { *out = Box::into_raw(Box::new(env)) };
        Ok(())
    })
}

/// Releases an environment. Null is accepted and ignored.
///
/// # Safety
/// `env` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rq_env_free(env: *mut RqEnv) {
    if !env.is_null() {
        // SAFETY: handle came from Box::into_raw and is freed once.
        drop(unsafe { Box::from_raw(env) });
    }
}

/// # Safety
/// `env` must be a live handle; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_env_spec(env: *const RqEnv, out: *mut RqEnvSpec) -> RqStatus {
    guard(|| {
        non_null(env, "env")?;
        non_null(out, "out")?;
        // SAFETY: both checked non-null.
        unsafe {
            let s = (*env).env.spec();
            *out = RqEnvSpec {
                observation_size: s.observation_size,
                action_count: s.action_count,
                max_episode_steps: s.max_episode_steps,
            };
        }
        Ok(())
    })
}

/// Starts a new episode and writes the initial observation to `obs_out`.
///
/// # Safety
/// `env` must be a live handle; `obs_out` valid for `obs_len` writes.
#[no_mangle]
pub unsafe extern "C" fn rq_env_reset(
    env: *mut RqEnv,
    obs_out: *mut f64,
    obs_len: usize,
) -> RqStatus {
    guard(|| {
        non_null(env, "env")?;
        // SAFETY: forwarded caller contract.
        let (env, obs_out) = unsafe { (&mut *env, slice_mut(obs_out, obs_len, "obs_out")?) };
        let obs = env.env.reset(&mut env.rng);
        copy_out(&obs, obs_out)
    })
}

/// Applies `action`, writing the next observation to `obs_out` and the
/// scalar outcome to `result`.
///
/// # Safety
/// `env` must be a live handle; `obs_out` valid for `obs_len` writes;
/// `result` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_env_step(
    env: *mut RqEnv,
    action: usize,
    obs_out: *mut f64,
    obs_len: usize,
    result: *mut RqStepResult,
) -> RqStatus {
    guard(|| {
        non_null(env, "env")?;
        non_null(result, "result")?;
        // SAFETY: forwarded caller contract.
        let (env, obs_out) = unsafe { (&mut *env, slice_mut(obs_out, obs_len, "obs_out")?) };
        let needed = env.env.spec().observation_size;
        if obs_out.len() < needed {
            return Err(fail(
                RqStatus::BufferTooSmall,
                format!(
                    "observation buffer holds {} values, {needed} needed",
                    obs_out.len()
                ),
            ));
        }
        let step = env.env.step(action, &mut env.rng).or_status()?;
        copy_out(&step.observation, obs_out)?;
        let termination = match step.termination {
            None => RqTermination::None,
            Some(Termination::Landed { .. }) => RqTermination::Landed,
            Some(Termination::Crashed) => RqTermination::Crashed,
            Some(Termination::OutOfBounds) => RqTermination::OutOfBounds,
        };
        // SAFETY: checked non-null.
        unsafe {
            *result = RqStepResult {
                reward: step.reward,
                done: step.done,
                timed_out: step.timed_out,
                termination,
                terminal_bonus: step.termination.map_or(0.0, |t| t.bonus()),
            };
        }
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RqBanditStrategy {
    Greedy = 0,
    /// `param` is the constant ε.
    ConstantEps = 1,
    /// `param` is `c` in `ε_t = min(1, c / (δ² t))`.
    DecayingEps = 2,
}

/// Mean cumulative regret over `n_seeds` runs (seeds `seed .. seed + n_seeds`)
/// of a Gaussian bandit. `regret_out[t − 1]` receives `L(t)`.
///
/// # Safety
/// `means` valid for `n_arms` reads; `regret_out` for `regret_len` writes.
#[no_mangle]
pub unsafe extern "C" fn rq_bandit_regret(
    means: *const f64,
    n_arms: usize,
    noise_std: f64,
    horizon: usize,
    strategy: RqBanditStrategy,
    param: f64,
    seed: u64,
    n_seeds: usize,
    regret_out: *mut f64,
    regret_len: usize,
) -> RqStatus {
    guard(|| {
        // SAFETY: forwarded caller contract.
        let (means, out) = unsafe {
            (
                slice(means, n_arms, "means")?,
                slice_mut(regret_out, regret_len, "regret_out")?,
            )
        };
        if n_seeds == 0 {
            return Err(fail(RqStatus::InvalidParameter, "n_seeds must be ≥ 1"));
        }
        let spec = BanditSpec::new(means.to_vec(), noise_std, horizon).or_status()?;
        let strategy = match strategy {
            RqBanditStrategy::Greedy => Strategy::Greedy,
            RqBanditStrategy::ConstantEps => Strategy::ConstantEps(param),
            RqBanditStrategy::DecayingEps => Strategy::DecayingEps(param),
        };
        let curves = (0..n_seeds as u64)
            .map(|k| run_bandit(&spec, strategy, &mut seeded_rng(seed.wrapping_add(k))))
            .collect::<reanneal_core::Result<Vec<_>>>()
            .or_status()?;
        let mean = mean_curve(&curves).or_status()?;
        copy_out(&mean.cumulative_regret, out)
    })
}

/// Summary of a finished training run.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RqTrainSummary {
    pub episodes: usize,
    pub reanneals: usize,
    pub final_epsilon: f64,
    /// Moving average of the episode returns at the last episode.
    pub final_moving_average: f64,
}

/// Runs a full training session from configuration text in the CLI's
/// config-file format. `out_dir` may be null, in which case nothing is
/// written to disk.
///
/// # Safety
/// `config_text` must be a NUL-terminated string; `out_dir` null or a
/// NUL-terminated string; `summary` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn rq_train(
    config_text: *const c_char,
    out_dir: *const c_char,
    summary: *mut RqTrainSummary,
) -> RqStatus {
    guard(|| {
        non_null(summary, "summary")?;
        // SAFETY: forwarded caller contract.
        let text = unsafe { str_arg(config_text, "config_text") }?;
        let mut config = RunConfig::from_config_text(text, None).or_status()?;
        if !out_dir.is_null() {
            // SAFETY: forwarded caller contract.
            config.output_dir = Some(unsafe { path_arg(out_dir, "out_dir") }?);
        }
        let records = run_training(&config).or_status()?;
        let returns: Vec<f64> = records.iter().map(|r| r.total_reward).collect();
        let averages = moving_average(&returns, config.moving_average_window);
        let last = records.last();
        // SAFETY: checked non-null.
        unsafe {
            *summary = RqTrainSummary {
                episodes: records.len(),
                reanneals: records.iter().filter(|r| r.reannealed_this_episode).count(),
                final_epsilon: last.map_or(1.0, |r| r.epsilon_at_end),
                final_moving_average: averages.last().copied().unwrap_or(0.0),
            };
        }
        Ok(())
    })
}
