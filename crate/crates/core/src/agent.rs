//! DQN / double-DQN learner over the [`mlp`](crate::mlp) network.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::mlp::{self, adam_step, AdamState, NetworkParams};
use crate::replay::{Experience, ReplayBuffer};
use crate::{argmax, Error, Result, Rng};

#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig {
    pub gamma: f64,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub target_sync_period_episodes: usize,
    pub double_dqn: bool,
    pub kappa: f64,
    pub min_replay_before_training: usize,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            learning_rate: 0.01,
            batch_size: 64,
            target_sync_period_episodes: 20,
            double_dqn: true,
            kappa: 1.0,
            min_replay_before_training: 1000,
        }
    }
}

impl AgentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in [0, 1), got {}",
                self.gamma
            )));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidParameter("batch_size must be ≥ 1".into()));
        }
        if self.target_sync_period_episodes == 0 {
            return Err(Error::InvalidParameter(
                "target_sync_period_episodes must be ≥ 1".into(),
            ));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        Ok(())
    }
}

/// Online network θ, frozen target θ⁻ and the optimizer driving θ.
#[derive(Debug, Clone)]
pub struct Agent {
    online: NetworkParams,
    target: NetworkParams,
    optimizer: AdamState,
    config: AgentConfig,
    episodes_since_sync: usize,
}

impl Agent {
    /// He-initialised online network with the target synchronised to it.
    pub fn new(config: AgentConfig, layer_sizes: &[usize], rng: &mut Rng) -> Result<Self> {
        let online = NetworkParams::he_uniform(layer_sizes, rng)?;
        Self::from_network(config, online)
    }

    pub fn from_network(config: AgentConfig, online: NetworkParams) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            target: online.clone_params(),
            optimizer: AdamState::new(&online),
            online,
            config,
            episodes_since_sync: 0,
        })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn online(&self) -> &NetworkParams {
        &self.online
    }

    pub fn online_mut(&mut self) -> &mut NetworkParams {
        &mut self.online
    }

    pub fn target(&self) -> &NetworkParams {
        &self.target
    }

    pub fn optimizer(&self) -> &AdamState {
        &self.optimizer
    }

    pub fn episodes_since_sync(&self) -> usize {
        self.episodes_since_sync
    }

    pub fn q_values(&self, observation: &[f64]) -> Result<Vec<f64>> {
        self.online.forward(observation)
    }

    /// Lowest-index argmax of the online Q-values.
    pub fn greedy_action(&self, observation: &[f64]) -> Result<usize> {
        Ok(argmax(&self.online.forward(observation)?))
    }

    /// Bootstrapped regression targets for a batch.
    ///
    /// Terminal transitions use `y = r`. Otherwise double DQN evaluates θ⁻ at
    /// θ's argmax on `s′`; plain DQN takes the max of θ⁻ on `s′`. Time-limit
    /// transitions bootstrap like any other non-terminal one.
    pub fn compute_targets(&self, batch: &[&Experience]) -> Result<Vec<f64>> {
        if batch.is_empty() {
            return Err(Error::InvalidInput("empty batch".into()));
        }
        let next: Vec<&[f64]> = batch.iter().map(|e| e.next_state.as_slice()).collect();
        let target_q = self.target.forward_batch(&next)?;
        let online_q = if self.config.double_dqn {
            Some(self.online.forward_batch(&next)?)
        } else {
            None
        };
        let gamma = self.config.gamma;
        Ok(batch
            .iter()
            .enumerate()
            .map(|(i, e)| {
                if e.done {
                    return e.reward;
                }
                let bootstrap = match &online_q {
                    Some(online_q) => target_q[i][argmax(&online_q[i])],
                    None => target_q[i]
                        .iter()
                        .copied()
                        .fold(f64::NEG_INFINITY, f64::max),
                };
                e.reward + gamma * bootstrap
            })
            .collect())
    }

    /// One sampled batch, one backward pass through θ and one Adam step.
    ///
    /// Returns `Ok(None)` without touching any state while the buffer holds
    /// fewer than `min_replay_before_training` transitions.
    pub fn train_step(&mut self, buffer: &ReplayBuffer, rng: &mut Rng) -> Result<Option<f64>> {
        let needed = self
            .config
            .min_replay_before_training
            .max(self.config.batch_size);
        if buffer.len() < needed {
            return Ok(None);
        }
        let batch = buffer.sample(self.config.batch_size, rng)?;
        self.train_on_batch(&batch).map(Some)
    }

    /// Gradient step on an explicit batch; returns the mean pseudo-Huber loss.
    pub fn train_on_batch(&mut self, batch: &[&Experience]) -> Result<f64> {
        let targets = self.compute_targets(batch)?;
        let states: Vec<&[f64]> = batch.iter().map(|e| e.state.as_slice()).collect();
        let actions: Vec<usize> = batch.iter().map(|e| e.action).collect();
        let (grads, loss) = self
            .online
            .backward(&states, &actions, &targets, self.config.kappa)?;
        if !loss.is_finite() {
            return Err(Error::NonFinite("training loss"));
        }
        adam_step(
            &mut self.online,
            &grads,
            &mut self.optimizer,
            self.config.learning_rate,
        )?;
        Ok(loss)
    }

    /// θ⁻ ← θ.
    pub fn sync_target(&mut self) {
        self.target = self.online.clone_params();
        self.episodes_since_sync = 0;
    }

    /// Counts a finished episode and syncs the target when the period is reached.
    /// Returns whether a sync happened.
    pub fn end_episode(&mut self) -> bool {
        self.episodes_since_sync += 1;
        if self.episodes_since_sync >= self.config.target_sync_period_episodes {
            self.sync_target();
            true
        } else {
            false
        }
    }

    /// Writes `online.rqnet`, `target.rqnet` and an `agent.meta` text header into `dir`.
    pub fn save(&self, dir: &Path, episodes: usize) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        mlp::save_checkpoint(&self.online, &dir.join("online.rqnet"))?;
        mlp::save_checkpoint(&self.target, &dir.join("target.rqnet"))?;
        let c = &self.config;
        let mut meta = String::from("[agent]\n");
        let _ = writeln!(meta, "gamma={}", c.gamma);
        let _ = writeln!(meta, "learning_rate={}", c.learning_rate);
        let _ = writeln!(meta, "batch_size={}", c.batch_size);
        let _ = writeln!(
            meta,
            "target_sync_period_episodes={}",
            c.target_sync_period_episodes
        );
        let _ = writeln!(meta, "double_dqn={}", c.double_dqn);
        let _ = writeln!(meta, "kappa={}", c.kappa);
        let _ = writeln!(
            meta,
            "min_replay_before_training={}",
            c.min_replay_before_training
        );
        let _ = writeln!(meta, "episodes={episodes}");
        let _ = writeln!(meta, "episodes_since_sync={}", self.episodes_since_sync);
        let path = dir.join("agent.meta");
        fs::write(&path, meta).map_err(|e| Error::io(path, e))
    }

    /// Restores an agent saved by [`save`](Self::save). Optimizer moments are
    /// not persisted and start fresh. Returns the agent and its episode count.
    pub fn load(dir: &Path) -> Result<(Self, usize)> {
        let path = dir.join("agent.meta");
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let mut config = AgentConfig::default();
        let mut episodes = 0usize;
        let mut since_sync = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('[') {
                continue;
            }
            let bad = |message: String| Error::Config {
                line: idx + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{line}`")))?;
            let value = value.trim();
            let line_no = idx + 1;
            match key.trim() {
                "gamma" => config.gamma = parse_field(key, value, line_no)?,
                "learning_rate" => config.learning_rate = parse_field(key, value, line_no)?,
                "kappa" => config.kappa = parse_field(key, value, line_no)?,
                "batch_size" => config.batch_size = parse_field(key, value, line_no)?,
                "target_sync_period_episodes" => {
                    config.target_sync_period_episodes = parse_field(key, value, line_no)?
                }
                "min_replay_before_training" => {
                    config.min_replay_before_training = parse_field(key, value, line_no)?
                }
                "double_dqn" => config.double_dqn = parse_field(key, value, line_no)?,
                "episodes" => episodes = parse_field(key, value, line_no)?,
                "episodes_since_sync" => since_sync = parse_field(key, value, line_no)?,
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        let online = mlp::load_checkpoint(&dir.join("online.rqnet"))?;
        let target = mlp::load_checkpoint(&dir.join("target.rqnet"))?;
        if online.layer_sizes() != target.layer_sizes() {
            return Err(Error::Checkpoint(
                "online and target networks have different shapes".into(),
            ));
        }
        let mut agent = Self::from_network(config, online)?;
        agent.target = target;
        agent.episodes_since_sync = since_sync;
        Ok((agent, episodes))
    }
}

fn parse_field<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| Error::Config {
        line,
        message: format!("bad value for {key}: `{value}`"),
    })
}
