//! Run configuration and its `key = value` text format.
//!
//! ```text
//! [run]
//! env = hovertrap
//! episodes = 2000
//! seed = 7
//!
//! [agent]
//! gamma = 0.99
//! ```
//!
//! Keys are looked up by `section.key`; keys before any header belong to
//! `run`. `#` starts a comment line. The environment preset is applied first,
//! then every key from the file, then command-line overrides.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::agent::AgentConfig;
use crate::envs::{EnvKind, EnvSpec, HOVERTRAP_ACTIONS, HOVERTRAP_OBS_SIZE};
use crate::mlp::DEFAULT_LAYER_SIZES;
use crate::replay::DEFAULT_CAPACITY;
use crate::{Error, Result};

/// Seed source consulted when no seed is given explicitly.
pub const SEED_ENV_VAR: &str = "REANNEAL_RL_SEED";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub env: EnvKind,
    pub episodes: usize,
    pub seed: u64,
    pub reanneal_enabled: bool,
    pub stuck_threshold: u32,
    pub decay_rate: f64,
    pub epsilon_min: f64,
    pub agent: AgentConfig,
    pub layer_sizes: Vec<usize>,
    pub replay_capacity: usize,
    pub output_dir: Option<PathBuf>,
    /// Save a checkpoint every this many episodes; 0 saves only the final one.
    pub checkpoint_every: usize,
    pub moving_average_window: usize,
    /// Fill `wall_time_ms`; off by default so metrics are byte-reproducible.
    pub record_wall_time: bool,
}

impl RunConfig {
    /// Defaults tuned for `env`.
    pub fn preset(env: EnvKind) -> Self {
        match env {
            EnvKind::Lander => Self {
                env,
                episodes: 10_000,
                seed: 0,
                reanneal_enabled: true,
                stuck_threshold: 10,
                decay_rate: 0.99,
                epsilon_min: 0.01,
                agent: AgentConfig::default(),
                layer_sizes: DEFAULT_LAYER_SIZES.to_vec(),
                replay_capacity: DEFAULT_CAPACITY,
                output_dir: None,
                checkpoint_every: 0,
                moving_average_window: 100,
                record_wall_time: false,
            },
            EnvKind::HoverTrap => Self {
                env,
                episodes: 2000,
                seed: 0,
                reanneal_enabled: true,
                stuck_threshold: 10,
                decay_rate: 0.99,
                epsilon_min: 0.01,
                agent: AgentConfig {
                    learning_rate: 0.001,
                    batch_size: 32,
                    ..AgentConfig::default()
                },
                layer_sizes: vec![HOVERTRAP_OBS_SIZE, 32, 32, HOVERTRAP_ACTIONS],
                replay_capacity: DEFAULT_CAPACITY,
                output_dir: None,
                checkpoint_every: 0,
                moving_average_window: 100,
                record_wall_time: false,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_for(self.env.spec())
    }

    /// Checks every field, matching the network's ends against `spec`.
    pub fn validate_for(&self, spec: EnvSpec) -> Result<()> {
        let invalid = |m: String| Err(Error::InvalidParameter(m));
        if self.episodes == 0 {
            return invalid("episodes must be ≥ 1".into());
        }
        if self.moving_average_window == 0 {
            return invalid("moving_average_window must be ≥ 1".into());
        }
        if self.stuck_threshold == 0 {
            return invalid("stuck_threshold must be ≥ 1".into());
        }
        if !(self.decay_rate > 0.0 && self.decay_rate < 1.0) {
            return invalid(format!(
                "decay_rate must lie in (0, 1), got {}",
                self.decay_rate
            ));
        }
        if !(0.0..=1.0).contains(&self.epsilon_min) {
            return invalid(format!(
                "epsilon_min must lie in [0, 1], got {}",
                self.epsilon_min
            ));
        }
        if self.replay_capacity == 0 {
            return invalid("replay_capacity must be ≥ 1".into());
        }
        let (first, last) = (self.layer_sizes.first(), self.layer_sizes.last());
        if first != Some(&spec.observation_size) || last != Some(&spec.action_count) {
            return invalid(format!(
                "layer_sizes {:?} must start with {} and end with {}",
                self.layer_sizes, spec.observation_size, spec.action_count
            ));
        }
        self.agent.validate()
    }

    /// Parses a config file. `env_override` wins over the file's `env` key.
    pub fn from_config_text(text: &str, env_override: Option<EnvKind>) -> Result<Self> {
        let entries = parse_entries(text)?;
        let env = match (env_override, entries.get("run.env")) {
            (Some(env), _) => env,
            (None, Some((value, line))) => value.parse().map_err(|e: Error| Error::Config {
                line: *line,
                message: e.to_string(),
            })?,
            (None, None) => EnvKind::HoverTrap,
        };
        let mut config = Self::preset(env);
        for (key, (value, line)) in &entries {
            config.apply(key, value).map_err(|message| Error::Config {
                line: *line,
                message,
            })?;
        }
        Ok(config)
    }

    fn apply(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn parse<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("bad value for {key}: `{value}`"))
        }
        let a = &mut self.agent;
        match key {
            "run.env" => {}
            "run.episodes" => self.episodes = parse(key, value)?,
            "run.seed" => self.seed = parse(key, value)?,
            "run.reanneal" | "run.reanneal_enabled" => self.reanneal_enabled = parse(key, value)?,
            "run.stuck_threshold" => self.stuck_threshold = parse(key, value)?,
            "run.decay_rate" => self.decay_rate = parse(key, value)?,
            "run.epsilon_min" => self.epsilon_min = parse(key, value)?,
            "run.layer_sizes" => {
                self.layer_sizes = value
                    .split(',')
                    .map(|s| parse(key, s.trim()))
                    .collect::<std::result::Result<_, _>>()?
            }
            "run.replay_capacity" => self.replay_capacity = parse(key, value)?,
            "run.output_dir" => self.output_dir = (!value.is_empty()).then(|| PathBuf::from(value)),
            "run.checkpoint_every" => self.checkpoint_every = parse(key, value)?,
            "run.moving_average_window" => self.moving_average_window = parse(key, value)?,
            "run.record_wall_time" => self.record_wall_time = parse(key, value)?,
            "agent.gamma" => a.gamma = parse(key, value)?,
            "agent.learning_rate" => a.learning_rate = parse(key, value)?,
            "agent.batch_size" => a.batch_size = parse(key, value)?,
            "agent.target_sync_period_episodes" => {
                a.target_sync_period_episodes = parse(key, value)?
            }
            "agent.double_dqn" => a.double_dqn = parse(key, value)?,
            "agent.kappa" => a.kappa = parse(key, value)?,
            "agent.min_replay_before_training" => a.min_replay_before_training = parse(key, value)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }

    /// Renders the config in the file format; parsing the result reproduces `self`.
    pub fn to_config_text(&self) -> String {
        let mut out = String::new();
        let a = &self.agent;
        let sizes: Vec<String> = self.layer_sizes.iter().map(usize::to_string).collect();
        let _ = writeln!(out, "[run]");
        let _ = writeln!(out, "env = {}", self.env);
        let _ = writeln!(out, "episodes = {}", self.episodes);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "reanneal_enabled = {}", self.reanneal_enabled);
        let _ = writeln!(out, "stuck_threshold = {}", self.stuck_threshold);
        let _ = writeln!(out, "decay_rate = {}", self.decay_rate);
        let _ = writeln!(out, "epsilon_min = {}", self.epsilon_min);
        let _ = writeln!(out, "layer_sizes = {}", sizes.join(","));
        let _ = writeln!(out, "replay_capacity = {}", self.replay_capacity);
        if let Some(dir) = &self.output_dir {
            let _ = writeln!(out, "output_dir = {}", dir.display());
        }
        let _ = writeln!(out, "checkpoint_every = {}", self.checkpoint_every);
        let _ = writeln!(
            out,
            "moving_average_window = {}",
            self.moving_average_window
        );
        let _ = writeln!(out, "record_wall_time = {}", self.record_wall_time);
        let _ = writeln!(out);
        let _ = writeln!(out, "[agent]");
        let _ = writeln!(out, "gamma = {}", a.gamma);
        let _ = writeln!(out, "learning_rate = {}", a.learning_rate);
        let _ = writeln!(out, "batch_size = {}", a.batch_size);
        let _ = writeln!(
            out,
            "target_sync_period_episodes = {}",
            a.target_sync_period_episodes
        );
        let _ = writeln!(out, "double_dqn = {}", a.double_dqn);
        let _ = writeln!(out, "kappa = {}", a.kappa);
        let _ = writeln!(
            out,
            "min_replay_before_training = {}",
            a.min_replay_before_training
        );
        out
    }
}

/// Whether the config text assigns `section.key` (e.g. `run.seed`).
pub(crate) fn text_sets_key(text: &str, key: &str) -> Result<bool> {
    Ok(parse_entries(text)?.contains_key(key))
}

/// Reads `section.key → (value, line)`, rejecting duplicates.
fn parse_entries(text: &str) -> Result<BTreeMap<String, (String, usize)>> {
    let mut section = String::from("run");
    let mut entries = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| Error::Config {
                line: line_no,
                message: format!("unterminated section header `{line}`"),
            })?;
            section = name.trim().to_ascii_lowercase();
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: line_no,
            message: format!("expected key = value, got `{line}`"),
        })?;
        let full = format!("{section}.{}", key.trim().to_ascii_lowercase());
        if entries
            .insert(full.clone(), (value.trim().to_string(), line_no))
            .is_some()
        {
            return Err(Error::Config {
                line: line_no,
                message: format!("duplicate key `{full}`"),
            });
        }
    }
    Ok(entries)
}
