//! Episodic environments behind a common interface.

mod hovertrap;
mod lander;
mod value_iteration;

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, Rng};

pub use hovertrap::{
    hovertrap_reset, hovertrap_step, HoverTrap, HoverTrapState, HOVERTRAP_ACTIONS,
    HOVERTRAP_FUEL_COST, HOVERTRAP_HEIGHT, HOVERTRAP_MAX_STEPS, HOVERTRAP_OBS_SIZE,
    HOVERTRAP_VELOCITIES,
};
pub use lander::{lander_reset, lander_step, Lander, LanderParams, LanderState, LANDER_OBS_SIZE};
pub use value_iteration::{value_iteration_oracle, ValueTable};

/// Sizes an agent needs to know about an environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnvSpec {
    pub observation_size: usize,
    pub action_count: usize,
    pub max_episode_steps: usize,
}

/// Why an episode ended on a genuine terminal state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// Came to rest. `bonus` is the terminal reward component.
    Landed { bonus: f64, on_pad: bool },
    /// Hit the ground too hard; terminal component −100.
    Crashed,
    /// Left the screen; no terminal component.
    OutOfBounds,
}

impl Termination {
    /// Terminal reward component included in the step's reward.
    pub fn bonus(&self) -> f64 {
        match *self {
            Termination::Landed { bonus, .. } => bonus,
            Termination::Crashed => -100.0,
            Termination::OutOfBounds => 0.0,
        }
    }
}

/// Output of one environment step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub observation: Vec<f64>,
    pub reward: f64,
    /// Genuine terminal state; never set together with `timed_out`.
    pub done: bool,
    /// The step limit cut the episode.
    pub timed_out: bool,
    pub termination: Option<Termination>,
}

impl StepResult {
    pub fn finished(&self) -> bool {
        self.done || self.timed_out
    }
}

/// An episodic task with a discrete action set.
pub trait Environment {
    fn spec(&self) -> EnvSpec;

    /// Starts a new episode and returns the first observation.
    fn reset(&mut self, rng: &mut Rng) -> Vec<f64>;

    /// Advances one step. Stepping a finished episode is a contract violation.
    fn step(&mut self, action: usize, rng: &mut Rng) -> Result<StepResult>;
}

/// Environments selectable from the CLI and config file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvKind {
    Lander,
    HoverTrap,
}

impl EnvKind {
    pub fn name(&self) -> &'static str {
        match self {
            EnvKind::Lander => "lander",
            EnvKind::HoverTrap => "hovertrap",
        }
    }

    pub fn spec(&self) -> EnvSpec {
        match self {
            EnvKind::Lander => Lander::default().spec(),
            EnvKind::HoverTrap => HoverTrap::default().spec(),
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnvKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lander" | "lunarlander" | "lunar_lander" => Ok(EnvKind::Lander),
            "hovertrap" | "hover_trap" => Ok(EnvKind::HoverTrap),
            other => Err(Error::InvalidParameter(format!(
                "unknown environment `{other}` (expected lander or hovertrap)"
            ))),
        }
    }
}

/// Any built-in environment behind one concrete type.
#[derive(Debug, Clone)]
pub enum AnyEnv {
    Lander(Lander),
    HoverTrap(HoverTrap),
}

impl AnyEnv {
    pub fn new(kind: EnvKind) -> Self {
        match kind {
            EnvKind::Lander => AnyEnv::Lander(Lander::default()),
            EnvKind::HoverTrap => AnyEnv::HoverTrap(HoverTrap::default()),
        }
    }
}

impl Environment for AnyEnv {
    fn spec(&self) -> EnvSpec {
        match self {
            AnyEnv::Lander(e) => e.spec(),
            AnyEnv::HoverTrap(e) => e.spec(),
        }
    }

    fn reset(&mut self, rng: &mut Rng) -> Vec<f64> {
        match self {
            AnyEnv::Lander(e) => e.reset(rng),
            AnyEnv::HoverTrap(e) => e.reset(rng),
        }
    }

    fn step(&mut self, action: usize, rng: &mut Rng) -> Result<StepResult> {
        match self {
            AnyEnv::Lander(e) => e.step(action, rng),
            AnyEnv::HoverTrap(e) => e.step(action, rng),
        }
    }
}

pub(crate) fn check_action(action: usize, count: usize) -> Result<()> {
    if action >= count {
        return Err(Error::InvalidInput(format!(
            "action {action} out of range for {count} actions"
        )));
    }
    Ok(())
}
