//! HoverTrap: a deterministic tabular descent task whose cheap local optimum
//! is to hover until the time limit.
//!
//! Altitude runs `0..=8`, velocity `0..=2` (downward). Thrust brakes by one
//! velocity unit at a fuel cost of 0.05 and holds altitude; coasting speeds up
//! by one unit and then descends by the new velocity. Reaching the ground at
//! velocity ≤ 1 lands (+100), at velocity 2 crashes (−100). Episodes time out
//! after 200 steps.

use super::{check_action, EnvSpec, Environment, StepResult, Termination};
use crate::{Error, Result, Rng};

pub const HOVERTRAP_HEIGHT: u32 = 8;
pub const HOVERTRAP_VELOCITIES: u32 = 3;
pub const HOVERTRAP_MAX_STEPS: usize = 200;
pub const HOVERTRAP_FUEL_COST: f64 = 0.05;
pub const HOVERTRAP_ACTIONS: usize = 2;
pub const HOVERTRAP_OBS_SIZE: usize = ((HOVERTRAP_HEIGHT + 1) * HOVERTRAP_VELOCITIES) as usize;

const THRUST: usize = 0;
const COAST: usize = 1;
const SAFE_LANDING_VELOCITY: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoverTrapState {
    pub altitude: u32,
    pub velocity: u32,
    pub step_index: usize,
}

impl HoverTrapState {
    pub fn is_terminal(&self) -> bool {
        self.altitude == 0
    }

    /// Index of the (altitude, velocity) cell in the one-hot encoding.
    pub fn cell(&self) -> usize {
        (self.altitude * HOVERTRAP_VELOCITIES + self.velocity) as usize
    }

    pub fn observation(&self) -> Vec<f64> {
        let mut obs = vec![0.0; HOVERTRAP_OBS_SIZE];
        obs[self.cell()] = 1.0;
        obs
    }
}

pub fn hovertrap_reset() -> (HoverTrapState, Vec<f64>) {
    let state = HoverTrapState {
        altitude: HOVERTRAP_HEIGHT,
        velocity: 0,
        step_index: 0,
    };
    (state, state.observation())
}

/// Pure transition function: `(state, action) ↦ (next state, step result)`.
pub fn hovertrap_step(
    state: HoverTrapState,
    action: usize,
) -> Result<(HoverTrapState, StepResult)> {
    check_action(action, HOVERTRAP_ACTIONS)?;
    if state.is_terminal() {
        return Err(Error::ContractViolation(
            "stepped a landed or crashed HoverTrap".into(),
        ));
    }
    if state.step_index >= HOVERTRAP_MAX_STEPS {
        return Err(Error::ContractViolation(
            "stepped a timed-out HoverTrap".into(),
        ));
    }
    if state.altitude > HOVERTRAP_HEIGHT || state.velocity >= HOVERTRAP_VELOCITIES {
        return Err(Error::InvalidInput(format!(
            "invalid HoverTrap state {state:?}"
        )));
    }

    let mut next = state;
    next.step_index += 1;
    let mut reward = 0.0;
    let mut termination = None;
    match action {
        THRUST => {
            next.velocity = state.velocity.saturating_sub(1);
            reward = -HOVERTRAP_FUEL_COST;
        }
        COAST => {
            next.velocity = (state.velocity + 1).min(HOVERTRAP_VELOCITIES - 1);
            if next.velocity >= state.altitude {
                next.altitude = 0;
                let t = if next.velocity <= SAFE_LANDING_VELOCITY {
                    Termination::Landed {
                        bonus: 100.0,
                        on_pad: true,
                    }
                } else {
                    Termination::Crashed
                };
                reward = t.bonus();
                termination = Some(t);
            } else {
                next.altitude = state.altitude - next.velocity;
            }
        }
        _ => unreachable!("action checked"),
    }
    let done = termination.is_some();
    let timed_out = !done && next.step_index >= HOVERTRAP_MAX_STEPS;
    Ok((
        next,
        StepResult {
            observation: next.observation(),
            reward,
            done,
            timed_out,
            termination,
        },
    ))
}

/// Stateful wrapper around [`hovertrap_step`].
#[derive(Debug, Clone)]
pub struct HoverTrap {
    state: HoverTrapState,
}

impl Default for HoverTrap {
    fn default() -> Self {
        Self {
            state: hovertrap_reset().0,
        }
    }
}

impl HoverTrap {
    pub fn state(&self) -> HoverTrapState {
        self.state
    }
}

impl Environment for HoverTrap {
    fn spec(&self) -> EnvSpec {
        EnvSpec {
            observation_size: HOVERTRAP_OBS_SIZE,
            action_count: HOVERTRAP_ACTIONS,
            max_episode_steps: HOVERTRAP_MAX_STEPS,
        }
    }

    fn reset(&mut self, _rng: &mut Rng) -> Vec<f64> {
        let (state, obs) = hovertrap_reset();
        self.state = state;
        obs
    }

    fn step(&mut self, action: usize, _rng: &mut Rng) -> Result<StepResult> {
        let (next, result) = hovertrap_step(self.state, action)?;
        self.state = next;
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rollout(policy: impl Fn(&HoverTrapState) -> usize) -> (f64, StepResult, usize) {
        let (mut s, _) = hovertrap_reset();
        let mut total = 0.0;
        loop {
            let (next, r) = hovertrap_step(s, policy(&s)).unwrap();
            total += r.reward;
            if r.finished() {
                return (total, r, next.step_index);
            }
            s = next;
        }
    }

    #[test]
    fn reset_encoding() {
        let (s, obs) = hovertrap_reset();
        assert_eq!(obs.len(), 27);
        assert_eq!(obs.iter().sum::<f64>(), 1.0);
        assert_eq!(obs[8 * 3], 1.0);
        assert_eq!(hovertrap_reset(), (s, obs));
    }

    #[test]
    fn always_thrust_times_out() {
        let (total, last, steps) = rollout(|_| THRUST);
        assert!(last.timed_out && !last.done);
        assert_eq!(steps, 200);
        assert!((total - (-10.0)).abs() < 1e-9);
    }

    #[test]
    fn coast_only_crashes() {
        let mut trace = Vec::new();
        let (mut s, _) = hovertrap_reset();
        loop {
            let (next, r) = hovertrap_step(s, COAST).unwrap();
            trace.push((next.altitude, next.velocity));
            if r.finished() {
                assert!(r.done);
                assert_eq!(r.reward, -100.0);
                assert_eq!(r.termination, Some(Termination::Crashed));
                break;
            }
            s = next;
        }
        assert_eq!(trace, vec![(7, 1), (5, 2), (3, 2), (1, 2), (0, 2)]);
    }

    #[test]
    fn careful_descent_lands() {
        // Coast at v=0 (to v=1), thrust at v=1.
        let (total, last, steps) = rollout(|s| if s.velocity == 0 { COAST } else { THRUST });
        assert!(last.done);
        assert_eq!(last.termination.map(|t| t.bonus()), Some(100.0));
        // 8 coasts and 7 thrusts.
        assert_eq!(steps, 15);
        assert!((total - (100.0 - 7.0 * 0.05)).abs() < 1e-9);
    }

    #[test]
    fn stepping_terminal_is_rejected() {
        let s = HoverTrapState {
            altitude: 0,
            velocity: 1,
            step_index: 3,
        };
        assert!(matches!(
            hovertrap_step(s, THRUST),
            Err(Error::ContractViolation(_))
        ));
        let s = HoverTrapState {
            altitude: 4,
            velocity: 0,
            step_index: 200,
        };
        assert!(matches!(
            hovertrap_step(s, THRUST),
            Err(Error::ContractViolation(_))
        ));
        let (s, _) = hovertrap_reset();
        assert!(hovertrap_step(s, 2).is_err());
    }

    #[test]
    fn transition_is_pure() {
        for altitude in 1..=HOVERTRAP_HEIGHT {
            for velocity in 0..HOVERTRAP_VELOCITIES {
                for action in 0..HOVERTRAP_ACTIONS {
                    let s = HoverTrapState {
                        altitude,
                        velocity,
                        step_index: 5,
                    };
                    assert_eq!(
                        hovertrap_step(s, action).unwrap(),
                        hovertrap_step(s, action).unwrap()
                    );
                }
            }
        }
    }
}
