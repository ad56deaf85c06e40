//! Exact Bellman-optimality solver for HoverTrap.
//!
//! The time limit is not part of the state, so the solved task is the
//! infinite-horizon discounted one. Terminal cells (altitude 0) have value 0.

use super::hovertrap::{
    hovertrap_reset, hovertrap_step, HoverTrapState, HOVERTRAP_ACTIONS, HOVERTRAP_HEIGHT,
    HOVERTRAP_VELOCITIES,
};
use crate::{Error, Result};

const CELLS: usize = ((HOVERTRAP_HEIGHT + 1) * HOVERTRAP_VELOCITIES) as usize;

/// Optimal values and a greedy policy over every HoverTrap cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    pub gamma: f64,
    values: [f64; CELLS],
    policy: [usize; CELLS],
    pub sweeps: usize,
}

impl ValueTable {
    pub fn value(&self, altitude: u32, velocity: u32) -> f64 {
        self.values[cell(altitude, velocity)]
    }

    pub fn action(&self, altitude: u32, velocity: u32) -> usize {
        self.policy[cell(altitude, velocity)]
    }

    pub fn start_value(&self) -> f64 {
        let (s, _) = hovertrap_reset();
        self.value(s.altitude, s.velocity)
    }

    /// Follows the greedy policy from the reset state.
    /// Returns `(undiscounted return, discounted return, steps)`.
    pub fn greedy_rollout(&self) -> (f64, f64, usize) {
        let (mut s, _) = hovertrap_reset();
        let mut total = 0.0;
        let mut discounted = 0.0;
        let mut discount = 1.0;
        loop {
            let (next, r) = hovertrap_step(s, self.action(s.altitude, s.velocity))
                .expect("rollout stays within the contract");
            total += r.reward;
            discounted += discount * r.reward;
            discount *= self.gamma;
            if r.finished() {
                return (total, discounted, next.step_index);
            }
            s = next;
        }
    }
}

fn cell(altitude: u32, velocity: u32) -> usize {
    (altitude * HOVERTRAP_VELOCITIES + velocity) as usize
}

/// Sweeps Bellman-optimality backups until the largest change is below `tol`.
pub fn value_iteration_oracle(gamma: f64, tol: f64) -> Result<ValueTable> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in [0, 1), got {gamma}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut values = [0.0; CELLS];
    let mut policy = [0usize; CELLS];
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut next = values;
        for altitude in 1..=HOVERTRAP_HEIGHT {
            for velocity in 0..HOVERTRAP_VELOCITIES {
                let s = HoverTrapState {
                    altitude,
                    velocity,
                    step_index: 0,
                };
                let mut best = f64::NEG_INFINITY;
                let mut best_action = 0;
                for action in 0..HOVERTRAP_ACTIONS {
                    let (s2, r) = hovertrap_step(s, action)?;
                    let q = if r.done {
                        r.reward
                    } else {
                        r.reward + gamma * values[s2.cell()]
                    };
                    if q > best {
                        best = q;
                        best_action = action;
                    }
                }
                next[s.cell()] = best;
                policy[s.cell()] = best_action;
            }
        }
        let delta = values
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        values = next;
        if delta < tol {
            break;
        }
    }
    Ok(ValueTable {
        gamma,
        values,
        policy,
        sweeps,
    })
}
