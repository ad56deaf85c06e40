//! Simplified lunar-lander surrogate.
//!
//! A point mass with orientation under constant gravity, integrated with
//! semi-implicit Euler. The observation is
//! `[x, y, vx, vy, angle, angular_velocity, left_contact, right_contact]`
//! with the pad centred at `x = 0` on the ground line `y = 0`.
//!
//! Actions: 0 no-op, 1 left thruster, 2 main engine, 3 right thruster.
//! The left thruster pushes the lander towards +x and spins it clockwise; the
//! right thruster mirrors it.
//!
//! Each step pays the change in a shaping potential
//! `−k_dist·distance − k_speed·speed − k_angle·|angle|` plus fuel costs.
//! Episodes end on rest (terminal bonus +100, or 100–140 on the pad by
//! centring accuracy), crash (−100), leaving the screen (no bonus) or the
//! 1000-step limit.

use rand::Rng as _;

use super::{check_action, EnvSpec, Environment, StepResult, Termination};
use crate::{Error, Result, Rng};

pub const LANDER_OBS_SIZE: usize = 8;
const ACTIONS: usize = 4;

/// Physics, termination and reward constants.
#[derive(Debug, Clone, PartialEq)]
pub struct LanderParams {
    pub gravity: f64,
    pub dt: f64,
    pub main_thrust: f64,
    pub side_thrust: f64,
    /// Angular acceleration from one side thruster.
    pub side_torque: f64,
    pub pad_half_width: f64,
    /// Horizontal offset of each leg from the body centre.
    pub leg_half_span: f64,
    pub crash_speed: f64,
    pub crash_angle: f64,
    pub spawn_y: (f64, f64),
    pub spawn_x: f64,
    pub spawn_vx: f64,
    pub spawn_angle: f64,
    pub max_x: f64,
    pub max_y: f64,
    pub rest_speed: f64,
    pub rest_steps: u32,
    pub ground_friction: f64,
    pub k_dist: f64,
    pub k_speed: f64,
    pub k_angle: f64,
    pub main_fuel_cost: f64,
    pub side_fuel_cost: f64,
    /// Relative thrust dispersion drawn per firing; 0 disables it.
    pub engine_noise: f64,
    pub max_episode_steps: usize,
}

impl Default for LanderParams {
    fn default() -> Self {
        Self {
            gravity: 9.8,
            dt: 0.02,
            main_thrust: 13.0,
            side_thrust: 2.0,
            side_torque: 3.0,
            pad_half_width: 0.2,
            leg_half_span: 0.05,
            crash_speed: 1.0,
            crash_angle: 0.6,
            spawn_y: (1.3, 1.4),
            spawn_x: 0.1,
            spawn_vx: 0.3,
            spawn_angle: 0.1,
            max_x: 1.0,
            max_y: 1.5,
            rest_speed: 0.01,
            rest_steps: 10,
            ground_friction: 0.8,
            k_dist: 100.0,
            k_speed: 20.0,
            k_angle: 100.0,
            main_fuel_cost: 0.3,
            side_fuel_cost: 0.03,
            engine_noise: 0.0,
            max_episode_steps: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanderState {
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
    pub angle: f64,
    pub angular_velocity: f64,
    pub leg_left_contact: bool,
    pub leg_right_contact: bool,
    pub step_index: usize,
    /// Consecutive steps spent at rest on both legs.
    pub rest_counter: u32,
    pub finished: bool,
}

impl LanderState {
    /// Hovering in place at `(x, y)` with zero velocity and attitude.
    pub fn at(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            vx: 0.0,
            vy: 0.0,
            angle: 0.0,
            angular_velocity: 0.0,
            leg_left_contact: false,
            leg_right_contact: false,
            step_index: 0,
            rest_counter: 0,
            finished: false,
        }
    }

    pub fn observation(&self) -> Vec<f64> {
        vec![
            self.x,
            self.y,
            self.vx,
            self.vy,
            self.angle,
            self.angular_velocity,
            f64::from(u8::from(self.leg_left_contact)),
            f64::from(u8::from(self.leg_right_contact)),
        ]
    }

    pub fn speed(&self) -> f64 {
        self.vx.hypot(self.vy)
    }

    fn potential(&self, p: &LanderParams) -> f64 {
        -p.k_dist * self.x.hypot(self.y) - p.k_speed * self.speed() - p.k_angle * self.angle.abs()
    }
}

pub fn lander_reset(params: &LanderParams, rng: &mut Rng) -> (LanderState, Vec<f64>) {
    let mut state = LanderState::at(
        rng.random_range(-params.spawn_x..=params.spawn_x),
        rng.random_range(params.spawn_y.0..=params.spawn_y.1),
    );
    state.vx = rng.random_range(-params.spawn_vx..=params.spawn_vx);
    state.angle = rng.random_range(-params.spawn_angle..=params.spawn_angle);
    let obs = state.observation();
    (state, obs)
}

/// One integration step and its reward.
pub fn lander_step(
    params: &LanderParams,
    state: &LanderState,
    action: usize,
    rng: &mut Rng,
) -> Result<(LanderState, StepResult)> {
    check_action(action, ACTIONS)?;
    if state.finished || state.step_index >= params.max_episode_steps {
        return Err(Error::ContractViolation(
            "stepped a finished lander episode".into(),
        ));
    }
    let p = params;
    let mut s = *state;
    s.step_index += 1;

    let mut dispersion = || {
        if p.engine_noise > 0.0 {
            1.0 + rng.random_range(-p.engine_noise..=p.engine_noise)
        } else {
            1.0
        }
    };
    let (sin, cos) = state.angle.sin_cos();
    let (mut ax, mut ay, mut alpha) = (0.0, -p.gravity, 0.0);
    let mut fuel = 0.0;
    match action {
        2 => {
            let thrust = p.main_thrust * dispersion();
            // Body "up" is (−sin, cos).
            ax -= thrust * sin;
            ay += thrust * cos;
            fuel = p.main_fuel_cost;
        }
        1 | 3 => {
            let dir = if action == 1 { 1.0 } else { -1.0 };
            let thrust = p.side_thrust * dispersion() * dir;
            // Body "right" is (cos, sin).
            ax += thrust * cos;
            ay += thrust * sin;
            alpha -= p.side_torque * dir;
            fuel = p.side_fuel_cost;
        }
        _ => {}
    }

    s.vx += ax * p.dt;
    s.vy += ay * p.dt;
    s.angular_velocity += alpha * p.dt;
    s.x += s.vx * p.dt;
    s.y += s.vy * p.dt;
    s.angle += s.angular_velocity * p.dt;

    let mut termination = None;
    let (left_y, right_y) = leg_heights(p, &s);
    if left_y.min(right_y) <= 0.0 {
        let impact_speed = s.speed();
        if impact_speed > p.crash_speed || s.angle.abs() > p.crash_angle {
            termination = Some(Termination::Crashed);
        } else {
            // Ground contact: stop downward motion, level the body, apply friction.
            s.y -= left_y.min(right_y);
            s.vy = s.vy.max(0.0);
            s.vx *= p.ground_friction;
            s.angular_velocity = 0.0;
            s.angle *= 0.5;
            if s.angle.abs() < 1e-3 {
                s.angle = 0.0;
            }
        }
    }
    let (left_y, right_y) = leg_heights(p, &s);
    s.leg_left_contact = left_y <= 1e-3;
    s.leg_right_contact = right_y <= 1e-3;

    if termination.is_none() {
        let at_rest = s.leg_left_contact && s.leg_right_contact && s.speed() < p.rest_speed;
        s.rest_counter = if at_rest { s.rest_counter + 1 } else { 0 };
        if s.rest_counter >= p.rest_steps {
            let on_pad = s.x.abs() <= p.pad_half_width;
            let bonus = if on_pad {
                100.0 + 40.0 * (1.0 - s.x.abs() / p.pad_half_width)
            } else {
                100.0
            };
            termination = Some(Termination::Landed { bonus, on_pad });
        } else if s.x.abs() > p.max_x || s.y > p.max_y {
            termination = Some(Termination::OutOfBounds);
        }
    }

    let shaping = s.potential(p) - state.potential(p);
    let reward = shaping - fuel + termination.map_or(0.0, |t| t.bonus());
    let done = termination.is_some();
    let timed_out = !done && s.step_index >= p.max_episode_steps;
    s.finished = done || timed_out;
    Ok((
        s,
        StepResult {
            observation: s.observation(),
            reward,
            done,
            timed_out,
            termination,
        },
    ))
}

fn leg_heights(p: &LanderParams, s: &LanderState) -> (f64, f64) {
    let drop = p.leg_half_span * s.angle.sin();
    (s.y - drop, s.y + drop)
}

/// Stateful wrapper around [`lander_reset`] / [`lander_step`].
#[derive(Debug, Clone)]
pub struct Lander {
    params: LanderParams,
    state: LanderState,
}

impl Default for Lander {
    fn default() -> Self {
        Self::new(LanderParams::default())
    }
}

impl Lander {
    pub fn new(params: LanderParams) -> Self {
        let mut state = LanderState::at(0.0, params.spawn_y.1);
        state.finished = true;
        Self { params, state }
    }

    pub fn params(&self) -> &LanderParams {
        &self.params
    }

    pub fn state(&self) -> &LanderState {
        &self.state
    }

    /// Starts an episode from an explicit state.
    pub fn set_state(&mut self, state: LanderState) {
        self.state = state;
    }
}

impl Environment for Lander {
    fn spec(&self) -> EnvSpec {
        EnvSpec {
            observation_size: LANDER_OBS_SIZE,
            action_count: ACTIONS,
            max_episode_steps: self.params.max_episode_steps,
        }
    }

    fn reset(&mut self, rng: &mut Rng) -> Vec<f64> {
        let (state, obs) = lander_reset(&self.params, rng);
        self.state = state;
        obs
    }

    fn step(&mut self, action: usize, rng: &mut Rng) -> Result<StepResult> {
        let (next, result) = lander_step(&self.params, &self.state, action, rng)?;
        self.state = next;
        Ok(result)
    }
}
