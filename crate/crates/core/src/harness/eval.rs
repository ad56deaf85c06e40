use crate::agent::Agent;
use crate::envs::Environment;
use crate::explore::select_epsilon_greedy_lazy;
use crate::{Result, Rng};

/// Returns of a batch of evaluation episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalSummary {
    pub returns: Vec<f64>,
    pub mean: f64,
    pub std: f64,
}

impl EvalSummary {
    fn from_returns(returns: Vec<f64>) -> Self {
        let n = returns.len().max(1) as f64;
        let mean = returns.iter().sum::<f64>() / n;
        let var = returns.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
        Self {
            returns,
            mean,
            std: var.sqrt(),
        }
    }
}

/// Undiscounted return of one episode played ε-greedily on the online network.
pub fn play_episode<E: Environment>(
    agent: &Agent,
    env: &mut E,
    epsilon: f64,
    rng: &mut Rng,
) -> Result<f64> {
    let actions = env.spec().action_count;
    let mut obs = env.reset(rng);
    let mut total = 0.0;
    loop {
        let action = select_epsilon_greedy_lazy(actions, epsilon, rng, || agent.q_values(&obs))?;
        let step = env.step(action, rng)?;
        total += step.reward;
        if step.finished() {
            return Ok(total);
        }
        obs = step.observation;
    }
}

/// Plays `episodes` episodes without learning. `epsilon = 0` is pure greedy.
pub fn evaluate<E: Environment>(
    agent: &Agent,
    env: &mut E,
    episodes: usize,
    epsilon: f64,
    rng: &mut Rng,
) -> Result<EvalSummary> {
    let returns = (0..episodes)
        .map(|_| play_episode(agent, env, epsilon, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalSummary::from_returns(returns))
}
