//! Deep Q-learning with exploration reannealing.
//!
//! The crate is a complete, dependency-light training stack: a small
//! feed-forward Q-network with hand-written backpropagation and Adam
//! ([`mlp`]), a FIFO replay memory ([`replay`]), ε-greedy and softmax action
//! selection together with the stuck-counter reannealing controller
//! ([`explore`]), a DQN/DDQN learner ([`agent`]), two episodic environments
//! ([`envs`]), a multi-armed bandit regret simulator ([`bandit`]) and the
//! training harness with its CLI ([`harness`]).
//!
//! Exploration reannealing resets ε to 1 whenever a heuristic says the agent
//! is stuck in a poor local optimum. Here the heuristic counts episodes that
//! end on the time limit: a timeout adds one, any other ending halves the
//! count, and reaching the threshold triggers the reset.

pub mod agent;
pub mod bandit;
pub mod envs;
pub mod error;
pub mod explore;
pub mod harness;
pub mod mlp;
pub mod replay;

pub use error::{Error, Result};

/// Seeded random source used throughout the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the crate's seeded random source.
pub fn seeded_rng(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}

/// Index of the largest value, lowest index on ties. Returns 0 for an empty slice.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
