//! Trains HoverTrap agents with and without reannealing and reports, per
//! seed, the mean greedy return over the last 500 episodes.
//!
//! cargo run --release -p reanneal-core --example hovertrap_sweep -- [seeds] [episodes]

use std::time::Instant;

use reanneal_core::envs::{value_iteration_oracle, EnvKind, HoverTrap};
use reanneal_core::harness::{play_episode, train, RunConfig};
use reanneal_core::seeded_rng;

fn main() {
    let mut args = std::env::args().skip(1);
    let seeds: u64 = args.next().map_or(10, |s| s.parse().unwrap());
    let episodes: usize = args.next().map_or(2000, |s| s.parse().unwrap());
    let tail = 500.min(episodes);
    let optimum = value_iteration_oracle(0.99, 1e-10)
        .unwrap()
        .greedy_rollout()
        .0;
    println!("value-iteration optimum return {optimum:.3}");

    for reanneal in [false, true] {
        let mut hits = 0;
        for seed in 0..seeds {
            let mut config = RunConfig::preset(EnvKind::HoverTrap);
            config.episodes = episodes;
            config.seed = seed;
            config.decay_rate = 0.9;
            config.reanneal_enabled = reanneal;
            let started = Instant::now();
            let mut greedy = Vec::new();
            let outcome = train(&config, &mut HoverTrap::default(), |record, agent| {
                if record.episode > episodes - tail {
                    let r = play_episode(agent, &mut HoverTrap::default(), 0.0, &mut seeded_rng(0))
                        .unwrap();
                    greedy.push(r);
                }
            })
            .unwrap();
            let mean = greedy.iter().sum::<f64>() / greedy.len() as f64;
            let reached = mean >= 0.9 * optimum;
            hits += usize::from(reached);
            let reanneals = outcome
                .records
                .iter()
                .filter(|r| r.reannealed_this_episode)
                .count();
            let steps: usize = outcome.records.iter().map(|r| r.steps).sum();
            println!(
                "reanneal={reanneal} seed={seed} greedy_tail_mean={mean:8.3} reached={reached} reanneals={reanneals} steps={steps} secs={:.1}",
                started.elapsed().as_secs_f64()
            );
        }
        println!("reanneal={reanneal}: {hits}/{seeds} seeds within 10% of optimum");
    }
}
