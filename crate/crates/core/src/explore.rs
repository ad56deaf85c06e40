//! Action selection, exploration schedules and the reannealing controller.

use rand::Rng as _;

use crate::{argmax, Error, Result, Rng};

/// Multiplicatively decaying ε with a floor. Starts at 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSchedule {
    epsilon: f64,
    epsilon_min: f64,
    decay_rate: f64,
}

impl EpsilonSchedule {
    pub fn new(epsilon_min: f64, decay_rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon_min) {
            return Err(Error::InvalidParameter(format!(
                "epsilon_min must lie in [0, 1], got {epsilon_min}"
            )));
        }
        if !(decay_rate > 0.0 && decay_rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "decay rate must lie in (0, 1), got {decay_rate}"
            )));
        }
        Ok(Self {
            epsilon: 1.0,
            epsilon_min,
            decay_rate,
        })
    }

    /// Fixes the current ε, clamped into `[epsilon_min, 1]`.
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon.clamp(self.epsilon_min, 1.0);
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn epsilon_min(&self) -> f64 {
        self.epsilon_min
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    /// `ε ← max(ε_min, ε·ρ)`. Called once per episode.
    pub fn decay(&mut self) {
        self.epsilon = (self.epsilon * self.decay_rate).max(self.epsilon_min);
    }

    /// Resets ε to 1.
    pub fn reanneal(&mut self) {
        self.epsilon = 1.0;
    }
}

/// Multiplicatively decaying softmax temperature with a floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftmaxSchedule {
    temperature: f64,
    initial: f64,
    t_min: f64,
    decay_rate: f64,
}

impl SoftmaxSchedule {
    pub fn new(initial: f64, t_min: f64, decay_rate: f64) -> Result<Self> {
        if !(t_min > 0.0 && t_min <= initial && initial.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < T_min ≤ T_initial, got T_min={t_min}, T_initial={initial}"
            )));
        }
        if !(decay_rate > 0.0 && decay_rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "decay rate must lie in (0, 1), got {decay_rate}"
            )));
        }
        Ok(Self {
            temperature: initial,
            initial,
            t_min,
            decay_rate,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn decay(&mut self) {
        self.temperature = (self.temperature * self.decay_rate).max(self.t_min);
    }

    /// Resets the temperature to its initial value.
    pub fn reanneal(&mut self) {
        self.temperature = self.initial;
    }
}

/// Outcome of one stuck-counter update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReannealDecision {
    pub reanneal: bool,
    pub new_count: u32,
}

/// Timeout counter: +1 per timed-out episode, integer-halved otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StuckCounter {
    count: u32,
    threshold: u32,
}

impl StuckCounter {
    pub const DEFAULT_THRESHOLD: u32 = 10;

    pub fn new(threshold: u32) -> Result<Self> {
        if threshold == 0 {
            return Err(Error::InvalidParameter(
                "stuck threshold must be ≥ 1".into(),
            ));
        }
        Ok(Self {
            count: 0,
            threshold,
        })
    }

    pub fn with_count(mut self, count: u32) -> Self {
        self.count = count;
        self
    }

    pub fn count(&self) -> u32 {
        self.count
    }

    pub fn threshold(&self) -> u32 {
        self.threshold
    }

    /// Applies one episode outcome. Reaching the threshold resets the count to 0.
    pub fn update(&mut self, episode_timed_out: bool) -> ReannealDecision {
        let updated = if episode_timed_out {
            self.count.saturating_add(1)
        } else {
            self.count / 2
        };
        let reanneal = updated >= self.threshold;
        self.count = if reanneal { 0 } else { updated };
        ReannealDecision {
            reanneal,
            new_count: self.count,
        }
    }
}

fn check_q_values(q_values: &[f64]) -> Result<()> {
    if q_values.is_empty() {
        return Err(Error::InvalidInput("no q-values to select from".into()));
    }
    if q_values.iter().any(|q| !q.is_finite()) {
        return Err(Error::NonFinite("q-values"));
    }
    Ok(())
}

/// With probability ε a uniform action over all of them, otherwise the
/// lowest-index argmax.
pub fn select_epsilon_greedy(q_values: &[f64], epsilon: f64, rng: &mut Rng) -> Result<usize> {
    check_q_values(q_values)?;
    if rng.random::<f64>() < epsilon {
        Ok(rng.random_range(0..q_values.len()))
    } else {
        Ok(argmax(q_values))
    }
}

/// [`select_epsilon_greedy`] that only evaluates `q_values` when acting greedily.
///
/// Consumes the random source exactly as the eager form does, so both
/// produce the same action stream for the same seed.
pub fn select_epsilon_greedy_lazy<F>(
    action_count: usize,
    epsilon: f64,
    rng: &mut Rng,
    q_values: F,
) -> Result<usize>
where
    F: FnOnce() -> Result<Vec<f64>>,
{
    if action_count == 0 {
        return Err(Error::InvalidInput("no actions to select from".into()));
    }
    if rng.random::<f64>() < epsilon {
        Ok(rng.random_range(0..action_count))
    } else {
        let q = q_values()?;
        check_q_values(&q)?;
        Ok(argmax(&q))
    }
}

/// Boltzmann probabilities `exp(Q/T) / Σ exp(Q/T)`, evaluated after subtracting max Q.
pub fn softmax_probabilities(q_values: &[f64], temperature: f64) -> Result<Vec<f64>> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "softmax temperature must be positive, got {temperature}"
        )));
    }
    check_q_values(q_values)?;
    let max = q_values[argmax(q_values)];
    let weights: Vec<f64> = q_values
        .iter()
        .map(|q| ((q - max) / temperature).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Samples an action from the Boltzmann distribution at `temperature`.
pub fn select_softmax(q_values: &[f64], temperature: f64, rng: &mut Rng) -> Result<usize> {
    let probs = softmax_probabilities(q_values, temperature)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (a, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return Ok(a);
        }
    }
    // Rounding left the cumulative sum just under 1; fall back to the last
    // action with non-zero mass.
    Ok(probs.iter().rposition(|&p| p > 0.0).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    #[test]
    fn decay_from_one() {
        let mut s = EpsilonSchedule::new(0.01, 0.99).unwrap();
        s.decay();
        assert_eq!(s.epsilon(), 0.99);
    }

    #[test]
    fn decay_floor_holds() {
        let mut s = EpsilonSchedule::new(0.01, 0.99).unwrap().with_epsilon(0.01);
        s.decay();
        assert_eq!(s.epsilon(), 0.01);
    }

    /// First k with rate^k < 0.01, by iterating the bare recurrence.
    fn decays_to_floor_oracle(rate: f64) -> usize {
        let mut raw = 1.0f64;
        for k in 1.. {
            raw *= rate;
            if raw < 0.01 {
                return k;
            }
        }
        unreachable!()
    }

    #[test]
    fn decay_reaches_floor_on_schedule() {
        assert_eq!(decays_to_floor_oracle(0.99), 459);
        assert_eq!(decays_to_floor_oracle(0.985), 305);
        for (rate, k) in [(0.99, 459), (0.985, 305)] {
            let mut s = EpsilonSchedule::new(0.01, rate).unwrap();
            for _ in 0..k - 1 {
                s.decay();
            }
            assert!(s.epsilon() > 0.01, "rate {rate}");
            s.decay();
            assert_eq!(s.epsilon(), 0.01, "rate {rate}");
        }
    }

    #[test]
    fn reanneal_resets_and_composes() {
        let mut s = EpsilonSchedule::new(0.01, 0.99).unwrap().with_epsilon(0.01);
        s.reanneal();
        assert_eq!(s.epsilon(), 1.0);
        s.reanneal();
        assert_eq!(s.epsilon(), 1.0);
        s.decay();
        assert_eq!(s.epsilon(), 0.99);
        assert_eq!(s.epsilon_min(), 0.01);
        assert_eq!(s.decay_rate(), 0.99);
    }

    #[test]
    fn schedule_validation() {
        assert!(EpsilonSchedule::new(0.01, 1.0).is_err());
        assert!(EpsilonSchedule::new(0.01, 0.0).is_err());
        assert!(EpsilonSchedule::new(1.5, 0.9).is_err());
        assert!(SoftmaxSchedule::new(1.0, 0.0, 0.9).is_err());
        assert!(SoftmaxSchedule::new(1.0, 2.0, 0.9).is_err());
    }

    #[test]
    fn softmax_reanneal() {
        let mut s = SoftmaxSchedule::new(1.0, 0.01, 0.5).unwrap();
        for _ in 0..10 {
            s.decay();
        }
        assert!(s.temperature() < 1.0);
        s.reanneal();
        assert_eq!(s.temperature(), 1.0);
        s.reanneal();
        assert_eq!(s.temperature(), 1.0);

        let mut once = SoftmaxSchedule::new(1.0, 0.01, 0.5).unwrap();
        once.decay();
        let mut twice = once;
        twice.reanneal();
        twice.decay();
        assert_eq!(once.temperature(), twice.temperature());
    }

    #[test]
    fn stuck_counter_rules() {
        let mut c = StuckCounter::new(10).unwrap().with_count(3);
        assert_eq!(
            c.update(false),
            ReannealDecision {
                reanneal: false,
                new_count: 1
            }
        );

        let mut c = StuckCounter::new(10).unwrap().with_count(9);
        assert_eq!(
            c.update(true),
            ReannealDecision {
                reanneal: true,
                new_count: 0
            }
        );
        assert_eq!(c.count(), 0);

        let mut c = StuckCounter::new(10).unwrap();
        assert_eq!(
            c.update(false),
            ReannealDecision {
                reanneal: false,
                new_count: 0
            }
        );
        assert!(StuckCounter::new(0).is_err());
    }

    #[test]
    fn greedy_at_zero_epsilon() {
        let mut rng = seeded_rng(0);
        for _ in 0..100 {
            assert_eq!(
                select_epsilon_greedy(&[1.0, 3.0, 2.0, 0.0], 0.0, &mut rng).unwrap(),
                1
            );
        }
        assert_eq!(
            select_epsilon_greedy(&[2.0, 2.0], 0.0, &mut rng).unwrap(),
            0
        );
        assert!(select_epsilon_greedy(&[], 0.5, &mut rng).is_err());
    }

    #[test]
    fn lazy_selection_matches_eager() {
        let q = vec![0.3, -0.1, 0.9, 0.2];
        let mut a = seeded_rng(12);
        let mut b = seeded_rng(12);
        for _ in 0..500 {
            let eager = select_epsilon_greedy(&q, 0.4, &mut a).unwrap();
            let lazy = select_epsilon_greedy_lazy(4, 0.4, &mut b, || Ok(q.clone())).unwrap();
            assert_eq!(eager, lazy);
        }
    }

    #[test]
    fn softmax_symmetric_and_closed_form() {
        let p = softmax_probabilities(&[3.0; 4], 0.7).unwrap();
        assert!(p.iter().all(|&x| (x - 0.25).abs() < 1e-15));
        let p = softmax_probabilities(&[0.0, 1.0], 1.0).unwrap();
        let e = std::f64::consts::E;
        assert!((p[1] - e / (1.0 + e)).abs() < 1e-15);
        let p = softmax_probabilities(&[0.0, 1000.0], 0.01).unwrap();
        assert_eq!(p, vec![0.0, 1.0]);
        assert!(matches!(
            softmax_probabilities(&[0.0], 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(select_softmax(&[0.0, 1.0], -1.0, &mut seeded_rng(0)).is_err());
    }

    #[test]
    fn softmax_shift_invariance_exact() {
        let q = [0.5, -1.25, 2.0, 0.0];
        let shifted: Vec<f64> = q.iter().map(|x| x + 64.0).collect();
        assert_eq!(
            softmax_probabilities(&q, 0.5).unwrap(),
            softmax_probabilities(&shifted, 0.5).unwrap()
        );
    }
}
