//! Multi-armed bandit regret simulation for greedy, constant-ε and decaying-ε play.
//!
//! Regret is measured against the true arm means: step `t` adds
//! `V* − μ(a_t)`, so curves are free of reward noise.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::{argmax, Error, Result, Rng};

#[derive(Debug, Clone, PartialEq)]
pub struct BanditSpec {
    arm_means: Vec<f64>,
    noise_std: f64,
    horizon: usize,
}

impl BanditSpec {
    pub fn new(arm_means: Vec<f64>, noise_std: f64, horizon: usize) -> Result<Self> {
        if arm_means.len() < 2 {
            return Err(Error::InvalidParameter(
                "a bandit needs at least two arms".into(),
            ));
        }
        if arm_means.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite("arm means"));
        }
        if !(noise_std >= 0.0 && noise_std.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise standard deviation must be ≥ 0, got {noise_std}"
            )));
        }
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be ≥ 1".into()));
        }
        Ok(Self {
            arm_means,
            noise_std,
            horizon,
        })
    }

    pub fn arm_means(&self) -> &[f64] {
        &self.arm_means
    }

    pub fn noise_std(&self) -> f64 {
        self.noise_std
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// V*, the best arm mean.
    pub fn best_mean(&self) -> f64 {
        self.arm_means
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Best minus second-best mean.
    pub fn gap(&self) -> Result<f64> {
        let mut sorted = self.arm_means.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let gap = sorted[0] - sorted[1];
        if gap <= 0.0 {
            return Err(Error::ZeroGap);
        }
        Ok(gap)
    }
}

/// Free-function form of [`BanditSpec::gap`].
pub fn gap(spec: &BanditSpec) -> Result<f64> {
    spec.gap()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    Greedy,
    ConstantEps(f64),
    /// `ε_t = min(1, c / (δ² t))` with the true gap δ.
    DecayingEps(f64),
}

impl Strategy {
    fn validate(&self) -> Result<()> {
        match *self {
            Strategy::Greedy => Ok(()),
            Strategy::ConstantEps(eps) if (0.0..=1.0).contains(&eps) => Ok(()),
            Strategy::ConstantEps(eps) => Err(Error::InvalidParameter(format!(
                "constant ε must lie in [0, 1], got {eps}"
            ))),
            Strategy::DecayingEps(c) if c > 0.0 && c.is_finite() => Ok(()),
            Strategy::DecayingEps(c) => Err(Error::InvalidParameter(format!(
                "decay constant c must be positive, got {c}"
            ))),
        }
    }
}

/// Cumulative regret `L(t)` for `t = 1..=horizon`, stored at index `t − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretCurve {
    pub cumulative_regret: Vec<f64>,
}

impl RegretCurve {
    /// `L(t)` for 1-based `t`.
    pub fn at(&self, t: usize) -> f64 {
        self.cumulative_regret[t - 1]
    }

    pub fn total(&self) -> f64 {
        *self.cumulative_regret.last().unwrap_or(&0.0)
    }

    pub fn len(&self) -> usize {
        self.cumulative_regret.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative_regret.is_empty()
    }
}

/// Plays `spec.horizon()` rounds with zero-initialised sample-mean estimates.
pub fn run_bandit(spec: &BanditSpec, strategy: Strategy, rng: &mut Rng) -> Result<RegretCurve> {
    strategy.validate()?;
    let k = spec.arm_means.len();
    let best = spec.best_mean();
    let inv_gap_sq = match strategy {
        Strategy::DecayingEps(_) => 1.0 / spec.gap()?.powi(2),
        _ => 0.0,
    };
    let noise =
        Normal::new(0.0, spec.noise_std).map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut estimates = vec![0.0; k];
    let mut counts = vec![0u64; k];
    let mut total = 0.0;
    let mut cumulative = Vec::with_capacity(spec.horizon);
    for t in 1..=spec.horizon {
        let epsilon = match strategy {
            Strategy::Greedy => 0.0,
            Strategy::ConstantEps(eps) => eps,
            Strategy::DecayingEps(c) => (c * inv_gap_sq / t as f64).min(1.0),
        };
        let arm = if epsilon > 0.0 && rng.random::<f64>() < epsilon {
            rng.random_range(0..k)
        } else {
            argmax(&estimates)
        };
        let mean = spec.arm_means[arm];
        let reward = if spec.noise_std > 0.0 {
            mean + noise.sample(rng)
        } else {
            mean
        };
        counts[arm] += 1;
        estimates[arm] += (reward - estimates[arm]) / counts[arm] as f64;
        total += best - mean;
        cumulative.push(total);
    }
    Ok(RegretCurve {
        cumulative_regret: cumulative,
    })
}

/// Pointwise mean of several curves of equal length.
pub fn mean_curve(curves: &[RegretCurve]) -> Result<RegretCurve> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InvalidInput("no curves to average".into()))?;
    if curves.iter().any(|c| c.len() != first.len()) {
        return Err(Error::InvalidInput("curves have different lengths".into()));
    }
    let n = curves.len() as f64;
    let cumulative_regret = (0..first.len())
        .map(|i| curves.iter().map(|c| c.cumulative_regret[i]).sum::<f64>() / n)
        .collect();
    Ok(RegretCurve { cumulative_regret })
}
