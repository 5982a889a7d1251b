//! The bandit environment: arm means, gaps, reward sampling, per-arm pull
//! statistics and regret accounting.

use crate::distributions::RngStream;
use crate::error::CoreError;

/// Reward noise model. Both variants are 1-subGaussian for the parameter
/// ranges validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RewardModel {
    /// `reward = mean + z`, `z` standard normal.
    GaussianUnitVariance,
    /// `reward` uniform on `[mean - halfwidth, mean + halfwidth]`;
    /// 1-subGaussian whenever `halfwidth <= sqrt(3)`.
    BoundedUniform { halfwidth: f64 },
}

/// A fixed K-armed environment.
///
/// The best arm is wherever the largest mean sits; nothing assumes it is arm
/// 0, and ties for best are allowed (all tied arms have gap zero).
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
    reward_model: RewardModel,
}

impl BanditInstance {
    pub fn new(means: Vec<f64>, reward_model: RewardModel) -> Result<Self, CoreError> {
        if means.len() < 2 {
            return Err(CoreError::invalid("means", "need at least 2 arms"));
        }
        if means.iter().any(|m| !m.is_finite()) {
            return Err(CoreError::invalid("means", "all means must be finite"));
        }
        if let RewardModel::BoundedUniform { halfwidth } = reward_model {
            if !(halfwidth > 0.0 && halfwidth.is_finite()) {
                return Err(CoreError::invalid("halfwidth", "must be positive and finite"));
            }
            if halfwidth > 3f64.sqrt() {
                log::warn!("halfwidth {halfwidth} > sqrt(3): rewards are not 1-subGaussian");
            }
        }
        Ok(BanditInstance { means, reward_model })
    }

    /// The benchmark family: one arm at `best_mean`, the remaining `arms - 1`
    /// at `best_mean - gap`.
    pub fn single_best(
        arms: usize,
        best_mean: f64,
        gap: f64,
        reward_model: RewardModel,
    ) -> Result<Self, CoreError> {
        if gap.is_nan() || gap < 0.0 {
            return Err(CoreError::invalid("gap", format!("must be >= 0, got {gap}")));
        }
        let mut means = vec![best_mean - gap; arms.max(1)];
        means[0] = best_mean;
        Self::new(means, reward_model)
    }

    pub fn arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn reward_model(&self) -> RewardModel {
        self.reward_model
    }

    /// Largest arm mean (computed, not assumed to sit at any index).
    pub fn best_mean(&self) -> f64 {
        self.means.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Suboptimality gaps `max_j mu_j - mu_i`; at least one entry is exactly
    /// zero, and gaps are invariant under adding a constant to all means.
    pub fn gaps(&self) -> Vec<f64> {
        let best = self.best_mean();
        self.means.iter().map(|m| best - m).collect()
    }

    /// Draw one reward for `arm`. Consumes exactly one uniform from `rng`
    /// under either reward model, so swapping models never desynchronizes
    /// the other substreams of a run.
    ///
    /// # Panics
    /// If `arm` is out of range.
    #[inline]
    pub fn sample_reward(&self, arm: usize, rng: &mut RngStream) -> f64 {
        let mean = self.means[arm];
        match self.reward_model {
            RewardModel::GaussianUnitVariance => mean + rng.standard_normal(),
            RewardModel::BoundedUniform { halfwidth } => {
                mean - halfwidth + 2.0 * halfwidth * rng.uniform_open01()
            }
        }
    }
}

/// Per-arm pull counts and reward sums for one run.
///
/// Reward sums use Neumaier-compensated accumulation so that the on-demand
/// mean stays within ~1 ulp of the exact arithmetic mean even after 10^7
/// observations; the incremental-mean recurrence and plain summation both
/// drift past 1e-12 over runs that long.
#[derive(Debug, Clone, PartialEq)]
pub struct PullStats {
    counts: Vec<u64>,
    sums: Vec<f64>,
    compensations: Vec<f64>,
    step: u64,
}

impl PullStats {
    pub fn new(arms: usize) -> Self {
        PullStats {
            counts: vec![0; arms],
            sums: vec![0.0; arms],
            compensations: vec![0.0; arms],
            step: 0,
        }
    }

    pub fn arms(&self) -> usize {
        self.counts.len()
    }

    /// Completed steps; always equals the sum of the pull counts.
    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn count(&self, arm: usize) -> u64 {
        self.counts[arm]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Compensated total reward collected on `arm`.
    pub fn reward_sum(&self, arm: usize) -> f64 {
        self.sums[arm] + self.compensations[arm]
    }

    /// Total reward collected over all arms.
    pub fn total_reward(&self) -> f64 {
        (0..self.arms()).map(|i| self.reward_sum(i)).sum()
    }

    /// Empirical mean of `arm`.
    ///
    /// # Panics
    /// If the arm has never been pulled.
    #[inline]
    pub fn mean(&self, arm: usize) -> f64 {
        let n = self.counts[arm];
        assert!(n > 0, "mean of arm {arm} undefined before its first pull");
        self.reward_sum(arm) / n as f64
    }

    /// Record one observed reward.
    ///
    /// # Panics
    /// If `arm` is out of range (indexing).
    #[inline]
    pub fn observe(&mut self, arm: usize, reward: f64) {
        let sum = self.sums[arm];
        let t = sum + reward;
        // Neumaier: recover whichever addend was truncated.
        self.compensations[arm] += if sum.abs() >= reward.abs() {
            (sum - t) + reward
        } else {
            (reward - t) + sum
        };
        self.sums[arm] = t;
        self.counts[arm] += 1;
        self.step += 1;
    }
}

/// Gap-weighted pull counts `sum_i gap_i * T_i`: the pseudo-regret estimate
/// of expected regret after `stats.step()` steps. Non-negative, and additive
/// over episode segments.
pub fn pseudo_regret(instance: &BanditInstance, stats: &PullStats) -> f64 {
    assert_eq!(instance.arms(), stats.arms(), "instance/stats arm count mismatch");
    let best = instance.best_mean();
    instance
        .means()
        .iter()
        .zip(stats.counts())
        .map(|(m, &n)| (best - m) * n as f64)
        .sum()
}

/// Realized-reward regret `step * best_mean - total reward`. Unlike
/// pseudo-regret this is noisy and can be negative on lucky runs; it is
/// exposed for cross-checking only.
pub fn realized_regret(instance: &BanditInstance, stats: &PullStats) -> f64 {
    assert_eq!(instance.arms(), stats.arms(), "instance/stats arm count mismatch");
    stats.step() as f64 * instance.best_mean() - stats.total_reward()
}

/// Checkpointed cumulative regret for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    /// Strictly increasing step indices; the last one is the horizon.
    pub checkpoints: Vec<u64>,
    /// Pseudo-regret at each checkpoint. Non-decreasing.
    pub cumulative_pseudo_regret: Vec<f64>,
    /// Realized regret at each checkpoint, when the run recorded it.
    pub realized: Option<Vec<f64>>,
    /// Stream id of the repetition that produced this trace.
    pub run_seed: u64,
}
