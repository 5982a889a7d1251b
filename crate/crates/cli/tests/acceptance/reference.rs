//! Straight-line reference interpreter of every policy, used as the oracle
//! for episode equivalence.
//!
//! This is deliberately unstructured: no cached indices, no incremental
//! thresholds, no shared state-update code with the engine under test. Each
//! step recomputes everything from scratch, directly from the documented
//! sampling rules. The only shared pieces are the variate primitives
//! (`RngStream`, the normal quantile, the `J` standard quantile) — the RNG
//! contract — without which draw-for-draw comparison would be meaningless.

use banditlab_core::distributions::j;
use banditlab_core::{BanditInstance, PolicyConfig, PolicyKind, RegretTrace, RewardModel, RngStream};

pub fn reference_episode(
    instance: &BanditInstance,
    config: &PolicyConfig,
    checkpoints: &[u64],
    stream: &RngStream,
    record_realized: bool,
) -> RegretTrace {
    let k = config.arms;
    let horizon = config.horizon;
    let mut policy_rng = stream.substream("policy");
    let mut env_rng = stream.substream("env");

    // Per-arm tallies, compensated exactly like the documented accumulation
    // rule (Neumaier), written out here independently.
    let mut counts = vec![0u64; k];
    let mut sums = vec![0.0f64; k];
    let mut comps = vec![0.0f64; k];

    let rho = match config.kind {
        PolicyKind::MotsVarRho => {
            // rho = 1 - sqrt(40 / ilog(m, T)), clamped below.
            let mut v = horizon as f64;
            for _ in 0..config.var_rho_order {
                v = v.ln().max(std::f64::consts::E);
            }
            (1.0 - (40.0 / v).sqrt()).max(config.rho_floor)
        }
        _ => config.rho,
    };

    let true_best = instance.means().iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mean = |sums: &[f64], comps: &[f64], counts: &[u64], i: usize| -> f64 {
        (sums[i] + comps[i]) / counts[i] as f64
    };
    let threshold = |m: f64, s: f64| -> f64 {
        let ratio = horizon as f64 / (k as f64 * s);
        m + (config.alpha / s * ratio.ln().max(0.0)).sqrt()
    };

    let mut pseudo = Vec::new();
    let mut realized = Vec::new();
    let mut next_cp = 0usize;

    for t in 1..=horizon {
        let completed = t - 1;
        let arm = if completed < k as u64 {
            completed as usize
        } else {
            let mut best_arm = 0usize;
            let mut best_score = f64::NEG_INFINITY;
            for i in 0..k {
                let s = counts[i] as f64;
                let m = mean(&sums, &comps, &counts, i);
                let score = match config.kind {
                    PolicyKind::Mots | PolicyKind::MotsVarRho => {
                        let z = policy_rng.standard_normal();
                        let theta = m + (1.0 / (rho * s)).sqrt() * z;
                        theta.min(threshold(m, s))
                    }
                    PolicyKind::MotsJ => {
                        let u = policy_rng.uniform_open01();
                        let theta = m + (1.0 / s).sqrt() * j::standard_quantile(u);
                        theta.min(threshold(m, s))
                    }
                    PolicyKind::TsGaussian => {
                        let z = policy_rng.standard_normal();
                        m + (1.0 / s).sqrt() * z
                    }
                    PolicyKind::Moss => threshold(m, s),
                    PolicyKind::Ucb => m + (2.0 * (t as f64).ln()).sqrt() / s.sqrt(),
                };
                if score > best_score {
                    best_score = score;
                    best_arm = i;
                }
            }
            best_arm
        };

        let reward = match instance.reward_model() {
            RewardModel::GaussianUnitVariance => {
                instance.means()[arm] + env_rng.standard_normal()
            }
            RewardModel::BoundedUniform { halfwidth } => {
                instance.means()[arm] - halfwidth + 2.0 * halfwidth * env_rng.uniform_open01()
            }
        };

        // Neumaier accumulation.
        let sum = sums[arm];
        let total = sum + reward;
        comps[arm] += if sum.abs() >= reward.abs() { (sum - total) + reward } else { (reward - total) + sum };
        sums[arm] = total;
        counts[arm] += 1;

        if next_cp < checkpoints.len() && checkpoints[next_cp] == t {
            let mut p = 0.0;
            for (m, &n) in instance.means().iter().zip(&counts) {
                p += (true_best - m) * n as f64;
            }
            pseudo.push(p);
            if record_realized {
                let mut collected = 0.0;
                for i in 0..k {
                    collected += sums[i] + comps[i];
                }
                realized.push(t as f64 * true_best - collected);
            }
            next_cp += 1;
        }
    }

    RegretTrace {
        checkpoints: checkpoints.to_vec(),
        cumulative_pseudo_regret: pseudo,
        realized: record_realized.then_some(realized),
        run_seed: stream.stream_id(),
    }
}
