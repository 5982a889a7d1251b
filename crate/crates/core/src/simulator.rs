//! Episode and experiment runners.
//!
//! Determinism contract: `(config, master_seed)` fully determines every byte
//! of a [`ResultSet`]. Each repetition draws from its own stream, addressed
//! as `RngStream::from_label(master_seed, "policy=<name>;rep=<r>")`, and
//! splits that into a `"policy"` substream (sampling draws) and an `"env"`
//! substream (reward noise). Repetitions are therefore embarrassingly
//! parallel: the worker count changes wall-clock time and nothing else, and
//! adding a policy to an experiment never perturbs another policy's draws.

use std::time::Duration;

use rayon::prelude::*;

use crate::bandit::{pseudo_regret, realized_regret, BanditInstance, RegretTrace};
use crate::distributions::RngStream;
use crate::error::CoreError;
use crate::policies::{Policy, PolicyConfig, PolicyState};

/// A policy entry in an experiment: the name keys CSV rows and RNG streams,
/// so it must be unique within one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedPolicy {
    pub name: String,
    pub config: PolicyConfig,
}

impl NamedPolicy {
    /// Entry named after the kind itself.
    pub fn of_kind(config: PolicyConfig) -> Self {
        NamedPolicy { name: config.kind.name().to_string(), config }
    }
}

/// Declarative description of one Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub instance: BanditInstance,
    pub policies: Vec<NamedPolicy>,
    pub horizon: u64,
    pub repetitions: usize,
    pub master_seed: u64,
    /// Strictly increasing step indices at which regret is recorded; the
    /// last entry must equal the horizon.
    pub checkpoints: Vec<u64>,
    /// Also record realized (reward-difference) regret alongside
    /// pseudo-regret.
    pub record_realized: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.policies.is_empty() {
            return Err(CoreError::invalid("policies", "need at least one policy"));
        }
        if self.repetitions < 1 {
            return Err(CoreError::invalid("reps", "need at least one repetition"));
        }
        if self.horizon < self.instance.arms() as u64 {
            return Err(CoreError::invalid("T", "horizon shorter than the warm start"));
        }
        if self.checkpoints.is_empty() {
            return Err(CoreError::invalid("checkpoints", "need at least one checkpoint"));
        }
        if !self.checkpoints.windows(2).all(|w| w[0] < w[1]) {
            return Err(CoreError::invalid("checkpoints", "must be strictly increasing"));
        }
        if self.checkpoints[0] < 1 || *self.checkpoints.last().unwrap() != self.horizon {
            return Err(CoreError::invalid(
                "checkpoints",
                "must lie in [1, T] and end exactly at the horizon",
            ));
        }
        for p in &self.policies {
            if p.config.arms != self.instance.arms() || p.config.horizon != self.horizon {
                return Err(CoreError::invalid(
                    "policies",
                    format!("policy {} disagrees with the experiment arms/horizon", p.name),
                ));
            }
            p.config.validate()?;
        }
        let mut names: Vec<&str> = self.policies.iter().map(|p| p.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.policies.len() {
            return Err(CoreError::invalid("policies", "policy names must be unique"));
        }
        Ok(())
    }
}

/// All traces of one experiment, indexed `[policy][repetition]`.
#[derive(Debug, Clone)]
pub struct ResultSet {
    pub config: ExperimentConfig,
    pub traces: Vec<Vec<RegretTrace>>,
    pub elapsed: Duration,
}

/// Geometric checkpoint schedule: up to `count` strictly increasing steps
/// from `max(arms, 10)` (clamped to the horizon) to the horizon inclusive.
/// Rounding deduplicates, so fewer than `count` points can come back.
pub fn checkpoint_schedule(horizon: u64, count: usize, arms: usize) -> Vec<u64> {
    debug_assert!(count >= 2 && horizon >= 2);
    let first = (arms as u64).max(10).min(horizon);
    if first == horizon || count < 2 {
        return vec![horizon];
    }
    let (a, b) = (first as f64, horizon as f64);
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let frac = i as f64 / (count - 1) as f64;
        let step = (a * (b / a).powf(frac)).round() as u64;
        points.push(step.clamp(first, horizon));
    }
    *points.last_mut().unwrap() = horizon;
    points.dedup();
    points
}

/// Linear checkpoint schedule with the same endpoint conventions as
/// [`checkpoint_schedule`].
pub fn checkpoint_schedule_linear(horizon: u64, count: usize, arms: usize) -> Vec<u64> {
    debug_assert!(count >= 2 && horizon >= 2);
    let first = (arms as u64).max(10).min(horizon);
    if first == horizon || count < 2 {
        return vec![horizon];
    }
    let (a, b) = (first as f64, horizon as f64);
    let mut points = Vec::with_capacity(count);
    for i in 0..count {
        let frac = i as f64 / (count - 1) as f64;
        let step = (a + (b - a) * frac).round() as u64;
        points.push(step.clamp(first, horizon));
    }
    *points.last_mut().unwrap() = horizon;
    points.dedup();
    points
}

/// The stream owning repetition `rep` of the policy named `name`.
pub fn episode_stream(master_seed: u64, name: &str, rep: usize) -> RngStream {
    RngStream::from_label(master_seed, &format!("policy={name};rep={rep}"))
}

/// Run one episode of `config.horizon` steps (warm start included) and
/// record regret at each checkpoint. Identical `(stream, config)` give a
/// bit-identical trace.
pub fn run_episode(
    instance: &BanditInstance,
    config: &PolicyConfig,
    checkpoints: &[u64],
    stream: &RngStream,
    record_realized: bool,
) -> Result<RegretTrace, CoreError> {
    let mut policy = PolicyState::new(*config, stream.substream("policy"))?;
    let mut env = stream.substream("env");
    Ok(drive_episode(
        instance,
        &mut policy,
        config.horizon,
        &mut env,
        checkpoints,
        record_realized,
        stream.stream_id(),
    ))
}

/// Episode loop over any [`Policy`] implementation; the scripted-policy unit
/// tests drive this directly.
pub fn drive_episode<P: Policy>(
    instance: &BanditInstance,
    policy: &mut P,
    horizon: u64,
    env: &mut RngStream,
    checkpoints: &[u64],
    record_realized: bool,
    run_seed: u64,
) -> RegretTrace {
    debug_assert!(checkpoints.windows(2).all(|w| w[0] < w[1]));
    debug_assert_eq!(checkpoints.last().copied(), Some(horizon));
    let mut pseudo = Vec::with_capacity(checkpoints.len());
    let mut realized = if record_realized { Some(Vec::with_capacity(checkpoints.len())) } else { None };
    let mut next = 0usize;
    for t in 1..=horizon {
        let arm = policy.select_arm();
        let reward = instance.sample_reward(arm, env);
        policy.observe(arm, reward);
        if next < checkpoints.len() && checkpoints[next] == t {
            pseudo.push(pseudo_regret(instance, policy.stats()));
            if let Some(r) = realized.as_mut() {
                r.push(realized_regret(instance, policy.stats()));
            }
            next += 1;
        }
    }
    debug_assert_eq!(policy.stats().step(), horizon);
    debug_assert_eq!(policy.stats().counts().iter().sum::<u64>(), horizon);
    RegretTrace {
        checkpoints: checkpoints.to_vec(),
        cumulative_pseudo_regret: pseudo,
        realized,
        run_seed,
    }
}

/// Run every `(policy, repetition)` episode of the experiment on `workers`
/// threads (0 = all available). Results are keyed by index, never by
/// completion order, so the outcome is byte-identical for any worker count.
///
/// `progress` is called after each completed episode with
/// `(completed, total)`.
pub fn run_experiment(
    config: &ExperimentConfig,
    workers: usize,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<ResultSet, CoreError> {
    config.validate()?;
    let start = std::time::Instant::now();
    let reps = config.repetitions;
    let total = config.policies.len() * reps;
    let done = std::sync::atomic::AtomicUsize::new(0);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CoreError::invalid("workers", e.to_string()))?;

    let flat: Result<Vec<RegretTrace>, CoreError> = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|job| {
                let policy = &config.policies[job / reps];
                let rep = job % reps;
                let stream = episode_stream(config.master_seed, &policy.name, rep);
                let trace = run_episode(
                    &config.instance,
                    &policy.config,
                    &config.checkpoints,
                    &stream,
                    config.record_realized,
                )?;
                if let Some(cb) = progress {
                    let n = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                    cb(n, total);
                }
                Ok(trace)
            })
            .collect()
    });
    let flat = flat?;

    let mut traces: Vec<Vec<RegretTrace>> = Vec::with_capacity(config.policies.len());
    let mut it = flat.into_iter();
    for _ in 0..config.policies.len() {
        traces.push(it.by_ref().take(reps).collect());
    }

    Ok(ResultSet { config: config.clone(), traces, elapsed: start.elapsed() })
}
