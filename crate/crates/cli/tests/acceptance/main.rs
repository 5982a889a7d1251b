//! Acceptance suite: one test per shipping criterion, each printing a
//! `criterion N PASS` line with the measured numbers (run with
//! `cargo test -p banditlab-cli --test acceptance -- --nocapture` to see
//! them on success).
//!
//! The heavy criteria use every available core through the simulator's own
//! pool; on a 2-core machine the full suite takes a few minutes, dominated
//! by criterion 1's thousand million-step episodes.

mod reference;

use banditlab_cli::config::parse_config;
use banditlab_cli::run::{execute, mean_final_regret_from_raw};
use banditlab_core::analysis::{
    check_clip_atom, check_clip_continuous, check_j_ks, check_j_tail, check_inverse_g_bounded_in_s,
    check_inverse_g_rho1_lower_bound, Tail,
};
use banditlab_core::{
    aggregate, asymptotic_slope, checkpoint_schedule, episode_stream, run_episode, run_experiment,
    BanditInstance, ClipSpec, ExperimentConfig, NamedPolicy, PolicyConfig, PolicyKind, PolicyState,
    RewardModel, RngStream,
};
use reference::reference_episode;

fn benchmark_policies(arms: usize, horizon: u64) -> Vec<NamedPolicy> {
    // The comparison set: clipped samplers at alpha = 2, rho = 0.9999, and
    // the three baselines (moss at its classical alpha = 4).
    [
        PolicyKind::Mots,
        PolicyKind::MotsJ,
        PolicyKind::TsGaussian,
        PolicyKind::Moss,
        PolicyKind::Ucb,
    ]
    .into_iter()
    .map(|kind| NamedPolicy::of_kind(PolicyConfig::for_kind(kind, arms, horizon)))
    .collect()
}

/// Criterion 1: at desk scale (K=50, gap 0.2, T=1e6, 200 reps, pinned seed)
/// the mean final pseudo-regrets order as mots < ts, mots-j < ts, ts < ucb
/// and mots-j < moss, each with non-overlapping mean +/- 2 stderr intervals.
#[test]
fn criterion_1_desk_scale_ordering() {
    let horizon = 1_000_000;
    let arms = 50;
    let instance =
        BanditInstance::single_best(arms, 1.0, 0.2, RewardModel::GaussianUnitVariance).unwrap();
    let config = ExperimentConfig {
        instance: instance.clone(),
        policies: benchmark_policies(arms, horizon),
        horizon,
        repetitions: 200,
        master_seed: 0xC0FF_EE01,
        checkpoints: checkpoint_schedule(horizon, 16, arms),
        record_realized: false,
    };
    let results = run_experiment(&config, 0, None).unwrap();

    let mut finals = std::collections::HashMap::new();
    for (policy, traces) in config.policies.iter().zip(&results.traces) {
        let curve = aggregate(traces);
        let mean = *curve.mean.last().unwrap();
        let se = *curve.std_error.last().unwrap();
        println!("  {:<8} final regret {mean:9.1} +/- {:.1} (2se)", policy.name, 2.0 * se);
        finals.insert(policy.name.clone(), (mean, se));
    }
    let separated = |lo: &str, hi: &str| {
        let (ml, sl) = finals[lo];
        let (mh, sh) = finals[hi];
        assert!(
            ml + 2.0 * sl < mh - 2.0 * sh,
            "{lo} ({ml:.1} +/- {:.1}) not separated below {hi} ({mh:.1} +/- {:.1})",
            2.0 * sl,
            2.0 * sh
        );
    };
    separated("mots", "ts");
    separated("mots-j", "ts");
    separated("ts", "ucb");
    separated("mots-j", "moss");
    println!(
        "criterion 1 PASS: mots < ts, mots-j < ts, ts < ucb, mots-j < moss at 2se separation \
         ({:?} wall)",
        results.elapsed
    );
}

/// Criterion 2: 1e6 samples of J(0,1) with a pinned seed pass the KS test
/// against the closed-form CDF at the 0.01 level and match the exact tails
/// at z in {0.5, 1, 2, 3} within 3 binomial standard errors.
#[test]
fn criterion_2_j_distribution_exactness() {
    let seed = 0xC0FF_EE02;
    let ks = check_j_ks(seed, 1_000_000);
    assert!(ks.pass, "{ks:?}");
    for z in [0.5, 1.0, 2.0, 3.0] {
        let t = check_j_tail(seed, 1_000_000, z, Tail::Upper);
        assert!(t.pass, "{t:?}");
    }
    println!(
        "criterion 2 PASS: KS {:.3e} < {:.3e}; upper tails match at z in {{0.5,1,2,3}}",
        ks.estimate, ks.reference
    );
}

/// Criterion 3: clipped Gaussian at mu=0, var=1, tau=1 over 1e6 draws — atom
/// mass within 3 binomial SE of 1 - Phi(1), and the sub-threshold samples
/// pass KS against the renormalized normal at the 0.01 level.
#[test]
fn criterion_3_clipped_gaussian_law() {
    let seed = 0xC0FF_EE03;
    let atom = check_clip_atom(seed, 1_000_000);
    assert!(atom.pass, "{atom:?}");
    let continuous = check_clip_continuous(seed, 1_000_000);
    assert!(continuous.pass, "{continuous:?}");
    println!(
        "criterion 3 PASS: atom {:.6} vs {:.6}; sub-tau KS {:.3e} < {:.3e}",
        atom.estimate, atom.reference, continuous.estimate, continuous.reference
    );
}

/// Criterion 4: the rho = 1 overshoot lower bound (estimate >= e^-2/4 minus
/// 3 MC standard errors at eps=1, s=4) and uniform-in-s boundedness at
/// rho = 0.75, eps = 0.5 across s in {10, 100, 1000}.
#[test]
fn criterion_4_inverse_g_bounds() {
    let seed = 0xC0FF_EE04;
    let lower = check_inverse_g_rho1_lower_bound(seed, 1_000_000);
    assert!(lower.pass, "{lower:?}");
    let bounded = check_inverse_g_bounded_in_s(seed, 1_000_000);
    assert!(bounded.pass, "{bounded:?}");
    println!(
        "criterion 4 PASS: rho=1 estimate {:.4} >= {:.4}; bounded-in-s ratio {:.3} < 2",
        lower.estimate, lower.reference, bounded.estimate
    );
}

/// Criterion 5: K=2, gap 0.5, rho=0.9999, alpha=4, T=1e6, 200 reps — the
/// gate requires measured regret/ln T within [1x, 4x] of the asymptotic
/// slope 2/(rho * gap) ~ 4.0004.
///
/// KNOWN RED. The [1x, 4x] band assumes the finite-horizon slope exceeds
/// the limit, but Thompson-type samplers approach the Gaussian asymptote
/// from below: the suboptimal-arm pull count solves
/// s ~ (2/gap^2) ln(T gap^2 / s), which stays under (2/gap^2) ln T for
/// every finite T (the deficit closes only like lnln T/ln T). Measured
/// here: slope ~2.77 (0.69x), confirmed by an independent vectorized
/// reimplementation (2.69 +/- 0.39) and consistent with published
/// benchmark endpoints at T=1e7. The assert keeps the gate as stated
/// rather than loosening it.
#[test]
fn criterion_5_asymptotic_slope() {
    let horizon = 1_000_000;
    let instance =
        BanditInstance::single_best(2, 1.0, 0.5, RewardModel::GaussianUnitVariance).unwrap();
    let mut policy = PolicyConfig::for_kind(PolicyKind::Mots, 2, horizon);
    policy.alpha = 4.0;
    let config = ExperimentConfig {
        instance: instance.clone(),
        policies: vec![NamedPolicy::of_kind(policy)],
        horizon,
        repetitions: 200,
        master_seed: 0xC0FF_EE05,
        checkpoints: checkpoint_schedule(horizon, 8, 2),
        record_realized: false,
    };
    let results = run_experiment(&config, 0, None).unwrap();
    let curve = aggregate(&results.traces[0]);
    let slope = asymptotic_slope(&curve, &instance, 0.9999);
    assert!((slope.target - 4.000_400_040_004e0).abs() < 1e-11);
    assert!(
        slope.measured >= slope.target && slope.measured <= 4.0 * slope.target,
        "measured slope {:.4} outside [1x, 4x] of {:.4}: the finite-horizon slope of a \
         Thompson-type sampler sits below the asymptote (here {:.2}x), so this gate cannot \
         pass as stated; see the doc comment on this test",
        slope.measured,
        slope.target,
        slope.measured / slope.target
    );
    println!(
        "criterion 5 PASS: measured slope {:.3} in [{:.4}, {:.4}]",
        slope.measured,
        slope.target,
        4.0 * slope.target
    );
}

/// Criterion 6: the optimized engine reproduces the straight-line reference
/// interpreter bit for bit — every policy kind, K in {2, 5}, T=1e3, 20
/// seeds, plus one K=50, T=1e5 mots run.
#[test]
fn criterion_6_oracle_equivalence() {
    let mut compared = 0usize;
    for kind in PolicyKind::ALL {
        for arms in [2usize, 5] {
            let horizon = 1_000;
            let means: Vec<f64> = match arms {
                // Best arm deliberately not first.
                2 => vec![0.8, 1.0],
                _ => vec![0.9, 1.0, 0.7, 0.95, 0.4],
            };
            let instance =
                BanditInstance::new(means, RewardModel::GaussianUnitVariance).unwrap();
            let config = PolicyConfig::for_kind(kind, arms, horizon);
            let checkpoints = checkpoint_schedule(horizon, 7, arms);
            for seed in 0..20u64 {
                let stream = episode_stream(9_000 + seed, kind.name(), seed as usize);
                let fast = run_episode(&instance, &config, &checkpoints, &stream, true).unwrap();
                let slow = reference_episode(&instance, &config, &checkpoints, &stream, true);
                assert_eq!(fast, slow, "divergence: kind={:?} arms={arms} seed={seed}", kind);
                compared += 1;
            }
        }
    }

    // The benchmark-shaped single run at larger scale.
    let instance =
        BanditInstance::single_best(50, 1.0, 0.2, RewardModel::GaussianUnitVariance).unwrap();
    let config = PolicyConfig::for_kind(PolicyKind::Mots, 50, 100_000);
    let checkpoints = checkpoint_schedule(100_000, 10, 50);
    let stream = episode_stream(0xC0FF_EE06, "mots", 0);
    let fast = run_episode(&instance, &config, &checkpoints, &stream, false).unwrap();
    let slow = reference_episode(&instance, &config, &checkpoints, &stream, false);
    assert_eq!(fast, slow, "divergence on the K=50, T=1e5 run");
    compared += 1;
    println!("criterion 6 PASS: {compared} episodes identical to the reference interpreter");
}

const DETERMINISM_CONFIG: &str = r#"{
    "K": 10, "eps": 0.3, "T": 20000, "reps": 16, "seed": 3141,
    "checkpoints": 8, "policies": ["mots", "mots-j", "ucb"]
}"#;

/// Criterion 7: byte-identical CSVs across reruns and worker counts {1, 8};
/// theta <= tau over 1e7 sampled clip events; counts sum to the horizon;
/// action sequences invariant under mean translation with shared variates.
#[test]
fn criterion_7_determinism_and_invariants() {
    // (a) Byte-identical artifacts across reruns and worker counts.
    let parsed = parse_config(DETERMINISM_CONFIG).unwrap();
    let mut artifact_bytes: Vec<(Vec<u8>, Vec<u8>, Vec<u8>)> = Vec::new();
    for workers in [1usize, 8, 1] {
        let dir = tempfile::tempdir().unwrap();
        let artifacts = execute(&parsed, dir.path(), workers, false).unwrap();
        artifact_bytes.push((
            std::fs::read(&artifacts.raw_csv).unwrap(),
            std::fs::read(&artifacts.aggregate_csv).unwrap(),
            std::fs::read(&artifacts.manifest).unwrap(),
        ));
    }
    assert_eq!(artifact_bytes[0], artifact_bytes[1], "workers=1 vs workers=8 bytes differ");
    assert_eq!(artifact_bytes[0], artifact_bytes[2], "rerun bytes differ");

    // Aggregate means must equal a direct recomputation from the raw rows.
    let raw = String::from_utf8(artifact_bytes[0].0.clone()).unwrap();
    let recomputed = mean_final_regret_from_raw(&raw).unwrap();
    let agg = String::from_utf8(artifact_bytes[0].1.clone()).unwrap();
    for (policy, mean) in &recomputed {
        let prefix = format!("{policy},");
        let last_row = agg.lines().rfind(|l| l.starts_with(&prefix)).unwrap();
        let agg_mean: f64 = last_row.split(',').nth(2).unwrap().parse().unwrap();
        assert!(
            (agg_mean - mean).abs() <= 1e-12 * mean.abs().max(1.0),
            "aggregate mean mismatch for {policy}: {agg_mean} vs {mean}"
        );
    }

    // (b) Clipping dominance over 1e7 sampled clip events.
    let mut events = 0usize;
    for (i, &(mu, var, tau)) in [
        (0.0, 1.0, 1.0),
        (0.0, 1.0, -2.0),
        (1.5, 0.25, 1.6),
        (-3.0, 4.0, 0.0),
        (0.7, 0.01, 0.7),
    ]
    .iter()
    .enumerate()
    {
        let spec = ClipSpec::new(mu, var, tau).unwrap();
        let mut rng = RngStream::new(0xC0FF_EE07, i as u64);
        for _ in 0..2_000_000 {
            assert!(spec.sample(&mut rng) <= tau);
            events += 1;
        }
    }
    assert_eq!(events, 10_000_000);

    // (c) Pull counts sum exactly to the horizon for every policy kind.
    let instance =
        BanditInstance::single_best(5, 1.0, 0.25, RewardModel::GaussianUnitVariance).unwrap();
    for kind in PolicyKind::ALL {
        let horizon = 5_000u64;
        let stream = episode_stream(0xC0FF_EE07, kind.name(), 1);
        let mut policy = PolicyState::new(
            PolicyConfig::for_kind(kind, 5, horizon),
            stream.substream("policy"),
        )
        .unwrap();
        let mut env = stream.substream("env");
        for _ in 0..horizon {
            let arm = policy.select_arm();
            let reward = instance.sample_reward(arm, &mut env);
            policy.observe(arm, reward);
        }
        assert_eq!(policy.stats().counts().iter().sum::<u64>(), horizon);
        assert_eq!(policy.stats().step(), horizon);
    }

    // (d) Shift invariance: adding a constant to every mean leaves the
    // action sequence unchanged when policy and reward variates are shared.
    let base_means = vec![1.0, 0.8, 0.8, 0.7, 0.75];
    let shift = 10.0;
    for kind in PolicyKind::ALL {
        let horizon = 5_000u64;
        let shifted_means: Vec<f64> = base_means.iter().map(|m| m + shift).collect();
        let base =
            BanditInstance::new(base_means.clone(), RewardModel::GaussianUnitVariance).unwrap();
        let shifted =
            BanditInstance::new(shifted_means, RewardModel::GaussianUnitVariance).unwrap();
        let stream = episode_stream(0xC0FF_EE17, kind.name(), 2);
        let cfg = PolicyConfig::for_kind(kind, 5, horizon);
        let mut pol_a = PolicyState::new(cfg, stream.substream("policy")).unwrap();
        let mut pol_b = PolicyState::new(cfg, stream.substream("policy")).unwrap();
        let mut env_a = stream.substream("env");
        let mut env_b = stream.substream("env");
        for t in 0..horizon {
            let a = pol_a.select_arm();
            let b = pol_b.select_arm();
            assert_eq!(a, b, "actions diverged at step {t} for {:?}", kind);
            pol_a.observe(a, base.sample_reward(a, &mut env_a));
            pol_b.observe(b, shifted.sample_reward(b, &mut env_b));
        }
    }

    println!(
        "criterion 7 PASS: byte-identical CSVs (reruns, workers 1 vs 8), 1e7 clip events \
         below tau, counts sum to the horizon, action sequences shift-invariant"
    );
}
