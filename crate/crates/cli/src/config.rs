//! JSON experiment configs: parsing, defaulting, validation.
//!
//! The accepted document shape is printed by `banditlab schema`. Unknown keys
//! are rejected, defaults follow the benchmark protocol (`rho = 0.9999`,
//! `alpha = 2`, Gaussian unit-variance rewards), and every validation error
//! names the offending field.

use banditlab_core::{
    checkpoint_schedule, checkpoint_schedule_linear, BanditInstance, ExperimentConfig, NamedPolicy,
    PolicyConfig, PolicyKind, RewardModel,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid config field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl ConfigError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Field { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "K")]
    k: usize,
    eps: f64,
    #[serde(rename = "T")]
    horizon: u64,
    reps: usize,
    policies: Vec<RawPolicy>,
    best_mean: Option<f64>,
    reward_model: Option<RawRewardModel>,
    seed: Option<u64>,
    checkpoints: Option<usize>,
    checkpoint_scale: Option<String>,
    record_realized: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawPolicy {
    Name(String),
    Full(RawPolicyFull),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolicyFull {
    kind: String,
    name: Option<String>,
    alpha: Option<f64>,
    rho: Option<f64>,
    m: Option<u32>,
    rho_floor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawRewardModel {
    Name(String),
    BoundedUniform { bounded_uniform: BoundedUniformSpec },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundedUniformSpec {
    halfwidth: f64,
}

/// The config after defaulting and validation, in canonical serializable
/// form. Its JSON serialization is what the manifest records and hashes, so
/// the hash changes exactly when a semantically meaningful field changes.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ResolvedConfig {
    pub k: usize,
    pub best_mean: f64,
    pub eps: f64,
    pub reward_model: ResolvedRewardModel,
    pub horizon: u64,
    pub reps: usize,
    pub seed: u64,
    pub checkpoint_count: usize,
    pub checkpoint_scale: String,
    pub checkpoints: Vec<u64>,
    pub record_realized: bool,
    pub policies: Vec<ResolvedPolicy>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ResolvedRewardModel {
    Gaussian,
    BoundedUniform { halfwidth: f64 },
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ResolvedPolicy {
    pub name: String,
    pub kind: String,
    pub alpha: f64,
    pub rho: f64,
    pub m: u32,
    pub rho_floor: f64,
}

/// A parsed experiment: the runnable config plus its canonical echo.
#[derive(Debug, Clone)]
pub struct ParsedExperiment {
    pub experiment: ExperimentConfig,
    pub resolved: ResolvedConfig,
}

/// Parse and fully validate a JSON config document.
pub fn parse_config(text: &str) -> Result<ParsedExperiment, ConfigError> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    if raw.k < 2 {
        return Err(ConfigError::field("K", "need at least 2 arms"));
    }
    if !(raw.eps >= 0.0 && raw.eps.is_finite()) {
        return Err(ConfigError::field("eps", format!("must be a finite value >= 0, got {}", raw.eps)));
    }
    let best_mean = raw.best_mean.unwrap_or(1.0);
    if !best_mean.is_finite() {
        return Err(ConfigError::field("best_mean", "must be finite"));
    }
    if raw.horizon < raw.k as u64 {
        return Err(ConfigError::field(
            "T",
            format!("horizon {} is shorter than the warm start over K={} arms", raw.horizon, raw.k),
        ));
    }
    if raw.reps < 1 {
        return Err(ConfigError::field("reps", "need at least 1 repetition"));
    }
    let checkpoint_count = raw.checkpoints.unwrap_or(24);
    if checkpoint_count < 2 {
        return Err(ConfigError::field("checkpoints", "need at least 2 checkpoints"));
    }
    let scale = raw.checkpoint_scale.unwrap_or_else(|| "geometric".to_string());
    let checkpoints = match scale.as_str() {
        "geometric" => checkpoint_schedule(raw.horizon, checkpoint_count, raw.k),
        "linear" => checkpoint_schedule_linear(raw.horizon, checkpoint_count, raw.k),
        other => {
            return Err(ConfigError::field(
                "checkpoint_scale",
                format!("expected \"geometric\" or \"linear\", got \"{other}\""),
            ))
        }
    };

    let (reward_model, resolved_model) = match raw.reward_model {
        None => (RewardModel::GaussianUnitVariance, ResolvedRewardModel::Gaussian),
        Some(RawRewardModel::Name(name)) if name == "gaussian" => {
            (RewardModel::GaussianUnitVariance, ResolvedRewardModel::Gaussian)
        }
        Some(RawRewardModel::Name(other)) => {
            return Err(ConfigError::field(
                "reward_model",
                format!("unknown model \"{other}\" (expected \"gaussian\" or a bounded_uniform object)"),
            ))
        }
        Some(RawRewardModel::BoundedUniform { bounded_uniform }) => (
            RewardModel::BoundedUniform { halfwidth: bounded_uniform.halfwidth },
            ResolvedRewardModel::BoundedUniform { halfwidth: bounded_uniform.halfwidth },
        ),
    };

    if raw.policies.is_empty() {
        return Err(ConfigError::field("policies", "need at least one policy"));
    }
    let mut policies = Vec::with_capacity(raw.policies.len());
    let mut resolved_policies = Vec::with_capacity(raw.policies.len());
    for (i, p) in raw.policies.into_iter().enumerate() {
        let (kind_name, name, alpha, rho, m, rho_floor) = match p {
            RawPolicy::Name(kind) => (kind, None, None, None, None, None),
            RawPolicy::Full(f) => (f.kind, f.name, f.alpha, f.rho, f.m, f.rho_floor),
        };
        let kind = PolicyKind::from_name(&kind_name).ok_or_else(|| {
            ConfigError::field(
                format!("policies[{i}].kind"),
                format!("unknown policy \"{kind_name}\""),
            )
        })?;
        let mut config = PolicyConfig::for_kind(kind, raw.k, raw.horizon);
        if let Some(a) = alpha {
            config.alpha = a;
        }
        if let Some(r) = rho {
            config.rho = r;
        }
        if let Some(m) = m {
            config.var_rho_order = m;
        }
        if let Some(f) = rho_floor {
            config.rho_floor = f;
        }
        config.validate().map_err(|e| ConfigError::field(
            format!("policies[{i}].{}", core_field_key(e.field())),
            e.to_string(),
        ))?;
        let name = name.unwrap_or_else(|| kind.name().to_string());
        resolved_policies.push(ResolvedPolicy {
            name: name.clone(),
            kind: kind.name().to_string(),
            alpha: config.alpha,
            rho: config.rho,
            m: config.var_rho_order,
            rho_floor: config.rho_floor,
        });
        policies.push(NamedPolicy { name, config });
    }

    let instance = BanditInstance::single_best(raw.k, best_mean, raw.eps, reward_model)
        .map_err(|e| ConfigError::field(core_field_key(e.field()), e.to_string()))?;

    let seed = raw.seed.unwrap_or(0);
    let experiment = ExperimentConfig {
        instance,
        policies,
        horizon: raw.horizon,
        repetitions: raw.reps,
        master_seed: seed,
        checkpoints: checkpoints.clone(),
        record_realized: raw.record_realized.unwrap_or(false),
    };
    experiment
        .validate()
        .map_err(|e| ConfigError::field(core_field_key(e.field()), e.to_string()))?;

    let resolved = ResolvedConfig {
        k: raw.k,
        best_mean,
        eps: raw.eps,
        reward_model: resolved_model,
        horizon: raw.horizon,
        reps: raw.reps,
        seed,
        checkpoint_count,
        checkpoint_scale: scale,
        checkpoints,
        record_realized: experiment.record_realized,
        policies: resolved_policies,
    };

    Ok(ParsedExperiment { experiment, resolved })
}

/// Map core validation field names onto config document keys.
fn core_field_key(field: &str) -> &str {
    match field {
        "arms" | "means" => "K",
        "horizon" => "T",
        "gap" => "eps",
        "halfwidth" => "reward_model.bounded_uniform.halfwidth",
        other => other,
    }
}

/// Override the master seed after parsing (the `--seed` flag).
pub fn override_seed(parsed: &mut ParsedExperiment, seed: u64) {
    parsed.experiment.master_seed = seed;
    parsed.resolved.seed = seed;
}

/// Hex SHA-256 of the canonical serialized config.
pub fn config_hash(resolved: &ResolvedConfig) -> String {
    use sha2::{Digest, Sha256};
    let canonical = serde_json::to_string(resolved).expect("resolved config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// The authoritative schema document printed by `banditlab schema`.
pub fn schema_json() -> serde_json::Value {
    serde_json::json!({
        "$schema": "http://json-schema.org/draft-07/schema#",
        "title": "banditlab experiment config",
        "type": "object",
        "required": ["K", "eps", "T", "reps", "policies"],
        "additionalProperties": false,
        "properties": {
            "K": { "type": "integer", "minimum": 2, "description": "number of arms" },
            "eps": { "type": "number", "minimum": 0.0, "description": "gap between the best arm and the rest" },
            "T": { "type": "integer", "minimum": 2, "description": "horizon in steps, warm start included" },
            "reps": { "type": "integer", "minimum": 1, "description": "Monte Carlo repetitions" },
            "best_mean": { "type": "number", "default": 1.0 },
            "reward_model": {
                "default": "gaussian",
                "oneOf": [
                    { "const": "gaussian", "description": "unit-variance Gaussian noise" },
                    {
                        "type": "object",
                        "additionalProperties": false,
                        "required": ["bounded_uniform"],
                        "properties": {
                            "bounded_uniform": {
                                "type": "object",
                                "additionalProperties": false,
                                "required": ["halfwidth"],
                                "properties": { "halfwidth": { "type": "number", "exclusiveMinimum": 0.0 } }
                            }
                        }
                    }
                ]
            },
            "seed": { "type": "integer", "minimum": 0, "default": 0, "description": "master seed (u64)" },
            "checkpoints": { "type": "integer", "minimum": 2, "default": 24 },
            "checkpoint_scale": { "enum": ["geometric", "linear"], "default": "geometric" },
            "record_realized": { "type": "boolean", "default": false,
                "description": "also record realized (reward-difference) regret to realized.csv" },
            "policies": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "oneOf": [
                        { "enum": ["mots", "mots-varrho", "mots-j", "ts", "moss", "ucb"] },
                        {
                            "type": "object",
                            "additionalProperties": false,
                            "required": ["kind"],
                            "properties": {
                                "kind": { "enum": ["mots", "mots-varrho", "mots-j", "ts", "moss", "ucb"] },
                                "name": { "type": "string", "description": "unique label; defaults to the kind" },
                                "alpha": { "type": "number", "exclusiveMinimum": 0.0,
                                    "description": "exploration constant; default 2 (4 for moss)" },
                                "rho": { "type": "number", "exclusiveMinimum": 0.0, "exclusiveMaximum": 1.0,
                                    "default": 0.9999, "description": "variance scale for mots" },
                                "m": { "type": "integer", "minimum": 2, "default": 2,
                                    "description": "iterated-log order for mots-varrho" },
                                "rho_floor": { "type": "number", "exclusiveMinimum": 0.0, "exclusiveMaximum": 1.0,
                                    "default": 0.51, "description": "clamp for the mots-varrho schedule" }
                            }
                        }
                    ]
                }
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"K": 50, "eps": 0.2, "T": 1000000, "reps": 100,
                              "policies": ["mots", "ts"]}"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let parsed = parse_config(MINIMAL).unwrap();
        assert_eq!(parsed.resolved.best_mean, 1.0);
        assert_eq!(parsed.resolved.seed, 0);
        assert_eq!(parsed.resolved.reward_model, ResolvedRewardModel::Gaussian);
        assert_eq!(parsed.experiment.policies.len(), 2);
        let mots = &parsed.experiment.policies[0];
        assert_eq!(mots.name, "mots");
        assert_eq!(mots.config.rho, 0.9999);
        assert_eq!(mots.config.alpha, 2.0);
        assert_eq!(*parsed.experiment.checkpoints.last().unwrap(), 1_000_000);
        assert_eq!(parsed.experiment.instance.arms(), 50);
        assert_eq!(parsed.experiment.instance.best_mean(), 1.0);
    }

    #[test]
    fn moss_defaults_to_alpha_four() {
        let parsed =
            parse_config(r#"{"K": 2, "eps": 0.1, "T": 100, "reps": 1, "policies": ["moss"]}"#)
                .unwrap();
        assert_eq!(parsed.experiment.policies[0].config.alpha, 4.0);
    }

    #[test]
    fn out_of_range_rho_is_named() {
        let err = parse_config(
            r#"{"K": 2, "eps": 0.1, "T": 100, "reps": 1,
                "policies": [{"kind": "mots", "rho": 1.5}]}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("rho"), "message does not name rho: {msg}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config(
            r#"{"K": 2, "eps": 0.1, "T": 100, "reps": 1, "policies": ["ts"], "bogus": 1}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::Parse { .. }), "{err}");
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_config("{\n  \"K\": 2,,\n}").unwrap_err();
        match err {
            ConfigError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn full_benchmark_protocol_is_accepted() {
        // Execution feasibility is the caller's concern; the document with
        // the full-scale parameters must validate.
        let parsed = parse_config(
            r#"{"K": 50, "eps": 0.05, "T": 10000000, "reps": 6000,
                "policies": ["mots", "mots-j", "ts", "moss", "ucb"]}"#,
        )
        .unwrap();
        assert_eq!(parsed.resolved.reps, 6000);
        assert_eq!(parsed.resolved.horizon, 10_000_000);
    }

    #[test]
    fn duplicate_policy_names_are_rejected() {
        let err = parse_config(
            r#"{"K": 2, "eps": 0.1, "T": 100, "reps": 1, "policies": ["ts", "ts"]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("policies"));
    }

    #[test]
    fn named_duplicates_of_one_kind_are_allowed() {
        let parsed = parse_config(
            r#"{"K": 2, "eps": 0.1, "T": 100, "reps": 1,
                "policies": [{"kind": "mots", "name": "mots-a", "rho": 0.9},
                             {"kind": "mots", "name": "mots-b", "rho": 0.99}]}"#,
        )
        .unwrap();
        assert_eq!(parsed.experiment.policies[0].name, "mots-a");
        assert_eq!(parsed.experiment.policies[1].config.rho, 0.99);
    }

    #[test]
    fn varrho_schedule_parameters_parse() {
        let parsed = parse_config(
            r#"{"K": 2, "eps": 0.1, "T": 100, "reps": 1,
                "policies": [{"kind": "mots-varrho", "m": 3, "rho_floor": 0.6}]}"#,
        )
        .unwrap();
        let cfg = parsed.experiment.policies[0].config;
        assert_eq!(cfg.var_rho_order, 3);
        assert_eq!(cfg.rho_floor, 0.6);
    }

    #[test]
    fn bounded_uniform_model_parses() {
        let parsed = parse_config(
            r#"{"K": 3, "eps": 0.1, "T": 100, "reps": 1, "policies": ["ucb"],
                "reward_model": {"bounded_uniform": {"halfwidth": 0.5}}}"#,
        )
        .unwrap();
        assert_eq!(
            parsed.resolved.reward_model,
            ResolvedRewardModel::BoundedUniform { halfwidth: 0.5 }
        );
    }

    #[test]
    fn hash_tracks_semantic_changes_only() {
        let a = parse_config(MINIMAL).unwrap();
        // Same semantics, different formatting.
        let b = parse_config(
            r#"{
                "policies": ["mots", "ts"],
                "reps": 100, "T": 1000000, "eps": 0.2, "K": 50
            }"#,
        )
        .unwrap();
        assert_eq!(config_hash(&a.resolved), config_hash(&b.resolved));

        let mut c = parse_config(MINIMAL).unwrap();
        override_seed(&mut c, 9);
        assert_ne!(config_hash(&a.resolved), config_hash(&c.resolved));

        let d = parse_config(&MINIMAL.replace("0.2", "0.1")).unwrap();
        assert_ne!(config_hash(&a.resolved), config_hash(&d.resolved));
    }

    #[test]
    fn schema_is_valid_json_with_all_top_level_keys() {
        let schema = schema_json();
        let props = schema["properties"].as_object().unwrap();
        for key in [
            "K", "eps", "T", "reps", "policies", "best_mean", "reward_model", "seed",
            "checkpoints", "checkpoint_scale", "record_realized",
        ] {
            assert!(props.contains_key(key), "schema missing {key}");
        }
    }
}
