//! banditlab: a simulation laboratory for stochastic multi-armed bandits.
//!
//! The crate provides:
//!
//! * [`bandit`] — environments ([`BanditInstance`]), per-arm statistics
//!   ([`PullStats`]) and regret accounting;
//! * [`distributions`] — seedable splittable random streams, the clipped
//!   Gaussian sampler, the two-sided Rayleigh-type law [`JParams`], `log+`
//!   and the iterated logarithm;
//! * [`policies`] — clipped Thompson sampling (Gaussian and `J` variants,
//!   fixed or scheduled variance scale) plus TS / MOSS / UCB baselines;
//! * [`simulator`] — deterministic episode and parallel experiment runners;
//! * [`analysis`] — aggregation and the statistical verification battery.
//!
//! Everything is driven by explicit `(master_seed, stream)` addressing, so
//! experiments reproduce bit for bit regardless of worker count or execution
//! order.

pub mod analysis;
pub mod bandit;
pub mod distributions;
pub mod error;
pub mod policies;
pub mod simulator;

pub use analysis::{
    aggregate, asymptotic_slope, estimate_inverse_g, ks_statistic, tail_check, verification_battery,
    AggregateCurve, InverseGEstimate, CheckReport, SlopeCheck, Tail, TailCheck,
};
pub use bandit::{pseudo_regret, realized_regret, BanditInstance, PullStats, RegretTrace, RewardModel};
pub use distributions::{clip_threshold, ilog, log_plus, ClipSpec, JParams, RngStream};
pub use error::CoreError;
pub use policies::{rho_schedule, Policy, PolicyConfig, PolicyKind, PolicyState};
pub use simulator::{
    checkpoint_schedule, checkpoint_schedule_linear, episode_stream, run_episode, run_experiment,
    ExperimentConfig, NamedPolicy, ResultSet,
};
