//! Library side of the `banditlab` command-line tool: config parsing, the
//! run/verify/plot commands, and their artifact formats. The binary in
//! `main.rs` is a thin argument-parsing wrapper over these.

pub mod config;
pub mod plot;
pub mod run;
pub mod verify;

/// Resolve the worker count: explicit flag, then the `BANDITLAB_WORKERS`
/// environment variable, then 0 (= all available cores).
pub fn resolve_workers(flag: Option<usize>) -> usize {
    if let Some(w) = flag {
        return w;
    }
    if let Ok(v) = std::env::var("BANDITLAB_WORKERS") {
        if let Ok(w) = v.parse::<usize>() {
            return w;
        }
        log::warn!("ignoring unparseable BANDITLAB_WORKERS={v:?}");
    }
    0
}
