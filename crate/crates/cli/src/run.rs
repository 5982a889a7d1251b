//! The `run` command: execute an experiment and write its artifacts.
//!
//! Artifacts in the output directory:
//!
//! * `raw.csv` — header `policy,repetition,checkpoint,t,pseudo_regret`, one
//!   row per checkpoint per repetition per policy;
//! * `aggregate.csv` — header `policy,t,mean_regret,stderr,reps`;
//! * `realized.csv` — only with `record_realized`; same layout as `raw.csv`
//!   with a `realized_regret` value column;
//! * `manifest.json` — config hash, seed, code version and the canonical
//!   config echo.
//!
//! All floats are printed with 17 significant digits (`{:.16e}`), `.` decimal
//! separator and `\n` line endings, so identical inputs reproduce identical
//! bytes on any platform and worker count.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use banditlab_core::{aggregate, run_experiment, ResultSet};
use serde::Serialize;

use crate::config::{config_hash, ParsedExperiment, ResolvedConfig};

/// Paths written by a successful run.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub raw_csv: PathBuf,
    pub aggregate_csv: PathBuf,
    pub manifest: PathBuf,
    pub realized_csv: Option<PathBuf>,
}

/// 17-significant-digit, locale-independent float formatting.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Execute a parsed experiment and write the artifact set.
///
/// Output files are created before any simulation starts, so an unwritable
/// path fails fast.
pub fn execute(
    parsed: &ParsedExperiment,
    out_dir: &Path,
    workers: usize,
    progress: bool,
) -> Result<RunArtifacts> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let raw_path = out_dir.join("raw.csv");
    let agg_path = out_dir.join("aggregate.csv");
    let manifest_path = out_dir.join("manifest.json");
    let realized_path = parsed.experiment.record_realized.then(|| out_dir.join("realized.csv"));

    let raw_file = File::create(&raw_path)
        .with_context(|| format!("creating {}", raw_path.display()))?;
    let agg_file = File::create(&agg_path)
        .with_context(|| format!("creating {}", agg_path.display()))?;
    let manifest_file = File::create(&manifest_path)
        .with_context(|| format!("creating {}", manifest_path.display()))?;
    let realized_file = match &realized_path {
        Some(p) => Some(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => None,
    };

    let progress_cb = |done: usize, total: usize| {
        let stride = (total / 200).max(1);
        if done.is_multiple_of(stride) || done == total {
            eprint!("\r{done}/{total} episodes");
            if done == total {
                eprintln!();
            }
        }
    };
    let results = run_experiment(
        &parsed.experiment,
        workers,
        if progress { Some(&progress_cb) } else { None },
    )?;

    write_raw_csv(BufWriter::new(raw_file), &results, "pseudo_regret", |t, i| {
        t.cumulative_pseudo_regret[i]
    })?;
    if let Some(f) = realized_file {
        write_raw_csv(BufWriter::new(f), &results, "realized_regret", |t, i| {
            t.realized.as_ref().expect("realized recorded")[i]
        })?;
    }
    write_aggregate_csv(BufWriter::new(agg_file), &results)?;
    write_manifest(manifest_file, &parsed.resolved)?;

    log::info!(
        "run complete: {} policies x {} reps in {:.1?}",
        results.config.policies.len(),
        results.config.repetitions,
        results.elapsed
    );
    Ok(RunArtifacts {
        raw_csv: raw_path,
        aggregate_csv: agg_path,
        manifest: manifest_path,
        realized_csv: realized_path,
    })
}

fn write_raw_csv<W: Write>(
    mut w: W,
    results: &ResultSet,
    value_column: &str,
    value: impl Fn(&banditlab_core::RegretTrace, usize) -> f64,
) -> Result<()> {
    writeln!(w, "policy,repetition,checkpoint,t,{value_column}")?;
    for (policy, traces) in results.config.policies.iter().zip(&results.traces) {
        for (rep, trace) in traces.iter().enumerate() {
            for (i, &t) in trace.checkpoints.iter().enumerate() {
                writeln!(w, "{},{},{},{},{}", policy.name, rep, i, t, fmt_f64(value(trace, i)))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn write_aggregate_csv<W: Write>(mut w: W, results: &ResultSet) -> Result<()> {
    writeln!(w, "policy,t,mean_regret,stderr,reps")?;
    for (policy, traces) in results.config.policies.iter().zip(&results.traces) {
        let curve = aggregate(traces);
        for (i, &t) in curve.checkpoints.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{}",
                policy.name,
                t,
                fmt_f64(curve.mean[i]),
                fmt_f64(curve.std_error[i]),
                curve.repetitions
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    config_hash: String,
    seed: u64,
    version: &'static str,
    config: &'a ResolvedConfig,
}

fn write_manifest(file: File, resolved: &ResolvedConfig) -> Result<()> {
    let manifest = Manifest {
        config_hash: config_hash(resolved),
        seed: resolved.seed,
        version: env!("CARGO_PKG_VERSION"),
        config: resolved,
    };
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &manifest)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Cross-check helper: recompute per-policy final means directly from the
/// raw CSV text (used by tests to confirm the aggregate file).
pub fn mean_final_regret_from_raw(raw_csv: &str) -> Result<Vec<(String, f64)>> {
    let mut lines = raw_csv.lines();
    let header = lines.next().unwrap_or("");
    if !header.starts_with("policy,repetition,checkpoint,t,") {
        bail!("unexpected raw CSV header: {header}");
    }
    // policy -> (final t seen, sum, count)
    let mut acc: Vec<(String, u64, f64, u64)> = Vec::new();
    for line in lines {
        let mut parts = line.split(',');
        let policy = parts.next().context("policy column")?;
        let _rep = parts.next().context("repetition column")?;
        let _cp = parts.next().context("checkpoint column")?;
        let t: u64 = parts.next().context("t column")?.parse()?;
        let v: f64 = parts.next().context("value column")?.parse()?;
        match acc.iter_mut().find(|(p, ..)| p == policy) {
            Some(entry) => {
                if t > entry.1 {
                    entry.1 = t;
                    entry.2 = 0.0;
                    entry.3 = 0;
                }
                if t == entry.1 {
                    entry.2 += v;
                    entry.3 += 1;
                }
            }
            None => acc.push((policy.to_string(), t, v, 1)),
        }
    }
    Ok(acc.into_iter().map(|(p, _, s, n)| (p, s / n as f64)).collect())
}
