//! The `verify` command: run the statistical battery and print a table.

use std::io::Write;

use anyhow::Result;
use banditlab_core::verification_battery;

/// Default master seed of the battery; override with `--seed`.
pub const DEFAULT_VERIFY_SEED: u64 = 0x1afe77e5;

/// Run the battery, print one row per check, return whether all passed.
pub fn verify(seed: u64, out: &mut impl Write) -> Result<bool> {
    let reports = verification_battery(seed);
    writeln!(out, "{:<28} {:>14} {:<12} {:>14}  result", "check", "estimate", "vs", "reference")?;
    let mut all = true;
    for r in &reports {
        writeln!(
            out,
            "{:<28} {:>14.6e} {:<12} {:>14.6e}  {}",
            r.name,
            r.estimate,
            r.comparison,
            r.reference,
            if r.pass { "pass" } else { "FAIL" },
        )?;
        if !r.pass {
            log::error!("check failed: {} ({})", r.name, r.params);
            all = false;
        }
    }
    writeln!(out, "{} checks, seed {seed:#x}", reports.len())?;
    Ok(all)
}
