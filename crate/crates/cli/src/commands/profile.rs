use std::path::Path;

use anyhow::{anyhow, Context, Result};
use holderlab::kernels::ExponentBudget;
use holderlab::regularity::{
    certify_decay, oscillation_profile, OscillationProfile, ProfileConfig, ProfileEntry, Verdict,
};
use holderlab::solvers::BoundaryData;
use serde::Deserialize;

use super::{boundary, domain, source, Rendered};
use crate::config::{require, ExperimentConfig};
use crate::output::{json, num, Stamp, Table};

fn measure(cfg: &ExperimentConfig) -> Result<OscillationProfile> {
    let section = require(&cfg.profile, "profile")?;
    let config = ProfileConfig {
        solver: *require(&cfg.solver, "solver")?,
        points_per_scale: section.points_per_scale,
        paths_per_point: section.paths_per_point,
        sampling_attempts: section.sampling_attempts,
        seed: cfg.seed,
    };
    Ok(oscillation_profile(&domain(cfg)?, &boundary(cfg)?, &source(cfg), &cfg.sequence()?, &config)?)
}

/// Rows `k,r_k,osc,stderr,points_used`; skipped scales are listed in the
/// comment line.
pub fn profile(cfg: &ExperimentConfig, stamp: &Stamp) -> Result<Rendered> {
    let profile = measure(cfg)?;
    let mut table = Table::new(&["k", "r_k", "osc", "stderr", "points_used"]);
    if !profile.skipped.is_empty() {
        let list: Vec<String> = profile.skipped.iter().map(|k| k.to_string()).collect();
        table.note("skipped", list.join(";"));
    }
    for e in &profile.entries {
        table.push(vec![e.k.to_string(), num(e.radius), num(e.osc), num(e.stderr), e.points_used.to_string()]);
    }
    Ok(Rendered::ok(table.render(stamp)?))
}

#[derive(Deserialize)]
struct ProfileRow {
    k: usize,
    r_k: f64,
    osc: f64,
    stderr: f64,
    points_used: usize,
}

/// Reads a profile written by the `profile` command.
fn read_profile(path: &Path, data_value_at_x0: f64) -> Result<OscillationProfile> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut entries = Vec::new();
    for (i, row) in reader.deserialize::<ProfileRow>().enumerate() {
        let row = row.with_context(|| format!("{} record {}", path.display(), i + 1))?;
        entries.push(ProfileEntry {
            k: row.k,
            radius: row.r_k,
            osc: row.osc,
            stderr: row.stderr,
            points_used: row.points_used,
            argmax: Vec::new(),
            mean_steps: 0.0,
            discarded: 0,
        });
    }
    if entries.is_empty() {
        return Err(anyhow!("{} holds no profile rows", path.display()));
    }
    Ok(OscillationProfile { entries, skipped: Vec::new(), data_value_at_x0 })
}

/// Certificate JSON. The run fails iff the verdict does.
pub fn certify(cfg: &ExperimentConfig, stamp: &Stamp, from_profile: Option<&Path>) -> Result<Rendered> {
    let budget = ExponentBudget::derive(&cfg.budget_inputs()?)?;
    let slack = cfg.certify.as_ref().map_or(3.0, |c| c.slack_sigmas);
    let profile = match from_profile {
        Some(path) => {
            let g0 = boundary(cfg)?.evaluate(&vec![0.0; cfg.dimension()?]);
            read_profile(path, g0)?
        }
        None => measure(cfg)?,
    };
    let certificate = certify_decay(&profile, &budget, slack);
    Ok(Rendered {
        text: json(stamp, &certificate)?,
        success: certificate.verdict == Verdict::Pass,
    })
}
