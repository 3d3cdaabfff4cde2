use anyhow::{anyhow, Result};
use holderlab::geometry::{check_h2, h1_fraction, h3_fraction, h4_partial_sums, H2Outcome};
use holderlab::rng::derive_seed;

use super::{domain, tags, Rendered};
use crate::config::{require, Condition, ExperimentConfig};
use crate::output::{num, Stamp, Table};

/// Rows `condition,k,r_k,estimate,stderr,pass`. For `h2` the estimate is the
/// covered fraction of the best cap, for `h3` row `k` is the annulus between
/// `r_k` and `r_{k+1}`, and for `h4` it is the running sum.
pub fn check_geometry(cfg: &ExperimentConfig, stamp: &Stamp) -> Result<Rendered> {
    let domain = domain(cfg)?;
    let seq = cfg.sequence()?;
    let g = require(&cfg.geometry, "geometry")?;
    let radii = seq.radii();
    let mut table = Table::new(&["condition", "k", "r_k", "estimate", "stderr", "pass"]);
    let mut row = |name: &str, k: usize, r: f64, estimate: f64, stderr: f64, pass: bool| {
        table.push(vec![name.into(), k.to_string(), num(r), num(estimate), num(stderr), pass.to_string()]);
    };
    for condition in &g.conditions {
        match condition {
            Condition::H1 => {
                for (k, &r) in radii.iter().enumerate() {
                    let m = h1_fraction(&domain, r, g.samples, derive_seed(cfg.seed, &[tags::H1, k as u64]))?;
                    row("h1", k, r, m.measure, m.measure_stderr, m.measure > 0.0);
                }
            }
            Condition::H2 => {
                let nu = g.nu.ok_or_else(|| anyhow!("[geometry] needs `nu` for the h2 check"))?;
                let outcomes = check_h2(&domain, &seq, nu, g.angular_grid, derive_seed(cfg.seed, &[tags::H2]))?;
                for outcome in outcomes {
                    match outcome {
                        H2Outcome::Witness(w) => row("h2", w.scale_index, w.radius, 1.0, 0.0, true),
                        H2Outcome::Failure { scale_index, radius, best_coverage } => {
                            row("h2", scale_index, radius, best_coverage, 0.0, false)
                        }
                    }
                }
            }
            Condition::H3 => {
                for (k, w) in radii.windows(2).enumerate() {
                    let seed = derive_seed(cfg.seed, &[tags::H3, k as u64]);
                    let m = h3_fraction(&domain, w[0], w[1], g.samples, seed)?;
                    row("h3", k, w[0], m.measure, m.stderr, m.measure > 0.0);
                }
            }
            Condition::H4 => {
                let terms = h4_partial_sums(&domain, &seq, g.samples, derive_seed(cfg.seed, &[tags::H4]))?;
                for t in terms {
                    row("h4", t.scale_index, t.radius, t.partial_sum, t.partial_sum_stderr, t.term.measure > 0.0);
                }
            }
        }
    }
    Ok(Rendered::ok(table.render(stamp)?))
}
