use anyhow::{bail, Result};
use holderlab::regularity::SolverSpec;
use holderlab::rng::derive_seed;
use holderlab::solvers::{wob_fractional_estimate, wos_estimate, EstimatorResult, SourceTerm, WobConfig, WosConfig};
use serde::Serialize;

use super::{boundary, check_point, domain, source, tags, Rendered};
use crate::config::{require, ExperimentConfig};
use crate::output::Stamp;

#[derive(Serialize)]
struct Evaluation<'a> {
    seed: u64,
    config_hash: &'a str,
    index: usize,
    point: &'a [f64],
    estimator: &'static str,
    /// Seed of this evaluation's paths, derived from the config seed.
    path_seed: u64,
    mean: f64,
    stderr: f64,
    paths: u64,
    discarded: u64,
    discarded_fraction: f64,
    shell_epsilon: Option<f64>,
    mean_steps: f64,
}

/// One compact JSON object per line, one line per configured point.
pub fn solve(cfg: &ExperimentConfig, stamp: &Stamp) -> Result<Rendered> {
    let n = cfg.dimension()?;
    let domain = domain(cfg)?;
    let g = boundary(cfg)?;
    let f = source(cfg);
    let solver = require(&cfg.solver, "solver")?;
    let section = require(&cfg.solve, "solve")?;
    let mut text = String::new();
    for (i, point) in section.points.iter().enumerate() {
        check_point(point, n)?;
        let path_seed = derive_seed(cfg.seed, &[tags::SOLVE, i as u64]);
        let (estimator, r): (&str, EstimatorResult) = match *solver {
            SolverSpec::Classical { shell_epsilon, relative_epsilon, max_steps } => {
                if relative_epsilon {
                    bail!("relative_epsilon only applies to profiles");
                }
                let wos = WosConfig { shell_epsilon, paths: section.paths, seed: path_seed, max_steps };
                ("walk_on_spheres", wos_estimate(&domain, &g, &f, point, &wos)?)
            }
            SolverSpec::Fractional { s, max_steps } => {
                if f.sup_bound() > 0.0 {
                    bail!("the fractional solver supports only a zero source");
                }
                let wob = WobConfig { paths: section.paths, seed: path_seed, max_steps };
                ("walk_on_balls", wob_fractional_estimate(&domain, &g, point, s, &wob)?)
            }
        };
        let record = Evaluation {
            seed: stamp.seed,
            config_hash: &stamp.config_hash,
            index: i,
            point,
            estimator,
            path_seed,
            mean: r.mean,
            stderr: r.stderr,
            paths: r.paths,
            discarded: r.discarded,
            discarded_fraction: r.discarded_fraction(),
            shell_epsilon: r.shell_epsilon,
            mean_steps: r.mean_steps,
        };
        text.push_str(&serde_json::to_string(&record)?);
        text.push('\n');
    }
    Ok(Rendered::ok(text))
}
