use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use holderlab::geometry::h4_partial_sums;
use holderlab::perron::{a_from_h4, modulus_recursion, sum_product_check, ModulusInput};
use holderlab::rng::derive_seed;
use serde::Deserialize;

use super::{domain, tags, Rendered};
use crate::config::{require, ExperimentConfig, PerronSection};
use crate::output::{num, Stamp, Table};

#[derive(Deserialize)]
struct InputRow {
    k: usize,
    a_k: f64,
    omega_k: f64,
}

fn read_input(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let (mut a, mut omega) = (Vec::new(), Vec::new());
    for (i, row) in reader.deserialize::<InputRow>().enumerate() {
        let row = row.with_context(|| format!("{} record {}", path.display(), i + 1))?;
        if row.k != i {
            bail!("{} record {}: expected k = {i}, found {}", path.display(), i + 1, row.k);
        }
        a.push(row.a_k);
        omega.push(row.omega_k);
    }
    Ok((a, omega))
}

fn inputs(cfg: &ExperimentConfig, p: &PerronSection) -> Result<(Vec<f64>, Vec<f64>)> {
    let count = p.k_max + 1;
    let omega = || {
        p.omega
            .map(|w| w.terms(count))
            .ok_or_else(|| anyhow!("[perron] needs `omega` unless `input` is given"))
    };
    match (&p.a, &p.input, p.a_from_geometry) {
        (Some(family), None, false) => Ok((family.terms(count), omega()?)),
        (None, Some(path), false) => {
            if p.omega.is_some() {
                bail!("[perron] `omega` and `input` are exclusive");
            }
            read_input(path)
        }
        (None, None, true) => {
            let samples = require(&cfg.geometry, "geometry")?.samples;
            let terms = h4_partial_sums(&domain(cfg)?, &cfg.sequence()?, samples, derive_seed(cfg.seed, &[tags::H4]))?;
            Ok((a_from_h4(&terms), omega()?))
        }
        _ => bail!("[perron] needs exactly one of `a`, `input` and `a_from_geometry = true`"),
    }
}

/// Rows `k,A_k,partial_sum,partial_product` for `k = 0..=k_max`; clamped
/// steps are listed in the comment line.
pub fn perron(cfg: &ExperimentConfig, stamp: &Stamp) -> Result<Rendered> {
    let p = require(&cfg.perron, "perron")?;
    let (a, omega_vals) = inputs(cfg, p)?;
    let input = ModulusInput { a, omega_vals, c0: p.c0, a0: p.a0 };
    let modulus = modulus_recursion(&input, p.k_max)?;
    let sums = sum_product_check(&input.a, p.c0, p.k_max)?;
    let mut table = Table::new(&["k", "A_k", "partial_sum", "partial_product"]);
    if !modulus.clamped.is_empty() {
        let list: Vec<String> = modulus.clamped.iter().map(|k| k.to_string()).collect();
        table.note("clamped", list.join(";"));
    }
    for k in 0..=p.k_max {
        table.push(vec![
            k.to_string(),
            num(modulus.values[k]),
            num(sums.partial_sums[k]),
            num(sums.partial_products[k]),
        ]);
    }
    Ok(Rendered::ok(table.render(stamp)?))
}
