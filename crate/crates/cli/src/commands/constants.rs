use anyhow::Result;
use holderlab::kernels::ExponentBudget;

use super::Rendered;
use crate::config::ExperimentConfig;
use crate::output::{json, Stamp};

pub fn constants(cfg: &ExperimentConfig, stamp: &Stamp) -> Result<Rendered> {
    let budget = ExponentBudget::derive(&cfg.budget_inputs()?)?;
    Ok(Rendered::ok(json(stamp, &budget)?))
}
