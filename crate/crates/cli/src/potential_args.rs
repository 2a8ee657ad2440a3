//! Selecting a potential from a JSON file or a family shorthand flag.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use cpa_scatter::config::{inline_params, FamilyRegistry};
use cpa_scatter::PotentialSpec;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct PotentialArgs {
    /// JSON config `{"family": .., "params": {..}}`
    #[arg(long, value_name = "FILE")]
    pub potential: Option<PathBuf>,

    /// Scarf II, absorptive domain: `d=<real>`
    #[arg(long, num_args = 1.., value_name = "d=..")]
    pub scarf2_absorptive: Option<Vec<String>>,

    /// Scarf II, broken PT domain: `c=<real>`
    #[arg(long, num_args = 1.., value_name = "c=..")]
    pub scarf2_broken: Option<Vec<String>>,

    /// Scarf II, unbroken PT domain: `a=<real> b=<real>`
    #[arg(long, num_args = 1.., value_name = "a=.. b=..")]
    pub scarf2_unbroken: Option<Vec<String>>,

    /// General Scarf II: `P=re,im Q=re,im`
    #[arg(long, num_args = 1.., value_name = "P=.. Q=..")]
    pub scarf2: Option<Vec<String>>,

    /// Rectangular well: `P=re,im Q=<real> L=<real>`
    #[arg(long, num_args = 1.., value_name = "P=.. Q=.. L=..")]
    pub rectangular: Option<Vec<String>>,

    /// Gaussian: `P=re,im Q=<real>`
    #[arg(long, num_args = 1.., value_name = "P=.. Q=..")]
    pub gaussian: Option<Vec<String>>,

    /// The free particle, V = 0
    #[arg(long)]
    pub zero: bool,
}

fn take(params: &mut Map<String, Value>, key: &str) -> anyhow::Result<Value> {
    params.remove(key).with_context(|| format!("missing `{key}=`"))
}

fn exactly(params: Map<String, Value>) -> anyhow::Result<()> {
    if let Some(extra) = params.keys().next() {
        bail!("unexpected parameter `{extra}`");
    }
    Ok(())
}

impl PotentialArgs {
    fn config_value(&self) -> anyhow::Result<Value> {
        if let Some(path) = &self.potential {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let value: Value = serde_json::from_str(&text).map_err(|e| {
                anyhow::anyhow!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column())
            })?;
            return Ok(value);
        }
        if self.zero {
            return Ok(json!({"family": "tabulated", "params": {"samples": []}}));
        }
        let shorthand = [
            ("--scarf2-absorptive", &self.scarf2_absorptive),
            ("--scarf2-broken", &self.scarf2_broken),
            ("--scarf2-unbroken", &self.scarf2_unbroken),
            ("--scarf2", &self.scarf2),
            ("--rectangular", &self.rectangular),
            ("--gaussian", &self.gaussian),
        ];
        let (flag, tokens) = shorthand
            .into_iter()
            .find_map(|(flag, tokens)| tokens.as_ref().map(|t| (flag, t)))
            .context("no potential given")?;
        let mut params = inline_params(tokens).with_context(|| format!("in {flag}"))?;
        let (family, params) = match flag {
            "--scarf2-absorptive" => {
                let d = take(&mut params, "d")?;
                exactly(params)?;
                ("scarf2", json!({ "absorptive_d": d }))
            }
            "--scarf2-broken" => {
                let c = take(&mut params, "c")?;
                exactly(params)?;
                ("scarf2", json!({ "broken_pt_c": c }))
            }
            "--scarf2-unbroken" => {
                let (a, b) = (take(&mut params, "a")?, take(&mut params, "b")?);
                exactly(params)?;
                ("scarf2", json!({ "unbroken_ab": {"a": a, "b": b} }))
            }
            "--scarf2" => ("scarf2", Value::Object(params)),
            "--rectangular" => ("rectangular", Value::Object(params)),
            _ => ("gaussian", Value::Object(params)),
        };
        Ok(json!({ "family": family, "params": params }))
    }

    pub fn resolve(&self) -> anyhow::Result<PotentialSpec> {
        let value = self.config_value()?;
        Ok(FamilyRegistry::default().from_value(&value)?)
    }
}
