use std::collections::HashSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub f: String,
    pub g: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    #[serde(default)]
    pub tags: Vec<String>,
}

pub fn parse_corpus(text: &str) -> Result<Vec<Fixture>> {
    let fixtures: Vec<Fixture> = serde_json::from_str(text).context("corpus is not a JSON array of fixtures")?;
    let mut seen = HashSet::new();
    for fx in &fixtures {
        if !seen.insert(fx.id.as_str()) {
            bail!("duplicate fixture id {:?}", fx.id);
        }
    }
    Ok(fixtures)
}

pub fn load_corpus(path: &Path) -> Result<Vec<Fixture>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_corpus(&text).with_context(|| format!("in {}", path.display()))
}
