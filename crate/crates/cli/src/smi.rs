use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

/// One `.smi` line: SMILES, optional name, 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmiRecord {
    pub smiles: String,
    pub name: Option<String>,
    pub line_number: usize,
}

/// Parses `.smi` text; blank lines and `#` comments are skipped.
pub fn parse_smi(text: &str) -> Vec<SmiRecord> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                return None;
            }
            let (smiles, name) = match line.split_once(char::is_whitespace) {
                Some((s, n)) => (s, Some(n.trim().to_string()).filter(|n| !n.is_empty())),
                None => (line, None),
            };
            Some(SmiRecord {
                smiles: smiles.to_string(),
                name,
                line_number: i + 1,
            })
        })
        .collect()
}

pub fn read_smi(path: &Path) -> Result<Vec<SmiRecord>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(parse_smi(&text))
}
