use std::collections::HashSet;
use std::path::Path;

use crate::error::KeySetError;

use super::{parse_smarts, SmartsPattern};

const DEFAULT_KEYS: &str = include_str!("../../data/default_keys.tsv");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Key {
    pub id: String,
    pub description: String,
    pub pattern: SmartsPattern,
}

/// An ordered list of compiled SMARTS keys.
///
/// File format: one `<id>\t<smarts>\t<description>` record per line;
/// blank lines and lines starting with `#` are skipped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeySet {
    keys: Vec<Key>,
}

impl KeySet {
    pub fn parse(text: &str) -> Result<KeySet, KeySetError> {
        let mut keys = Vec::new();
        let mut ids = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            let mut fields = trimmed.splitn(3, '\t');
            let id = fields.next().unwrap_or("").trim();
            let smarts = fields.next().map(str::trim).unwrap_or("");
            let description = fields.next().unwrap_or("").trim();
            if id.is_empty() || smarts.is_empty() {
                return Err(KeySetError {
                    line,
                    message: "expected <key_id><TAB><smarts>[<TAB><description>]".into(),
                });
            }
            if !ids.insert(id.to_string()) {
                return Err(KeySetError {
                    line,
                    message: format!("duplicate key id {id:?}"),
                });
            }
            let pattern = parse_smarts(smarts).map_err(|e| KeySetError {
                line,
                message: e.to_string(),
            })?;
            keys.push(Key {
                id: id.to_string(),
                description: description.to_string(),
                pattern,
            });
        }
        Ok(KeySet { keys })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<KeySet, KeySetError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| KeySetError {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        KeySet::parse(&text)
    }

    /// The bundled functional-group key set.
    pub fn builtin() -> KeySet {
        KeySet::parse(DEFAULT_KEYS).expect("bundled key set is valid")
    }

    /// The first `n` keys, in order.
    pub fn truncated(&self, n: usize) -> KeySet {
        KeySet {
            keys: self.keys.iter().take(n).cloned().collect(),
        }
    }

    pub fn keys(&self) -> &[Key] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_has_enough_keys() {
        assert!(KeySet::builtin().len() >= 40);
    }

    #[test]
    fn comments_and_blank_lines() {
        let ks = KeySet::parse("# header\n\nk1\t[OX2H]\thydroxyl\nk2\tc1ccccc1\n").unwrap();
        assert_eq!(ks.len(), 2);
        assert_eq!(ks.keys()[0].description, "hydroxyl");
        assert_eq!(ks.keys()[1].description, "");
    }

    #[test]
    fn errors_report_line() {
        let err = KeySet::parse("k1\t[OX2H]\tok\nk2\t[C\tbroken\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = KeySet::parse("k1\t[OX2H]\na\nk1\tC\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = KeySet::parse("k1\tC\nk1\tN\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("duplicate"));
    }
}
