use std::collections::BTreeMap;

use crate::error::FoldError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Variant {
    #[default]
    Binary,
    Count,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "binary" => Ok(Variant::Binary),
            "count" => Ok(Variant::Count),
            _ => Err(format!("variant must be 'binary' or 'count', got '{s}'")),
        }
    }
}

/// Sparse fingerprint: index → positive count. Binary vectors store 1s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerprintVector {
    length: usize,
    variant: Variant,
    entries: BTreeMap<u32, u32>,
}

impl FingerprintVector {
    pub fn zeros(length: usize, variant: Variant) -> Self {
        assert!(length > 0, "fingerprint length must be positive");
        FingerprintVector {
            length,
            variant,
            entries: BTreeMap::new(),
        }
    }

    /// Hashed-feature constructor: each feature id lands at `id % length`.
    pub fn from_features(
        length: usize,
        variant: Variant,
        ids: impl IntoIterator<Item = u32>,
    ) -> Self {
        let mut v = Self::zeros(length, variant);
        for id in ids {
            v.add((id as u64 % length as u64) as u32, 1);
        }
        v
    }

    /// Builds a vector from dense counts; zero entries are dropped.
    pub fn from_dense(values: &[u32], variant: Variant) -> Self {
        let mut v = Self::zeros(values.len(), variant);
        for (i, &c) in values.iter().enumerate() {
            if c > 0 {
                v.add(i as u32, c);
            }
        }
        v
    }

    /// Adds `count` at `index`; binary vectors saturate at 1.
    pub fn add(&mut self, index: u32, count: u32) {
        assert!((index as usize) < self.length, "index {index} out of range");
        if count == 0 {
            return;
        }
        let e = self.entries.entry(index).or_insert(0);
        *e = match self.variant {
            Variant::Binary => 1,
            Variant::Count => e.saturating_add(count),
        };
    }

    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn get(&self, index: u32) -> u32 {
        self.entries.get(&index).copied().unwrap_or(0)
    }

    /// Stored (index, count) pairs in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.entries.iter().map(|(&i, &c)| (i, c))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn total_count(&self) -> u64 {
        self.entries.values().map(|&c| c as u64).sum()
    }

    pub fn to_binary(&self) -> FingerprintVector {
        FingerprintVector {
            length: self.length,
            variant: Variant::Binary,
            entries: self.entries.keys().map(|&i| (i, 1)).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut out = vec![0; self.length];
        for (i, c) in self.iter() {
            out[i as usize] = c;
        }
        out
    }

    /// Reduces the length to `target` by OR-ing (binary) or summing (count)
    /// entries congruent modulo `target`.
    pub fn fold(&self, target: usize) -> Result<FingerprintVector, FoldError> {
        if target == 0 || !self.length.is_multiple_of(target) {
            return Err(FoldError {
                length: self.length,
                target,
            });
        }
        let mut out = Self::zeros(target, self.variant);
        for (i, c) in self.iter() {
            out.add((i as usize % target) as u32, c);
        }
        Ok(out)
    }
}
