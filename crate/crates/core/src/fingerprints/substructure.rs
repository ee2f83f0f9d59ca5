use crate::mol::Molecule;
use crate::smarts::{count_unique, has_match, KeySet};

use super::{FingerprintVector, Variant};

/// One position per key: presence (binary) or unique-match count.
pub fn substructure_fingerprint(
    mol: &Molecule,
    keys: &KeySet,
    variant: Variant,
) -> FingerprintVector {
    let mut v = FingerprintVector::zeros(keys.len().max(1), variant);
    for (i, key) in keys.keys().iter().enumerate() {
        let c = match variant {
            Variant::Binary => has_match(&key.pattern, mol) as u32,
            Variant::Count => count_unique(&key.pattern, mol) as u32,
        };
        v.add(i as u32, c);
    }
    v
}
