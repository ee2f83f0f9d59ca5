//! Fingerprint families and vector post-processing.

mod circular;
mod descriptors;
mod substructure;
mod topological;
mod vector;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use circular::{
    circular_identifiers, ecfp_identifiers, fcfp_identifiers, feature_class_bits,
    feature_class_invariant,
};
pub use descriptors::{descriptors, DESCRIPTOR_NAMES};
pub use substructure::substructure_fingerprint;
pub use topological::{
    atom_pair_identifiers, pair_atom_type, path_identifiers, torsion_identifiers,
};
pub use vector::{FingerprintVector, Variant};

use crate::error::ConfigError;
use crate::mol::Molecule;
use crate::smarts::KeySet;

pub const DEFAULT_LENGTH: usize = 2048;
pub const DEFAULT_RADIUS: u32 = 2;
pub const DEFAULT_MIN_PATH: u32 = 1;
pub const DEFAULT_MAX_PATH: u32 = 7;
pub const MAX_PATH_BONDS: u32 = 10;
pub const DEFAULT_DISTANCE_CAP: u32 = 30;
pub const MAX_DISTANCE_CAP: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Ecfp,
    Fcfp,
    AtomPair,
    TopologicalTorsion,
    Path,
    Substructure,
    Descriptors,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Ecfp,
        Family::Fcfp,
        Family::AtomPair,
        Family::TopologicalTorsion,
        Family::Path,
        Family::Substructure,
        Family::Descriptors,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ecfp => "ecfp",
            Family::Fcfp => "fcfp",
            Family::AtomPair => "atom_pair",
            Family::TopologicalTorsion => "topological_torsion",
            Family::Path => "path",
            Family::Substructure => "substructure",
            Family::Descriptors => "descriptors",
        }
    }

    /// Families whose features are hashed into a configurable length.
    pub fn is_hashed(self) -> bool {
        !matches!(self, Family::Substructure | Family::Descriptors)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| ConfigError(format!("unknown fingerprint family '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FingerprintConfig {
    pub family: Family,
    pub length: usize,
    pub radius: u32,
    pub min_path: u32,
    pub max_path: u32,
    pub distance_cap: u32,
    pub variant: Variant,
    pub key_set: Option<Arc<KeySet>>,
}

/// Output of a single fingerprint computation.
#[derive(Clone, Debug, PartialEq)]
pub enum Features {
    Vector(FingerprintVector),
    Real(Vec<f64>),
}

impl Features {
    pub fn width(&self) -> usize {
        match self {
            Features::Vector(v) => v.len(),
            Features::Real(r) => r.len(),
        }
    }
}

impl FingerprintConfig {
    /// Defaults for `family`; substructure uses the built-in key set.
    pub fn new(family: Family) -> Self {
        FingerprintConfig {
            family,
            length: DEFAULT_LENGTH,
            radius: DEFAULT_RADIUS,
            min_path: DEFAULT_MIN_PATH,
            max_path: DEFAULT_MAX_PATH,
            distance_cap: DEFAULT_DISTANCE_CAP,
            variant: Variant::Binary,
            key_set: (family == Family::Substructure).then(|| Arc::new(KeySet::builtin())),
        }
    }

    pub fn with_length(mut self, length: usize) -> Self {
        self.length = length;
        self
    }

    pub fn with_radius(mut self, radius: u32) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_paths(mut self, min_path: u32, max_path: u32) -> Self {
        self.min_path = min_path;
        self.max_path = max_path;
        self
    }

    pub fn with_distance_cap(mut self, cap: u32) -> Self {
        self.distance_cap = cap;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_key_set(mut self, keys: KeySet) -> Self {
        self.key_set = Some(Arc::new(keys));
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError(m));
        match self.family {
            f if f.is_hashed() && self.length == 0 => bad(format!("{f}: length must be positive")),
            Family::Path
                if self.min_path < 1
                    || self.min_path > self.max_path
                    || self.max_path > MAX_PATH_BONDS =>
            {
                bad(format!(
                    "path: need 1 <= min_path <= max_path <= {MAX_PATH_BONDS}, got {}..{}",
                    self.min_path, self.max_path
                ))
            }
            Family::AtomPair if self.distance_cap < 1 || self.distance_cap > MAX_DISTANCE_CAP => {
                bad(format!(
                    "atom_pair: distance_cap must be in 1..={MAX_DISTANCE_CAP}, got {}",
                    self.distance_cap
                ))
            }
            Family::Substructure => match &self.key_set {
                None => bad("substructure: no key set loaded".into()),
                Some(k) if k.is_empty() => bad("substructure: key set is empty".into()),
                Some(_) => Ok(()),
            },
            _ => Ok(()),
        }
    }

    /// Number of output columns.
    pub fn width(&self) -> usize {
        match self.family {
            Family::Substructure => self.key_set.as_ref().map_or(0, |k| k.len()),
            Family::Descriptors => DESCRIPTOR_NAMES.len(),
            _ => self.length,
        }
    }

    /// Raw feature identifiers for hashed families, before folding into
    /// `length`; `None` for substructure and descriptors.
    pub fn identifiers(&self, mol: &Molecule) -> Option<Vec<u32>> {
        Some(match self.family {
            Family::Ecfp => ecfp_identifiers(mol, self.radius),
            Family::Fcfp => fcfp_identifiers(mol, self.radius),
            Family::AtomPair => atom_pair_identifiers(mol, self.distance_cap),
            Family::TopologicalTorsion => torsion_identifiers(mol),
            Family::Path => path_identifiers(mol, self.min_path, self.max_path),
            Family::Substructure | Family::Descriptors => return None,
        })
    }

    /// Computes the fingerprint. The config must have passed [`validate`](Self::validate).
    pub fn compute(&self, mol: &Molecule) -> Features {
        if let Some(ids) = self.identifiers(mol) {
            return Features::Vector(FingerprintVector::from_features(
                self.length,
                self.variant,
                ids,
            ));
        }
        match self.family {
            Family::Substructure => {
                let keys = self
                    .key_set
                    .as_ref()
                    .expect("validated substructure config");
                Features::Vector(substructure_fingerprint(mol, keys, self.variant))
            }
            _ => Features::Real(descriptors(mol)),
        }
    }

    /// Like [`compute`](Self::compute) but only for vector-valued families.
    pub fn vector(&self, mol: &Molecule) -> Option<FingerprintVector> {
        match self.compute(mol) {
            Features::Vector(v) => Some(v),
            Features::Real(_) => None,
        }
    }
}
