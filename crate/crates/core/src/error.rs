use thiserror::Error;

/// Failure while tokenizing or parsing a SMILES string.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesError {
    #[error("empty SMILES")]
    Empty,
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("ring closure {label} opened at position {position} is never closed")]
    UnclosedRing { position: usize, label: u32 },
    #[error("unbalanced parenthesis at position {position}")]
    UnbalancedParen { position: usize },
    #[error("charge {charge} at position {position} exceeds the allowed magnitude of 15")]
    ChargeOverflow { position: usize, charge: i32 },
}

impl SmilesError {
    /// Byte offset into the input, when the error has one.
    pub fn position(&self) -> Option<usize> {
        match self {
            SmilesError::Empty => None,
            SmilesError::Syntax { position, .. }
            | SmilesError::UnclosedRing { position, .. }
            | SmilesError::UnbalancedParen { position }
            | SmilesError::ChargeOverflow { position, .. } => Some(*position),
        }
    }
}

/// A structurally well-formed graph that is not a valid molecule.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SanitizeError {
    #[error("malformed molecule graph: {0}")]
    Structure(String),
    #[error("valence error on atom {atom} ({element}): bond order sum {bond_sum} exceeds every permitted valence")]
    Valence {
        atom: usize,
        element: String,
        bond_sum: String,
    },
    #[error("aromaticity error on atom {atom}: {message}")]
    Aromaticity { atom: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmartsError {
    #[error("empty SMARTS")]
    Empty,
    #[error("SMARTS syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unsupported SMARTS primitive {primitive:?} at position {position}")]
    UnsupportedPrimitive { position: usize, primitive: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("key set line {line}: {message}")]
pub struct KeySetError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot fold a vector of length {length} to {target}: target must divide length")]
pub struct FoldError {
    pub length: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("shape mismatch: {0}")]
pub struct ShapeError(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("format error on line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid composition: {0}")]
pub struct CompositionError(pub String);

/// Crate-wide error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Smiles(#[from] SmilesError),
    #[error(transparent)]
    Sanitize(#[from] SanitizeError),
    #[error(transparent)]
    Smarts(#[from] SmartsError),
    #[error(transparent)]
    KeySet(#[from] KeySetError),
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Composition(#[from] CompositionError),
    #[error("record {index}: {source}")]
    Record {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Short machine-readable name of the failure class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Smiles(SmilesError::Empty) | Error::Smiles(SmilesError::Syntax { .. }) => {
                "SyntaxError"
            }
            Error::Smiles(SmilesError::UnclosedRing { .. }) => "UnclosedRing",
            Error::Smiles(SmilesError::UnbalancedParen { .. }) => "UnbalancedParen",
            Error::Smiles(SmilesError::ChargeOverflow { .. }) => "ChargeOverflow",
            Error::Sanitize(SanitizeError::Structure(_)) => "StructureError",
            Error::Sanitize(SanitizeError::Valence { .. }) => "ValenceError",
            Error::Sanitize(SanitizeError::Aromaticity { .. }) => "AromaticityError",
            Error::Smarts(SmartsError::UnsupportedPrimitive { .. }) => "UnsupportedPrimitive",
            Error::Smarts(_) => "SmartsSyntaxError",
            Error::KeySet(_) => "KeySetError",
            Error::Fold(_) => "FoldError",
            Error::Config(_) => "ConfigError",
            Error::Shape(_) => "ShapeError",
            Error::Format(_) => "FormatError",
            Error::Composition(_) => "CompositionError",
            Error::Record { source, .. } => source.kind(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
