use thiserror::Error;

use crate::moduli::{OrbitKey, ValidationReport};

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid moduli data:\n{0}")]
    InvalidData(ValidationReport),

    #[error("no orbit {0} in moduli data")]
    UnknownOrbit(OrbitKey),

    #[error("no reducible component with id {0}")]
    UnknownComponent(i64),

    #[error("alpha_pair needs at least one flat record")]
    EmptyRecords,

    #[error("orbit template rejected: {0}")]
    Template(String),

    #[error("bifurcation removal needs an irreducible orbit with sign {sign:+}, none present")]
    NoMatchingIrreducible { sign: i64 },

    #[error("orientation reversal needs regular moduli data (regular = false)")]
    NonRegular,

    #[error("Seifert invariants {0:?} are not pairwise coprime integers >= 2")]
    NotCoprime([i64; 3]),

    #[error("Σ(2,{p},{q}) is not in a tabulated family")]
    NotInTable { p: i64, q: i64 },

    #[error("solver: {0}")]
    Solver(String),

    #[error("sign oracle: {0}")]
    Oracle(String),

    #[error("malformed moduli file: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
