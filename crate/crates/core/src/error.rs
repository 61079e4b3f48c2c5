//! Crate-wide error type and budget configuration.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("letter '{letter}' out of range for ambient rank {rank}")]
    LetterOutOfRange { letter: char, rank: u8 },

    #[error("ambient rank mismatch: {left} vs {right}")]
    RankMismatch { left: u8, right: u8 },

    #[error("invalid ambient rank {0}: expected 1..=26")]
    InvalidRank(u8),

    #[error("generator {index} is the identity")]
    IdentityGenerator { index: usize },

    #[error("{what}: needed {used}, budget {budget}")]
    ResourceLimit {
        what: String,
        used: usize,
        budget: usize,
    },

    #[error("element '{0}' is not in the submonoid")]
    NotInMonoid(String),

    #[error("preimage of '{0}' is infinite")]
    InfinitePreimage(String),

    #[error("language is infinite")]
    InfiniteLanguage,

    #[error("language is empty")]
    EmptyLanguage,

    #[error("submonoid is not graded{}", witness_suffix(.witness))]
    NotGraded { witness: Option<String> },

    #[error("automaton must be trim with a single initial state")]
    NotTrim,

    #[error("parse error: {0}")]
    Parse(String),
}

fn witness_suffix(witness: &Option<String>) -> String {
    match witness {
        Some(w) if w.is_empty() => " (witness '1')".to_string(),
        Some(w) => format!(" (witness '{w}')"),
        None => String::new(),
    }
}

impl Error {
    pub fn limit(what: impl Into<String>, used: usize, budget: usize) -> Self {
        Error::ResourceLimit {
            what: what.into(),
            used,
            budget,
        }
    }
}

/// Resource ceilings for the potentially explosive constructions.
///
/// The defaults keep desk-scale runs bounded: one million ball elements,
/// a hundred thousand grammar nonterminals, one million automaton states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of elements enumerated in a metric ball.
    pub ball: usize,
    /// Maximum number of grammar nonterminals.
    pub grammar: usize,
    /// Maximum number of automaton states in derived constructions.
    pub states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            ball: 1_000_000,
            grammar: 100_000,
            states: 1_000_000,
        }
    }
}

impl Budget {
    pub fn uniform(n: usize) -> Self {
        Budget {
            ball: n,
            grammar: n,
            states: n,
        }
    }
}
