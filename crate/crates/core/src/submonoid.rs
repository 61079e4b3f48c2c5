//! Submonoid specifications and words over the generator alphabet.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{AmbientSpec, ReducedWord};

/// A finitely generated submonoid of a free group: the ambient rank plus an
/// ordered list of generators `S ⊆ F \ {1}`.
///
/// The input order of the generators defines the total order on `S` that the
/// lexicographic normal forms use by default. Generators that coincide as
/// group elements are deduplicated at construction time (the monoid is
/// unchanged, but duplicate letters would double-count factorizations); each
/// drop is reported as a warning.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubmonoidSpec {
    ambient: AmbientSpec,
    generators: Vec<ReducedWord>,
}

impl SubmonoidSpec {
    pub fn new(
        ambient: AmbientSpec,
        generators: Vec<ReducedWord>,
    ) -> Result<(Self, Vec<String>)> {
        let mut warnings = Vec::new();
        let mut seen: BTreeMap<ReducedWord, usize> = BTreeMap::new();
        let mut kept = Vec::new();
        for (i, g) in generators.into_iter().enumerate() {
            if g.rank() != ambient.rank() {
                return Err(Error::RankMismatch {
                    left: ambient.rank(),
                    right: g.rank(),
                });
            }
            if g.is_identity() {
                return Err(Error::IdentityGenerator { index: i });
            }
            if let Some(&first) = seen.get(&g) {
                warnings.push(format!(
                    "generator #{} '{}' duplicates generator #{}; dropped",
                    i + 1,
                    g,
                    first + 1
                ));
            } else {
                seen.insert(g.clone(), i);
                kept.push(g);
            }
        }
        Ok((
            SubmonoidSpec {
                ambient,
                generators: kept,
            },
            warnings,
        ))
    }

    /// Convenience constructor from the text encoding; duplicates are an error.
    pub fn parse(rank: u8, generators: &[&str]) -> Result<Self> {
        let ambient = AmbientSpec::new(rank)?;
        let words = generators
            .iter()
            .map(|s| ambient.parse_word(s))
            .collect::<Result<Vec<_>>>()?;
        let (spec, warnings) = SubmonoidSpec::new(ambient, words)?;
        if let Some(w) = warnings.first() {
            return Err(Error::Parse(w.clone()));
        }
        Ok(spec)
    }

    pub fn ambient(&self) -> AmbientSpec {
        self.ambient
    }

    pub fn rank(&self) -> u8 {
        self.ambient.rank()
    }

    pub fn generators(&self) -> &[ReducedWord] {
        &self.generators
    }

    pub fn generator(&self, idx: u16) -> &ReducedWord {
        &self.generators[idx as usize]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Maximum generator length, the constant `L`.
    pub fn max_generator_len(&self) -> usize {
        self.generators.iter().map(|g| g.len()).max().unwrap_or(0)
    }

    pub fn identity(&self) -> ReducedWord {
        self.ambient.identity()
    }

    /// Evaluates the canonical homomorphism on a word over the generators.
    pub fn alpha(&self, word: &SWord) -> ReducedWord {
        let mut acc = self.identity();
        for &i in &word.0 {
            acc = acc
                .mul(self.generator(i))
                .expect("generators share the spec's ambient rank");
        }
        acc
    }

    /// Checks that every index of `word` names a generator.
    pub fn check_sword(&self, word: &SWord) -> Result<()> {
        for &i in &word.0 {
            if i as usize >= self.generators.len() {
                return Err(Error::Parse(format!(
                    "generator index {} out of range (|S| = {})",
                    i + 1,
                    self.generators.len()
                )));
            }
        }
        Ok(())
    }

    /// Parses a word over `S` in the bracketed syntax: `[a][b][ABab]` by
    /// generator spelling or `[1][2][3]` by 1-based index. The empty string
    /// is the empty word.
    pub fn parse_sword(&self, s: &str) -> Result<SWord> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(SWord::empty());
        }
        let mut word = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            if !rest.starts_with('[') {
                return Err(Error::Parse(format!(
                    "expected '[' at '{rest}' in generator word"
                )));
            }
            let close = rest
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unclosed '[' in '{s}'")))?;
            let token = &rest[1..close];
            rest = &rest[close + 1..];
            word.push(self.parse_generator_token(token)?);
        }
        Ok(SWord(word))
    }

    fn parse_generator_token(&self, token: &str) -> Result<u16> {
        if let Some(pos) = self
            .generators
            .iter()
            .position(|g| g.to_string() == token)
        {
            return Ok(pos as u16);
        }
        if let Ok(idx) = token.parse::<usize>() {
            if idx >= 1 && idx <= self.generators.len() {
                return Ok((idx - 1) as u16);
            }
            return Err(Error::Parse(format!(
                "generator index {idx} out of range (|S| = {})",
                self.generators.len()
            )));
        }
        Err(Error::Parse(format!("unknown generator '[{token}]'")))
    }

    /// Renders a word over `S` in the bracketed syntax.
    pub fn format_sword(&self, word: &SWord) -> String {
        let mut out = String::new();
        for &i in &word.0 {
            write!(out, "[{}]", self.generator(i)).unwrap();
        }
        out
    }

    /// All words over `S` of length at most `max_len`, in shortlex order.
    pub fn swords_up_to(&self, max_len: usize, budget: usize) -> Result<Vec<SWord>> {
        let k = self.generators.len();
        let mut out = vec![SWord::empty()];
        let mut layer = vec![SWord::empty()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * k);
            for w in &layer {
                for g in 0..k as u16 {
                    let mut ext = w.clone();
                    ext.0.push(g);
                    next.push(ext);
                }
            }
            if out.len() + next.len() > budget {
                return Err(Error::limit("generator words", out.len() + next.len(), budget));
            }
            out.extend(next.iter().cloned());
            layer = next;
            if layer.is_empty() {
                break;
            }
        }
        Ok(out)
    }
}

/// A word over the generator alphabet `S` (indices into the spec's list).
///
/// The derived order is the dictionary order with "proper prefix precedes",
/// taken over the spec's input order of generators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct SWord(pub Vec<u16>);

impl SWord {
    pub fn empty() -> Self {
        SWord(Vec::new())
    }

    pub fn from_indices(indices: &[u16]) -> Self {
        SWord(indices.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u16> + '_ {
        self.0.iter().copied()
    }

    pub fn shortlex_cmp(&self, other: &SWord) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}
