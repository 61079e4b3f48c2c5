//! Exact arithmetic on free-group elements as reduced words.
//!
//! Elements of the free group `F(A)` are represented by freely reduced words
//! over `A ∪ A⁻¹`. The text encoding uses lowercase `a`–`z` for the
//! generators of `A` and uppercase `A`–`Z` for their inverses; the empty
//! string (or `1`) is the identity. All operations reduce their results, so
//! a [`ReducedWord`] always denotes the unique normal form of its element.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A single letter of `A ∪ A⁻¹`: a generator index plus an inversion flag.
///
/// The derived order is `a < A < b < B < …`, which is the letter order used
/// by every shortlex enumeration in this crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    base: u8,
    inverse: bool,
}

impl Letter {
    pub fn new(base: u8, inverse: bool) -> Self {
        Letter { base, inverse }
    }

    /// 0-based index of the underlying generator of `A`.
    pub fn base(&self) -> u8 {
        self.base
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    /// The formal inverse of this letter.
    pub fn inverse(&self) -> Letter {
        Letter {
            base: self.base,
            inverse: !self.inverse,
        }
    }

    pub fn from_char(c: char) -> Result<Letter> {
        match c {
            'a'..='z' => Ok(Letter::new(c as u8 - b'a', false)),
            'A'..='Z' => Ok(Letter::new(c as u8 - b'A', true)),
            _ => Err(Error::Parse(format!("invalid letter '{c}'"))),
        }
    }

    pub fn to_char(self) -> char {
        if self.inverse {
            (b'A' + self.base) as char
        } else {
            (b'a' + self.base) as char
        }
    }

    /// Dense index in `0..2·rank`, consistent with the letter order.
    pub fn code(self) -> usize {
        self.base as usize * 2 + self.inverse as usize
    }

    pub fn from_code(code: usize) -> Letter {
        Letter::new((code / 2) as u8, code % 2 == 1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// The ambient free group `F(A)`, fixed by its rank.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AmbientSpec {
    rank: u8,
}

impl AmbientSpec {
    /// Rank must lie in `1..=26` so that the letter naming stays unambiguous.
    pub fn new(rank: u8) -> Result<Self> {
        if (1..=26).contains(&rank) {
            Ok(AmbientSpec { rank })
        } else {
            Err(Error::InvalidRank(rank))
        }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    /// All `2·rank` letters in order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..2 * self.rank as usize).map(Letter::from_code)
    }

    pub fn identity(&self) -> ReducedWord {
        ReducedWord {
            rank: self.rank,
            letters: Vec::new(),
        }
    }

    pub fn check_letter(&self, l: Letter) -> Result<()> {
        if l.base < self.rank {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                letter: l.to_char(),
                rank: self.rank,
            })
        }
    }

    /// Parses the text encoding into a reduced word.
    pub fn parse_word(&self, s: &str) -> Result<ReducedWord> {
        if s == "1" {
            return Ok(self.identity());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            let l = Letter::from_char(c)?;
            self.check_letter(l)?;
            letters.push(l);
        }
        Ok(reduce(self.rank, letters))
    }
}

/// A freely reduced word: the canonical form of a free-group element.
///
/// The invariant is that no two adjacent letters are mutually inverse; the
/// empty sequence represents the identity. The order is shortlex (length
/// first, then letter order), so sorted collections of words enumerate the
/// group in the order used by [`ball`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ReducedWord {
    rank: u8,
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity(rank: u8) -> Self {
        ReducedWord {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    fn check_rank(&self, other: &ReducedWord) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        }
    }

    /// Group multiplication: the reduced form of the concatenation.
    pub fn mul(&self, other: &ReducedWord) -> Result<ReducedWord> {
        self.check_rank(other)?;
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Ok(ReducedWord {
            rank: self.rank,
            letters,
        })
    }

    /// The group inverse: reversal with every letter flipped.
    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Geodesic distance `d_A(u, v) = |u⁻¹v|` in the Cayley graph.
    ///
    /// In a free group this is `|u| + |v| − 2·lcp(u, v)`.
    pub fn dist(&self, other: &ReducedWord) -> Result<usize> {
        self.check_rank(other)?;
        let lcp = self
            .letters
            .iter()
            .zip(other.letters.iter())
            .take_while(|(a, b)| a == b)
            .count();
        Ok(self.len() + other.len() - 2 * lcp)
    }

    /// The prefix of the first `n` letters (a vertex of the geodesic `[1, self]`).
    pub fn prefix(&self, n: usize) -> ReducedWord {
        ReducedWord {
            rank: self.rank,
            letters: self.letters[..n].to_vec(),
        }
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    if letters.last() == Some(&l.inverse()) {
        letters.pop();
    } else {
        letters.push(l);
    }
}

/// Free reduction of an arbitrary letter sequence. Idempotent on reduced input.
pub fn reduce(rank: u8, raw: impl IntoIterator<Item = Letter>) -> ReducedWord {
    let mut letters = Vec::new();
    for l in raw {
        push_reduced(&mut letters, l);
    }
    ReducedWord { rank, letters }
}

/// Checked variant of [`reduce`] that validates every letter against the rank.
pub fn reduce_checked(ambient: AmbientSpec, raw: &[Letter]) -> Result<ReducedWord> {
    for &l in raw {
        ambient.check_letter(l)?;
    }
    Ok(reduce(ambient.rank(), raw.iter().copied()))
}

/// All reduced words of length at most `radius`, in shortlex order.
///
/// Backtracking never extends a word by the inverse of its last letter, so
/// each reduced word is produced exactly once.
pub fn ball(ambient: AmbientSpec, radius: usize, budget: usize) -> Result<Vec<ReducedWord>> {
    let rank = ambient.rank();
    let mut out = vec![ambient.identity()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &layer {
            let banned = w.last().map(|l| l.inverse());
            for l in ambient.letters() {
                if Some(l) != banned {
                    let mut ext = w.clone();
                    ext.push(l);
                    next.push(ext);
                }
            }
        }
        if out.len() + next.len() > budget {
            return Err(Error::limit("ball elements", out.len() + next.len(), budget));
        }
        out.extend(next.iter().map(|w| ReducedWord {
            rank,
            letters: w.clone(),
        }));
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    Ok(out)
}

/// Closed form `1 + Σ_{k=1..n} 2r(2r−1)^{k−1}` for the ball cardinality.
pub fn ball_size(rank: u8, radius: usize) -> u128 {
    let r = rank as u128;
    let mut total = 1u128;
    let mut shell = 2 * r;
    for _ in 0..radius {
        total += shell;
        shell *= 2 * r - 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(rank: u8, s: &str) -> ReducedWord {
        AmbientSpec::new(rank).unwrap().parse_word(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w(2, "aAb"), w(2, "b"));
        assert_eq!(w(2, "ab"), w(2, "ab"));
        assert_eq!(w(2, "abBA"), w(2, ""));
        assert!(w(2, "abBA").is_identity());
    }

    #[test]
    fn reduce_is_idempotent_on_parsed_input() {
        let word = w(3, "abcCBAab");
        let again = reduce(3, word.letters().iter().copied());
        assert_eq!(word, again);
    }

    #[test]
    fn letter_out_of_range() {
        let ambient = AmbientSpec::new(2).unwrap();
        assert!(matches!(
            ambient.parse_word("c"),
            Err(Error::LetterOutOfRange { letter: 'c', rank: 2 })
        ));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(w(2, "ab").mul(&w(2, "BA")).unwrap(), w(2, ""));
        assert_eq!(w(2, "ab").mul(&w(2, "ba")).unwrap(), w(2, "abba"));
        // (ba)·(c)·(CA)·(BA) = a⁻¹ in F₃.
        let prod = w(3, "ba")
            .mul(&w(3, "c"))
            .unwrap()
            .mul(&w(3, "CA"))
            .unwrap()
            .mul(&w(3, "BA"))
            .unwrap();
        assert_eq!(prod, w(3, "A"));
    }

    #[test]
    fn mul_rank_mismatch() {
        assert!(matches!(
            w(2, "a").mul(&w(3, "a")),
            Err(Error::RankMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn inv_examples() {
        assert_eq!(w(2, "ab").inverse(), w(2, "BA"));
        assert_eq!(w(2, "").inverse(), w(2, ""));
        assert_eq!(w(2, "ABab").inverse(), w(2, "BAba"));
    }

    #[test]
    fn dist_examples() {
        assert_eq!(w(2, "a").dist(&w(2, "b")).unwrap(), 2);
        assert_eq!(w(2, "abA").dist(&w(2, "abA")).unwrap(), 0);
        assert_eq!(w(2, "").dist(&w(2, "ABab")).unwrap(), 4);
    }

    #[test]
    fn ball_examples() {
        let b = ball(AmbientSpec::new(2).unwrap(), 1, 1000).unwrap();
        assert_eq!(b.len(), 5);
        let spelled: Vec<String> = b.iter().map(|w| w.to_string()).collect();
        assert_eq!(spelled, vec!["", "a", "A", "b", "B"]);

        assert_eq!(ball(AmbientSpec::new(2).unwrap(), 2, 1000).unwrap().len(), 17);

        let b1 = ball(AmbientSpec::new(1).unwrap(), 3, 1000).unwrap();
        assert_eq!(b1.len(), 7);
        assert!(b1.contains(&w(1, "aaa")));
        assert!(b1.contains(&w(1, "AAA")));
    }

    #[test]
    fn ball_budget() {
        assert!(matches!(
            ball(AmbientSpec::new(2).unwrap(), 3, 10),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn ball_matches_closed_form() {
        for rank in 1..=3u8 {
            let ambient = AmbientSpec::new(rank).unwrap();
            for n in 0..=6usize {
                let b = ball(ambient, n, 10_000_000).unwrap();
                assert_eq!(b.len() as u128, ball_size(rank, n), "rank {rank} radius {n}");
                // Shortlex order and reducedness.
                for pair in b.windows(2) {
                    assert!(pair[0] < pair[1]);
                }
            }
        }
    }

    #[test]
    fn parse_identity_aliases() {
        assert_eq!(w(2, "1"), w(2, ""));
    }

    fn arb_word(rank: u8, max_len: usize) -> impl Strategy<Value = ReducedWord> {
        prop::collection::vec(0..(2 * rank as usize), 0..=max_len).prop_map(move |codes| {
            reduce(rank, codes.into_iter().map(Letter::from_code))
        })
    }

    proptest! {
        #[test]
        fn mul_associative(u in arb_word(2, 8), v in arb_word(2, 8), t in arb_word(2, 8)) {
            let left = u.mul(&v).unwrap().mul(&t).unwrap();
            let right = u.mul(&v.mul(&t).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn mul_inverse_is_identity(u in arb_word(2, 10)) {
            prop_assert!(u.mul(&u.inverse()).unwrap().is_identity());
        }

        #[test]
        fn inverse_is_involution(u in arb_word(3, 10)) {
            prop_assert_eq!(u.inverse().inverse(), u);
        }

        #[test]
        fn dist_is_a_metric(u in arb_word(2, 8), v in arb_word(2, 8), t in arb_word(2, 8)) {
            let duv = u.dist(&v).unwrap();
            let dvu = v.dist(&u).unwrap();
            prop_assert_eq!(duv, dvu);
            prop_assert_eq!(duv == 0, u == v);
            let duw = u.dist(&t).unwrap();
            let dwv = t.dist(&v).unwrap();
            prop_assert!(duv <= duw + dwv);
        }

        #[test]
        fn dist_equals_reduced_length(u in arb_word(2, 8), v in arb_word(2, 8)) {
            let direct = u.dist(&v).unwrap();
            let via_mul = u.inverse().mul(&v).unwrap().len();
            prop_assert_eq!(direct, via_mul);
        }
    }
}
