//! Automata calculus for rational subsets of a free group.
//!
//! A subset of `F(A)` is rational when it is the image of a regular language
//! under free reduction. The canonical machine form here is the saturated,
//! reduced-word automaton: starting from any automaton over `A ∪ A⁻¹`,
//! ε-saturation makes the reduced form of every represented element
//! readable, and intersecting with the regular set of reduced words yields
//! an automaton whose language is exactly the set of reduced forms. On that
//! normal form, membership, boolean operations, emptiness and finiteness
//! are all plain regular-language computations.



use crate::error::{Error, Result};
use crate::nfa::Nfa;
use crate::submonoid::SubmonoidSpec;
use crate::words::{AmbientSpec, Letter, ReducedWord};

/// A finite automaton over `A ∪ A⁻¹ ∪ {ε}` denoting the rational subset
/// `{red(w) : w ∈ L}` of the ambient free group.
#[derive(Clone, Debug)]
pub struct GroupNfa {
    pub rank: u8,
    pub nfa: Nfa<Letter>,
}

/// Benois normal form: ε-free, trim, accepts only reduced words, and for
/// each group element `g` of the represented subset accepts exactly its
/// reduced form. States additionally never allow a letter followed by its
/// inverse, so re-saturation is a no-op.
#[derive(Clone, Debug)]
pub struct RatSetAutomaton {
    rank: u8,
    nfa: Nfa<Letter>,
}

impl RatSetAutomaton {
    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn nfa(&self) -> &Nfa<Letter> {
        &self.nfa
    }

    pub fn num_states(&self) -> u32 {
        self.nfa.num_states()
    }
}

/// One-state-based automaton with a loop spelling each generator.
/// Its language maps onto the submonoid `M` generated by the spec.
pub fn flower(spec: &SubmonoidSpec) -> GroupNfa {
    let mut nfa = Nfa::new();
    let base = nfa.add_state();
    nfa.initials.insert(base);
    nfa.finals.insert(base);
    for g in spec.generators() {
        let mut cur = base;
        let letters = g.letters();
        for (i, &l) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                base
            } else {
                nfa.add_state()
            };
            nfa.add_trans(cur, l, next);
            cur = next;
        }
    }
    GroupNfa {
        rank: spec.rank(),
        nfa,
    }
}

/// Word automaton for the singleton subset `{g}`.
pub fn singleton(g: &ReducedWord) -> GroupNfa {
    let mut nfa = Nfa::new();
    let mut cur = nfa.add_state();
    nfa.initials.insert(cur);
    for &l in g.letters() {
        let next = nfa.add_state();
        nfa.add_trans(cur, l, next);
        cur = next;
    }
    nfa.finals.insert(cur);
    GroupNfa {
        rank: g.rank(),
        nfa,
    }
}

/// Fixpoint ε-saturation: whenever `p` reaches `q` by a path labeled
/// `x ·(ε*)· x⁻¹`, an ε-transition `p → q` is added. Returns the number of
/// ε-edges added. The represented subset is unchanged.
pub(crate) fn saturate(nfa: &mut Nfa<Letter>, budget: usize) -> Result<usize> {
    let mut added = 0usize;
    loop {
        let mut new_edges: Vec<(u32, u32)> = Vec::new();
        for p in 0..nfa.num_states() {
            for (x, r) in nfa.trans_from(p) {
                for s in nfa.eps_closure([r]) {
                    for (y, q) in nfa.trans_from(s) {
                        if y == x.inverse() {
                            new_edges.push((p, q));
                        }
                    }
                }
            }
        }
        let mut changed = false;
        for (p, q) in new_edges {
            if nfa.add_eps(p, q) {
                changed = true;
                added += 1;
            }
        }
        if !changed {
            return Ok(added);
        }
        if added > budget {
            return Err(Error::limit("saturation epsilon edges", added, budget));
        }
    }
}

fn eps_eliminate(nfa: &Nfa<Letter>) -> Nfa<Letter> {
    let mut out = Nfa::with_states(nfa.num_states());
    out.initials = nfa.initials.clone();
    for q in 0..nfa.num_states() {
        let closure = nfa.eps_closure([q]);
        if closure.iter().any(|c| nfa.finals.contains(c)) {
            out.finals.insert(q);
        }
        for &c in &closure {
            for (l, r) in nfa.trans_from(c) {
                out.add_trans(q, l, r);
            }
        }
    }
    out
}

/// Product with the reduced-word guard: tracks the last letter read and
/// forbids following it with its inverse.
fn restrict_to_reduced(rank: u8, nfa: &Nfa<Letter>, budget: usize) -> Result<Nfa<Letter>> {
    let slots = 2 * rank as usize + 1; // last-letter code + 1, or 0 for "none"
    let index = |q: u32, last: Option<Letter>| -> u64 {
        q as u64 * slots as u64 + last.map(|l| l.code() as u64 + 1).unwrap_or(0)
    };
    let mut ids: std::collections::HashMap<u64, u32> = std::collections::HashMap::new();
    let mut out = Nfa::new();
    let mut queue: Vec<(u32, Option<Letter>)> = Vec::new();
    for &i in &nfa.initials {
        let id = out.add_state();
        ids.insert(index(i, None), id);
        out.initials.insert(id);
        queue.push((i, None));
    }
    let mut head = 0;
    while head < queue.len() {
        let (q, last) = queue[head];
        head += 1;
        let id = ids[&index(q, last)];
        if nfa.finals.contains(&q) {
            out.finals.insert(id);
        }
        for (l, r) in nfa.trans_from(q) {
            if last == Some(l.inverse()) {
                continue;
            }
            let key = index(r, Some(l));
            let nid = match ids.get(&key) {
                Some(&nid) => nid,
                None => {
                    let nid = out.add_state();
                    ids.insert(key, nid);
                    queue.push((r, Some(l)));
                    nid
                }
            };
            out.add_trans(id, l, nid);
            if out.num_states() as usize > budget {
                return Err(Error::limit(
                    "reduced-restriction states",
                    out.num_states() as usize,
                    budget,
                ));
            }
        }
    }
    Ok(out)
}

/// Benois normalization: saturate, restrict to reduced words, trim.
pub fn benois(input: &GroupNfa, budget: usize) -> Result<RatSetAutomaton> {
    let mut nfa = input.nfa.clone();
    saturate(&mut nfa, budget)?;
    let flat = eps_eliminate(&nfa);
    let reduced = restrict_to_reduced(input.rank, &flat, budget)?;
    let (trim, _) = reduced.trim();
    Ok(RatSetAutomaton {
        rank: input.rank,
        nfa: trim,
    })
}

impl RatSetAutomaton {
    fn check_rank(&self, other: u8) -> Result<()> {
        if self.rank == other {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                left: self.rank,
                right: other,
            })
        }
    }

    /// Membership of a group element in the represented subset.
    pub fn member(&self, g: &ReducedWord) -> Result<bool> {
        self.check_rank(g.rank())?;
        Ok(self.nfa.accepts(g.letters()))
    }

    pub fn as_group_nfa(&self) -> GroupNfa {
        GroupNfa {
            rank: self.rank,
            nfa: self.nfa.clone(),
        }
    }

    /// Product of the two represented subsets.
    pub fn concat(&self, other: &RatSetAutomaton, budget: usize) -> Result<RatSetAutomaton> {
        self.check_rank(other.rank)?;
        benois(
            &GroupNfa {
                rank: self.rank,
                nfa: self.nfa.concat(&other.nfa),
            },
            budget,
        )
    }

    pub fn union(&self, other: &RatSetAutomaton, budget: usize) -> Result<RatSetAutomaton> {
        self.check_rank(other.rank)?;
        benois(
            &GroupNfa {
                rank: self.rank,
                nfa: self.nfa.union(&other.nfa),
            },
            budget,
        )
    }

    /// Submonoid generated by the represented subset.
    pub fn star(&self, budget: usize) -> Result<RatSetAutomaton> {
        benois(
            &GroupNfa {
                rank: self.rank,
                nfa: self.nfa.star(),
            },
            budget,
        )
    }

    /// Elementwise inverse `{g⁻¹ : g ∈ X}`: reverse the automaton and invert
    /// every label (the reverse of a reduced word is reduced).
    pub fn inverse(&self, budget: usize) -> Result<RatSetAutomaton> {
        let reversed = self.nfa.reverse().map_labels(|l| Some(l.inverse()));
        benois(
            &GroupNfa {
                rank: self.rank,
                nfa: reversed,
            },
            budget,
        )
    }

    /// Set intersection, computed on the reduced-word languages.
    pub fn intersect(&self, other: &RatSetAutomaton, budget: usize) -> Result<RatSetAutomaton> {
        self.check_rank(other.rank)?;
        let product = self.nfa.intersect(&other.nfa, budget)?;
        let (trim, _) = product.trim();
        Ok(RatSetAutomaton {
            rank: self.rank,
            nfa: trim,
        })
    }

    /// Complement within the ambient group, `F ∖ X`, as reduced words.
    /// This is the one operation that determinizes.
    pub fn complement_in_reduced(&self, budget: usize) -> Result<RatSetAutomaton> {
        let ambient = AmbientSpec::new(self.rank)?;
        let alphabet: Vec<Letter> = ambient.letters().collect();
        let dfa = self.nfa.determinize(&alphabet, budget)?;
        let comp = dfa.complement().to_nfa();
        let reduced = restrict_to_reduced(self.rank, &comp, budget)?;
        let (trim, _) = reduced.trim();
        Ok(RatSetAutomaton {
            rank: self.rank,
            nfa: trim,
        })
    }

    /// Removes the identity: represents `X ∖ {1}`.
    pub fn minus_identity(&self, budget: usize) -> Result<RatSetAutomaton> {
        // Product with the two-state "nonempty word" guard.
        let ambient = AmbientSpec::new(self.rank)?;
        let mut guard = Nfa::new();
        let s = guard.add_state();
        let f = guard.add_state();
        guard.initials.insert(s);
        guard.finals.insert(f);
        for l in ambient.letters() {
            guard.add_trans(s, l, f);
            guard.add_trans(f, l, f);
        }
        let product = self.nfa.intersect(&guard, budget)?;
        let (trim, _) = product.trim();
        Ok(RatSetAutomaton {
            rank: self.rank,
            nfa: trim,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.nfa.is_empty_language()
    }

    /// Finiteness of the represented subset (reduced forms are in bijection
    /// with elements, so this is finiteness of the language).
    pub fn is_finite_set(&self) -> bool {
        self.nfa.is_finite_language()
    }

    /// All represented elements of length at most `max_len`, shortlex sorted.
    ///
    /// Determinizes and trims, counts the word prefixes per length first
    /// (so an out-of-budget request fails without materializing anything),
    /// then walks the word tree of the DFA. Cost scales with the number of
    /// accepted-word prefixes rather than with the ambient ball.
    pub fn elements_up_to(&self, max_len: usize, budget: usize) -> Result<Vec<ReducedWord>> {
        let ambient = AmbientSpec::new(self.rank)?;
        let alphabet: Vec<Letter> = ambient.letters().collect();
        let dfa = self.nfa.determinize(&alphabet, budget)?;
        let n = dfa.num_states();
        // States that can still reach a final state.
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for q in 0..n {
            for a in 0..alphabet.len() {
                if let Some(r) = dfa.trans[q][a] {
                    rev[r as usize].push(q);
                }
            }
        }
        let mut live = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        for q in 0..n {
            if dfa.finals[q] {
                live[q] = true;
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        if !live[dfa.initial as usize] {
            return Ok(Vec::new());
        }
        // Count live prefixes per length, saturating at the budget.
        let cap = (budget as u128) + 1;
        let mut counts: Vec<u128> = vec![0; n];
        counts[dfa.initial as usize] = 1;
        let mut total: u128 = 1;
        for _ in 0..max_len {
            let mut next: Vec<u128> = vec![0; n];
            for q in 0..n {
                if counts[q] == 0 {
                    continue;
                }
                for a in 0..alphabet.len() {
                    if let Some(r) = dfa.trans[q][a] {
                        if live[r as usize] {
                            let cell = &mut next[r as usize];
                            *cell = (*cell + counts[q]).min(cap);
                        }
                    }
                }
            }
            let layer_total: u128 = next.iter().sum::<u128>().min(cap);
            total = (total + layer_total).min(cap);
            if total > budget as u128 {
                return Err(Error::limit("language prefixes", budget + 1, budget));
            }
            counts = next;
            if layer_total == 0 {
                break;
            }
        }
        // Enumerate layer by layer; within a DFA each word has one path, so
        // lexicographic extension yields shortlex output directly.
        let mut out = Vec::new();
        let mut layer: Vec<(Vec<Letter>, u32)> = vec![(Vec::new(), dfa.initial)];
        for _ in 0..=max_len {
            for (word, q) in &layer {
                if dfa.finals[*q as usize] {
                    out.push(crate::words::reduce(self.rank, word.iter().copied()));
                }
            }
            let mut next = Vec::new();
            for (word, q) in &layer {
                if word.len() == max_len {
                    continue;
                }
                for (a, &l) in alphabet.iter().enumerate() {
                    if let Some(r) = dfa.trans[*q as usize][a] {
                        if live[r as usize] {
                            let mut ext = word.clone();
                            ext.push(l);
                            next.push((ext, r));
                        }
                    }
                }
            }
            layer = next;
            if layer.is_empty() {
                break;
            }
        }
        Ok(out)
    }
}

/// The saturated reduced-word automaton for the submonoid `M` itself.
pub fn monoid_automaton(spec: &SubmonoidSpec, budget: usize) -> Result<RatSetAutomaton> {
    benois(&flower(spec), budget)
}

/// The rational set `M⁻¹M`, the vertex universe of the relation automaton.
pub fn m_inv_m(spec: &SubmonoidSpec, budget: usize) -> Result<RatSetAutomaton> {
    let m = monoid_automaton(spec, budget)?;
    let minv = m.inverse(budget)?;
    minv.concat(&m, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submonoid::SWord;
    use rand::prelude::*;
    use std::collections::BTreeSet;
    use rand_chacha::ChaCha8Rng;

    const B: usize = 1_000_000;

    fn spec(rank: u8, gens: &[&str]) -> SubmonoidSpec {
        SubmonoidSpec::parse(rank, gens).unwrap()
    }

    fn ex2() -> SubmonoidSpec {
        spec(3, &["ba", "c", "CA", "BA"])
    }

    fn ex3() -> SubmonoidSpec {
        spec(2, &["a", "bA", "Ba"])
    }

    fn w(rank: u8, s: &str) -> ReducedWord {
        AmbientSpec::new(rank).unwrap().parse_word(s).unwrap()
    }

    #[test]
    fn flower_shapes() {
        assert_eq!(flower(&spec(1, &["a"])).nfa.num_states(), 1);
        assert_eq!(flower(&spec(3, &["ab", "c"])).nfa.num_states(), 2);
        // Four loops of lengths 2, 1, 2, 2 share the base state.
        assert_eq!(flower(&ex2()).nfa.num_states(), 4);
    }

    #[test]
    fn benois_subgroup_of_rank_one() {
        let m = monoid_automaton(&spec(1, &["a", "A"]), B).unwrap();
        for s in ["", "a", "aaa", "A", "AAAA"] {
            assert!(m.member(&w(1, s)).unwrap(), "{s}");
        }
    }

    #[test]
    fn benois_finds_hidden_inverse() {
        let m = monoid_automaton(&ex2(), B).unwrap();
        assert!(m.member(&w(3, "A")).unwrap());
        assert!(m.member(&w(3, "ba")).unwrap());
        assert!(!m.member(&w(3, "AB")).unwrap());
    }

    #[test]
    fn benois_on_free_loop_adds_nothing() {
        let mut nfa = flower(&spec(2, &["ab"])).nfa;
        assert_eq!(saturate(&mut nfa, B).unwrap(), 0);
        let m = monoid_automaton(&spec(2, &["ab"]), B).unwrap();
        assert!(m.member(&w(2, "")).unwrap());
        assert!(m.member(&w(2, "abab")).unwrap());
        assert!(!m.member(&w(2, "a")).unwrap());
        assert!(!m.member(&w(2, "ba")).unwrap());
    }

    #[test]
    fn member_rejects_outside_elements() {
        let m3 = monoid_automaton(&ex3(), B).unwrap();
        assert!(!m3.member(&w(2, "aB")).unwrap());
        assert!(m3.member(&w(2, "a")).unwrap());
    }

    #[test]
    fn saturation_is_a_fixpoint_on_normal_forms() {
        for s in [spec(1, &["a", "A"]), ex2(), ex3(), spec(2, &["ab"])] {
            let m = monoid_automaton(&s, B).unwrap();
            let mut nfa = m.nfa().clone();
            assert_eq!(saturate(&mut nfa, B).unwrap(), 0, "spec {s:?}");
        }
    }

    #[test]
    fn concat_inverse_star_examples() {
        let pos = monoid_automaton(&spec(1, &["a"]), B).unwrap();
        let neg = monoid_automaton(&spec(1, &["A"]), B).unwrap();
        let all = pos.concat(&neg, B).unwrap();
        for s in ["", "aa", "AA", "a", "A"] {
            assert!(all.member(&w(1, s)).unwrap());
        }

        let ab = benois(&singleton(&w(2, "ab")), B).unwrap();
        let inv = ab.inverse(B).unwrap();
        assert!(inv.member(&w(2, "BA")).unwrap());
        assert!(!inv.member(&w(2, "ab")).unwrap());

        let aa = benois(&singleton(&w(1, "aa")), B).unwrap();
        let even = aa.star(B).unwrap();
        assert!(even.member(&w(1, "")).unwrap());
        assert!(even.member(&w(1, "aaaa")).unwrap());
        assert!(!even.member(&w(1, "aaa")).unwrap());
    }

    #[test]
    fn intersect_and_complement_examples() {
        let ints = monoid_automaton(&spec(1, &["a", "A"]), B).unwrap();
        let nats = monoid_automaton(&spec(1, &["a"]), B).unwrap();
        let both = ints.intersect(&nats, B).unwrap();
        assert!(both.member(&w(1, "aa")).unwrap());
        assert!(!both.member(&w(1, "A")).unwrap());

        let m3 = monoid_automaton(&ex3(), B).unwrap();
        let ab_inv = benois(&singleton(&w(2, "aB")), B).unwrap();
        let isect = m3.intersect(&ab_inv, B).unwrap();
        assert!(isect.is_empty());

        // Complement of the empty set meets ball(1) in all 2r+1 short words.
        let empty = benois(
            &GroupNfa {
                rank: 2,
                nfa: {
                    let mut nfa = Nfa::new();
                    let s = nfa.add_state();
                    nfa.initials.insert(s);
                    nfa
                },
            },
            B,
        )
        .unwrap();
        assert!(empty.is_empty());
        let full = empty.complement_in_reduced(B).unwrap();
        let short = full.elements_up_to(1, B).unwrap();
        assert_eq!(short.len(), 5);
    }

    #[test]
    fn emptiness_and_finiteness_examples() {
        let m2 = monoid_automaton(&ex2(), B).unwrap();
        assert!(!m2.is_empty());
        assert!(!m2.is_finite_set());

        let one = benois(&singleton(&w(2, "")), B).unwrap();
        assert!(one.is_finite_set());
        assert!(!one.is_empty());
    }

    fn brute_force_monoid(spec: &SubmonoidSpec, max_factors: usize) -> BTreeSet<ReducedWord> {
        let mut out = BTreeSet::new();
        let mut layer = vec![spec.identity()];
        out.insert(spec.identity());
        for _ in 0..max_factors {
            let mut next = Vec::new();
            for g in &layer {
                for s in spec.generators() {
                    let prod = g.mul(s).unwrap();
                    if out.insert(prod.clone()) {
                        next.push(prod);
                    }
                }
            }
            layer = next;
        }
        out
    }

    /// All elements reachable from 1 by right-multiplying generators while
    /// staying within the given length cap. Always a subset of M.
    fn monoid_closure(spec: &SubmonoidSpec, wander_cap: usize) -> BTreeSet<ReducedWord> {
        let mut out = BTreeSet::new();
        let mut queue = vec![spec.identity()];
        out.insert(spec.identity());
        while let Some(g) = queue.pop() {
            for s in spec.generators() {
                let prod = g.mul(s).unwrap();
                if prod.len() <= wander_cap && out.insert(prod.clone()) {
                    queue.push(prod);
                }
            }
        }
        out
    }

    #[test]
    fn benois_matches_brute_force_on_random_specs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBE9015);
        let mut tested = 0;
        while tested < 50 {
            let rank = rng.random_range(1..=2u8);
            let ambient = AmbientSpec::new(rank).unwrap();
            let n_gens = rng.random_range(1..=3usize);
            let mut gens = Vec::new();
            for _ in 0..n_gens {
                let len = rng.random_range(1..=2usize);
                let mut letters = Vec::new();
                for _ in 0..len {
                    letters.push(Letter::from_code(
                        rng.random_range(0..2 * rank as usize),
                    ));
                }
                let word = crate::words::reduce(rank, letters);
                if !word.is_identity() {
                    gens.push(word);
                }
            }
            if gens.is_empty() {
                continue;
            }
            let Ok((s, _)) = SubmonoidSpec::new(ambient, gens) else {
                continue;
            };
            tested += 1;
            let m = monoid_automaton(&s, B).unwrap();
            // Products of at most 8 generators must all be members.
            let brute = brute_force_monoid(&s, 8);
            // Deeper closure bounded by wandering length settles both
            // directions: it is a subset of M, and at this scale it reaches
            // every member of ball(3).
            let closure = monoid_closure(&s, 10);
            for g in crate::words::ball(ambient, 3, B).unwrap() {
                let is_member = m.member(&g).unwrap();
                if brute.contains(&g) {
                    assert!(is_member, "spec {s:?}: {g} has a ≤8-factor spelling");
                }
                assert_eq!(
                    is_member,
                    closure.contains(&g),
                    "spec {s:?} element {g} (closure with wandering cap 10)"
                );
            }
        }
    }

    #[test]
    fn boolean_algebra_laws_by_membership_sampling() {
        let ambient = AmbientSpec::new(2).unwrap();
        let x = monoid_automaton(&spec(2, &["a", "bA"]), B).unwrap();
        let y = monoid_automaton(&spec(2, &["ab"]), B).unwrap();
        let z = monoid_automaton(&spec(2, &["b"]), B).unwrap();
        let ball3 = crate::words::ball(ambient, 3, B).unwrap();

        let union_xy = x.union(&y, B).unwrap();
        let isect_xy = x.intersect(&y, B).unwrap();
        let comp_union = union_xy.complement_in_reduced(B).unwrap();
        let comp_x = x.complement_in_reduced(B).unwrap();
        let comp_y = y.complement_in_reduced(B).unwrap();
        let de_morgan = comp_x.intersect(&comp_y, B).unwrap();
        let dist_left = x.intersect(&y.union(&z, B).unwrap(), B).unwrap();
        let dist_right = isect_xy.union(&x.intersect(&z, B).unwrap(), B).unwrap();
        let double_inv = x.inverse(B).unwrap().inverse(B).unwrap();

        for g in &ball3 {
            let in_x = x.member(g).unwrap();
            let in_y = y.member(g).unwrap();
            let in_z = z.member(g).unwrap();
            assert_eq!(union_xy.member(g).unwrap(), in_x || in_y);
            assert_eq!(isect_xy.member(g).unwrap(), in_x && in_y);
            assert_eq!(comp_union.member(g).unwrap(), !(in_x || in_y));
            assert_eq!(de_morgan.member(g).unwrap(), !(in_x || in_y));
            assert_eq!(dist_left.member(g).unwrap(), in_x && (in_y || in_z));
            assert_eq!(dist_right.member(g).unwrap(), in_x && (in_y || in_z));
            assert_eq!(double_inv.member(g).unwrap(), in_x);
        }
    }

    #[test]
    fn alpha_images_land_in_monoid() {
        let s = ex2();
        let m = monoid_automaton(&s, B).unwrap();
        for word in s.swords_up_to(4, 100_000).unwrap() {
            let g = s.alpha(&SWord(word.0.clone()));
            assert!(m.member(&g).unwrap(), "alpha({word:?}) = {g}");
        }
    }
}
