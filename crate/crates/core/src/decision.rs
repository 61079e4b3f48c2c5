//! Irreducible elements, the diagonal-containment test for rational
//! relations, and the homomorphism/isomorphism decisions.
//!
//! An element is irreducible when it is not a product of two non-identity
//! elements; the irreducibles form the rational set `(M∖{1}) ∖ (M∖{1})²`
//! and, for graded monoids, the unique minimal generating set. A map from
//! the generators into a group extends to a homomorphism exactly when every
//! relation of the monoid maps to a true equality, which reduces to asking
//! whether the image of the word-problem relation lies inside the diagonal
//! — decidable on a finite automaton by the spanning-tree labelling below.
//! The isomorphism decision matches irreducible generating sets and tries
//! the finitely many bijections in both directions.

use std::collections::VecDeque;

use crate::error::{Budget, Error, Result};
use crate::graded::require_graded;
use crate::normal::PairWordAutomaton;
use crate::ratset::monoid_automaton;
use crate::relation::{
    brute_force_relation, build_certified, build_gamma, wp_exact, PairLetter, Side,
};
use crate::submonoid::{SWord, SubmonoidSpec};
use crate::words::{AmbientSpec, ReducedWord};

/// Indices of the generators that are irreducible in `M`:
/// `{s ∈ S : s ∉ (M∖{1})·(M∖{1})}`.
pub fn irreducibles(spec: &SubmonoidSpec, budget: &Budget) -> Result<Vec<u16>> {
    let m = monoid_automaton(spec, budget.states)?;
    let nontrivial = m.minus_identity(budget.states)?;
    let products = nontrivial.concat(&nontrivial, budget.states)?;
    let mut out = Vec::new();
    for (i, s) in spec.generators().iter().enumerate() {
        if !products.member(s)? {
            out.push(i as u16);
        }
    }
    Ok(out)
}

/// Result of the diagonal-containment test, with a counterexample pair of
/// projected words when containment fails.
#[derive(Clone, Debug)]
pub struct DiagonalReport {
    pub contained: bool,
    pub witness: Option<(SWord, SWord)>,
}

fn project(word: &[PairLetter]) -> (SWord, SWord) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for l in word {
        match l.side {
            Side::Left => left.push(l.gen),
            Side::Right => right.push(l.gen),
        }
    }
    (SWord(left), SWord(right))
}

fn eval_side(images: &[ReducedWord], target: AmbientSpec, word: &SWord) -> ReducedWord {
    let mut acc = target.identity();
    for i in word.iter() {
        acc = acc
            .mul(&images[i as usize])
            .expect("images share the target rank");
    }
    acc
}

/// Decides whether every accepted pair of the automaton evaluates to equal
/// elements of the target group (`R ⊆ D`).
///
/// Builds the shortlex BFS spanning tree from the unique initial state and
/// labels each state `q` with `eval₁(u_q)⁻¹ · eval₂(u_q)`; containment holds
/// iff every terminal label is the identity and every edge is compatible
/// with the labelling.
pub fn subset_of_diagonal(
    aut: &PairWordAutomaton,
    images: &[ReducedWord],
    target: AmbientSpec,
) -> Result<DiagonalReport> {
    let nfa = &aut.nfa;
    if nfa.initials.len() != 1 {
        return Err(Error::NotTrim);
    }
    if nfa.num_eps() != 0 {
        return Err(Error::NotTrim);
    }
    let (_, map) = nfa.trim();
    if nfa.num_states() > 0 && map.iter().any(|m| m.is_none()) {
        return Err(Error::NotTrim);
    }
    let q0 = *nfa.initials.iter().next().unwrap();
    if nfa.num_states() == 0 {
        return Ok(DiagonalReport {
            contained: true,
            witness: None,
        });
    }

    // Shortlex BFS spanning tree: FIFO discovery with edges in letter order.
    let n = nfa.num_states() as usize;
    let mut tree_word: Vec<Option<Vec<PairLetter>>> = vec![None; n];
    let mut label: Vec<Option<ReducedWord>> = vec![None; n];
    tree_word[q0 as usize] = Some(Vec::new());
    label[q0 as usize] = Some(target.identity());
    let mut queue = VecDeque::from([q0]);
    while let Some(p) = queue.pop_front() {
        let base_word = tree_word[p as usize].clone().unwrap();
        let base_label = label[p as usize].clone().unwrap();
        for (x, q) in nfa.trans_from(p) {
            if tree_word[q as usize].is_some() {
                continue;
            }
            let mut w = base_word.clone();
            w.push(x);
            tree_word[q as usize] = Some(w);
            label[q as usize] = Some(step_label(&base_label, x, images)?);
            queue.push_back(q);
        }
    }

    // Word from each state to some terminal, for witness extraction.
    let mut out_word: Vec<Option<Vec<PairLetter>>> = vec![None; n];
    let mut queue = VecDeque::new();
    for &t in &nfa.finals {
        out_word[t as usize] = Some(Vec::new());
        queue.push_back(t);
    }
    let mut rev: Vec<Vec<(PairLetter, u32)>> = vec![Vec::new(); n];
    for p in 0..nfa.num_states() {
        for (x, q) in nfa.trans_from(p) {
            rev[q as usize].push((x, p));
        }
    }
    while let Some(q) = queue.pop_front() {
        let suffix = out_word[q as usize].clone().unwrap();
        for &(x, p) in &rev[q as usize] {
            if out_word[p as usize].is_none() {
                let mut w = vec![x];
                w.extend_from_slice(&suffix);
                out_word[p as usize] = Some(w);
                queue.push_back(p);
            }
        }
    }

    let check_pair = |word: &[PairLetter]| -> Option<(SWord, SWord)> {
        let (u, v) = project(word);
        let lu = eval_side(images, target, &u);
        let lv = eval_side(images, target, &v);
        (lu != lv).then_some((u, v))
    };

    // Terminal condition.
    for &t in &nfa.finals {
        if !label[t as usize].as_ref().unwrap().is_identity() {
            let witness = check_pair(tree_word[t as usize].as_ref().unwrap());
            debug_assert!(witness.is_some());
            return Ok(DiagonalReport {
                contained: false,
                witness,
            });
        }
    }
    // Edge compatibility.
    for p in 0..nfa.num_states() {
        for (x, q) in nfa.trans_from(p) {
            let expect = step_label(label[p as usize].as_ref().unwrap(), x, images)?;
            if &expect != label[q as usize].as_ref().unwrap() {
                // One of the two coterminal words must break the diagonal.
                let v = out_word[q as usize].as_ref().unwrap();
                let mut through_edge = tree_word[p as usize].clone().unwrap();
                through_edge.push(x);
                through_edge.extend_from_slice(v);
                let mut through_tree = tree_word[q as usize].clone().unwrap();
                through_tree.extend_from_slice(v);
                let witness = check_pair(&through_edge).or_else(|| check_pair(&through_tree));
                debug_assert!(witness.is_some());
                return Ok(DiagonalReport {
                    contained: false,
                    witness,
                });
            }
        }
    }
    Ok(DiagonalReport {
        contained: true,
        witness: None,
    })
}

fn step_label(
    label: &ReducedWord,
    x: PairLetter,
    images: &[ReducedWord],
) -> Result<ReducedWord> {
    let img = &images[x.gen as usize];
    match x.side {
        Side::Left => img.inverse().mul(label),
        Side::Right => label.mul(img),
    }
}

/// A homomorphism candidate: a source submonoid, a target free group, and
/// one image per source generator.
#[derive(Clone, Debug)]
pub struct HomSpec {
    pub source: SubmonoidSpec,
    pub target: AmbientSpec,
    pub images: Vec<ReducedWord>,
}

impl HomSpec {
    pub fn new(
        source: SubmonoidSpec,
        target: AmbientSpec,
        images: Vec<ReducedWord>,
    ) -> Result<HomSpec> {
        if images.len() != source.len() {
            return Err(Error::Parse(format!(
                "expected {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        for img in &images {
            if img.rank() != target.rank() {
                return Err(Error::RankMismatch {
                    left: target.rank(),
                    right: img.rank(),
                });
            }
        }
        Ok(HomSpec {
            source,
            target,
            images,
        })
    }

    pub fn image_of(&self, word: &SWord) -> ReducedWord {
        eval_side(&self.images, self.target, word)
    }
}

/// How much certainty a positive homomorphism answer carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomVerdict {
    /// A relation of the source whose images differ; conclusive at any
    /// cutoff.
    No { witness: (SWord, SWord) },
    /// Proven over the certified relation automaton.
    YesCertified,
    /// All relations with both sides up to the horizon map to equalities.
    YesUpTo { horizon: usize, cutoff: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMode {
    Certified,
    Adaptive { cutoff: usize, horizon: usize },
}

/// Decides whether the generator assignment extends to a homomorphism of
/// the (graded) source monoid into the target free group.
pub fn hom_extends(h: &HomSpec, mode: HomMode, budget: &Budget) -> Result<HomVerdict> {
    require_graded(&h.source, budget)?;
    match mode {
        HomMode::Certified => {
            let gamma = build_certified(&h.source, budget)?.trim();
            let aut = PairWordAutomaton {
                nfa: gamma.to_pair_nfa(),
                num_gens: gamma.num_gens(),
            };
            let report = subset_of_diagonal(&aut, &h.images, h.target)?;
            if report.contained {
                Ok(HomVerdict::YesCertified)
            } else {
                let witness = report.witness.expect("non-containment carries a witness");
                debug_assert!(wp_exact(&h.source, &witness.0, &witness.1));
                Ok(HomVerdict::No { witness })
            }
        }
        HomMode::Adaptive { cutoff, horizon } => {
            // Candidate relations from the ball-restricted automaton first,
            // then the exhaustive relation up to the horizon.
            let gamma = build_gamma(&h.source, cutoff, budget)?;
            for (u, v) in gamma.accepted_pairs(horizon, budget.ball)? {
                debug_assert!(wp_exact(&h.source, &u, &v));
                if h.image_of(&u) != h.image_of(&v) {
                    return Ok(HomVerdict::No { witness: (u, v) });
                }
            }
            for (u, v) in brute_force_relation(&h.source, horizon, budget.ball)? {
                if h.image_of(&u) != h.image_of(&v) {
                    debug_assert!(wp_exact(&h.source, &u, &v));
                    return Ok(HomVerdict::No { witness: (u, v) });
                }
            }
            Ok(HomVerdict::YesUpTo { horizon, cutoff })
        }
    }
}

/// Isomorphism verdict; a positive answer carries the matched bijection
/// between the irreducible generating sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    No,
    Yes {
        bijection: Vec<(ReducedWord, ReducedWord)>,
        certified: bool,
    },
}

/// Decides isomorphism of two graded submonoids by matching their
/// irreducible generating sets through every bijection, checking each
/// direction with the homomorphism decision.
pub fn iso(
    spec1: &SubmonoidSpec,
    spec2: &SubmonoidSpec,
    mode: HomMode,
    budget: &Budget,
) -> Result<IsoVerdict> {
    require_graded(spec1, budget)?;
    require_graded(spec2, budget)?;
    let x: Vec<ReducedWord> = irreducibles(spec1, budget)?
        .into_iter()
        .map(|i| spec1.generator(i).clone())
        .collect();
    let y: Vec<ReducedWord> = irreducibles(spec2, budget)?
        .into_iter()
        .map(|i| spec2.generator(i).clone())
        .collect();
    if x.len() != y.len() {
        return Ok(IsoVerdict::No);
    }
    let n = x.len();
    let mut fact = 1usize;
    for i in 1..=n {
        fact = fact.saturating_mul(i);
        if fact > budget.states {
            return Err(Error::limit("bijection candidates", fact, budget.states));
        }
    }
    let (source1, _) = SubmonoidSpec::new(spec1.ambient(), x.clone())?;
    let (source2, _) = SubmonoidSpec::new(spec2.ambient(), y.clone())?;

    // Candidate bijections, best length-matching first.
    let mut perms = permutations(n);
    perms.sort_by_key(|perm| {
        let matches = (0..n)
            .filter(|&i| x[i].len() == y[perm[i] as usize].len())
            .count();
        std::cmp::Reverse(matches)
    });

    for perm in perms {
        let forward_images: Vec<ReducedWord> =
            perm.iter().map(|&j| y[j as usize].clone()).collect();
        let forward = HomSpec::new(source1.clone(), spec2.ambient(), forward_images)?;
        let fwd_verdict = hom_extends(&forward, mode, budget)?;
        if matches!(fwd_verdict, HomVerdict::No { .. }) {
            continue;
        }
        let mut backward_images = vec![None; n];
        for (i, &j) in perm.iter().enumerate() {
            backward_images[j as usize] = Some(x[i].clone());
        }
        let backward_images: Vec<ReducedWord> =
            backward_images.into_iter().map(|w| w.unwrap()).collect();
        let backward = HomSpec::new(source2.clone(), spec1.ambient(), backward_images)?;
        let bwd_verdict = hom_extends(&backward, mode, budget)?;
        if matches!(bwd_verdict, HomVerdict::No { .. }) {
            continue;
        }
        let certified = matches!(fwd_verdict, HomVerdict::YesCertified)
            && matches!(bwd_verdict, HomVerdict::YesCertified);
        let bijection = perm
            .iter()
            .enumerate()
            .map(|(i, &j)| (x[i].clone(), y[j as usize].clone()))
            .collect();
        return Ok(IsoVerdict::Yes {
            bijection,
            certified,
        });
    }
    Ok(IsoVerdict::No)
}

fn permutations(n: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut current: Vec<u16> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<u16>, used: &mut Vec<bool>, out: &mut Vec<Vec<u16>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i as u16);
                rec(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nfa::Nfa;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn spec(rank: u8, gens: &[&str]) -> SubmonoidSpec {
        SubmonoidSpec::parse(rank, gens).unwrap()
    }

    fn ex1() -> SubmonoidSpec {
        spec(2, &["a", "b", "ABab"])
    }

    fn w(rank: u8, s: &str) -> ReducedWord {
        AmbientSpec::new(rank).unwrap().parse_word(s).unwrap()
    }

    fn adaptive(cutoff: usize, horizon: usize) -> HomMode {
        HomMode::Adaptive { cutoff, horizon }
    }

    #[test]
    fn irreducibles_of_fixtures() {
        let b = Budget::default();
        assert_eq!(
            irreducibles(&spec(3, &["ba", "c", "CA", "BA"]), &b).unwrap(),
            vec![0, 1, 2, 3]
        );
        // a = (bA)·a·(Ba) is not irreducible.
        assert_eq!(
            irreducibles(&spec(2, &["a", "bA", "Ba"]), &b).unwrap(),
            vec![1, 2]
        );
        assert_eq!(irreducibles(&spec(1, &["a"]), &b).unwrap(), vec![0]);
        assert_eq!(irreducibles(&ex1(), &b).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn irreducibles_drop_redundant_generators_and_regenerate() {
        let b = Budget::default();
        let s = spec(2, &["a", "b", "ab"]);
        let irr = irreducibles(&s, &b).unwrap();
        assert_eq!(irr, vec![0, 1]);
        let gens: Vec<ReducedWord> = irr.iter().map(|&i| s.generator(i).clone()).collect();
        let (reduced_spec, _) = SubmonoidSpec::new(s.ambient(), gens).unwrap();
        let m = monoid_automaton(&reduced_spec, b.states).unwrap();
        for g in s.generators() {
            assert!(m.member(g).unwrap());
        }
    }

    fn pair_aut(edges: &[(u32, PairLetter, u32)], states: u32, finals: &[u32]) -> PairWordAutomaton {
        let mut nfa = Nfa::with_states(states);
        nfa.initials.insert(0);
        for &f in finals {
            nfa.finals.insert(f);
        }
        for &(p, x, q) in edges {
            nfa.add_trans(p, x, q);
        }
        PairWordAutomaton { nfa, num_gens: 2 }
    }

    #[test]
    fn diagonal_examples() {
        let target = AmbientSpec::new(2).unwrap();
        let images = vec![w(2, "a"), w(2, "b")];
        // {(a,a)}*: a two-step loop.
        let loop_aut = pair_aut(
            &[
                (0, PairLetter::left(0), 1),
                (1, PairLetter::right(0), 0),
            ],
            2,
            &[0],
        );
        assert!(subset_of_diagonal(&loop_aut, &images, target)
            .unwrap()
            .contained);

        // {(a, b)}.
        let ab = pair_aut(
            &[
                (0, PairLetter::left(0), 1),
                (1, PairLetter::right(1), 2),
            ],
            3,
            &[2],
        );
        let report = subset_of_diagonal(&ab, &images, target).unwrap();
        assert!(!report.contained);
        let (u, v) = report.witness.unwrap();
        assert_ne!(eval_side(&images, target, &u), eval_side(&images, target, &v));

        // {(ab, ba)}.
        let abba = pair_aut(
            &[
                (0, PairLetter::left(0), 1),
                (1, PairLetter::left(1), 2),
                (2, PairLetter::right(1), 3),
                (3, PairLetter::right(0), 4),
            ],
            5,
            &[4],
        );
        assert!(!subset_of_diagonal(&abba, &images, target).unwrap().contained);
    }

    #[test]
    fn diagonal_requires_trim_single_initial() {
        let target = AmbientSpec::new(2).unwrap();
        let images = vec![w(2, "a")];
        let mut nfa: Nfa<PairLetter> = Nfa::with_states(2);
        nfa.initials.insert(0);
        nfa.finals.insert(0);
        // State 1 is unreachable garbage.
        nfa.add_trans(1, PairLetter::left(0), 1);
        let aut = PairWordAutomaton { nfa, num_gens: 1 };
        assert!(matches!(
            subset_of_diagonal(&aut, &images, target),
            Err(Error::NotTrim)
        ));
    }

    #[test]
    fn diagonal_agrees_with_path_enumeration_on_random_automata() {
        let target = AmbientSpec::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0xD1A6);
        let mut tested = 0;
        while tested < 50 {
            let states = rng.random_range(1..=4u32);
            let mut nfa: Nfa<PairLetter> = Nfa::with_states(states);
            nfa.initials.insert(0);
            nfa.finals.insert(rng.random_range(0..states));
            let num_edges = rng.random_range(1..=6);
            for _ in 0..num_edges {
                let p = rng.random_range(0..states);
                let q = rng.random_range(0..states);
                let side = if rng.random_bool(0.5) {
                    Side::Left
                } else {
                    Side::Right
                };
                let gen = rng.random_range(0..2u16);
                nfa.add_trans(p, PairLetter { side, gen }, q);
            }
            let (trimmed, _) = nfa.trim();
            if trimmed.num_states() == 0 || trimmed.initials.len() != 1 {
                continue;
            }
            // Keep state 0 initial after trim.
            let images = vec![
                w(2, if rng.random_bool(0.5) { "a" } else { "ab" }),
                w(2, if rng.random_bool(0.5) { "b" } else { "a" }),
            ];
            let aut = PairWordAutomaton {
                nfa: trimmed.clone(),
                num_gens: 2,
            };
            tested += 1;
            let contained = subset_of_diagonal(&aut, &images, target).unwrap().contained;
            // Exhaustive enumeration of accepted words up to length 8.
            let mut all_diagonal = true;
            let mut stack: Vec<(u32, Vec<PairLetter>)> = trimmed
                .initials
                .iter()
                .map(|&q| (q, Vec::new()))
                .collect();
            while let Some((q, word)) = stack.pop() {
                if trimmed.finals.contains(&q) {
                    let (u, v) = project(&word);
                    if eval_side(&images, target, &u) != eval_side(&images, target, &v) {
                        all_diagonal = false;
                        break;
                    }
                }
                if word.len() < 8 {
                    for (x, r) in trimmed.trans_from(q) {
                        let mut ext = word.clone();
                        ext.push(x);
                        stack.push((r, ext));
                    }
                }
            }
            assert_eq!(contained, all_diagonal, "automaton {tested}");
        }
    }

    #[test]
    fn identity_embedding_extends() {
        let b = Budget::default();
        let s = ex1();
        let h = HomSpec::new(
            s.clone(),
            AmbientSpec::new(2).unwrap(),
            vec![w(2, "a"), w(2, "b"), w(2, "ABab")],
        )
        .unwrap();
        let verdict = hom_extends(&h, adaptive(6, 4), &b).unwrap();
        assert_eq!(
            verdict,
            HomVerdict::YesUpTo {
                horizon: 4,
                cutoff: 6
            }
        );
    }

    #[test]
    fn broken_assignments_are_rejected_with_verified_witnesses() {
        let b = Budget::default();
        let s = ex1();
        for images in [
            vec![w(2, "a"), w(2, "b"), w(2, "b")],
            vec![w(2, "a"), w(2, "a"), w(2, "a")],
        ] {
            let h = HomSpec::new(s.clone(), AmbientSpec::new(2).unwrap(), images).unwrap();
            match hom_extends(&h, adaptive(6, 4), &b).unwrap() {
                HomVerdict::No { witness: (u, v) } => {
                    assert!(wp_exact(&s, &u, &v));
                    assert_ne!(h.image_of(&u), h.image_of(&v));
                }
                other => panic!("expected rejection, got {other:?}"),
            }
        }
    }

    #[test]
    fn certified_hom_on_rank_one() {
        let b = Budget::default();
        let s = spec(1, &["a"]);
        let h = HomSpec::new(s, AmbientSpec::new(1).unwrap(), vec![w(1, "aa")]).unwrap();
        assert_eq!(
            hom_extends(&h, HomMode::Certified, &b).unwrap(),
            HomVerdict::YesCertified
        );

        // Two generators with the relation [a][a] = [aa]; sending them to
        // unrelated elements breaks it, certified.
        let s = spec(1, &["a", "aa"]);
        let h = HomSpec::new(
            s.clone(),
            AmbientSpec::new(2).unwrap(),
            vec![w(2, "a"), w(2, "b")],
        )
        .unwrap();
        match hom_extends(&h, HomMode::Certified, &b).unwrap() {
            HomVerdict::No { witness: (u, v) } => {
                assert!(wp_exact(&s, &u, &v));
                assert_ne!(h.image_of(&u), h.image_of(&v));
            }
            other => panic!("expected certified rejection, got {other:?}"),
        }
    }

    #[test]
    fn free_monoid_and_prefix_code_are_isomorphic() {
        let b = Budget::default();
        let verdict = iso(
            &spec(2, &["a", "b"]),
            &spec(2, &["a", "ab"]),
            adaptive(4, 4),
            &b,
        )
        .unwrap();
        match verdict {
            IsoVerdict::Yes { bijection, .. } => {
                assert_eq!(bijection.len(), 2);
            }
            IsoVerdict::No => panic!("expected an isomorphism"),
        }
    }

    #[test]
    fn commutator_monoid_is_not_free_of_rank_three() {
        let b = Budget::default();
        let verdict = iso(
            &ex1(),
            &spec(3, &["a", "b", "c"]),
            adaptive(6, 4),
            &b,
        )
        .unwrap();
        assert_eq!(verdict, IsoVerdict::No);
    }

    #[test]
    fn iso_is_reflexive_on_graded_fixtures() {
        let b = Budget::default();
        for s in [
            spec(1, &["a"]),
            spec(2, &["a", "b"]),
            ex1(),
            spec(4, &["ab", "ad", "ba", "c", "ca", "d"]),
        ] {
            let cutoff = s.max_generator_len() + 2;
            let verdict = iso(&s, &s, adaptive(cutoff, 3), &b).unwrap();
            assert!(
                matches!(verdict, IsoVerdict::Yes { .. }),
                "spec {s:?} not isomorphic to itself"
            );
        }
    }

    #[test]
    fn iso_ignores_generator_order() {
        let b = Budget::default();
        let verdict = iso(
            &spec(2, &["a", "b"]),
            &spec(2, &["b", "a"]),
            adaptive(4, 4),
            &b,
        )
        .unwrap();
        assert!(matches!(verdict, IsoVerdict::Yes { .. }));
    }

    #[test]
    fn iso_distinguishes_sizes() {
        let b = Budget::default();
        let verdict = iso(
            &spec(2, &["a", "b"]),
            &spec(3, &["a", "b", "c"]),
            adaptive(4, 3),
            &b,
        )
        .unwrap();
        assert_eq!(verdict, IsoVerdict::No);
    }

    #[test]
    fn iso_rejects_non_graded_inputs() {
        let b = Budget::default();
        let result = iso(
            &spec(3, &["ba", "c", "CA", "BA"]),
            &spec(2, &["a", "b"]),
            adaptive(4, 3),
            &b,
        );
        assert!(matches!(result, Err(Error::NotGraded { .. })));
    }
}
