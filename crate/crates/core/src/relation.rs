//! The relation automaton: a finite automaton over the pair alphabet
//! `Ŝ = (S × {1}) ∪ ({1} × S)` whose states are group elements of `M⁻¹M`.
//!
//! Reading a left letter `(s, 1)` at state `g` moves to `s⁻¹·g`; reading a
//! right letter `(1, s)` moves to `g·s`. The identity is the unique initial
//! and terminal state, so a word over `Ŝ` is accepted exactly when its two
//! projections evaluate to the same monoid element — the automaton encodes
//! the word problem of `M` as a rational relation. A finite machine arises
//! by restricting the states to a ball: any cutoff gives a sound
//! subautomaton (every accepted pair is a true relation), and the certified
//! cutoff from the quasi-geodesic constants captures the whole relation.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::{Budget, Error, Result};
use crate::nfa::Nfa;
use crate::ratset::m_inv_m;
use crate::submonoid::{SWord, SubmonoidSpec};
use crate::words::ReducedWord;

/// One letter of the pair alphabet: a generator on the left or right track.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PairLetter {
    pub side: Side,
    pub gen: u16,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    Left,
    Right,
}

impl PairLetter {
    pub fn left(gen: u16) -> Self {
        PairLetter {
            side: Side::Left,
            gen,
        }
    }

    pub fn right(gen: u16) -> Self {
        PairLetter {
            side: Side::Right,
            gen,
        }
    }
}

/// The ball-restricted relation automaton `Γ^c`.
#[derive(Clone, Debug)]
pub struct RelationAutomaton {
    generators: Vec<ReducedWord>,
    rank: u8,
    pub cutoff: usize,
    pub certified: bool,
    /// Shortlex-sorted group elements of `M⁻¹M` within the cutoff ball.
    vertices: Vec<ReducedWord>,
    index: HashMap<ReducedWord, u32>,
    /// `edges[v][code(x)]`: the unique `x`-successor, when inside the ball.
    edges: Vec<Vec<Option<u32>>>,
    basepoint: u32,
}

fn letter_code(num_gens: usize, x: PairLetter) -> usize {
    match x.side {
        Side::Left => x.gen as usize,
        Side::Right => num_gens + x.gen as usize,
    }
}

impl RelationAutomaton {
    pub fn num_gens(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[ReducedWord] {
        &self.generators
    }

    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn vertices(&self) -> &[ReducedWord] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn basepoint(&self) -> u32 {
        self.basepoint
    }

    pub fn vertex_index(&self, g: &ReducedWord) -> Option<u32> {
        self.index.get(g).copied()
    }

    pub fn edge(&self, v: u32, x: PairLetter) -> Option<u32> {
        self.edges[v as usize][letter_code(self.generators.len(), x)]
    }

    /// All pair letters in order: left letters first, then right letters.
    pub fn letters(&self) -> impl Iterator<Item = PairLetter> + '_ {
        let k = self.generators.len() as u16;
        (0..k)
            .map(PairLetter::left)
            .chain((0..k).map(PairLetter::right))
    }

    /// Target element of an edge, independent of the ball restriction.
    fn apply(&self, g: &ReducedWord, x: PairLetter) -> ReducedWord {
        let s = &self.generators[x.gen as usize];
        match x.side {
            Side::Left => s.inverse().mul(g).expect("vertices share the spec's rank"),
            Side::Right => g.mul(s).expect("vertices share the spec's rank"),
        }
    }

    /// Restricts to vertices both reachable from and co-reachable to the
    /// basepoint; the accepted relation is unchanged.
    pub fn trim(&self) -> RelationAutomaton {
        let n = self.vertices.len();
        let code_count = 2 * self.generators.len();
        let mut fwd = vec![false; n];
        let mut stack = vec![self.basepoint as usize];
        fwd[self.basepoint as usize] = true;
        while let Some(v) = stack.pop() {
            for c in 0..code_count {
                if let Some(t) = self.edges[v][c] {
                    if !fwd[t as usize] {
                        fwd[t as usize] = true;
                        stack.push(t as usize);
                    }
                }
            }
        }
        let mut rev_adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for v in 0..n {
            for c in 0..code_count {
                if let Some(t) = self.edges[v][c] {
                    rev_adj[t as usize].push(v as u32);
                }
            }
        }
        let mut bwd = vec![false; n];
        let mut stack = vec![self.basepoint as usize];
        bwd[self.basepoint as usize] = true;
        while let Some(v) = stack.pop() {
            for &p in &rev_adj[v] {
                if !bwd[p as usize] {
                    bwd[p as usize] = true;
                    stack.push(p as usize);
                }
            }
        }
        let kept: Vec<ReducedWord> = (0..n)
            .filter(|&v| fwd[v] && bwd[v])
            .map(|v| self.vertices[v].clone())
            .collect();
        build_from_vertices(
            self.generators.clone(),
            self.rank,
            self.cutoff,
            self.certified,
            kept,
        )
    }

    /// Shuffle membership: true iff some interleaving of `(u, v)` labels a
    /// successful path. The endpoint of any interleaving is determined, so
    /// the search runs over the prefix grid of the two words.
    pub fn wp_member(&self, u: &SWord, v: &SWord) -> bool {
        let pu = self.prefix_products(u);
        let pv = self.prefix_products(v);
        let pu_inv: Vec<ReducedWord> = pu.iter().map(|p| p.inverse()).collect();
        let m = u.len();
        let n = v.len();
        let mut ok = vec![vec![false; n + 1]; m + 1];
        for i in 0..=m {
            for j in 0..=n {
                if i == 0 && j == 0 {
                    ok[0][0] = self.index.contains_key(&pu_inv[0].mul(&pv[0]).unwrap());
                    continue;
                }
                let from_left = i > 0 && ok[i - 1][j];
                let from_right = j > 0 && ok[i][j - 1];
                if !(from_left || from_right) {
                    continue;
                }
                let w = pu_inv[i].mul(&pv[j]).unwrap();
                ok[i][j] = self.index.contains_key(&w);
            }
        }
        if !ok[m][n] {
            return false;
        }
        pu_inv[m].mul(&pv[n]).unwrap().is_identity()
    }

    fn prefix_products(&self, word: &SWord) -> Vec<ReducedWord> {
        let mut out = Vec::with_capacity(word.len() + 1);
        let mut acc = ReducedWord::identity(self.rank);
        out.push(acc.clone());
        for i in word.iter() {
            acc = acc
                .mul(&self.generators[i as usize])
                .expect("generator ranks match");
            out.push(acc.clone());
        }
        out
    }

    /// The accepted relation restricted to components of length at most `n`:
    /// `π(L(Γ)) ∩ (S^{≤n} × S^{≤n})`, in shortlex-pair order.
    pub fn accepted_pairs(&self, n: usize, budget: usize) -> Result<Vec<(SWord, SWord)>> {
        let k = self.generators.len();
        // Words in shortlex order with parent pointers.
        let mut words: Vec<SWord> = vec![SWord::empty()];
        let mut parent: Vec<usize> = vec![0];
        let mut layer_start = 0usize;
        for _ in 0..n {
            let layer_end = words.len();
            for wi in layer_start..layer_end {
                for g in 0..k as u16 {
                    let mut ext = words[wi].clone();
                    ext.0.push(g);
                    words.push(ext);
                    parent.push(wi);
                }
            }
            layer_start = layer_end;
        }
        let total = words.len();
        if total > budget {
            return Err(Error::limit("enumerated words", total, budget));
        }
        let alphas: Vec<ReducedWord> = words
            .iter()
            .map(|w| {
                let mut acc = ReducedWord::identity(self.rank);
                for i in w.iter() {
                    acc = acc.mul(&self.generators[i as usize]).unwrap();
                }
                acc
            })
            .collect();
        let alpha_invs: Vec<ReducedWord> = alphas.iter().map(|a| a.inverse()).collect();
        let mut ok = vec![false; total * total];
        let mut out = Vec::new();
        for ui in 0..total {
            for vi in 0..total {
                let reachable = if ui == 0 && vi == 0 {
                    true
                } else {
                    (ui > 0 && ok[parent[ui] * total + vi])
                        || (vi > 0 && ok[ui * total + parent[vi]])
                };
                if !reachable {
                    continue;
                }
                let w = alpha_invs[ui].mul(&alphas[vi]).unwrap();
                if let Some(&vertex) = self.index.get(&w) {
                    ok[ui * total + vi] = true;
                    if vertex == self.basepoint {
                        out.push((words[ui].clone(), words[vi].clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// View as a generic pair-word automaton (used by the normal-form and
    /// homomorphism machinery).
    pub fn to_pair_nfa(&self) -> Nfa<PairLetter> {
        let mut nfa = Nfa::with_states(self.vertices.len() as u32);
        nfa.initials.insert(self.basepoint);
        nfa.finals.insert(self.basepoint);
        for v in 0..self.vertices.len() as u32 {
            for x in self.letters() {
                if let Some(t) = self.edge(v, x) {
                    nfa.add_trans(v, x, t);
                }
            }
        }
        nfa
    }
}

fn build_from_vertices(
    generators: Vec<ReducedWord>,
    rank: u8,
    cutoff: usize,
    certified: bool,
    vertices: Vec<ReducedWord>,
) -> RelationAutomaton {
    let index: HashMap<ReducedWord, u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i as u32))
        .collect();
    let basepoint = *index
        .get(&ReducedWord::identity(rank))
        .expect("the identity is always a vertex");
    let mut gamma = RelationAutomaton {
        generators,
        rank,
        cutoff,
        certified,
        vertices,
        index,
        edges: Vec::new(),
        basepoint,
    };
    let code_count = 2 * gamma.generators.len();
    let mut edges = vec![vec![None; code_count]; gamma.vertices.len()];
    for (v, g) in gamma.vertices.iter().enumerate() {
        for x in gamma.letters() {
            let target = gamma.apply(g, x);
            edges[v][letter_code(gamma.generators.len(), x)] =
                gamma.index.get(&target).copied();
        }
    }
    gamma.edges = edges;
    gamma
}

/// Builds `Γ^cutoff`: vertices are the elements of `M⁻¹M` within the ball,
/// with every induced edge present.
pub fn build_gamma(
    spec: &SubmonoidSpec,
    cutoff: usize,
    budget: &Budget,
) -> Result<RelationAutomaton> {
    let universe = m_inv_m(spec, budget.states)?;
    let vertices = universe.elements_up_to(cutoff, budget.ball)?;
    if vertices.len() > budget.states {
        return Err(Error::limit(
            "relation automaton vertices",
            vertices.len(),
            budget.states,
        ));
    }
    Ok(build_from_vertices(
        spec.generators().to_vec(),
        spec.rank(),
        cutoff,
        false,
        vertices,
    ))
}

/// The certified cutoff `⌈C_wp⌉` from the constants chain. Rejects
/// non-graded specs; reports the offending `ζ` argument when the constants
/// are out of budget.
pub fn certified_cutoff(spec: &SubmonoidSpec, budget: &Budget) -> Result<usize> {
    let consts = crate::geometry::constants(spec, budget)?;
    match consts.c_wp {
        Some(c) => Ok(c.ceil().to_integer().to_usize().unwrap_or(usize::MAX)),
        None => Err(Error::ResourceLimit {
            what: consts
                .c_wp_obstruction
                .unwrap_or_else(|| "certified cutoff".to_string()),
            used: 0,
            budget: budget.ball,
        }),
    }
}

/// Builds the certified automaton `Γ^{⌈C_wp⌉}` whose accepted relation is
/// exactly the word problem.
pub fn build_certified(spec: &SubmonoidSpec, budget: &Budget) -> Result<RelationAutomaton> {
    let cutoff = certified_cutoff(spec, budget)?;
    let mut gamma = build_gamma(spec, cutoff, budget)?;
    gamma.certified = true;
    Ok(gamma)
}

/// Ground truth for the word problem: free reduction of both evaluations.
pub fn wp_exact(spec: &SubmonoidSpec, u: &SWord, v: &SWord) -> bool {
    spec.alpha(u) == spec.alpha(v)
}

/// Brute-force word-problem relation at bounded length, via grouping words
/// by their evaluations. Returns shortlex-ordered pairs.
pub fn brute_force_relation(
    spec: &SubmonoidSpec,
    max_len: usize,
    budget: usize,
) -> Result<Vec<(SWord, SWord)>> {
    let classes = crate::preimage::alpha_classes(spec, max_len, budget)?;
    let mut out = Vec::new();
    for words in classes.values() {
        for u in words {
            for v in words {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out.sort_by(|a, b| a.0.shortlex_cmp(&b.0).then_with(|| a.1.shortlex_cmp(&b.1)));
    Ok(out)
}
