//! Lex-minimal normal forms: the regular cross-section `B` and the
//! description transducer.
//!
//! Fix a total order on the generators and order `S*` by the dictionary
//! order (proper prefixes first). For a graded monoid every class
//! `α⁻¹α(u)` is finite, so it has a minimum `β(u)`; the map `β` is a
//! normal form. `B = β(S*)` is obtained from the relation automaton as a
//! complement: a word `v` is *not* minimal exactly when some accepted pair
//! word witnesses a smaller partner, i.e. lies in `Z*·R` where
//!
//! - `Z` consists of the balanced two-letter blocks `(x,1)(1,x)` and
//!   `(1,x)(x,1)` (spelling a common prefix on both tracks), and
//! - `R` starts the divergence: `(x,1) t₁ (1,x') y` or `(1,x') t₂ (x,1) y`
//!   with `x < x'`, `t₁` a run of left letters, `t₂` a run of right
//!   letters, and `y` arbitrary.
//!
//! The run lengths are bounded by the vertex count of the (trim) relation
//! automaton: a longer run would revisit a vertex and pump a one-sided
//! loop, contradicting gradedness. The construction therefore checks that
//! the one-sided subgraphs are acyclic and then leaves the runs unbounded,
//! which accepts the same language as bounded runs. `B` is the complement
//! of the second projection of `L(Γ) ∩ Z*R`; the transducer for
//! `{(u, β(u))}` is the product of `Γ` with the `B`-automaton on the second
//! track. With a certified `Γ` these machines are exact; with an adaptive
//! cutoff they are exact relative to the supplied automaton.

use std::collections::{HashMap, VecDeque};

use crate::error::{Budget, Error, Result};
use crate::nfa::{Dfa, Nfa};
use crate::preimage::preimage_grammar;
use crate::relation::{PairLetter, RelationAutomaton, Side};
use crate::submonoid::{SWord, SubmonoidSpec};

/// A finite automaton over the pair alphabet, denoting a rational relation
/// on `S* × S*` via the two projections.
#[derive(Clone, Debug)]
pub struct PairWordAutomaton {
    pub nfa: Nfa<PairLetter>,
    pub num_gens: usize,
}

impl PairWordAutomaton {
    /// Whether the pair `(u, v)` is accepted: some interleaving of the two
    /// tracks labels a successful path.
    pub fn accepts_pair(&self, u: &SWord, v: &SWord) -> bool {
        let mut reach: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
        let init: Vec<u32> = self.nfa.initials.iter().copied().collect();
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        reach.insert((0, 0), init);
        while let Some((i, j)) = queue.pop_front() {
            let states = reach[&(i, j)].clone();
            if i == u.len()
                && j == v.len()
                && states.iter().any(|q| self.nfa.finals.contains(q))
            {
                return true;
            }
            let mut push = |key: (usize, usize), next: Vec<u32>, queue: &mut VecDeque<_>| {
                if next.is_empty() {
                    return;
                }
                let entry = reach.entry(key).or_default();
                let before = entry.len();
                for q in next {
                    if !entry.contains(&q) {
                        entry.push(q);
                    }
                }
                if entry.len() != before || before == 0 {
                    queue.push_back(key);
                }
            };
            if i < u.len() {
                let mut next = Vec::new();
                for &q in &states {
                    for (l, r) in self.nfa.trans_from(q) {
                        if l == PairLetter::left(u.0[i]) {
                            next.push(r);
                        }
                    }
                }
                push((i + 1, j), next, &mut queue);
            }
            if j < v.len() {
                let mut next = Vec::new();
                for &q in &states {
                    for (l, r) in self.nfa.trans_from(q) {
                        if l == PairLetter::right(v.0[j]) {
                            next.push(r);
                        }
                    }
                }
                push((i, j + 1), next, &mut queue);
            }
        }
        false
    }
}

/// The minimal-representative language `B` as a minimal DFA over generator
/// indices, with the data it was derived from.
#[derive(Clone, Debug)]
pub struct MinimalLanguage {
    pub dfa: Dfa<u16>,
    pub num_gens: usize,
    /// `order[i]` is the rank of generator `i` in the chosen total order.
    pub order_rank: Vec<usize>,
    /// Vertex count of the relation automaton the construction used.
    pub source_vertices: usize,
    /// Inherited from the relation automaton.
    pub certified: bool,
}

impl MinimalLanguage {
    pub fn contains(&self, word: &SWord) -> bool {
        self.dfa.accepts(&word.0)
    }
}

/// Validates an order given as a permutation of the generator indices and
/// returns the rank array.
pub fn order_ranks(num_gens: usize, order: &[u16]) -> Result<Vec<usize>> {
    if order.len() != num_gens {
        return Err(Error::Parse(format!(
            "order must list all {num_gens} generators"
        )));
    }
    let mut rank = vec![usize::MAX; num_gens];
    for (pos, &g) in order.iter().enumerate() {
        if (g as usize) >= num_gens || rank[g as usize] != usize::MAX {
            return Err(Error::Parse("order is not a permutation".to_string()));
        }
        rank[g as usize] = pos;
    }
    Ok(rank)
}

/// The input order of the generators.
pub fn default_order(num_gens: usize) -> Vec<u16> {
    (0..num_gens as u16).collect()
}

fn check_one_sided_acyclic(gamma: &RelationAutomaton, side: Side) -> Result<()> {
    let n = gamma.num_vertices();
    let k = gamma.num_gens() as u16;
    let scc = crate::nfa::strongly_connected_components(n, |v| {
        let mut succ = Vec::new();
        for g in 0..k {
            let x = match side {
                Side::Left => PairLetter::left(g),
                Side::Right => PairLetter::right(g),
            };
            if let Some(t) = gamma.edge(v as u32, x) {
                succ.push(t as usize);
            }
        }
        succ
    });
    for v in 0..n {
        for g in 0..k {
            let x = match side {
                Side::Left => PairLetter::left(g),
                Side::Right => PairLetter::right(g),
            };
            if let Some(t) = gamma.edge(v as u32, x) {
                if scc[v] == scc[t as usize] {
                    // A one-sided loop spells a nonempty relation with an
                    // empty partner, so some preimage is infinite.
                    return Err(Error::NotGraded { witness: None });
                }
            }
        }
    }
    Ok(())
}

// Phase layout for the Z*R pattern tracker.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Phase {
    /// At a block boundary of `Z*`.
    Balanced,
    /// Inside a `Z` block `(x,1)(1,x)`, owing the right copy.
    OweRight(u16),
    /// Inside a `Z` block `(1,x)(x,1)`, owing the left copy.
    OweLeft(u16),
    /// In `R`'s first branch after `(x,1)`, reading `t₁`.
    LeftRun(u16),
    /// In `R`'s second branch after `(1,x')`, reading `t₂`.
    RightRun(u16),
    /// Past the divergence; the tail is unconstrained.
    Tail,
}

/// Builds the minimal DFA for `B = S* ∖ π₂(L(Γ) ∩ Z*R)`.
pub fn minimal_language(
    gamma: &RelationAutomaton,
    order: &[u16],
    budget: &Budget,
) -> Result<MinimalLanguage> {
    let gamma = gamma.trim();
    let rank = order_ranks(gamma.num_gens(), order)?;
    check_one_sided_acyclic(&gamma, Side::Left)?;
    check_one_sided_acyclic(&gamma, Side::Right)?;

    let k = gamma.num_gens() as u16;
    // NFA over generator indices for π₂(L ∩ Z*R): left letters of the pair
    // word are ε-moves, right letters consume their generator.
    let mut nfa: Nfa<u16> = Nfa::new();
    let mut ids: HashMap<(u32, Phase), u32> = HashMap::new();
    let mut queue: VecDeque<(u32, Phase)> = VecDeque::new();
    let intern = |v: u32,
                      ph: Phase,
                      nfa: &mut Nfa<u16>,
                      ids: &mut HashMap<(u32, Phase), u32>,
                      queue: &mut VecDeque<(u32, Phase)>|
     -> Result<u32> {
        if let Some(&id) = ids.get(&(v, ph)) {
            return Ok(id);
        }
        let id = nfa.add_state();
        if nfa.num_states() as usize > budget.states {
            return Err(Error::limit(
                "pattern automaton states",
                nfa.num_states() as usize,
                budget.states,
            ));
        }
        ids.insert((v, ph), id);
        queue.push_back((v, ph));
        Ok(id)
    };

    let start = intern(gamma.basepoint(), Phase::Balanced, &mut nfa, &mut ids, &mut queue)?;
    nfa.initials.insert(start);
    while let Some((v, ph)) = queue.pop_front() {
        let id = ids[&(v, ph)];
        if v == gamma.basepoint() && ph == Phase::Tail {
            nfa.finals.insert(id);
        }
        match ph {
            Phase::Balanced => {
                for g in 0..k {
                    if let Some(t) = gamma.edge(v, PairLetter::left(g)) {
                        let owe = intern(t, Phase::OweRight(g), &mut nfa, &mut ids, &mut queue)?;
                        nfa.add_eps(id, owe);
                        let run = intern(t, Phase::LeftRun(g), &mut nfa, &mut ids, &mut queue)?;
                        nfa.add_eps(id, run);
                    }
                    if let Some(t) = gamma.edge(v, PairLetter::right(g)) {
                        let owe = intern(t, Phase::OweLeft(g), &mut nfa, &mut ids, &mut queue)?;
                        nfa.add_trans(id, g, owe);
                        let run = intern(t, Phase::RightRun(g), &mut nfa, &mut ids, &mut queue)?;
                        nfa.add_trans(id, g, run);
                    }
                }
            }
            Phase::OweRight(g) => {
                if let Some(t) = gamma.edge(v, PairLetter::right(g)) {
                    let back = intern(t, Phase::Balanced, &mut nfa, &mut ids, &mut queue)?;
                    nfa.add_trans(id, g, back);
                }
            }
            Phase::OweLeft(g) => {
                if let Some(t) = gamma.edge(v, PairLetter::left(g)) {
                    let back = intern(t, Phase::Balanced, &mut nfa, &mut ids, &mut queue)?;
                    nfa.add_eps(id, back);
                }
            }
            Phase::LeftRun(x) => {
                for g in 0..k {
                    if let Some(t) = gamma.edge(v, PairLetter::left(g)) {
                        let run = intern(t, Phase::LeftRun(x), &mut nfa, &mut ids, &mut queue)?;
                        nfa.add_eps(id, run);
                    }
                    if rank[g as usize] > rank[x as usize] {
                        if let Some(t) = gamma.edge(v, PairLetter::right(g)) {
                            let tail = intern(t, Phase::Tail, &mut nfa, &mut ids, &mut queue)?;
                            nfa.add_trans(id, g, tail);
                        }
                    }
                }
            }
            Phase::RightRun(xp) => {
                for g in 0..k {
                    if let Some(t) = gamma.edge(v, PairLetter::right(g)) {
                        let run = intern(t, Phase::RightRun(xp), &mut nfa, &mut ids, &mut queue)?;
                        nfa.add_trans(id, g, run);
                    }
                    if rank[g as usize] < rank[xp as usize] {
                        if let Some(t) = gamma.edge(v, PairLetter::left(g)) {
                            let tail = intern(t, Phase::Tail, &mut nfa, &mut ids, &mut queue)?;
                            nfa.add_eps(id, tail);
                        }
                    }
                }
            }
            Phase::Tail => {
                for g in 0..k {
                    if let Some(t) = gamma.edge(v, PairLetter::left(g)) {
                        let tail = intern(t, Phase::Tail, &mut nfa, &mut ids, &mut queue)?;
                        nfa.add_eps(id, tail);
                    }
                    if let Some(t) = gamma.edge(v, PairLetter::right(g)) {
                        let tail = intern(t, Phase::Tail, &mut nfa, &mut ids, &mut queue)?;
                        nfa.add_trans(id, g, tail);
                    }
                }
            }
        }
    }

    let (trimmed, _) = nfa.trim();
    let alphabet: Vec<u16> = (0..k).collect();
    let dfa = trimmed.determinize(&alphabet, budget.states)?;
    let b_dfa = dfa.complement().minimize();
    Ok(MinimalLanguage {
        dfa: b_dfa,
        num_gens: gamma.num_gens(),
        order_rank: rank,
        source_vertices: gamma.num_vertices(),
        certified: gamma.certified,
    })
}

/// The description transducer: accepts exactly the pairs `(u, β(u))`
/// (relative to the supplied relation automaton), as the product of `Γ`
/// with the `B`-automaton on the second track.
#[derive(Clone, Debug)]
pub struct DescriptionTransducer {
    pub pairs: PairWordAutomaton,
    pub minimal: MinimalLanguage,
    pub certified: bool,
}

pub fn description(
    gamma: &RelationAutomaton,
    minimal: &MinimalLanguage,
    budget: &Budget,
) -> Result<DescriptionTransducer> {
    let gamma = gamma.trim();
    let k = gamma.num_gens() as u16;
    let b = minimal.dfa.complete();
    let mut nfa: Nfa<PairLetter> = Nfa::new();
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut queue: VecDeque<(u32, u32)> = VecDeque::new();
    let s0 = (gamma.basepoint(), b.initial);
    let first = nfa.add_state();
    ids.insert(s0, first);
    nfa.initials.insert(first);
    queue.push_back(s0);
    while let Some((v, bq)) = queue.pop_front() {
        let id = ids[&(v, bq)];
        if v == gamma.basepoint() && b.finals[bq as usize] {
            nfa.finals.insert(id);
        }
        for g in 0..k {
            if let Some(t) = gamma.edge(v, PairLetter::left(g)) {
                let key = (t, bq);
                let nid = match ids.get(&key) {
                    Some(&nid) => nid,
                    None => {
                        let nid = nfa.add_state();
                        if nfa.num_states() as usize > budget.states {
                            return Err(Error::limit(
                                "transducer states",
                                nfa.num_states() as usize,
                                budget.states,
                            ));
                        }
                        ids.insert(key, nid);
                        queue.push_back(key);
                        nid
                    }
                };
                nfa.add_trans(id, PairLetter::left(g), nid);
            }
            if let Some(t) = gamma.edge(v, PairLetter::right(g)) {
                if let Some(bt) = b.trans[bq as usize][g as usize] {
                    let key = (t, bt);
                    let nid = match ids.get(&key) {
                        Some(&nid) => nid,
                        None => {
                            let nid = nfa.add_state();
                            if nfa.num_states() as usize > budget.states {
                                return Err(Error::limit(
                                    "transducer states",
                                    nfa.num_states() as usize,
                                    budget.states,
                                ));
                            }
                            ids.insert(key, nid);
                            queue.push_back(key);
                            nid
                        }
                    };
                    nfa.add_trans(id, PairLetter::right(g), nid);
                }
            }
        }
    }
    let (trimmed, _) = nfa.trim();
    Ok(DescriptionTransducer {
        pairs: PairWordAutomaton {
            nfa: trimmed,
            num_gens: gamma.num_gens(),
        },
        minimal: minimal.clone(),
        certified: gamma.certified,
    })
}

impl DescriptionTransducer {
    /// Runs the transducer on `u`: searches for an accepting interleaving
    /// whose left track spells `u` and returns the right track.
    pub fn normalize(&self, u: &SWord) -> Result<SWord> {
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        struct Node(usize, u32);
        let nfa = &self.pairs.nfa;
        let mut parent: HashMap<Node, (Node, Option<u16>)> = HashMap::new();
        let mut queue: VecDeque<Node> = VecDeque::new();
        for &q in &nfa.initials {
            let node = Node(0, q);
            parent.insert(node, (node, None));
            queue.push_back(node);
        }
        let mut accept: Option<Node> = None;
        while let Some(node) = queue.pop_front() {
            let Node(i, q) = node;
            if i == u.len() && nfa.finals.contains(&q) {
                accept = Some(node);
                break;
            }
            for (l, r) in nfa.trans_from(q) {
                let (next, emit) = match l.side {
                    Side::Left => {
                        if u.0.get(i) != Some(&l.gen) {
                            continue;
                        }
                        (Node(i + 1, r), None)
                    }
                    Side::Right => (Node(i, r), Some(l.gen)),
                };
                if !parent.contains_key(&next) {
                    parent.insert(next, (node, emit));
                    queue.push_back(next);
                }
            }
        }
        let Some(mut node) = accept else {
            return Err(Error::ResourceLimit {
                what: format!(
                    "description transducer path for input of length {} (cutoff too small)",
                    u.len()
                ),
                used: 0,
                budget: 0,
            });
        };
        let mut emitted = Vec::new();
        loop {
            let (prev, emit) = parent[&node];
            if let Some(g) = emit {
                emitted.push(g);
            }
            if prev == node {
                break;
            }
            node = prev;
        }
        emitted.reverse();
        Ok(SWord(emitted))
    }
}

/// Lex-minimum of the finite class `α⁻¹α(u)`, computed by enumeration.
/// The independent oracle for the transducer route.
pub fn normalize_oracle(
    spec: &SubmonoidSpec,
    u: &SWord,
    order: &[u16],
    budget: &Budget,
) -> Result<SWord> {
    let rank = order_ranks(spec.len(), order)?;
    let g = spec.alpha(u);
    let grammar = preimage_grammar(spec, &g, budget.grammar)?;
    if !grammar.is_finite() {
        return Err(Error::InfinitePreimage(g.to_string()));
    }
    let horizon = grammar.longest_word()?;
    let class = grammar.enumerate(horizon, budget.ball)?;
    class
        .into_iter()
        .min_by_key(|w| w.iter().map(|g| rank[g as usize]).collect::<Vec<_>>())
        .ok_or(Error::EmptyLanguage)
}

/// Bundles the machines for repeated normalization against one automaton.
pub struct Normalizer {
    pub transducer: DescriptionTransducer,
}

impl Normalizer {
    pub fn new(gamma: &RelationAutomaton, order: &[u16], budget: &Budget) -> Result<Normalizer> {
        let minimal = minimal_language(gamma, order, budget)?;
        let transducer = description(gamma, &minimal, budget)?;
        Ok(Normalizer { transducer })
    }

    pub fn normalize(&self, u: &SWord) -> Result<SWord> {
        self.transducer.normalize(u)
    }

    pub fn minimal(&self) -> &MinimalLanguage {
        &self.transducer.minimal
    }
}
