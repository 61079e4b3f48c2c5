//! Small nondeterministic-automaton toolkit shared by the rational-set
//! calculus and the pair-word constructions: ε-closures, trimming, products,
//! subset-construction determinization and DFA minimization.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

use crate::error::{Error, Result};

pub type StateId = u32;

/// A nondeterministic finite automaton with ε-moves over labels of type `L`.
#[derive(Clone, Debug)]
pub struct Nfa<L> {
    num_states: u32,
    pub initials: BTreeSet<StateId>,
    pub finals: BTreeSet<StateId>,
    eps: Vec<BTreeSet<StateId>>,
    trans: Vec<BTreeSet<(L, StateId)>>,
}

impl<L: Copy + Ord + Hash> Nfa<L> {
    pub fn new() -> Self {
        Nfa {
            num_states: 0,
            initials: BTreeSet::new(),
            finals: BTreeSet::new(),
            eps: Vec::new(),
            trans: Vec::new(),
        }
    }

    pub fn with_states(n: u32) -> Self {
        Nfa {
            num_states: n,
            initials: BTreeSet::new(),
            finals: BTreeSet::new(),
            eps: vec![BTreeSet::new(); n as usize],
            trans: vec![BTreeSet::new(); n as usize],
        }
    }

    pub fn add_state(&mut self) -> StateId {
        let id = self.num_states;
        self.num_states += 1;
        self.eps.push(BTreeSet::new());
        self.trans.push(BTreeSet::new());
        id
    }

    pub fn num_states(&self) -> u32 {
        self.num_states
    }

    pub fn add_eps(&mut self, from: StateId, to: StateId) -> bool {
        self.eps[from as usize].insert(to)
    }

    pub fn add_trans(&mut self, from: StateId, label: L, to: StateId) -> bool {
        self.trans[from as usize].insert((label, to))
    }

    pub fn eps_from(&self, q: StateId) -> impl Iterator<Item = StateId> + '_ {
        self.eps[q as usize].iter().copied()
    }

    pub fn trans_from(&self, q: StateId) -> impl Iterator<Item = (L, StateId)> + '_ {
        self.trans[q as usize].iter().copied()
    }

    pub fn num_eps(&self) -> usize {
        self.eps.iter().map(|s| s.len()).sum()
    }

    pub fn num_trans(&self) -> usize {
        self.trans.iter().map(|s| s.len()).sum()
    }

    /// All labels that occur on some transition.
    pub fn labels(&self) -> BTreeSet<L> {
        self.trans
            .iter()
            .flat_map(|s| s.iter().map(|&(l, _)| l))
            .collect()
    }

    /// ε-closure of a set of states, as a sorted vector.
    pub fn eps_closure(&self, seed: impl IntoIterator<Item = StateId>) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states as usize];
        let mut stack: Vec<StateId> = Vec::new();
        for q in seed {
            if !seen[q as usize] {
                seen[q as usize] = true;
                stack.push(q);
            }
        }
        let mut i = 0;
        while i < stack.len() {
            let q = stack[i];
            i += 1;
            for r in self.eps_from(q) {
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    stack.push(r);
                }
            }
        }
        stack.sort_unstable();
        stack
    }

    /// One simulation step: ε-closure of the `label`-successors of `set`.
    pub fn step(&self, set: &[StateId], label: L) -> Vec<StateId> {
        let mut next = BTreeSet::new();
        for &q in set {
            for (l, r) in self.trans_from(q) {
                if l == label {
                    next.insert(r);
                }
            }
        }
        self.eps_closure(next)
    }

    pub fn accepts(&self, word: &[L]) -> bool {
        let mut cur = self.eps_closure(self.initials.iter().copied());
        for &l in word {
            cur = self.step(&cur, l);
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|q| self.finals.contains(q))
    }

    fn forward_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states as usize];
        let mut queue: VecDeque<StateId> = self.initials.iter().copied().collect();
        for &q in &self.initials {
            seen[q as usize] = true;
        }
        while let Some(q) = queue.pop_front() {
            for r in self
                .eps_from(q)
                .chain(self.trans_from(q).map(|(_, r)| r))
            {
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    fn backward_reachable(&self) -> Vec<bool> {
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); self.num_states as usize];
        for q in 0..self.num_states {
            for r in self.eps_from(q).chain(self.trans_from(q).map(|(_, r)| r)) {
                rev[r as usize].push(q);
            }
        }
        let mut seen = vec![false; self.num_states as usize];
        let mut queue: VecDeque<StateId> = self.finals.iter().copied().collect();
        for &q in &self.finals {
            seen[q as usize] = true;
        }
        while let Some(q) = queue.pop_front() {
            for &r in &rev[q as usize] {
                if !seen[r as usize] {
                    seen[r as usize] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// Restricts to states that lie on some successful path. Returns the
    /// trimmed automaton and, for each old state, its new id.
    pub fn trim(&self) -> (Nfa<L>, Vec<Option<StateId>>) {
        let fwd = self.forward_reachable();
        let bwd = self.backward_reachable();
        let mut map = vec![None; self.num_states as usize];
        let mut out = Nfa::new();
        for q in 0..self.num_states as usize {
            if fwd[q] && bwd[q] {
                map[q] = Some(out.add_state());
            }
        }
        for q in 0..self.num_states as usize {
            let Some(nq) = map[q] else { continue };
            for r in self.eps_from(q as StateId) {
                if let Some(nr) = map[r as usize] {
                    out.add_eps(nq, nr);
                }
            }
            for (l, r) in self.trans_from(q as StateId) {
                if let Some(nr) = map[r as usize] {
                    out.add_trans(nq, l, nr);
                }
            }
        }
        for &q in &self.initials {
            if let Some(nq) = map[q as usize] {
                out.initials.insert(nq);
            }
        }
        for &q in &self.finals {
            if let Some(nq) = map[q as usize] {
                out.finals.insert(nq);
            }
        }
        (out, map)
    }

    pub fn is_empty_language(&self) -> bool {
        let fwd = self.forward_reachable();
        !self.finals.iter().any(|&q| fwd[q as usize])
    }

    /// Whether the accepted language is finite: a trim automaton accepts an
    /// infinite language iff it has a labeled cycle through a useful state.
    pub fn is_finite_language(&self) -> bool {
        let (trim, _) = self.trim();
        // DFS cycle detection over both ε and labeled edges: a cycle of pure
        // ε edges never pumps a word, so only count cycles containing at
        // least one labeled edge. Track, per DFS frontier, whether a labeled
        // edge was crossed since entering each ancestor. Simplest exact
        // criterion: contract ε-SCCs first, then look for any cycle that
        // uses a labeled edge. A labeled edge inside an ε-closure loop pumps.
        //
        // Implementation: build the graph on ε-closures: edge q -> r with
        // "weight 1" for labeled transitions, then detect a reachable cycle
        // of positive weight, which here reduces to: some labeled edge (q, r)
        // with r ⇒ε*·(edges)* q again. Use Tarjan-free approach: any cycle in
        // the combined graph that contains a labeled edge.
        let n = trim.num_states as usize;
        if n == 0 {
            return true;
        }
        // Strongly connected components of the combined graph.
        let scc = strongly_connected_components(n, |q| {
            trim.eps_from(q as StateId)
                .chain(trim.trans_from(q as StateId).map(|(_, r)| r))
                .map(|r| r as usize)
                .collect::<Vec<_>>()
        });
        // Infinite iff some labeled edge stays within one SCC.
        for q in 0..n {
            for (_, r) in trim.trans_from(q as StateId) {
                if scc[q] == scc[r as usize] {
                    return false;
                }
            }
        }
        true
    }

    /// Renames labels, keeping `None` results as ε-moves (projection).
    pub fn map_labels<M: Copy + Ord + Hash>(&self, f: impl Fn(L) -> Option<M>) -> Nfa<M> {
        let mut out = Nfa::with_states(self.num_states);
        out.initials = self.initials.clone();
        out.finals = self.finals.clone();
        for q in 0..self.num_states {
            for r in self.eps_from(q) {
                out.add_eps(q, r);
            }
            for (l, r) in self.trans_from(q) {
                match f(l) {
                    Some(m) => {
                        out.add_trans(q, m, r);
                    }
                    None => {
                        out.add_eps(q, r);
                    }
                }
            }
        }
        out
    }

    /// Reverses every edge and swaps initial/final states.
    pub fn reverse(&self) -> Nfa<L> {
        let mut out = Nfa::with_states(self.num_states);
        out.initials = self.finals.clone();
        out.finals = self.initials.clone();
        for q in 0..self.num_states {
            for r in self.eps_from(q) {
                out.add_eps(r, q);
            }
            for (l, r) in self.trans_from(q) {
                out.add_trans(r, l, q);
            }
        }
        out
    }

    /// Disjoint union; accepts the union of the two languages.
    pub fn union(&self, other: &Nfa<L>) -> Nfa<L> {
        let mut out = self.clone();
        let offset = out.num_states;
        for _ in 0..other.num_states {
            out.add_state();
        }
        for q in 0..other.num_states {
            for r in other.eps_from(q) {
                out.add_eps(q + offset, r + offset);
            }
            for (l, r) in other.trans_from(q) {
                out.add_trans(q + offset, l, r + offset);
            }
        }
        for &q in &other.initials {
            out.initials.insert(q + offset);
        }
        for &q in &other.finals {
            out.finals.insert(q + offset);
        }
        out
    }

    /// Concatenation: ε-edges from the finals of `self` into the initials of
    /// `other`.
    pub fn concat(&self, other: &Nfa<L>) -> Nfa<L> {
        let mut out = self.clone();
        let offset = out.num_states;
        for _ in 0..other.num_states {
            out.add_state();
        }
        for q in 0..other.num_states {
            for r in other.eps_from(q) {
                out.add_eps(q + offset, r + offset);
            }
            for (l, r) in other.trans_from(q) {
                out.add_trans(q + offset, l, r + offset);
            }
        }
        let finals = std::mem::take(&mut out.finals);
        for &f in &finals {
            for &i in &other.initials {
                out.add_eps(f, i + offset);
            }
        }
        for &q in &other.finals {
            out.finals.insert(q + offset);
        }
        out
    }

    /// Kleene star via a fresh initial-and-final hub state.
    pub fn star(&self) -> Nfa<L> {
        let mut out = self.clone();
        let hub = out.add_state();
        for &i in &out.initials.clone() {
            out.add_eps(hub, i);
        }
        for &f in &out.finals.clone() {
            out.add_eps(f, hub);
        }
        out.initials = BTreeSet::from([hub]);
        out.finals = BTreeSet::from([hub]);
        out
    }

    /// Product automaton accepting the intersection. Both inputs must be
    /// ε-free; the result is ε-free and reachable-only.
    pub fn intersect(&self, other: &Nfa<L>, budget: usize) -> Result<Nfa<L>> {
        assert_eq!(self.num_eps(), 0, "intersect requires eps-free input");
        assert_eq!(other.num_eps(), 0, "intersect requires eps-free input");
        let mut out = Nfa::new();
        let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut queue = VecDeque::new();
        for &p in &self.initials {
            for &q in &other.initials {
                let id = out.add_state();
                index.insert((p, q), id);
                out.initials.insert(id);
                queue.push_back((p, q));
            }
        }
        while let Some((p, q)) = queue.pop_front() {
            let id = index[&(p, q)];
            if self.finals.contains(&p) && other.finals.contains(&q) {
                out.finals.insert(id);
            }
            for (l, p2) in self.trans_from(p) {
                for (l2, q2) in other.trans_from(q) {
                    if l2 == l {
                        let nid = *index.entry((p2, q2)).or_insert_with(|| {
                            queue.push_back((p2, q2));
                            out.add_state()
                        });
                        out.add_trans(id, l, nid);
                    }
                }
            }
            if out.num_states as usize > budget {
                return Err(Error::limit(
                    "product automaton states",
                    out.num_states as usize,
                    budget,
                ));
            }
        }
        Ok(out)
    }

    /// Subset construction over the given alphabet. Labels outside the
    /// alphabet must not occur.
    pub fn determinize(&self, alphabet: &[L], budget: usize) -> Result<Dfa<L>> {
        let start = self.eps_closure(self.initials.iter().copied());
        let mut index: HashMap<Vec<StateId>, u32> = HashMap::new();
        let mut subsets: Vec<Vec<StateId>> = Vec::new();
        let mut dfa = Dfa {
            alphabet: alphabet.to_vec(),
            trans: Vec::new(),
            finals: Vec::new(),
            initial: 0,
        };
        index.insert(start.clone(), 0);
        subsets.push(start);
        dfa.trans.push(vec![None; alphabet.len()]);
        dfa.finals.push(false);
        let mut next = 0usize;
        while next < subsets.len() {
            let subset = subsets[next].clone();
            dfa.finals[next] = subset.iter().any(|q| self.finals.contains(q));
            for (ai, &label) in alphabet.iter().enumerate() {
                let target = self.step(&subset, label);
                if target.is_empty() {
                    continue;
                }
                let id = match index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as u32;
                        if subsets.len() + 1 > budget {
                            return Err(Error::limit(
                                "determinization states",
                                subsets.len() + 1,
                                budget,
                            ));
                        }
                        index.insert(target.clone(), id);
                        subsets.push(target);
                        dfa.trans.push(vec![None; alphabet.len()]);
                        dfa.finals.push(false);
                        id
                    }
                };
                dfa.trans[next][ai] = Some(id);
            }
            next += 1;
        }
        Ok(dfa)
    }
}

impl<L: Copy + Ord + Hash> Default for Nfa<L> {
    fn default() -> Self {
        Nfa::new()
    }
}

/// A deterministic automaton over a dense alphabet; possibly incomplete
/// (missing transitions go to an implicit dead state).
#[derive(Clone, Debug)]
pub struct Dfa<L> {
    pub alphabet: Vec<L>,
    pub trans: Vec<Vec<Option<u32>>>,
    pub finals: Vec<bool>,
    pub initial: u32,
}

impl<L: Copy + Ord + Hash> Dfa<L> {
    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn step(&self, state: u32, label: L) -> Option<u32> {
        let ai = self.alphabet.iter().position(|&l| l == label)?;
        self.trans[state as usize][ai]
    }

    pub fn accepts(&self, word: &[L]) -> bool {
        let mut q = self.initial;
        for &l in word {
            match self.step(q, l) {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.finals[q as usize]
    }

    /// Adds an explicit dead state so every transition is defined.
    pub fn complete(&self) -> Dfa<L> {
        let mut out = self.clone();
        if out
            .trans
            .iter()
            .all(|row| row.iter().all(|t| t.is_some()))
        {
            return out;
        }
        let dead = out.finals.len() as u32;
        out.finals.push(false);
        out.trans.push(vec![Some(dead); out.alphabet.len()]);
        for row in out.trans.iter_mut() {
            for t in row.iter_mut() {
                if t.is_none() {
                    *t = Some(dead);
                }
            }
        }
        out
    }

    /// Complement over the full alphabet.
    pub fn complement(&self) -> Dfa<L> {
        let mut out = self.complete();
        for f in out.finals.iter_mut() {
            *f = !*f;
        }
        out
    }

    /// Moore partition refinement; the result is complete, minimal, and has
    /// states numbered by first visit from the initial state (canonical).
    pub fn minimize(&self) -> Dfa<L> {
        let complete = self.complete();
        let n = complete.num_states();
        let k = complete.alphabet.len();
        let mut class: Vec<u32> = complete.finals.iter().map(|&f| f as u32).collect();
        loop {
            let mut signature: Vec<(u32, Vec<u32>)> = Vec::with_capacity(n);
            for q in 0..n {
                let row = (0..k)
                    .map(|a| class[complete.trans[q][a].unwrap() as usize])
                    .collect();
                signature.push((class[q], row));
            }
            let mut remap: HashMap<&(u32, Vec<u32>), u32> = HashMap::new();
            let mut next_class: Vec<u32> = vec![0; n];
            let mut count = 0u32;
            for q in 0..n {
                let id = *remap.entry(&signature[q]).or_insert_with(|| {
                    let id = count;
                    count += 1;
                    id
                });
                next_class[q] = id;
            }
            let stable = next_class == class;
            class = next_class;
            if stable {
                break;
            }
        }
        // Rebuild, renumbering classes in BFS order from the initial class.
        let class_of = |q: u32| class[q as usize];
        let mut order: Vec<u32> = Vec::new();
        let mut pos: HashMap<u32, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        let c0 = class_of(complete.initial);
        pos.insert(c0, 0);
        order.push(complete.initial);
        queue.push_back(complete.initial);
        while let Some(q) = queue.pop_front() {
            for a in 0..k {
                let r = complete.trans[q as usize][a].unwrap();
                let cr = class_of(r);
                if !pos.contains_key(&cr) {
                    pos.insert(cr, order.len() as u32);
                    order.push(r);
                    queue.push_back(r);
                }
            }
        }
        let mut out = Dfa {
            alphabet: complete.alphabet.clone(),
            trans: Vec::with_capacity(order.len()),
            finals: Vec::with_capacity(order.len()),
            initial: 0,
        };
        for &rep in &order {
            out.finals.push(complete.finals[rep as usize]);
            let row = (0..k)
                .map(|a| Some(pos[&class_of(complete.trans[rep as usize][a].unwrap())]))
                .collect();
            out.trans.push(row);
        }
        out
    }

    pub fn to_nfa(&self) -> Nfa<L> {
        let mut out = Nfa::with_states(self.num_states() as u32);
        out.initials.insert(self.initial);
        for (q, &f) in self.finals.iter().enumerate() {
            if f {
                out.finals.insert(q as u32);
            }
        }
        for (q, row) in self.trans.iter().enumerate() {
            for (a, t) in row.iter().enumerate() {
                if let Some(r) = t {
                    out.add_trans(q as u32, self.alphabet[a], *r);
                }
            }
        }
        out
    }
}

/// Tarjan's strongly connected components; returns a component id per node.
pub fn strongly_connected_components(
    n: usize,
    succ: impl Fn(usize) -> Vec<usize>,
) -> Vec<usize> {
    #[derive(Clone)]
    struct NodeState {
        index: Option<usize>,
        lowlink: usize,
        on_stack: bool,
    }
    let mut state = vec![
        NodeState {
            index: None,
            lowlink: 0,
            on_stack: false,
        };
        n
    ];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0usize;
    let mut next_comp = 0usize;

    // Iterative Tarjan to avoid deep recursion on long chains.
    enum Frame {
        Enter(usize),
        Resume(usize, usize, Vec<usize>),
    }
    for root in 0..n {
        if state[root].index.is_some() {
            continue;
        }
        let mut frames = vec![Frame::Enter(root)];
        while let Some(frame) = frames.pop() {
            match frame {
                Frame::Enter(v) => {
                    state[v].index = Some(next_index);
                    state[v].lowlink = next_index;
                    next_index += 1;
                    state[v].on_stack = true;
                    stack.push(v);
                    frames.push(Frame::Resume(v, 0, succ(v)));
                }
                Frame::Resume(v, mut i, succs) => {
                    let mut descended = false;
                    while i < succs.len() {
                        let w = succs[i];
                        i += 1;
                        match state[w].index {
                            None => {
                                frames.push(Frame::Resume(v, i, succs));
                                frames.push(Frame::Enter(w));
                                descended = true;
                                break;
                            }
                            Some(widx) => {
                                if state[w].on_stack {
                                    state[v].lowlink = state[v].lowlink.min(widx);
                                }
                            }
                        }
                    }
                    if descended {
                        continue;
                    }
                    if state[v].lowlink == state[v].index.unwrap() {
                        loop {
                            let w = stack.pop().unwrap();
                            state[w].on_stack = false;
                            comp[w] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                    if let Some(Frame::Resume(parent, _, _)) = frames.last() {
                        let p = *parent;
                        state[p].lowlink = state[p].lowlink.min(state[v].lowlink);
                    }
                }
            }
        }
    }
    comp
}
