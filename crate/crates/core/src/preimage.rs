//! The preimage `α⁻¹(g) ⊆ S*` of a group element under the evaluation map,
//! as a context-free language.
//!
//! A pushdown automaton reads words over `S` and maintains the invariant
//! that its stack spells `bottom · reduce(α(prefix))`. Reading a generator
//! performs one micro-step per letter, each either cancelling against the
//! top of the stack or pushing; at any point the machine may guess that the
//! input is exhausted and verify the target by popping it. The standard
//! triple construction converts the machine to a grammar, which is trimmed
//! and then supports emptiness, finiteness, longest-word and bounded
//! enumeration queries.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::submonoid::{SWord, SubmonoidSpec};
use crate::words::{Letter, ReducedWord};

/// Stack symbol: a letter of `A ∪ A⁻¹` or the bottom marker.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum StackSym {
    Bottom,
    Letter(Letter),
}

/// One PDA move: pops exactly one symbol, pushes zero or two (top first).
#[derive(Clone, Debug)]
pub struct PdaMove {
    pub from: u32,
    pub input: Option<u16>,
    pub pop: StackSym,
    pub push: Vec<StackSym>,
    pub to: u32,
}

/// Pushdown automaton recognizing `{w ∈ S* : α(w) = g}` by empty stack.
#[derive(Clone, Debug)]
pub struct PreimagePda {
    pub num_states: u32,
    pub moves: Vec<PdaMove>,
    pub target: ReducedWord,
    pub num_gens: usize,
    base_state: u32,
}

/// Builds the preimage machine for a spec and target element.
pub fn build_pda(spec: &SubmonoidSpec, g: &ReducedWord) -> Result<PreimagePda> {
    if g.rank() != spec.rank() {
        return Err(Error::RankMismatch {
            left: spec.rank(),
            right: g.rank(),
        });
    }
    let mut num_states = 1u32; // state 0 = base
    let base = 0u32;
    let mut moves = Vec::new();
    let stack_syms: Vec<StackSym> = std::iter::once(StackSym::Bottom)
        .chain(spec.ambient().letters().map(StackSym::Letter))
        .collect();

    for (gi, generator) in spec.generators().iter().enumerate() {
        let letters = generator.letters();
        // States that process letters 2..k; letter 1 is processed while
        // consuming the input symbol.
        let chain: Vec<u32> = (1..letters.len())
            .map(|_| {
                let s = num_states;
                num_states += 1;
                s
            })
            .collect();
        for (i, &l) in letters.iter().enumerate() {
            let from = if i == 0 { base } else { chain[i - 1] };
            let to = if i + 1 == letters.len() { base } else { chain[i] };
            let input = if i == 0 { Some(gi as u16) } else { None };
            for &x in &stack_syms {
                if x == StackSym::Letter(l.inverse()) {
                    moves.push(PdaMove {
                        from,
                        input,
                        pop: x,
                        push: vec![],
                        to,
                    });
                } else {
                    moves.push(PdaMove {
                        from,
                        input,
                        pop: x,
                        push: vec![StackSym::Letter(l), x],
                        to,
                    });
                }
            }
        }
    }

    // Verify phase: pop the target from its last letter down, then bottom.
    let target_letters = g.letters();
    let t = target_letters.len();
    if t == 0 {
        let accept = num_states;
        num_states += 1;
        moves.push(PdaMove {
            from: base,
            input: None,
            pop: StackSym::Bottom,
            push: vec![],
            to: accept,
        });
    } else {
        // verify[j] = "still need to pop letters j, j−1, …, 1, then bottom",
        // entered after popping letter j+1.
        let verify: Vec<u32> = (0..t)
            .map(|_| {
                let s = num_states;
                num_states += 1;
                s
            })
            .collect();
        let accept = num_states;
        num_states += 1;
        moves.push(PdaMove {
            from: base,
            input: None,
            pop: StackSym::Letter(target_letters[t - 1]),
            push: vec![],
            to: verify[t - 1],
        });
        for j in (1..t).rev() {
            moves.push(PdaMove {
                from: verify[j],
                input: None,
                pop: StackSym::Letter(target_letters[j - 1]),
                push: vec![],
                to: verify[j - 1],
            });
        }
        moves.push(PdaMove {
            from: verify[0],
            input: None,
            pop: StackSym::Bottom,
            push: vec![],
            to: accept,
        });
    }

    Ok(PreimagePda {
        num_states,
        moves,
        target: g.clone(),
        num_gens: spec.len(),
        base_state: base,
    })
}

impl PreimagePda {
    /// Explores every run on `word`; returns acceptance and whether each
    /// reachable stack spells `bottom · (a reduced word)`.
    pub fn simulate(&self, word: &SWord) -> (bool, bool) {
        let mut accepted = false;
        let mut invariant_ok = true;
        // Configurations: (input position, state, stack with top last).
        let mut seen: BTreeSet<(usize, u32, Vec<StackSym>)> = BTreeSet::new();
        let start = (0usize, self.base_state, vec![StackSym::Bottom]);
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start);
        while let Some((pos, state, stack)) = queue.pop_front() {
            if !stack_is_bottom_reduced(&stack) {
                invariant_ok = false;
            }
            if stack.is_empty() && pos == word.len() {
                accepted = true;
            }
            let top = match stack.last() {
                Some(&t) => t,
                None => continue,
            };
            for mv in &self.moves {
                if mv.from != state || mv.pop != top {
                    continue;
                }
                let next_pos = match mv.input {
                    None => pos,
                    Some(gi) => {
                        if word.0.get(pos) == Some(&gi) {
                            pos + 1
                        } else {
                            continue;
                        }
                    }
                };
                let mut next_stack = stack.clone();
                next_stack.pop();
                // Push string is top-first.
                for &sym in mv.push.iter().rev() {
                    next_stack.push(sym);
                }
                let config = (next_pos, mv.to, next_stack);
                if seen.insert(config.clone()) {
                    queue.push_back(config);
                }
            }
        }
        (accepted, invariant_ok)
    }
}

fn stack_is_bottom_reduced(stack: &[StackSym]) -> bool {
    if stack.is_empty() {
        return true;
    }
    if stack[0] != StackSym::Bottom {
        return false;
    }
    let mut prev: Option<Letter> = None;
    for sym in &stack[1..] {
        match sym {
            StackSym::Bottom => return false,
            StackSym::Letter(l) => {
                if prev == Some(l.inverse()) {
                    return false;
                }
                prev = Some(*l);
            }
        }
    }
    true
}

/// A grammar symbol: a terminal (generator index) or a nonterminal.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    T(u16),
    N(u32),
}

/// Summary of one grammar's language: emptiness, finiteness, and the
/// longest word length (present exactly when finite and nonempty).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrammarAnalysis {
    pub empty: bool,
    pub finite: bool,
    pub longest: Option<usize>,
}

/// Trimmed context-free grammar for a preimage language.
#[derive(Clone, Debug)]
pub struct PreimageGrammar {
    pub num_gens: usize,
    start: u32,
    /// productions[nt] lists the right-hand sides of that nonterminal.
    productions: Vec<Vec<Vec<Sym>>>,
    trimmed: bool,
}

impl PreimageGrammar {
    pub fn num_nonterminals(&self) -> usize {
        self.productions.len()
    }

    pub fn num_productions(&self) -> usize {
        self.productions.iter().map(|p| p.len()).sum()
    }

    pub fn is_trimmed(&self) -> bool {
        self.trimmed
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn productions(&self) -> &[Vec<Vec<Sym>>] {
        &self.productions
    }

    /// Production list in a stable text form, for reports and dumps.
    pub fn dump(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for (nt, rhss) in self.productions.iter().enumerate() {
            for rhs in rhss {
                let mut line = format!("N{nt} ->");
                if rhs.is_empty() {
                    line.push_str(" eps");
                }
                for sym in rhs {
                    match sym {
                        Sym::T(t) => line.push_str(&format!(" s{}", t + 1)),
                        Sym::N(n) => line.push_str(&format!(" N{n}")),
                    }
                }
                lines.push(line);
            }
        }
        lines
    }
}

/// Triple construction plus trimming. The nonterminal `[p X q]` derives the
/// inputs consumed while popping `X` (net) on the way from `p` to `q`.
///
/// Triples are closed bottom-up from the pop moves, so only productive
/// nonterminals are ever materialized: a pop move yields a productive triple
/// outright, and a push move `(p, a, X, [Y₁ Y₂], q')` combines productive
/// `[q' Y₁ r]` and `[r Y₂ q]` into a productive `[p X q]`. A reachability
/// pass from the start triples then trims the rest.
pub fn to_grammar(pda: &PreimagePda, budget: usize) -> Result<PreimageGrammar> {
    #[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
    struct Triple(u32, StackSym, u32);

    // Push moves indexed for both join directions.
    let push_moves: Vec<&PdaMove> = pda.moves.iter().filter(|m| m.push.len() == 2).collect();
    let mut push_by_left: HashMap<(u32, StackSym), Vec<usize>> = HashMap::new();
    let mut push_by_right_sym: HashMap<StackSym, Vec<usize>> = HashMap::new();
    for (i, m) in push_moves.iter().enumerate() {
        push_by_left.entry((m.to, m.push[0])).or_default().push(i);
        push_by_right_sym.entry(m.push[1]).or_default().push(i);
    }

    let mut productive: BTreeSet<(u32, StackSym, u32)> = BTreeSet::new();
    // Productive triples indexed from both sides for the joins.
    let mut ends: HashMap<(u32, StackSym), Vec<u32>> = HashMap::new();
    let mut starts: HashMap<(StackSym, u32), Vec<u32>> = HashMap::new();
    let mut queue: VecDeque<Triple> = VecDeque::new();

    let add = |t: Triple,
               productive: &mut BTreeSet<(u32, StackSym, u32)>,
               ends: &mut HashMap<(u32, StackSym), Vec<u32>>,
               starts: &mut HashMap<(StackSym, u32), Vec<u32>>,
               queue: &mut VecDeque<Triple>|
     -> Result<()> {
        if productive.insert((t.0, t.1, t.2)) {
            if productive.len() > budget {
                return Err(Error::limit("grammar nonterminals", productive.len(), budget));
            }
            ends.entry((t.0, t.1)).or_default().push(t.2);
            starts.entry((t.1, t.2)).or_default().push(t.0);
            queue.push_back(t);
        }
        Ok(())
    };

    for m in &pda.moves {
        if m.push.is_empty() {
            add(
                Triple(m.from, m.pop, m.to),
                &mut productive,
                &mut ends,
                &mut starts,
                &mut queue,
            )?;
        }
    }

    while let Some(t) = queue.pop_front() {
        let Triple(s, y, e) = t;
        // As a left child [q' Y₁ r]: complete with productive [e Y₂ q].
        if let Some(moves) = push_by_left.get(&(s, y)) {
            for &mi in moves {
                let m = push_moves[mi];
                if let Some(qs) = ends.get(&(e, m.push[1])) {
                    for q in qs.clone() {
                        add(
                            Triple(m.from, m.pop, q),
                            &mut productive,
                            &mut ends,
                            &mut starts,
                            &mut queue,
                        )?;
                    }
                }
            }
        }
        // As a right child [r Y₂ q]: complete with productive [m.to Y₁ r].
        if let Some(moves) = push_by_right_sym.get(&y) {
            for &mi in moves {
                let m = push_moves[mi];
                if productive.contains(&(m.to, m.push[0], s)) {
                    add(
                        Triple(m.from, m.pop, e),
                        &mut productive,
                        &mut ends,
                        &mut starts,
                        &mut queue,
                    )?;
                }
            }
        }
    }

    // Enumerate productions among productive triples, reachable from the
    // start triples [base ⊥ q].
    let mut ids: HashMap<(u32, StackSym, u32), u32> = HashMap::new();
    let mut productions: Vec<Vec<Vec<Sym>>> = vec![Vec::new()];
    let start = 0u32;
    let mut order: Vec<(u32, StackSym, u32)> = Vec::new();
    let mut bfs: VecDeque<(u32, StackSym, u32)> = VecDeque::new();
    for &(p, x, q) in productive.iter() {
        if p == pda.base_state && x == StackSym::Bottom {
            let id = (order.len() + 1) as u32;
            ids.insert((p, x, q), id);
            order.push((p, x, q));
            productions.push(Vec::new());
            bfs.push_back((p, x, q));
            productions[start as usize].push(vec![Sym::N(id)]);
        }
    }
    let mut pop_by_from_pop: HashMap<(u32, StackSym), Vec<&PdaMove>> = HashMap::new();
    for m in &pda.moves {
        if m.push.is_empty() {
            pop_by_from_pop.entry((m.from, m.pop)).or_default().push(m);
        }
    }
    let mut push_by_from_pop: HashMap<(u32, StackSym), Vec<usize>> = HashMap::new();
    for (i, m) in push_moves.iter().enumerate() {
        push_by_from_pop.entry((m.from, m.pop)).or_default().push(i);
    }
    while let Some((p, x, q)) = bfs.pop_front() {
        let id = ids[&(p, x, q)];
        let mut rhss = Vec::new();
        for m in pop_by_from_pop.get(&(p, x)).into_iter().flatten() {
            if m.to == q {
                rhss.push(m.input.map(Sym::T).into_iter().collect());
            }
        }
        for &mi in push_by_from_pop.get(&(p, x)).into_iter().flatten() {
            let m = push_moves[mi];
            // Join on r over the smaller of the two candidate lists.
            let left = ends.get(&(m.to, m.push[0]));
            let right = starts.get(&(m.push[1], q));
            let (Some(left), Some(right)) = (left, right) else {
                continue;
            };
            let candidates: Vec<u32> = if left.len() <= right.len() {
                left.iter()
                    .copied()
                    .filter(|&r| productive.contains(&(r, m.push[1], q)))
                    .collect()
            } else {
                right
                    .iter()
                    .copied()
                    .filter(|&r| productive.contains(&(m.to, m.push[0], r)))
                    .collect()
            };
            {
                for r in candidates {
                    let mut interned = [0u32; 2];
                    for (slot, t) in [(0, (m.to, m.push[0], r)), (1, (r, m.push[1], q))] {
                        interned[slot] = match ids.get(&t) {
                            Some(&i) => i,
                            None => {
                                let i = (order.len() + 1) as u32;
                                ids.insert(t, i);
                                order.push(t);
                                productions.push(Vec::new());
                                bfs.push_back(t);
                                i
                            }
                        };
                    }
                    let mut rhs: Vec<Sym> = m.input.map(Sym::T).into_iter().collect();
                    rhs.push(Sym::N(interned[0]));
                    rhs.push(Sym::N(interned[1]));
                    rhss.push(rhs);
                }
            }
        }
        productions[id as usize] = rhss;
    }

    Ok(trim_grammar(pda.num_gens, start, &productions))
}

/// Worklist closure: marks each nonterminal with a right-hand side whose
/// symbols are all marked. With `terminals_count` this computes the
/// productive set; without it, the nullable set.
fn symbol_closure(productions: &[Vec<Vec<Sym>>], terminals_count: bool) -> Vec<bool> {
    let n = productions.len();
    let mut sat = vec![false; n];
    let mut owners: Vec<usize> = Vec::new();
    let mut missing: Vec<usize> = Vec::new();
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for (nt, rhss) in productions.iter().enumerate() {
        for rhs in rhss {
            let pi = owners.len();
            owners.push(nt);
            let mut miss = 0usize;
            let mut dead = false;
            for s in rhs {
                match s {
                    Sym::T(_) => {
                        if !terminals_count {
                            dead = true;
                        }
                    }
                    Sym::N(m) => {
                        miss += 1;
                        occ[*m as usize].push(pi);
                    }
                }
            }
            if dead {
                missing.push(usize::MAX);
            } else {
                missing.push(miss);
                if miss == 0 && !sat[nt] {
                    sat[nt] = true;
                    queue.push_back(nt);
                }
            }
        }
    }
    while let Some(nt) = queue.pop_front() {
        for &pi in &occ[nt] {
            if missing[pi] == usize::MAX {
                continue;
            }
            missing[pi] -= 1;
            if missing[pi] == 0 {
                let owner = owners[pi];
                if !sat[owner] {
                    sat[owner] = true;
                    queue.push_back(owner);
                }
            }
        }
    }
    sat
}

/// Removes unproductive and unreachable nonterminals, renumbering the rest.
fn trim_grammar(num_gens: usize, start: u32, productions: &[Vec<Vec<Sym>>]) -> PreimageGrammar {
    let n = productions.len();
    let productive = symbol_closure(productions, true);
    // Reachable from start, through productions whose symbols are all
    // productive.
    let mut reachable = vec![false; n];
    if productive[start as usize] {
        let mut queue = VecDeque::from([start]);
        reachable[start as usize] = true;
        while let Some(nt) = queue.pop_front() {
            for rhs in &productions[nt as usize] {
                if !rhs.iter().all(|s| match s {
                    Sym::T(_) => true,
                    Sym::N(m) => productive[*m as usize],
                }) {
                    continue;
                }
                for sym in rhs {
                    if let Sym::N(m) = sym {
                        if !reachable[*m as usize] {
                            reachable[*m as usize] = true;
                            queue.push_back(*m);
                        }
                    }
                }
            }
        }
    }
    let mut map = vec![None; n];
    let mut next = 0u32;
    for nt in 0..n {
        if productive[nt] && reachable[nt] {
            map[nt] = Some(next);
            next += 1;
        }
    }
    let mut out: Vec<Vec<Vec<Sym>>> = vec![Vec::new(); next as usize];
    for nt in 0..n {
        let Some(new_id) = map[nt] else { continue };
        for rhs in &productions[nt] {
            if rhs.iter().all(|s| match s {
                Sym::T(_) => true,
                Sym::N(m) => map[*m as usize].is_some(),
            }) {
                out[new_id as usize].push(
                    rhs.iter()
                        .map(|s| match s {
                            Sym::T(t) => Sym::T(*t),
                            Sym::N(m) => Sym::N(map[*m as usize].unwrap()),
                        })
                        .collect(),
                );
            }
        }
    }
    // If the start was useless the grammar is empty; keep a bare start.
    let (start, out) = match map[start as usize] {
        Some(s) => (s, out),
        None => (0, vec![Vec::new()]),
    };
    PreimageGrammar {
        num_gens,
        start,
        productions: out,
        trimmed: true,
    }
}

impl PreimageGrammar {
    pub fn is_empty(&self) -> bool {
        self.productions.iter().map(|p| p.len()).sum::<usize>() == 0
    }

    /// ε- and unit-production elimination, returning the new productions and
    /// whether ε belongs to the language. Right-hand sides of the result are
    /// nonempty and never a lone nonterminal.
    fn normalized(&self) -> (Vec<Vec<Vec<Sym>>>, bool) {
        let n = self.num_nonterminals();
        let nullable = symbol_closure(&self.productions, false);
        let eps_in_l = nullable[self.start as usize];
        // Expand each RHS by optionally dropping nullable nonterminals;
        // right-hand sides here have at most three symbols.
        let mut expanded: Vec<BTreeSet<Vec<Sym>>> = vec![BTreeSet::new(); n];
        for (nt, rhss) in self.productions.iter().enumerate() {
            for rhs in rhss {
                let mut variants: Vec<Vec<Sym>> = vec![Vec::new()];
                for sym in rhs {
                    let mut next = Vec::new();
                    for v in &variants {
                        let mut keep = v.clone();
                        keep.push(*sym);
                        next.push(keep);
                        if let Sym::N(m) = sym {
                            if nullable[*m as usize] {
                                next.push(v.clone());
                            }
                        }
                    }
                    variants = next;
                }
                for v in variants {
                    if !v.is_empty() {
                        expanded[nt].insert(v);
                    }
                }
            }
        }
        // Unit closure: replace A ⇒* B chains by B's non-unit productions.
        let mut result: Vec<Vec<Vec<Sym>>> = vec![Vec::new(); n];
        for nt in 0..n {
            let mut unit_set = BTreeSet::from([nt as u32]);
            let mut stack = vec![nt as u32];
            while let Some(a) = stack.pop() {
                for rhs in &expanded[a as usize] {
                    if let [Sym::N(b)] = rhs[..] {
                        if unit_set.insert(b) {
                            stack.push(b);
                        }
                    }
                }
            }
            let mut seen = BTreeSet::new();
            for a in unit_set {
                for rhs in &expanded[a as usize] {
                    if matches!(rhs[..], [Sym::N(_)]) {
                        continue;
                    }
                    if seen.insert(rhs.clone()) {
                        result[nt].push(rhs.clone());
                    }
                }
            }
        }
        (result, eps_in_l)
    }

    /// One-pass analysis sharing the ε/unit elimination: emptiness,
    /// finiteness, and (when finite and nonempty) the longest word length.
    pub fn analysis(&self) -> GrammarAnalysis {
        if self.is_empty() {
            return GrammarAnalysis {
                empty: true,
                finite: true,
                longest: None,
            };
        }
        let (normalized, eps_in_l) = self.normalized();
        let trimmed = trim_grammar(self.num_gens, self.start, &normalized);
        if trimmed.is_empty() {
            // Only the empty word survives elimination.
            debug_assert!(eps_in_l);
            return GrammarAnalysis {
                empty: false,
                finite: true,
                longest: Some(0),
            };
        }
        let n = trimmed.num_nonterminals();
        let scc = crate::nfa::strongly_connected_components(n, |nt| {
            let mut succ = Vec::new();
            for rhs in &trimmed.productions[nt] {
                for sym in rhs {
                    if let Sym::N(m) = sym {
                        succ.push(*m as usize);
                    }
                }
            }
            succ
        });
        for (nt, rhss) in trimmed.productions.iter().enumerate() {
            for rhs in rhss {
                for sym in rhs {
                    if let Sym::N(m) = sym {
                        if scc[nt] == scc[*m as usize] {
                            return GrammarAnalysis {
                                empty: false,
                                finite: false,
                                longest: None,
                            };
                        }
                    }
                }
            }
        }
        // Acyclic: memoized longest-derivation lengths.
        let mut memo: Vec<Option<usize>> = vec![None; n];
        fn longest(
            nt: usize,
            productions: &[Vec<Vec<Sym>>],
            memo: &mut Vec<Option<usize>>,
        ) -> usize {
            if let Some(v) = memo[nt] {
                return v;
            }
            let mut best = 0;
            for rhs in &productions[nt] {
                let mut total = 0;
                for sym in rhs {
                    total += match sym {
                        Sym::T(_) => 1,
                        Sym::N(m) => longest(*m as usize, productions, memo),
                    };
                }
                best = best.max(total);
            }
            memo[nt] = Some(best);
            best
        }
        let max = longest(trimmed.start as usize, &trimmed.productions, &mut memo);
        GrammarAnalysis {
            empty: false,
            finite: true,
            longest: Some(max),
        }
    }

    /// Finiteness of the language: after ε/unit elimination, the trimmed
    /// grammar is infinite exactly when its dependency graph has a cycle.
    pub fn is_finite(&self) -> bool {
        self.analysis().finite
    }

    /// Length of the longest word; defined only for finite nonempty languages.
    pub fn longest_word(&self) -> Result<usize> {
        let analysis = self.analysis();
        if analysis.empty {
            return Err(Error::EmptyLanguage);
        }
        if !analysis.finite {
            return Err(Error::InfiniteLanguage);
        }
        Ok(analysis.longest.expect("finite nonempty language"))
    }

    /// All words of the language with length at most `max_len`, each exactly
    /// once, shortlex-sorted.
    pub fn enumerate(&self, max_len: usize, budget: usize) -> Result<Vec<SWord>> {
        let n = self.num_nonterminals();
        let mut sets: Vec<BTreeSet<Vec<u16>>> = vec![BTreeSet::new(); n];
        loop {
            let mut changed = false;
            for nt in 0..n {
                for rhs in &self.productions[nt] {
                    let mut words: Vec<Vec<u16>> = vec![Vec::new()];
                    for sym in rhs {
                        let mut next = Vec::new();
                        match sym {
                            Sym::T(t) => {
                                for w in &words {
                                    if w.len() + 1 <= max_len {
                                        let mut ext = w.clone();
                                        ext.push(*t);
                                        next.push(ext);
                                    }
                                }
                            }
                            Sym::N(m) => {
                                for w in &words {
                                    for suffix in &sets[*m as usize] {
                                        if w.len() + suffix.len() <= max_len {
                                            let mut ext = w.clone();
                                            ext.extend_from_slice(suffix);
                                            next.push(ext);
                                        }
                                    }
                                }
                            }
                        }
                        words = next;
                        if words.is_empty() {
                            break;
                        }
                    }
                    for w in words {
                        if sets[nt].insert(w) {
                            changed = true;
                        }
                    }
                }
                let total: usize = sets.iter().map(|s| s.len()).sum();
                if total > budget {
                    return Err(Error::limit("enumeration words", total, budget));
                }
            }
            if !changed {
                break;
            }
        }
        let mut out: Vec<SWord> = sets[self.start as usize]
            .iter()
            .map(|w| SWord(w.clone()))
            .collect();
        out.sort_by(|a, b| a.shortlex_cmp(b));
        Ok(out)
    }
}

/// Convenience: grammar for `α⁻¹(g)` in one step.
pub fn preimage_grammar(
    spec: &SubmonoidSpec,
    g: &ReducedWord,
    budget: usize,
) -> Result<PreimageGrammar> {
    let pda = build_pda(spec, g)?;
    to_grammar(&pda, budget)
}

/// Brute-force oracle: `{w ∈ S^{≤max_len} : α(w) = g}`, shortlex-sorted.
/// Lives beside the grammar route so the two can validate each other.
pub fn brute_force_preimage(
    spec: &SubmonoidSpec,
    g: &ReducedWord,
    max_len: usize,
    budget: usize,
) -> Result<Vec<SWord>> {
    let mut out = Vec::new();
    let mut layer: Vec<(SWord, ReducedWord)> = vec![(SWord::empty(), spec.identity())];
    if g.is_identity() {
        out.push(SWord::empty());
    }
    let mut total = 1usize;
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, val) in &layer {
            for (gi, s) in spec.generators().iter().enumerate() {
                let mut ext = w.clone();
                ext.0.push(gi as u16);
                let prod = val.mul(s)?;
                if prod == *g {
                    out.push(ext.clone());
                }
                next.push((ext, prod));
            }
        }
        total += next.len();
        if total > budget {
            return Err(Error::limit("brute-force products", total, budget));
        }
        layer = next;
    }
    out.sort_by(|a, b| a.shortlex_cmp(b));
    Ok(out)
}

/// Groups all `S`-words up to a length by their image in the group.
pub fn alpha_classes(
    spec: &SubmonoidSpec,
    max_len: usize,
    budget: usize,
) -> Result<BTreeMap<ReducedWord, Vec<SWord>>> {
    let mut classes: BTreeMap<ReducedWord, Vec<SWord>> = BTreeMap::new();
    let mut layer: Vec<(SWord, ReducedWord)> = vec![(SWord::empty(), spec.identity())];
    classes
        .entry(spec.identity())
        .or_default()
        .push(SWord::empty());
    let mut total = 1usize;
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, val) in &layer {
            for (gi, s) in spec.generators().iter().enumerate() {
                let mut ext = w.clone();
                ext.0.push(gi as u16);
                let prod = val.mul(s)?;
                classes.entry(prod.clone()).or_default().push(ext.clone());
                next.push((ext, prod));
            }
        }
        total += next.len();
        if total > budget {
            return Err(Error::limit("alpha classes", total, budget));
        }
        layer = next;
    }
    for words in classes.values_mut() {
        words.sort_by(|a, b| a.shortlex_cmp(b));
    }
    Ok(classes)
}
