//! The gradedness decision and factorization statistics.
//!
//! A submonoid is graded when every element has only finitely many spellings
//! over the generators. For a free ambient group the Cayley graph is a tree,
//! every geodesic polygon is 0-thin, and the decision reduces to testing
//! finiteness of `α⁻¹(g)` for the finitely many `g` in the ball of radius
//! `C_grd = L + 1` (with `L` the maximal generator length): if all those
//! preimages are finite the monoid is graded, and any infinite one is a
//! witness of ungradedness.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Budget, Error, Result};
use crate::preimage::{preimage_grammar, PreimageGrammar};
use crate::ratset::{monoid_automaton, singleton, RatSetAutomaton};
use crate::submonoid::{SWord, SubmonoidSpec};
use crate::words::ReducedWord;

/// Outcome of the gradedness decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedVerdict {
    pub graded: bool,
    /// The ball radius that was exhaustively checked.
    pub cutoff: usize,
    /// Shortlex-least element with an infinite preimage, when not graded.
    pub witness: Option<String>,
}

/// Ball cutoff for the gradedness test: `2K + L + 1` with `K = 0` for trees.
pub fn gradedness_cutoff(spec: &SubmonoidSpec) -> usize {
    spec.max_generator_len() + 1
}

/// Decides whether the submonoid is graded by testing finiteness of
/// `α⁻¹(g)` for every `g` in the cutoff ball, in shortlex order.
///
/// Elements outside `M` have empty preimages, so only the members of the
/// ball are materialized (via the saturated automaton for `M`).
pub fn is_graded(spec: &SubmonoidSpec, budget: &Budget) -> Result<GradedVerdict> {
    let cutoff = gradedness_cutoff(spec);
    let m = monoid_automaton(spec, budget.states)?;
    for g in m.elements_up_to(cutoff, budget.ball)? {
        let grammar = preimage_grammar(spec, &g, budget.grammar)?;
        if !grammar.is_finite() {
            return Ok(GradedVerdict {
                graded: false,
                cutoff,
                witness: Some(g.to_string()),
            });
        }
    }
    Ok(GradedVerdict {
        graded: true,
        cutoff,
        witness: None,
    })
}

/// Guard used by operations that require a graded input.
pub fn require_graded(spec: &SubmonoidSpec, budget: &Budget) -> Result<()> {
    let verdict = is_graded(spec, budget)?;
    if verdict.graded {
        Ok(())
    } else {
        Err(Error::NotGraded {
            witness: verdict.witness,
        })
    }
}

/// `Ξ_S(u)`: the length of the longest spelling of `u` over the generators.
/// For the identity of a graded monoid there is no nonempty spelling and the
/// value is 0.
pub fn xi_max(spec: &SubmonoidSpec, u: &ReducedWord, budget: &Budget) -> Result<usize> {
    let m = monoid_automaton(spec, budget.states)?;
    if !m.member(u)? {
        return Err(Error::NotInMonoid(u.to_string()));
    }
    let grammar = preimage_grammar(spec, u, budget.grammar)?;
    if !grammar.is_finite() {
        return Err(Error::InfinitePreimage(u.to_string()));
    }
    grammar.longest_word()
}

/// Memoized evaluator for `ζ_{S,A}(n) = max{Ξ_S(u) : u ∈ M, |u| ≤ n}`.
///
/// The membership test runs on the saturated automaton for `M`; the `Ξ`
/// values come from the grammar engine. Monotone in `n` by definition.
pub struct ZetaEvaluator<'a> {
    spec: &'a SubmonoidSpec,
    m: RatSetAutomaton,
    cache: BTreeMap<usize, usize>,
    xi_cache: BTreeMap<ReducedWord, usize>,
}

impl<'a> ZetaEvaluator<'a> {
    pub fn new(spec: &'a SubmonoidSpec, budget: &Budget) -> Result<Self> {
        Ok(ZetaEvaluator {
            spec,
            m: monoid_automaton(spec, budget.states)?,
            cache: BTreeMap::new(),
            xi_cache: BTreeMap::new(),
        })
    }

    pub fn eval(&mut self, n: usize, budget: &Budget) -> Result<usize> {
        if let Some(&v) = self.cache.get(&n) {
            return Ok(v);
        }
        let mut best = 0usize;
        for g in self.m.elements_up_to(n, budget.ball)? {
            let xi = match self.xi_cache.get(&g) {
                Some(&xi) => xi,
                None => {
                    let grammar = preimage_grammar(self.spec, &g, budget.grammar)?;
                    if !grammar.is_finite() {
                        return Err(Error::NotGraded {
                            witness: Some(g.to_string()),
                        });
                    }
                    let xi = grammar.longest_word()?;
                    self.xi_cache.insert(g.clone(), xi);
                    xi
                }
            };
            best = best.max(xi);
        }
        self.cache.insert(n, best);
        Ok(best)
    }
}

/// `ζ_{S,A}(n)` as a one-shot call.
pub fn zeta(spec: &SubmonoidSpec, n: usize, budget: &Budget) -> Result<usize> {
    ZetaEvaluator::new(spec, budget)?.eval(n, budget)
}

/// All spellings of `u` over `S` with at most `max_len` factors.
pub fn nontrivial_factorizations(
    spec: &SubmonoidSpec,
    u: &ReducedWord,
    max_len: usize,
    budget: &Budget,
) -> Result<Vec<SWord>> {
    let grammar = preimage_grammar(spec, u, budget.grammar)?;
    grammar.enumerate(max_len, budget.ball)
}

/// Grammar for `α⁻¹(u)`, exposed for reports and dumps.
pub fn preimage_summary(
    spec: &SubmonoidSpec,
    u: &ReducedWord,
    budget: &Budget,
) -> Result<PreimageGrammar> {
    preimage_grammar(spec, u, budget.grammar)
}

/// The factor set of `u`: the rational set `M ∩ (M⁻¹ u M⁻¹)`, which consists
/// exactly of the `v` with `u ∈ MvM`, plus its finiteness flag.
pub fn factors(
    spec: &SubmonoidSpec,
    u: &ReducedWord,
    budget: &Budget,
) -> Result<(RatSetAutomaton, bool)> {
    let m = monoid_automaton(spec, budget.states)?;
    if !m.member(u)? {
        return Err(Error::NotInMonoid(u.to_string()));
    }
    let m_inv = m.inverse(budget.states)?;
    let u_aut = crate::ratset::benois(&singleton(u), budget.states)?;
    let middle = m_inv
        .concat(&u_aut, budget.states)?
        .concat(&m_inv, budget.states)?;
    let factor_set = m.intersect(&middle, budget.states)?;
    let finite = factor_set.is_finite_set();
    Ok((factor_set, finite))
}
