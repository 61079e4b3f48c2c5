//! DOT and JSON renderings of the automata and record types.
//!
//! All output is deterministically ordered: states by index, transitions in
//! their sorted storage order, JSON object keys by struct declaration.

use std::fmt::Display;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::geometry::{ConstantsRecord, Rat};
use crate::nfa::Nfa;
use crate::ratset::RatSetAutomaton;
use crate::relation::{RelationAutomaton, Side};

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders any labeled automaton as a GraphViz digraph.
pub fn nfa_dot<L: Copy + Ord + std::hash::Hash + Display>(nfa: &Nfa<L>, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {name} {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for q in 0..nfa.num_states() {
        let shape = if nfa.finals.contains(&q) {
            " [shape=doublecircle]"
        } else {
            ""
        };
        writeln!(out, "  q{q}{shape};").unwrap();
    }
    for (i, &q) in nfa.initials.iter().enumerate() {
        writeln!(out, "  start{i} [shape=point];").unwrap();
        writeln!(out, "  start{i} -> q{q};").unwrap();
    }
    for q in 0..nfa.num_states() {
        for r in nfa.eps_from(q) {
            writeln!(out, "  q{q} -> q{r} [label=\"eps\"];").unwrap();
        }
        for (l, r) in nfa.trans_from(q) {
            writeln!(out, "  q{q} -> q{r} [label=\"{}\"];", dot_escape(&l.to_string())).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

/// JSON listing of states and transitions of a labeled automaton.
pub fn nfa_json<L: Copy + Ord + std::hash::Hash + Display>(nfa: &Nfa<L>) -> Value {
    let mut transitions = Vec::new();
    for q in 0..nfa.num_states() {
        for r in nfa.eps_from(q) {
            transitions.push(json!({"from": q, "label": null, "to": r}));
        }
        for (l, r) in nfa.trans_from(q) {
            transitions.push(json!({"from": q, "label": l.to_string(), "to": r}));
        }
    }
    json!({
        "states": nfa.num_states(),
        "initial": nfa.initials.iter().collect::<Vec<_>>(),
        "terminal": nfa.finals.iter().collect::<Vec<_>>(),
        "transitions": transitions,
    })
}

pub fn ratset_dot(rat: &RatSetAutomaton, name: &str) -> String {
    nfa_dot(rat.nfa(), name)
}

pub fn ratset_json(rat: &RatSetAutomaton) -> Value {
    let mut value = nfa_json(rat.nfa());
    value["rank"] = json!(rat.rank());
    value
}

fn spell_identity(word: &crate::words::ReducedWord) -> String {
    if word.is_identity() {
        "1".to_string()
    } else {
        word.to_string()
    }
}

/// DOT rendering of a relation automaton, with vertices labeled by their
/// group elements and edges by pair letters.
pub fn gamma_dot(gamma: &RelationAutomaton) -> String {
    let mut out = String::new();
    writeln!(out, "digraph relation {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for (v, word) in gamma.vertices().iter().enumerate() {
        let shape = if v as u32 == gamma.basepoint() {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(
            out,
            "  v{v} [label=\"{}\", shape={shape}];",
            dot_escape(&spell_identity(word))
        )
        .unwrap();
    }
    writeln!(out, "  start [shape=point];").unwrap();
    writeln!(out, "  start -> v{};", gamma.basepoint()).unwrap();
    for v in 0..gamma.num_vertices() as u32 {
        for x in gamma.letters() {
            if let Some(t) = gamma.edge(v, x) {
                let gen = gamma.generators()[x.gen as usize].to_string();
                let label = match x.side {
                    Side::Left => format!("({gen},1)"),
                    Side::Right => format!("(1,{gen})"),
                };
                writeln!(out, "  v{v} -> v{t} [label=\"{}\"];", dot_escape(&label)).unwrap();
            }
        }
    }
    writeln!(out, "}}").unwrap();
    out
}

pub fn gamma_json(gamma: &RelationAutomaton) -> Value {
    let mut edges = Vec::new();
    for v in 0..gamma.num_vertices() as u32 {
        for x in gamma.letters() {
            if let Some(t) = gamma.edge(v, x) {
                let side = match x.side {
                    Side::Left => "left",
                    Side::Right => "right",
                };
                edges.push(json!({
                    "from": v,
                    "side": side,
                    "generator": gamma.generators()[x.gen as usize].to_string(),
                    "to": t,
                }));
            }
        }
    }
    json!({
        "cutoff": gamma.cutoff,
        "certified": gamma.certified,
        "basepoint": gamma.basepoint(),
        "vertices": gamma
            .vertices()
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>(),
        "edges": edges,
    })
}

/// Exact rational as `{num, den}`.
pub fn rat_json(r: &Rat) -> Value {
    json!({"num": *r.numer(), "den": *r.denom()})
}

pub fn constants_json(c: &ConstantsRecord) -> Value {
    json!({
        "k": c.k,
        "l": c.l,
        "l_prime": c.l_prime,
        "lambda": c.lambda,
        "epsilon": rat_json(&c.epsilon),
        "r": rat_json(&c.r),
        "r_prime": rat_json(&c.r_prime),
        "c_grd": c.c_grd,
        "c_wp": c.c_wp.as_ref().map(rat_json),
        "c_wp_obstruction": c.c_wp_obstruction,
    })
}
