//! Tableau construction: from an LTL formula to a generalized Büchi
//! automaton.
//!
//! Classic on-the-fly expansion: a node carries the obligations still to be
//! processed (`new`), the ones already processed (`old`) and the ones deferred
//! to the next step (`next`). Disjunctive operators split the node; nodes with
//! the same `(old, next)` pair are merged. A node accepts exactly the letters
//! compatible with the literals in its `old` set, so automaton states double
//! as letter constraints.
//!
//! Each `U` (and `F`) subformula contributes one acceptance set containing
//! the nodes that do not owe it anything — nodes not claiming the subformula,
//! or fulfilling its right-hand side on the spot.

use std::collections::{BTreeMap, BTreeSet};

use super::buchi::Gba;
use super::{EngineError, Limits};
use crate::ltl::Formula;

/// The letter constraint of an automaton state: propositions that must hold
/// and propositions that must not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct LetterConstraint {
    pub pos: BTreeSet<String>,
    pub neg: BTreeSet<String>,
}

/// Marker for edges from the (virtual) initial node.
const INIT: usize = usize::MAX;

#[derive(Clone)]
struct WorkNode {
    incoming: BTreeSet<usize>,
    new: BTreeSet<Formula>,
    old: BTreeSet<Formula>,
    next: BTreeSet<Formula>,
}

struct DoneNode {
    incoming: BTreeSet<usize>,
    old: BTreeSet<Formula>,
}

struct Builder {
    nodes: Vec<DoneNode>,
    by_key: BTreeMap<(BTreeSet<Formula>, BTreeSet<Formula>), usize>,
    max_nodes: usize,
}

/// Builds the automaton for `f` (normalized internally, so any formula is
/// accepted). The automaton's runs over infinite words are exactly the words
/// satisfying `f`.
pub(crate) fn formula_gba(
    f: &Formula,
    limits: &Limits,
) -> Result<Gba<LetterConstraint>, EngineError> {
    let f = crate::ltl::fold_constants(&crate::ltl::to_nnf(f));
    let mut b = Builder {
        nodes: Vec::new(),
        by_key: BTreeMap::new(),
        max_nodes: limits.max_nodes,
    };
    let root = WorkNode {
        incoming: BTreeSet::from([INIT]),
        new: BTreeSet::from([f.clone()]),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    };
    expand(root, &mut b)?;

    let n = b.nodes.len();
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut initial = Vec::new();
    for (id, node) in b.nodes.iter().enumerate() {
        for &src in &node.incoming {
            if src == INIT {
                initial.push(id);
            } else {
                succs[src].push(id);
            }
        }
    }
    for list in &mut succs {
        list.sort_unstable();
    }
    initial.sort_unstable();

    // one acceptance set per eventuality subformula, in first-occurrence order
    let mut obligations = Vec::new();
    collect_obligations(&f, &mut obligations);
    let acceptance = obligations
        .iter()
        .map(|(eta, rhs)| {
            b.nodes
                .iter()
                .map(|node| !node.old.contains(eta) || node.old.contains(rhs))
                .collect()
        })
        .collect();

    let labels = b
        .nodes
        .iter()
        .map(|node| {
            let mut pos = BTreeSet::new();
            let mut neg = BTreeSet::new();
            for g in &node.old {
                match g {
                    Formula::Atom(a) => {
                        pos.insert(a.clone());
                    }
                    Formula::Not(inner) => {
                        if let Formula::Atom(a) = inner.as_ref() {
                            neg.insert(a.clone());
                        }
                    }
                    _ => {}
                }
            }
            LetterConstraint { pos, neg }
        })
        .collect();

    Ok(Gba {
        labels,
        succs,
        initial,
        acceptance,
    })
}

/// `(subformula, right-hand side that discharges it)` for every `U`/`F`.
fn collect_obligations(f: &Formula, out: &mut Vec<(Formula, Formula)>) {
    let push = |out: &mut Vec<(Formula, Formula)>, eta: &Formula, rhs: &Formula| {
        if !out.iter().any(|(e, _)| e == eta) {
            out.push((eta.clone(), rhs.clone()));
        }
    };
    match f {
        Formula::Until(_, h) => push(out, f, h),
        Formula::Finally(g) => push(out, f, g),
        _ => {}
    }
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => {}
        Formula::Not(g) | Formula::Next(g) | Formula::Globally(g) | Formula::Finally(g) => {
            collect_obligations(g, out)
        }
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Until(a, b)
        | Formula::WeakUntil(a, b)
        | Formula::Release(a, b) => {
            collect_obligations(a, out);
            collect_obligations(b, out);
        }
    }
}

fn expand(mut node: WorkNode, b: &mut Builder) -> Result<(), EngineError> {
    let Some(eta) = node.new.iter().next().cloned() else {
        // fully processed: merge into an existing node or finalize
        let key = (node.old.clone(), node.next.clone());
        if let Some(&id) = b.by_key.get(&key) {
            b.nodes[id].incoming.extend(node.incoming.iter().copied());
            return Ok(());
        }
        let id = b.nodes.len();
        if id >= b.max_nodes {
            return Err(EngineError::ResourceLimit {
                nodes: id + 1,
                limit: b.max_nodes,
            });
        }
        b.by_key.insert(key, id);
        b.nodes.push(DoneNode {
            incoming: node.incoming.clone(),
            old: node.old.clone(),
        });
        // the successor seed owes everything deferred with X
        let succ = WorkNode {
            incoming: BTreeSet::from([id]),
            new: node.next.clone(),
            old: BTreeSet::new(),
            next: BTreeSet::new(),
        };
        return expand(succ, b);
    };
    node.new.remove(&eta);
    if node.old.contains(&eta) {
        return expand(node, b);
    }
    match &eta {
        Formula::True => expand(node, b),
        Formula::False => Ok(()), // contradiction: drop the branch
        Formula::Atom(a) => {
            if node.old.contains(&Formula::not(Formula::atom(a.clone()))) {
                return Ok(());
            }
            node.old.insert(eta);
            expand(node, b)
        }
        Formula::Not(inner) => {
            let Formula::Atom(a) = inner.as_ref() else {
                unreachable!("negation normal form leaves negations on atoms only");
            };
            if node.old.contains(&Formula::atom(a.clone())) {
                return Ok(());
            }
            node.old.insert(eta);
            expand(node, b)
        }
        Formula::And(g, h) => {
            node.old.insert(eta.clone());
            node.new.insert((**g).clone());
            node.new.insert((**h).clone());
            expand(node, b)
        }
        Formula::Or(g, h) => {
            node.old.insert(eta.clone());
            let mut left = node.clone();
            left.new.insert((**g).clone());
            node.new.insert((**h).clone());
            expand(left, b)?;
            expand(node, b)
        }
        Formula::Next(g) => {
            node.old.insert(eta.clone());
            node.next.insert((**g).clone());
            expand(node, b)
        }
        Formula::Globally(g) => {
            node.old.insert(eta.clone());
            node.new.insert((**g).clone());
            node.next.insert(eta.clone());
            expand(node, b)
        }
        Formula::Finally(g) => {
            node.old.insert(eta.clone());
            let mut wait = node.clone();
            wait.next.insert(eta.clone());
            node.new.insert((**g).clone());
            expand(wait, b)?;
            expand(node, b)
        }
        Formula::Until(g, h) | Formula::WeakUntil(g, h) => {
            node.old.insert(eta.clone());
            let mut carry = node.clone();
            carry.new.insert((**g).clone());
            carry.next.insert(eta.clone());
            node.new.insert((**h).clone());
            expand(carry, b)?;
            expand(node, b)
        }
        Formula::Release(g, h) => {
            node.old.insert(eta.clone());
            let mut carry = node.clone();
            carry.new.insert((**h).clone());
            carry.next.insert(eta.clone());
            node.new.insert((**g).clone());
            node.new.insert((**h).clone());
            expand(carry, b)?;
            expand(node, b)
        }
        Formula::Implies(_, _) => {
            unreachable!("negation normal form has no implications")
        }
    }
}
