//! From an SNF clause set to a generalized Büchi automaton.
//!
//! The alphabet is the set of propositions the clauses mention, so a letter
//! is one valuation, encoded as a bitmask. Two valuations are interchangeable
//! if they agree on every bit the clauses can observe: for each global clause
//! whether its now-part holds and whether its next-part holds, for each
//! eventuality whether its now-part holds and whether its promised literal
//! holds, and whether all initial clauses hold. Valuations are grouped into
//! such classes and the automaton runs over classes, which keeps it small
//! even when many propositions are free.
//!
//! Automaton states are `(class, pending)` pairs where `pending` tracks which
//! eventualities still owe their literal; one acceptance set per eventuality
//! contains the states not owing it.

use std::collections::{BTreeMap, VecDeque};

use super::buchi::Gba;
use super::{EngineError, Limits};
use crate::snf::{SnfClause, SnfLiteral};

/// The clause automaton plus what is needed to decode witnesses.
#[derive(Debug)]
pub(crate) struct ClauseAutomaton {
    /// Labels are representative valuations (bitmasks over `props`).
    pub gba: Gba<u64>,
    /// Proposition names, in bit order.
    pub props: Vec<String>,
}

/// A disjunction of literals as a pair of bitmasks.
#[derive(Clone, Copy)]
struct Part {
    pos: u64,
    neg: u64,
}

impl Part {
    fn sat(self, v: u64, all: u64) -> bool {
        v & self.pos != 0 || (v ^ all) & self.neg != 0
    }

    fn is_empty(self) -> bool {
        self.pos == 0 && self.neg == 0
    }
}

struct ClassInfo {
    representative: u64,
    /// Global clauses whose now-part fails here (they lean on the successor).
    need_next: Vec<u64>,
    /// Global clauses whose next-part holds when this class is the successor.
    sat_next: Vec<u64>,
    /// Per eventuality: now-part holds / promised literal holds.
    e_now: Vec<bool>,
    e_lit: Vec<bool>,
    initial_ok: bool,
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn covers(need: &[u64], sat: &[u64]) -> bool {
    need.iter().zip(sat).all(|(n, s)| n & !s == 0)
}

pub(crate) fn clause_gba(
    clauses: &[SnfClause],
    limits: &Limits,
) -> Result<ClauseAutomaton, EngineError> {
    // the support alphabet, in first-occurrence order
    let mut props: Vec<String> = Vec::new();
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for c in clauses {
        for l in c.literals() {
            if !index.contains_key(l.name()) {
                index.insert(l.name(), props.len());
                props.push(l.name().to_string());
            }
        }
    }
    let width = props.len();
    let over_budget = |n: u32| {
        1usize
            .checked_shl(n)
            .filter(|&v| v <= limits.max_nodes)
            .is_none()
    };
    if width > 63 || over_budget(width as u32) {
        return Err(EngineError::ResourceLimit {
            nodes: 1usize.checked_shl(width as u32).unwrap_or(usize::MAX),
            limit: limits.max_nodes,
        });
    }
    let all: u64 = if width == 0 { 0 } else { (1 << width) - 1 };

    let part = |lits: &[SnfLiteral]| {
        let mut p = Part { pos: 0, neg: 0 };
        for l in lits {
            let bit = 1 << index[l.name()];
            if l.is_positive() {
                p.pos |= bit;
            } else {
                p.neg |= bit;
            }
        }
        p
    };

    let mut globals: Vec<(Part, Part)> = Vec::new();
    let mut eventualities: Vec<(Part, Part)> = Vec::new();
    let mut initials: Vec<Part> = Vec::new();
    for c in clauses {
        match c {
            SnfClause::Initial { now, .. } => initials.push(part(now)),
            SnfClause::Global { now, next, .. } => globals.push((part(now), part(next))),
            SnfClause::Eventuality {
                now, eventually, ..
            } => eventualities.push((part(now), part(std::slice::from_ref(eventually)))),
        }
    }
    if eventualities.len() > 64 || over_budget(eventualities.len() as u32) {
        return Err(EngineError::ResourceLimit {
            nodes: 1usize
                .checked_shl(eventualities.len() as u32)
                .unwrap_or(usize::MAX),
            limit: limits.max_nodes,
        });
    }

    // group valuations into observation classes
    let chunks = globals.len().div_ceil(64);
    let mut classes: Vec<ClassInfo> = Vec::new();
    let mut class_by_key: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    'vals: for v in 0..=all {
        let mut need_next = vec![0u64; chunks];
        let mut sat_next = vec![0u64; chunks];
        for (i, &(now, next)) in globals.iter().enumerate() {
            let now_ok = now.sat(v, all);
            // a clause without a next-part must hold outright, everywhere
            if !now_ok && next.is_empty() {
                continue 'vals;
            }
            if !now_ok {
                set_bit(&mut need_next, i);
            }
            if next.sat(v, all) {
                set_bit(&mut sat_next, i);
            }
        }
        let e_now: Vec<bool> = eventualities.iter().map(|&(now, _)| now.sat(v, all)).collect();
        let e_lit: Vec<bool> = eventualities.iter().map(|&(_, l)| l.sat(v, all)).collect();
        let initial_ok = initials.iter().all(|p| p.sat(v, all));

        let mut key = need_next.clone();
        key.extend_from_slice(&sat_next);
        let mut flags = vec![0u64; (2 * eventualities.len() + 1).div_ceil(64).max(1)];
        for (i, (&n, &l)) in e_now.iter().zip(&e_lit).enumerate() {
            if n {
                set_bit(&mut flags, 2 * i);
            }
            if l {
                set_bit(&mut flags, 2 * i + 1);
            }
        }
        if initial_ok {
            set_bit(&mut flags, 2 * eventualities.len());
        }
        key.extend_from_slice(&flags);

        if !class_by_key.contains_key(&key) {
            class_by_key.insert(key, classes.len());
            classes.push(ClassInfo {
                representative: v,
                need_next,
                sat_next,
                e_now,
                e_lit,
                initial_ok,
            });
        }
        if all == 0 {
            break; // 0..=0 with zero width: single empty valuation
        }
    }

    // explore (class, pending) states breadth-first
    let step_pending = |pending: u64, target: &ClassInfo| -> u64 {
        let mut out = 0u64;
        for e in 0..eventualities.len() {
            let owed = pending >> e & 1 == 1 || !target.e_now[e];
            if owed && !target.e_lit[e] {
                out |= 1 << e;
            }
        }
        out
    };

    let mut node_ids: BTreeMap<(usize, u64), usize> = BTreeMap::new();
    let mut nodes: Vec<(usize, u64)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |c: usize,
                      p: u64,
                      nodes: &mut Vec<(usize, u64)>,
                      queue: &mut VecDeque<usize>|
     -> Result<usize, EngineError> {
        if let Some(&id) = node_ids.get(&(c, p)) {
            return Ok(id);
        }
        let id = nodes.len();
        if id >= limits.max_nodes {
            return Err(EngineError::ResourceLimit {
                nodes: id + 1,
                limit: limits.max_nodes,
            });
        }
        node_ids.insert((c, p), id);
        nodes.push((c, p));
        queue.push_back(id);
        Ok(id)
    };

    let mut initial = Vec::new();
    for c in 0..classes.len() {
        if classes[c].initial_ok {
            let p = step_pending(0, &classes[c]);
            initial.push(intern(c, p, &mut nodes, &mut queue)?);
        }
    }

    let mut succs: Vec<Vec<usize>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (c, pending) = nodes[id];
        let mut out = Vec::new();
        for (t, target) in classes.iter().enumerate() {
            if covers(&classes[c].need_next, &target.sat_next) {
                out.push(intern(t, step_pending(pending, target), &mut nodes, &mut queue)?);
            }
        }
        out.sort_unstable();
        out.dedup();
        debug_assert_eq!(succs.len(), id);
        succs.push(out);
    }

    let acceptance = (0..eventualities.len())
        .map(|e| nodes.iter().map(|&(_, p)| p >> e & 1 == 0).collect())
        .collect();
    let labels = nodes
        .iter()
        .map(|&(c, _)| classes[c].representative)
        .collect();

    Ok(ClauseAutomaton {
        gba: Gba {
            labels,
            succs,
            initial,
            acceptance,
        },
        props,
    })
}
