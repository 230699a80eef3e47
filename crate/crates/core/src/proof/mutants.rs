//! Random model revisions that keep a set of stored proofs intact.
//!
//! The generator perturbs everything the proofs do *not* pin: labels outside
//! the pinned slots, outgoing transitions of states without a pinned
//! successor set, and fresh states (never marked initial, reachable only
//! from unpinned states). Such revisions exercise the whole point of storing
//! proofs — [`recheck`](super::recheck) accepts them without running the
//! model checker, and the certified verdicts carry over.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{TopologicalProof, TpClause};
use crate::pks::Pks;
use crate::tri::Tri;

/// Everything the proofs pin, as model indices.
struct Pinned {
    labels: BTreeSet<(usize, usize)>,
    sources: BTreeSet<usize>,
}

fn pinned(m: &Pks, proofs: &[TopologicalProof]) -> Pinned {
    let mut labels = BTreeSet::new();
    let mut sources = BTreeSet::new();
    for proof in proofs {
        for clause in &proof.clauses {
            match clause {
                TpClause::Init(_) => {}
                TpClause::Trans(s, _) => {
                    if let Some(si) = m.state_index(s) {
                        sources.insert(si);
                    }
                }
                TpClause::Prop(s, p, _) => {
                    if let (Some(si), Some(pi)) = (m.state_index(s), m.prop_index(p)) {
                        labels.insert((si, pi));
                    }
                }
            }
        }
    }
    Pinned { labels, sources }
}

/// Generates `count` revisions of `m` that all of `proofs` survive.
/// Deterministic in `seed`; every mutant differs from `m`.
pub fn proof_preserving_mutants(
    m: &Pks,
    proofs: &[TopologicalProof],
    count: usize,
    seed: u64,
) -> Vec<Pks> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pins = pinned(m, proofs);
    let free_slots: Vec<(usize, usize)> = (0..m.state_count())
        .flat_map(|s| (0..m.prop_count()).map(move |p| (s, p)))
        .filter(|slot| !pins.labels.contains(slot))
        .collect();
    let free_sources: Vec<usize> =
        (0..m.state_count()).filter(|s| !pins.sources.contains(s)).collect();

    (0..count)
        .map(|i| {
            let mut x = m.clone();
            x.set_name(&format!("{}_mut{}", m.name(), i + 1)).unwrap();

            let flips = rng.gen_range(0..=2.min(free_slots.len()));
            for k in sample(&mut rng, free_slots.len(), flips) {
                let (s, p) = free_slots[k];
                flip_label(&mut x, s, p, &mut rng);
            }

            for _ in 0..rng.gen_range(0..=2) {
                edit_transition(&mut x, &free_sources, &mut rng);
            }

            if rng.gen_bool(0.5) || x == *m {
                add_fresh_state(&mut x, &free_sources, &mut rng);
            }
            debug_assert_ne!(&x, m);
            x
        })
        .collect()
}

fn flip_label(x: &mut Pks, s: usize, p: usize, rng: &mut ChaCha8Rng) {
    let others: Vec<Tri> = [Tri::False, Tri::Unknown, Tri::True]
        .into_iter()
        .filter(|&v| v != x.label_idx(s, p))
        .collect();
    x.set_label_idx(s, p, others[rng.gen_range(0..others.len())]);
}

/// Adds or removes one edge whose source no proof pins, keeping every state
/// at least one successor.
fn edit_transition(x: &mut Pks, free_sources: &[usize], rng: &mut ChaCha8Rng) {
    let mut adds = Vec::new();
    let mut removes = Vec::new();
    for &s in free_sources {
        if s >= x.state_count() {
            continue;
        }
        let succs = x.successors_idx(s);
        for t in 0..x.state_count() {
            if !x.has_transition_idx(s, t) {
                adds.push((s, t));
            } else if succs.len() > 1 {
                removes.push((s, t));
            }
        }
    }
    let total = adds.len() + removes.len();
    if total == 0 {
        return;
    }
    let k = rng.gen_range(0..total);
    if k < adds.len() {
        x.add_transition_idx(adds[k].0, adds[k].1);
    } else {
        let (s, t) = removes[k - adds.len()];
        x.remove_transition_idx(s, t);
    }
}

/// Adds one non-initial state with random labels, an outgoing edge to keep
/// the relation left-total, and (when possible) an incoming edge from an
/// unpinned state.
fn add_fresh_state(x: &mut Pks, free_sources: &[usize], rng: &mut ChaCha8Rng) {
    let mut n = 0;
    let name = loop {
        let candidate = format!("added{n}");
        if x.state_index(&candidate).is_none() {
            break candidate;
        }
        n += 1;
    };
    let labels: Vec<Tri> = (0..x.prop_count())
        .map(|_| [Tri::False, Tri::Unknown, Tri::True][rng.gen_range(0..3)])
        .collect();
    let fresh = x.add_state(&name, labels).expect("fresh state name is unique");
    let target = rng.gen_range(0..x.state_count());
    x.add_transition_idx(fresh, target);
    if !free_sources.is_empty() && rng.gen_bool(0.7) {
        let source = free_sources[rng.gen_range(0..free_sources.len())];
        x.add_transition_idx(source, fresh);
    }
}
