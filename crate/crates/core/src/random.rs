//! Seeded random models and properties.
//!
//! Structured fuzz inputs for exercising the pipeline end to end: the
//! stress tooling and the test suites both draw their corpora from here.
//! All randomness comes from the caller's RNG, so a corpus is reproducible
//! from its seed.

use rand::Rng;

use crate::ltl::Formula;
use crate::pks::Pks;
use crate::tri::Tri;

/// Size envelope for [`random_model`].
#[derive(Debug, Clone)]
pub struct ModelBounds {
    pub max_states: usize,
    pub max_props: usize,
    pub max_unknowns: usize,
}

impl Default for ModelBounds {
    fn default() -> ModelBounds {
        ModelBounds {
            max_states: 4,
            max_props: 3,
            max_unknowns: 4,
        }
    }
}

const PROP_NAMES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// Draws a partial model within `bounds`: every state gets at least one
/// successor, at least one state is initial, labels start definite, and a
/// bounded number of label slots is then blanked to `?`.
pub fn random_model(rng: &mut impl Rng, bounds: &ModelBounds) -> Pks {
    let n_states = rng.gen_range(1..=bounds.max_states.max(1));
    let n_props = rng.gen_range(1..=bounds.max_props.clamp(1, PROP_NAMES.len()));
    let props = PROP_NAMES[..n_props].iter().map(|p| p.to_string()).collect();
    let mut m = Pks::new("fuzz", props).unwrap();
    for i in 0..n_states {
        let labels = (0..n_props).map(|_| Tri::from_bool(rng.gen())).collect();
        m.add_state(&format!("n{i}"), labels).unwrap();
    }
    for s in 0..n_states {
        let degree = rng.gen_range(1..=n_states);
        for t in rand::seq::index::sample(rng, n_states, degree) {
            m.add_transition_idx(s, t);
        }
    }
    let initials = rng.gen_range(1..=n_states);
    for s in rand::seq::index::sample(rng, n_states, initials) {
        let name = m.state_name(s).to_string();
        m.mark_initial(&name).unwrap();
    }
    let blanks = rng.gen_range(0..=bounds.max_unknowns.min(n_states * n_props));
    for slot in rand::seq::index::sample(rng, n_states * n_props, blanks) {
        m.set_label_idx(slot / n_props, slot % n_props, Tri::Unknown);
    }
    m
}

/// Draws a property of nesting depth at most `depth` over the given atoms.
pub fn random_property(rng: &mut impl Rng, atoms: &[String], depth: usize) -> Formula {
    // bias away from constant leaves, which trivialize the formula
    if depth == 0 || rng.gen_ratio(1, 8) {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ if atoms.is_empty() => Formula::True,
            _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())].clone()),
        };
    }
    match rng.gen_range(0..10) {
        0 => Formula::not(random_property(rng, atoms, depth - 1)),
        1 => Formula::next(random_property(rng, atoms, depth - 1)),
        2 => Formula::globally(random_property(rng, atoms, depth - 1)),
        3 => Formula::finally(random_property(rng, atoms, depth - 1)),
        4 => Formula::and(
            random_property(rng, atoms, depth - 1),
            random_property(rng, atoms, depth - 1),
        ),
        5 => Formula::or(
            random_property(rng, atoms, depth - 1),
            random_property(rng, atoms, depth - 1),
        ),
        6 => Formula::implies(
            random_property(rng, atoms, depth - 1),
            random_property(rng, atoms, depth - 1),
        ),
        7 => Formula::until(
            random_property(rng, atoms, depth - 1),
            random_property(rng, atoms, depth - 1),
        ),
        8 => Formula::weak_until(
            random_property(rng, atoms, depth - 1),
            random_property(rng, atoms, depth - 1),
        ),
        _ => Formula::release(
            random_property(rng, atoms, depth - 1),
            random_property(rng, atoms, depth - 1),
        ),
    }
}
