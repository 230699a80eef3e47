//! Partial Kripke structures.
//!
//! A [`Pks`] is a finite transition system whose states label each atomic
//! proposition with a three-valued truth value, so a model can record that a
//! proposition is true, false, or simply not yet decided in a given state.
//! A [`Ks`] is the classical special case without unknowns.
//!
//! States and propositions keep their declaration order; every derived
//! artifact (clause sets, proofs, counterexamples) inherits that order, which
//! keeps all outputs deterministic.

use std::collections::{BTreeMap, BTreeSet};

use crate::ltl::{complement_name, is_complement_name};
use crate::tri::Tri;

mod format;

pub use format::{parse_pks, serialize_pks, FormatError};

/// Default cap on the number of `?` labels [`Pks::completions`] will expand.
pub const DEFAULT_COMPLETION_BOUND: usize = 12;

/// Error raised by model constructors and structural operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("duplicate proposition {0:?}")]
    DuplicateProposition(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown proposition {0:?}")]
    UnknownProposition(String),
    #[error("state {state:?} assigns {got} propositions, expected {expected}")]
    LabelArity {
        state: String,
        expected: usize,
        got: usize,
    },
    #[error("alphabet already contains complement proposition {0:?}")]
    ComplementInAlphabet(String),
    #[error("label of ({state}, {prop}) is ?, which a Kripke structure does not allow")]
    NotDefinite { state: String, prop: String },
    #[error("{count} unknown labels exceed the completion bound {bound}")]
    TooManyUnknowns { count: usize, bound: usize },
}

/// Which definite value replaces `?` when approximating a partial model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Approximation {
    /// Every `?` becomes true.
    Optimistic,
    /// Every `?` becomes false.
    Pessimistic,
}

/// A partial Kripke structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pks {
    name: String,
    states: Vec<String>,
    props: Vec<String>,
    state_by_name: BTreeMap<String, usize>,
    prop_by_name: BTreeMap<String, usize>,
    transitions: BTreeSet<(usize, usize)>,
    initial: BTreeSet<usize>,
    /// `labels[state][prop]`, kept total by construction.
    labels: Vec<Vec<Tri>>,
}

impl Pks {
    /// Creates an empty model over the given alphabet.
    pub fn new(name: &str, props: Vec<String>) -> Result<Pks, ModelError> {
        if !is_model_identifier(name) {
            return Err(ModelError::InvalidIdentifier(name.to_string()));
        }
        let mut prop_by_name = BTreeMap::new();
        for (i, p) in props.iter().enumerate() {
            if !is_prop_identifier(p) {
                return Err(ModelError::InvalidIdentifier(p.clone()));
            }
            if prop_by_name.insert(p.clone(), i).is_some() {
                return Err(ModelError::DuplicateProposition(p.clone()));
            }
        }
        Ok(Pks {
            name: name.to_string(),
            states: Vec::new(),
            props,
            state_by_name: BTreeMap::new(),
            prop_by_name,
            transitions: BTreeSet::new(),
            initial: BTreeSet::new(),
            labels: Vec::new(),
        })
    }

    /// Adds a state with one label per proposition, in alphabet order.
    pub fn add_state(&mut self, state: &str, labels: Vec<Tri>) -> Result<usize, ModelError> {
        if !is_model_identifier(state) {
            return Err(ModelError::InvalidIdentifier(state.to_string()));
        }
        if labels.len() != self.props.len() {
            return Err(ModelError::LabelArity {
                state: state.to_string(),
                expected: self.props.len(),
                got: labels.len(),
            });
        }
        let idx = self.states.len();
        if self
            .state_by_name
            .insert(state.to_string(), idx)
            .is_some()
        {
            return Err(ModelError::DuplicateState(state.to_string()));
        }
        self.states.push(state.to_string());
        self.labels.push(labels);
        Ok(idx)
    }

    pub fn add_transition(&mut self, from: &str, to: &str) -> Result<(), ModelError> {
        let f = self.require_state(from)?;
        let t = self.require_state(to)?;
        self.transitions.insert((f, t));
        Ok(())
    }

    pub fn add_transition_idx(&mut self, from: usize, to: usize) {
        assert!(from < self.states.len() && to < self.states.len());
        self.transitions.insert((from, to));
    }

    pub fn remove_transition_idx(&mut self, from: usize, to: usize) {
        self.transitions.remove(&(from, to));
    }

    pub fn mark_initial(&mut self, state: &str) -> Result<(), ModelError> {
        let s = self.require_state(state)?;
        self.initial.insert(s);
        Ok(())
    }

    pub fn set_label(&mut self, state: &str, prop: &str, value: Tri) -> Result<(), ModelError> {
        let s = self.require_state(state)?;
        let p = self.require_prop(prop)?;
        self.labels[s][p] = value;
        Ok(())
    }

    pub fn set_label_idx(&mut self, state: usize, prop: usize, value: Tri) {
        self.labels[state][prop] = value;
    }

    fn require_state(&self, state: &str) -> Result<usize, ModelError> {
        self.state_index(state)
            .ok_or_else(|| ModelError::UnknownState(state.to_string()))
    }

    fn require_prop(&self, prop: &str) -> Result<usize, ModelError> {
        self.prop_index(prop)
            .ok_or_else(|| ModelError::UnknownProposition(prop.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) -> Result<(), ModelError> {
        if !is_model_identifier(name) {
            return Err(ModelError::InvalidIdentifier(name.to_string()));
        }
        self.name = name.to_string();
        Ok(())
    }

    /// State names in declaration order.
    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Proposition names in declaration order.
    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn prop_count(&self) -> usize {
        self.props.len()
    }

    pub fn state_index(&self, state: &str) -> Option<usize> {
        self.state_by_name.get(state).copied()
    }

    pub fn prop_index(&self, prop: &str) -> Option<usize> {
        self.prop_by_name.get(prop).copied()
    }

    pub fn state_name(&self, idx: usize) -> &str {
        &self.states[idx]
    }

    pub fn prop_name(&self, idx: usize) -> &str {
        &self.props[idx]
    }

    pub fn label(&self, state: &str, prop: &str) -> Option<Tri> {
        Some(self.labels[self.state_index(state)?][self.prop_index(prop)?])
    }

    pub fn label_idx(&self, state: usize, prop: usize) -> Tri {
        self.labels[state][prop]
    }

    pub fn has_transition_idx(&self, from: usize, to: usize) -> bool {
        self.transitions.contains(&(from, to))
    }

    pub fn transitions_idx(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.transitions.iter().copied()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    /// Successor states of `state`, in ascending index order.
    pub fn successors_idx(&self, state: usize) -> Vec<usize> {
        self.transitions
            .range((state, 0)..=(state, usize::MAX))
            .map(|&(_, t)| t)
            .collect()
    }

    pub fn initial_idx(&self) -> impl Iterator<Item = usize> + '_ {
        self.initial.iter().copied()
    }

    pub fn is_initial_idx(&self, state: usize) -> bool {
        self.initial.contains(&state)
    }

    pub fn initial_count(&self) -> usize {
        self.initial.len()
    }

    /// Structural diagnostics; an empty list means the model is well formed.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.states.is_empty() {
            out.push("model has no states".to_string());
        }
        if self.initial.is_empty() {
            out.push("no initial state".to_string());
        }
        for s in 0..self.states.len() {
            if self.successors_idx(s).is_empty() {
                out.push(format!("not left-total at {}", self.states[s]));
            }
        }
        out
    }

    /// `|AP| * |S| + |R| + |S0|`.
    pub fn model_size(&self) -> usize {
        self.props.len() * self.states.len() + self.transitions.len() + self.initial.len()
    }

    /// The `(state, prop)` pairs labelled `?`, state-major in declaration order.
    pub fn unknown_slots(&self) -> Vec<(usize, usize)> {
        let mut slots = Vec::new();
        for s in 0..self.states.len() {
            for p in 0..self.props.len() {
                if self.labels[s][p] == Tri::Unknown {
                    slots.push((s, p));
                }
            }
        }
        slots
    }

    /// Extends the alphabet with one complement proposition `~α` per `α`,
    /// labelled with the complement of the base value in every state.
    pub fn complement_closure(&self) -> Result<Pks, ModelError> {
        for p in &self.props {
            if is_complement_name(p) {
                return Err(ModelError::ComplementInAlphabet(p.clone()));
            }
        }
        let mut closed = self.clone();
        for p in &self.props {
            let cp = complement_name(p).expect("base name");
            closed.prop_by_name.insert(cp.clone(), closed.props.len());
            closed.props.push(cp);
        }
        for s in 0..self.states.len() {
            for p in 0..self.props.len() {
                let v = self.labels[s][p].comp();
                closed.labels[s].push(v);
            }
        }
        Ok(closed)
    }

    /// True if the alphabet pairs every proposition with its complement and
    /// the labelling is consistent across each pair.
    pub fn is_complement_closed(&self) -> bool {
        for (p, &i) in &self.prop_by_name {
            if is_complement_name(p) {
                continue;
            }
            let Ok(cp) = complement_name(p) else {
                return false;
            };
            let Some(j) = self.prop_index(&cp) else {
                return false;
            };
            for s in 0..self.states.len() {
                if self.labels[s][j] != self.labels[s][i].comp() {
                    return false;
                }
            }
        }
        self.props
            .iter()
            .filter(|p| is_complement_name(p))
            .all(|p| self.prop_by_name.contains_key(&base_of(p)))
    }

    /// Resolves every `?` to a definite value. Meant for complement-closed
    /// models, where the two approximations bound the refinements from below
    /// and above, but total on any model.
    pub fn approximate(&self, mode: Approximation) -> Ks {
        let fill = match mode {
            Approximation::Optimistic => Tri::True,
            Approximation::Pessimistic => Tri::False,
        };
        let mut m = self.clone();
        for row in &mut m.labels {
            for v in row.iter_mut() {
                if *v == Tri::Unknown {
                    *v = fill;
                }
            }
        }
        Ks(m)
    }

    /// True if `other` redefines only labels, and only by turning `?` into a
    /// definite value: states, transitions, initial states and alphabet must
    /// match exactly, and every definite label must be preserved.
    pub fn is_refinement_of(&self, other: &Pks) -> bool {
        // `self` is the candidate refinement, `other` the original.
        if name_set(&self.states) != name_set(&other.states)
            || name_set(&self.props) != name_set(&other.props)
        {
            return false;
        }
        if self.transition_name_set() != other.transition_name_set() {
            return false;
        }
        if self.initial_name_set() != other.initial_name_set() {
            return false;
        }
        for s in &other.states {
            for p in &other.props {
                let orig = other.label(s, p).expect("own state/prop");
                let new = self.label(s, p).expect("same name sets");
                if orig != Tri::Unknown && new != orig {
                    return false;
                }
            }
        }
        true
    }

    /// True if `self` may replace `other` in an incremental design step:
    /// the only requirement is that no proposition of `other` disappears.
    pub fn is_revision_of(&self, other: &Pks) -> bool {
        name_set(&other.props).is_subset(&name_set(&self.props))
    }

    fn transition_name_set(&self) -> BTreeSet<(String, String)> {
        self.transitions
            .iter()
            .map(|&(f, t)| (self.states[f].clone(), self.states[t].clone()))
            .collect()
    }

    fn initial_name_set(&self) -> BTreeSet<String> {
        self.initial.iter().map(|&s| self.states[s].clone()).collect()
    }

    /// Enumerates every completion: each `?` label resolved both ways, all
    /// combinations. Intended as a brute-force oracle for small models.
    pub fn completions(&self) -> Result<Completions<'_>, ModelError> {
        self.completions_with_bound(DEFAULT_COMPLETION_BOUND)
    }

    pub fn completions_with_bound(&self, bound: usize) -> Result<Completions<'_>, ModelError> {
        let slots = self.unknown_slots();
        if slots.len() > bound {
            return Err(ModelError::TooManyUnknowns {
                count: slots.len(),
                bound,
            });
        }
        Ok(Completions {
            base: self,
            slots,
            next: 0,
        })
    }
}

fn name_set(names: &[String]) -> BTreeSet<&str> {
    names.iter().map(|s| s.as_str()).collect()
}

fn base_of(prop: &str) -> String {
    crate::ltl::base_name(prop).to_string()
}

/// Checks both proposition shapes accepted in models: plain identifiers and
/// complement names produced by [`Pks::complement_closure`].
fn is_prop_identifier(s: &str) -> bool {
    !s.is_empty() && crate::ltl::is_identifier(crate::ltl::base_name(s))
}

fn is_model_identifier(s: &str) -> bool {
    crate::ltl::is_identifier(s)
}

/// Iterator over all completions of a partial model.
pub struct Completions<'a> {
    base: &'a Pks,
    slots: Vec<(usize, usize)>,
    next: u64,
}

impl Iterator for Completions<'_> {
    type Item = Ks;

    fn next(&mut self) -> Option<Ks> {
        if self.next >= 1u64 << self.slots.len() {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let mut m = self.base.clone();
        for (bit, &(s, p)) in self.slots.iter().enumerate() {
            let v = if mask >> bit & 1 == 1 {
                Tri::True
            } else {
                Tri::False
            };
            m.labels[s][p] = v;
        }
        Some(Ks(m))
    }
}

/// A classical Kripke structure: a [`Pks`] without `?` labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ks(Pks);

impl Ks {
    pub fn new(m: Pks) -> Result<Ks, ModelError> {
        for s in 0..m.state_count() {
            for p in 0..m.prop_count() {
                if m.label_idx(s, p) == Tri::Unknown {
                    return Err(ModelError::NotDefinite {
                        state: m.state_name(s).to_string(),
                        prop: m.prop_name(p).to_string(),
                    });
                }
            }
        }
        Ok(Ks(m))
    }

    pub fn label_bool(&self, state: usize, prop: usize) -> bool {
        self.0.label_idx(state, prop) == Tri::True
    }

    pub fn as_pks(&self) -> &Pks {
        &self.0
    }

    pub fn into_pks(self) -> Pks {
        self.0
    }
}

impl std::ops::Deref for Ks {
    type Target = Pks;

    fn deref(&self) -> &Pks {
        &self.0
    }
}
