//! Verification toolkit for iterative model design.
//!
//! The library checks LTL properties against partial Kripke structures —
//! models whose labels may still be undecided (`?`) — under three-valued
//! semantics. A check returns one of three verdicts:
//!
//! * **false**: every completion of the model violates the property, so no
//!   later design decision can repair it; a definitive counterexample is
//!   produced.
//! * **true**: every completion satisfies the property; a *topological
//!   proof* is produced — the slice of the model (initial states,
//!   transitions, labels) the verdict actually depends on.
//! * **unknown**: the verdict depends on the undecided labels; both a
//!   possible counterexample and a proof of non-violation are produced.
//!
//! Proofs are syntactic objects that can be stored and re-checked against a
//! revised model without running the model checker again: if the revision
//! still contains the recorded slice, the original verdict carries over.
//!
//! The pipeline underneath: properties are negated and normalized
//! ([`ltl::tau_transform`]), the model is closed under complement
//! propositions and approximated into two classical structures
//! ([`pks::Pks::approximate`]), each checked by a Büchi-automaton engine
//! ([`sat`]); proofs come from unsatisfiable cores of a clause encoding
//! ([`snf`], [`uc`]).

pub mod ltl;
pub mod pks;
pub mod proof;
pub mod random;
pub mod sat;
pub mod snf;
pub mod tri;
pub mod uc;

pub use ltl::Formula;
pub use pks::{Ks, Pks};
pub use tri::Tri;
