//! Separated normal form: a clause-level encoding of models and properties.
//!
//! Three clause shapes exist. An *initial* clause is a disjunction of
//! literals that must hold at time zero; a *global* clause is
//! `G(now₁ ∨ … ∨ X(next₁ ∨ …))`; an *eventuality* clause is
//! `G(now₁ ∨ … ∨ F l)` with a single promised literal.
//!
//! A Kripke structure is encoded over fresh state propositions `@st_<s>`
//! ([`ks_to_snf`]); a property is encoded with fresh definition propositions
//! `@x<n>` ([`property_to_snf`]). Every clause carries a [`Provenance`] tag
//! naming the model element (or property) it came from — this is what lets an
//! unsatisfiable core be mapped back onto a slice of the model.

use std::fmt;

use crate::ltl::Formula;
use crate::pks::Ks;
use crate::tri::Tri;

/// Prefix of the fresh proposition that encodes "the run is in state s".
pub const STATE_PROP_PREFIX: &str = "@st_";

/// Prefix of fresh propositions introduced while encoding a property.
pub const DEFINITION_PROP_PREFIX: &str = "@x";

/// Error raised by the model encoder.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SnfError {
    #[error("proposition {0:?} collides with the reserved {STATE_PROP_PREFIX} prefix")]
    ReservedName(String),
}

/// A proposition or its (classical) negation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SnfLiteral {
    Pos(String),
    Neg(String),
}

impl SnfLiteral {
    pub fn name(&self) -> &str {
        match self {
            SnfLiteral::Pos(n) | SnfLiteral::Neg(n) => n,
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, SnfLiteral::Pos(_))
    }

    /// Truth of the literal given the truth of its proposition.
    pub fn holds_given(&self, value: bool) -> bool {
        value == self.is_positive()
    }

    fn formula(&self) -> Formula {
        match self {
            SnfLiteral::Pos(n) => Formula::atom(n.clone()),
            SnfLiteral::Neg(n) => Formula::not(Formula::atom(n.clone())),
        }
    }
}

impl fmt::Display for SnfLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnfLiteral::Pos(n) => write!(f, "{n}"),
            SnfLiteral::Neg(n) => write!(f, "!{n}"),
        }
    }
}

/// Where a clause came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    /// The single clause enumerating the initial states.
    Init,
    /// The successor clause of a state.
    Reach(String),
    /// A true label: `(state, prop)`.
    LabelTrue(String, String),
    /// A false label: `(state, prop)`.
    LabelFalse(String, String),
    /// Mutual exclusion of a state pair.
    Regularity(String, String),
    /// The n-th clause of a property encoding.
    Property(usize),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Init => write!(f, "init"),
            Provenance::Reach(s) => write!(f, "reach {s}"),
            Provenance::LabelTrue(s, p) => write!(f, "label {s} {p}=T"),
            Provenance::LabelFalse(s, p) => write!(f, "label {s} {p}=F"),
            Provenance::Regularity(a, b) => write!(f, "reg {a} {b}"),
            Provenance::Property(i) => write!(f, "prop {i}"),
        }
    }
}

/// One clause in separated normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SnfClause {
    Initial {
        now: Vec<SnfLiteral>,
        provenance: Provenance,
    },
    Global {
        now: Vec<SnfLiteral>,
        next: Vec<SnfLiteral>,
        provenance: Provenance,
    },
    Eventuality {
        now: Vec<SnfLiteral>,
        eventually: SnfLiteral,
        provenance: Provenance,
    },
}

impl SnfClause {
    pub fn provenance(&self) -> &Provenance {
        match self {
            SnfClause::Initial { provenance, .. }
            | SnfClause::Global { provenance, .. }
            | SnfClause::Eventuality { provenance, .. } => provenance,
        }
    }

    pub fn now(&self) -> &[SnfLiteral] {
        match self {
            SnfClause::Initial { now, .. }
            | SnfClause::Global { now, .. }
            | SnfClause::Eventuality { now, .. } => now,
        }
    }

    /// Every literal of the clause, now-part first.
    pub fn literals(&self) -> Vec<&SnfLiteral> {
        let mut out: Vec<&SnfLiteral> = self.now().iter().collect();
        match self {
            SnfClause::Initial { .. } => {}
            SnfClause::Global { next, .. } => out.extend(next.iter()),
            SnfClause::Eventuality { eventually, .. } => out.push(eventually),
        }
        out
    }

    /// The LTL formula the clause denotes.
    pub fn formula(&self) -> Formula {
        fn disj(lits: &[SnfLiteral]) -> Formula {
            lits.iter()
                .map(SnfLiteral::formula)
                .reduce(Formula::or)
                .unwrap_or(Formula::False)
        }
        match self {
            SnfClause::Initial { now, .. } => disj(now),
            SnfClause::Global { now, next, .. } => {
                let body = if next.is_empty() {
                    disj(now)
                } else if now.is_empty() {
                    Formula::next(disj(next))
                } else {
                    Formula::or(disj(now), Formula::next(disj(next)))
                };
                Formula::globally(body)
            }
            SnfClause::Eventuality {
                now, eventually, ..
            } => {
                let promise = Formula::finally(eventually.formula());
                let body = if now.is_empty() {
                    promise
                } else {
                    Formula::or(disj(now), promise)
                };
                Formula::globally(body)
            }
        }
    }
}

impl fmt::Display for SnfClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn lits(f: &mut fmt::Formatter<'_>, lits: &[SnfLiteral]) -> fmt::Result {
            if lits.is_empty() {
                return write!(f, "false");
            }
            for (i, l) in lits.iter().enumerate() {
                if i > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{l}")?;
            }
            Ok(())
        }
        write!(f, "[{}] ", self.provenance())?;
        match self {
            SnfClause::Initial { now, .. } => {
                write!(f, "initial: ")?;
                lits(f, now)
            }
            SnfClause::Global { now, next, .. } => {
                write!(f, "global: ")?;
                if !now.is_empty() {
                    lits(f, now)?;
                }
                if !next.is_empty() {
                    if !now.is_empty() {
                        write!(f, " | ")?;
                    }
                    write!(f, "X(")?;
                    lits(f, next)?;
                    write!(f, ")")?;
                } else if now.is_empty() {
                    write!(f, "false")?;
                }
                Ok(())
            }
            SnfClause::Eventuality {
                now, eventually, ..
            } => {
                write!(f, "eventuality: ")?;
                if !now.is_empty() {
                    lits(f, now)?;
                    write!(f, " | ")?;
                }
                write!(f, "F {eventually}")
            }
        }
    }
}

/// The conjunction denoted by a clause set (`true` when empty).
pub fn clauses_to_formula(clauses: &[SnfClause]) -> Formula {
    clauses
        .iter()
        .map(SnfClause::formula)
        .reduce(Formula::and)
        .unwrap_or(Formula::True)
}

fn state_prop(state: &str) -> String {
    format!("{STATE_PROP_PREFIX}{state}")
}

/// Encodes a Kripke structure as a clause set whose models are exactly the
/// runs of the structure (projected onto its alphabet).
///
/// Emits, in this order: one initial clause over the initial-state
/// propositions; one successor clause per state; one clause per definite
/// label; one mutual-exclusion clause per unordered state pair.
pub fn ks_to_snf(a: &Ks) -> Result<Vec<SnfClause>, SnfError> {
    for p in a.props() {
        if crate::ltl::base_name(p).starts_with('@') {
            return Err(SnfError::ReservedName(p.clone()));
        }
    }

    let mut out = Vec::new();
    out.push(SnfClause::Initial {
        now: a
            .initial_idx()
            .map(|s| SnfLiteral::Pos(state_prop(a.state_name(s))))
            .collect(),
        provenance: Provenance::Init,
    });
    for s in 0..a.state_count() {
        out.push(SnfClause::Global {
            now: vec![SnfLiteral::Neg(state_prop(a.state_name(s)))],
            next: a
                .successors_idx(s)
                .into_iter()
                .map(|t| SnfLiteral::Pos(state_prop(a.state_name(t))))
                .collect(),
            provenance: Provenance::Reach(a.state_name(s).to_string()),
        });
    }
    for s in 0..a.state_count() {
        for p in 0..a.prop_count() {
            let state = a.state_name(s).to_string();
            let prop = a.prop_name(p).to_string();
            let (lit, provenance) = match a.label_idx(s, p) {
                Tri::True => (
                    SnfLiteral::Pos(prop.clone()),
                    Provenance::LabelTrue(state.clone(), prop),
                ),
                Tri::False => (
                    SnfLiteral::Neg(prop.clone()),
                    Provenance::LabelFalse(state.clone(), prop),
                ),
                Tri::Unknown => unreachable!("Ks labels are definite"),
            };
            out.push(SnfClause::Global {
                now: vec![SnfLiteral::Neg(state_prop(&state)), lit],
                next: Vec::new(),
                provenance,
            });
        }
    }
    for i in 0..a.state_count() {
        for j in i + 1..a.state_count() {
            out.push(SnfClause::Global {
                now: vec![
                    SnfLiteral::Neg(state_prop(a.state_name(i))),
                    SnfLiteral::Neg(state_prop(a.state_name(j))),
                ],
                next: Vec::new(),
                provenance: Provenance::Regularity(
                    a.state_name(i).to_string(),
                    a.state_name(j).to_string(),
                ),
            });
        }
    }
    Ok(out)
}

/// Encodes a property as an equisatisfiable clause set.
///
/// The input is first brought into negation normal form, so any formula is
/// accepted; the intended input is the normalized negation of a property,
/// which is already there. Temporal subterms get a fresh definition
/// proposition constrained to imply the subterm — since every subterm occurs
/// positively, satisfiability carries over in both directions.
pub fn property_to_snf(f: &Formula) -> Vec<SnfClause> {
    let f = crate::ltl::fold_constants(&crate::ltl::to_nnf(f));
    let mut enc = Encoder {
        next_fresh: 0,
        clauses: Vec::new(),
    };
    // a conjunction at the top level splits into independent clauses
    let mut conjuncts = Vec::new();
    flatten_and(&f, &mut conjuncts);
    for g in conjuncts {
        enc.top_level(g);
    }
    enc.clauses
}

fn flatten_and<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        other => out.push(other),
    }
}

fn flatten_or<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Or(a, b) => {
            flatten_or(a, out);
            flatten_or(b, out);
        }
        other => out.push(other),
    }
}

fn as_literal(f: &Formula) -> Option<SnfLiteral> {
    match f {
        Formula::Atom(a) => Some(SnfLiteral::Pos(a.clone())),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => Some(SnfLiteral::Neg(a.clone())),
            _ => None,
        },
        _ => None,
    }
}

struct Encoder {
    next_fresh: usize,
    clauses: Vec<SnfClause>,
}

impl Encoder {
    fn push(&mut self, mut clause: SnfClause) {
        let index = self.clauses.len();
        match &mut clause {
            SnfClause::Initial { provenance, .. }
            | SnfClause::Global { provenance, .. }
            | SnfClause::Eventuality { provenance, .. } => {
                *provenance = Provenance::Property(index);
            }
        }
        self.clauses.push(clause);
    }

    fn fresh(&mut self) -> String {
        let n = self.next_fresh;
        self.next_fresh += 1;
        format!("{DEFINITION_PROP_PREFIX}{n}")
    }

    fn top_level(&mut self, f: &Formula) {
        match f {
            Formula::True => {}
            Formula::False => self.push(SnfClause::Initial {
                now: Vec::new(),
                provenance: Provenance::Property(0),
            }),
            _ => {
                // a disjunction of plain literals needs no definition
                let mut parts = Vec::new();
                flatten_or(f, &mut parts);
                if let Some(lits) = parts
                    .iter()
                    .map(|g| as_literal(g))
                    .collect::<Option<Vec<_>>>()
                {
                    self.push(SnfClause::Initial {
                        now: lits,
                        provenance: Provenance::Property(0),
                    });
                } else {
                    let x = self.fresh();
                    self.push(SnfClause::Initial {
                        now: vec![SnfLiteral::Pos(x.clone())],
                        provenance: Provenance::Property(0),
                    });
                    self.define(&x, f);
                }
            }
        }
    }

    /// Returns a literal equivalent to `f` in context, introducing and
    /// defining a fresh proposition when `f` is not a literal already.
    fn literal_for(&mut self, f: &Formula, pending: &mut Vec<(String, Formula)>) -> SnfLiteral {
        if let Some(l) = as_literal(f) {
            return l;
        }
        let x = self.fresh();
        pending.push((x.clone(), f.clone()));
        SnfLiteral::Pos(x)
    }

    /// Literals denoting `f` in disjunction position: disjuncts flatten in
    /// place, each non-literal disjunct gets its own definition.
    fn lits_for(&mut self, f: &Formula, pending: &mut Vec<(String, Formula)>) -> Vec<SnfLiteral> {
        let mut parts = Vec::new();
        flatten_or(f, &mut parts);
        parts
            .into_iter()
            .map(|g| self.literal_for(g, pending))
            .collect()
    }

    /// Emits clauses forcing `x -> f`, then definitions for any fresh
    /// propositions those clauses introduced.
    fn define(&mut self, x: &str, f: &Formula) {
        let not_x = SnfLiteral::Neg(x.to_string());
        let mut pending = Vec::new();
        match f {
            Formula::True => {}
            Formula::False => {
                self.push(SnfClause::Global {
                    now: vec![not_x.clone()],
                    next: Vec::new(),
                    provenance: Provenance::Property(0),
                });
            }
            Formula::Atom(_) | Formula::Not(_) | Formula::And(_, _) | Formula::Or(_, _) => {
                // x -> g for every conjunct g; disjunctions flatten into one clause
                let mut conjuncts = Vec::new();
                flatten_and(f, &mut conjuncts);
                for g in conjuncts {
                    let mut now = vec![not_x.clone()];
                    now.extend(self.lits_for(g, &mut pending));
                    self.push(SnfClause::Global {
                        now,
                        next: Vec::new(),
                        provenance: Provenance::Property(0),
                    });
                }
            }
            Formula::Next(g) => {
                let next = self.lits_for(g, &mut pending);
                self.push(SnfClause::Global {
                    now: vec![not_x.clone()],
                    next,
                    provenance: Provenance::Property(0),
                });
            }
            Formula::Globally(g) => {
                let mut now = vec![not_x.clone()];
                now.extend(self.lits_for(g, &mut pending));
                self.push(SnfClause::Global {
                    now,
                    next: Vec::new(),
                    provenance: Provenance::Property(0),
                });
                self.push(SnfClause::Global {
                    now: vec![not_x.clone()],
                    next: vec![SnfLiteral::Pos(x.to_string())],
                    provenance: Provenance::Property(0),
                });
            }
            Formula::Finally(g) => {
                let lg = self.literal_for(g, &mut pending);
                self.push(SnfClause::Eventuality {
                    now: vec![not_x.clone()],
                    eventually: lg,
                    provenance: Provenance::Property(0),
                });
            }
            Formula::Until(g, h) => {
                // the eventuality clause admits a single promised literal,
                // so the right-hand side always goes through a definition
                let lg = self.lits_for(g, &mut pending);
                let lh = self.literal_for(h, &mut pending);
                let mut now = vec![not_x.clone(), lh.clone()];
                now.extend(lg);
                self.push(SnfClause::Global {
                    now,
                    next: Vec::new(),
                    provenance: Provenance::Property(0),
                });
                self.push(SnfClause::Global {
                    now: vec![not_x.clone(), lh.clone()],
                    next: vec![SnfLiteral::Pos(x.to_string())],
                    provenance: Provenance::Property(0),
                });
                self.push(SnfClause::Eventuality {
                    now: vec![not_x.clone()],
                    eventually: lh,
                    provenance: Provenance::Property(0),
                });
            }
            Formula::WeakUntil(g, h) => {
                let lg = self.lits_for(g, &mut pending);
                let lh = self.lits_for(h, &mut pending);
                let mut now = vec![not_x.clone()];
                now.extend(lh.iter().cloned());
                now.extend(lg);
                self.push(SnfClause::Global {
                    now,
                    next: Vec::new(),
                    provenance: Provenance::Property(0),
                });
                let mut now = vec![not_x.clone()];
                now.extend(lh);
                self.push(SnfClause::Global {
                    now,
                    next: vec![SnfLiteral::Pos(x.to_string())],
                    provenance: Provenance::Property(0),
                });
            }
            Formula::Release(g, h) => {
                let mut now = vec![not_x.clone()];
                now.extend(self.lits_for(h, &mut pending));
                self.push(SnfClause::Global {
                    now,
                    next: Vec::new(),
                    provenance: Provenance::Property(0),
                });
                let mut now = vec![not_x.clone()];
                now.extend(self.lits_for(g, &mut pending));
                self.push(SnfClause::Global {
                    now,
                    next: vec![SnfLiteral::Pos(x.to_string())],
                    provenance: Provenance::Property(0),
                });
            }
            Formula::Implies(_, _) => unreachable!("removed by negation normal form"),
        }
        for (name, g) in pending {
            self.define(&name, &g);
        }
    }
}
