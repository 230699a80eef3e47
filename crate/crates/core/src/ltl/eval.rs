//! Formula evaluation on ultimately periodic words and model paths.
//!
//! Both evaluators compute one truth vector per subformula over the folded
//! positions of the lasso (prefix plus one copy of the cycle) and solve the
//! temporal operators as fixpoints around the cycle: least fixpoints for
//! `U`/`F`, greatest fixpoints for `W`/`R`/`G`. On a lasso this yields
//! exactly the standard semantics of the infinite unrolling.

use super::{Formula, Lasso, Valuation};
use crate::pks::Pks;
use crate::tri::Tri;

/// Error raised during evaluation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("proposition {0:?} is not assigned by the word")]
    UnassignedProposition(String),
    #[error("state {0:?} does not exist in the model")]
    UnknownState(String),
    #[error("proposition {0:?} does not exist in the model")]
    UnknownProposition(String),
    #[error("({from:?}, {to:?}) is not a transition of the model")]
    NotAPath { from: String, to: String },
}

/// Classical truth of `f` at the first position of the infinite word `w`.
pub fn eval_classical(f: &Formula, w: &Lasso<Valuation>) -> Result<bool, EvalError> {
    Ok(bool_values(f, w)?[0])
}

fn bool_values(f: &Formula, w: &Lasso<Valuation>) -> Result<Vec<bool>, EvalError> {
    let n = w.len();
    Ok(match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(a) => (0..n)
            .map(|i| {
                w.at(i)
                    .get(a)
                    .copied()
                    .ok_or_else(|| EvalError::UnassignedProposition(a.clone()))
            })
            .collect::<Result<_, _>>()?,
        Formula::Not(g) => bool_values(g, w)?.into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => zip_bool(bool_values(a, w)?, bool_values(b, w)?, |x, y| x && y),
        Formula::Or(a, b) => zip_bool(bool_values(a, w)?, bool_values(b, w)?, |x, y| x || y),
        Formula::Implies(a, b) => {
            zip_bool(bool_values(a, w)?, bool_values(b, w)?, |x, y| !x || y)
        }
        Formula::Next(g) => {
            let v = bool_values(g, w)?;
            (0..n).map(|i| v[next(w, i)]).collect()
        }
        Formula::Until(a, b) => {
            let (a, b) = (bool_values(a, w)?, bool_values(b, w)?);
            bool_fixpoint(w, false, |cur, i| b[i] || (a[i] && cur[next(w, i)]))
        }
        Formula::WeakUntil(a, b) => {
            let (a, b) = (bool_values(a, w)?, bool_values(b, w)?);
            bool_fixpoint(w, true, |cur, i| b[i] || (a[i] && cur[next(w, i)]))
        }
        Formula::Release(a, b) => {
            let (a, b) = (bool_values(a, w)?, bool_values(b, w)?);
            bool_fixpoint(w, true, |cur, i| b[i] && (a[i] || cur[next(w, i)]))
        }
        Formula::Globally(g) => {
            let g = bool_values(g, w)?;
            bool_fixpoint(w, true, |cur, i| g[i] && cur[next(w, i)])
        }
        Formula::Finally(g) => {
            let g = bool_values(g, w)?;
            bool_fixpoint(w, false, |cur, i| g[i] || cur[next(w, i)])
        }
    })
}

fn zip_bool(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn next<T>(w: &Lasso<T>, i: usize) -> usize {
    w.next_position(i)
}

/// Chaotic iteration to a fixpoint; with `init = false` and a monotone step
/// this is the least fixpoint, with `init = true` the greatest.
fn bool_fixpoint<T>(
    w: &Lasso<T>,
    init: bool,
    step: impl Fn(&[bool], usize) -> bool,
) -> Vec<bool> {
    let n = w.len();
    let mut cur = vec![init; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let v = step(&cur, i);
            if v != cur[i] {
                cur[i] = v;
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}

/// Three-valued truth of `f` on the model path `path` of `m`.
///
/// `path` must be an actual path: every consecutive pair (including the wrap
/// from the end of the cycle back to its start) must be a transition of `m`.
/// Negation is evaluated as the complement, conjunction as minimum,
/// disjunction as maximum; `a W b` is `(a U b) | G a` and `a R b` is
/// `!(!a U !b)`.
pub fn eval_three_valued(f: &Formula, path: &Lasso<String>, m: &Pks) -> Result<Tri, EvalError> {
    let n = path.len();
    let mut states = Vec::with_capacity(n);
    for i in 0..n {
        let name = path.at(i);
        let idx = m
            .state_index(name)
            .ok_or_else(|| EvalError::UnknownState(name.clone()))?;
        states.push(idx);
    }
    for i in 0..n {
        let from = states[i];
        let to = states[next(path, i)];
        if !m.has_transition_idx(from, to) {
            return Err(EvalError::NotAPath {
                from: m.state_name(from).to_string(),
                to: m.state_name(to).to_string(),
            });
        }
    }
    Ok(tri_values(f, path, &states, m)?[0])
}

fn tri_values(
    f: &Formula,
    w: &Lasso<String>,
    states: &[usize],
    m: &Pks,
) -> Result<Vec<Tri>, EvalError> {
    let n = states.len();
    Ok(match f {
        Formula::True => vec![Tri::True; n],
        Formula::False => vec![Tri::False; n],
        Formula::Atom(a) => {
            let p = m
                .prop_index(a)
                .ok_or_else(|| EvalError::UnknownProposition(a.clone()))?;
            states.iter().map(|&s| m.label_idx(s, p)).collect()
        }
        Formula::Not(g) => tri_values(g, w, states, m)?
            .into_iter()
            .map(Tri::comp)
            .collect(),
        Formula::And(a, b) => zip_tri(
            tri_values(a, w, states, m)?,
            tri_values(b, w, states, m)?,
            Tri::and,
        ),
        Formula::Or(a, b) => zip_tri(
            tri_values(a, w, states, m)?,
            tri_values(b, w, states, m)?,
            Tri::or,
        ),
        Formula::Implies(a, b) => zip_tri(
            tri_values(a, w, states, m)?,
            tri_values(b, w, states, m)?,
            |x, y| x.comp().or(y),
        ),
        Formula::Next(g) => {
            let v = tri_values(g, w, states, m)?;
            (0..n).map(|i| v[next(w, i)]).collect()
        }
        Formula::Until(a, b) => {
            let a = tri_values(a, w, states, m)?;
            let b = tri_values(b, w, states, m)?;
            until_tri(w, &a, &b)
        }
        Formula::WeakUntil(a, b) => {
            let a = tri_values(a, w, states, m)?;
            let b = tri_values(b, w, states, m)?;
            let until = until_tri(w, &a, &b);
            let always = globally_tri(w, &a);
            zip_tri(until, always, Tri::or)
        }
        Formula::Release(a, b) => {
            let a: Vec<Tri> = tri_values(a, w, states, m)?
                .into_iter()
                .map(Tri::comp)
                .collect();
            let b: Vec<Tri> = tri_values(b, w, states, m)?
                .into_iter()
                .map(Tri::comp)
                .collect();
            until_tri(w, &a, &b).into_iter().map(Tri::comp).collect()
        }
        Formula::Globally(g) => {
            let g = tri_values(g, w, states, m)?;
            globally_tri(w, &g)
        }
        Formula::Finally(g) => {
            let g = tri_values(g, w, states, m)?;
            tri_fixpoint(w, Tri::False, |cur, i| g[i].or(cur[next(w, i)]))
        }
    })
}

fn zip_tri(a: Vec<Tri>, b: Vec<Tri>, op: impl Fn(Tri, Tri) -> Tri) -> Vec<Tri> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

fn until_tri<T>(w: &Lasso<T>, a: &[Tri], b: &[Tri]) -> Vec<Tri> {
    tri_fixpoint(w, Tri::False, |cur, i| b[i].or(a[i].and(cur[next(w, i)])))
}

fn globally_tri<T>(w: &Lasso<T>, g: &[Tri]) -> Vec<Tri> {
    tri_fixpoint(w, Tri::True, |cur, i| g[i].and(cur[next(w, i)]))
}

fn tri_fixpoint<T>(w: &Lasso<T>, init: Tri, step: impl Fn(&[Tri], usize) -> Tri) -> Vec<Tri> {
    let n = w.len();
    let mut cur = vec![init; n];
    loop {
        let mut changed = false;
        for i in (0..n).rev() {
            let v = step(&cur, i);
            if v != cur[i] {
                cur[i] = v;
                changed = true;
            }
        }
        if !changed {
            return cur;
        }
    }
}
