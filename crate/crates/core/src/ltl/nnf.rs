//! Negation normal form and the counter-formula transformation.

use super::{complement_name, is_complement_name, Formula};

/// Error raised by [`tau_transform`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TauError {
    /// The input formula already mentions a complement proposition; the
    /// transformation is only defined over base alphabets.
    #[error("formula mentions complement proposition {0:?}")]
    ComplementInInput(String),
    /// Attempted to complement a name that is already a complement.
    #[error("complement names never nest: {0:?}")]
    NestedComplement(String),
}

/// Rewrites a formula into negation normal form: implications are expanded
/// and negations pushed inward until they apply to atoms only.
///
/// The temporal dualities used are
/// `!(a U b) = (!b) W (!a & !b)`, `!(a W b) = (!b) U (!a & !b)` and
/// `!(a R b) = (!a) U (!b)`; `!X a = X !a`, `!G a = F !a`, `!F a = G !a`.
/// The constants are self-dual.
pub fn to_nnf(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => negate_nnf(g),
        Formula::And(a, b) => Formula::and(to_nnf(a), to_nnf(b)),
        Formula::Or(a, b) => Formula::or(to_nnf(a), to_nnf(b)),
        Formula::Implies(a, b) => Formula::or(negate_nnf(a), to_nnf(b)),
        Formula::Next(g) => Formula::next(to_nnf(g)),
        Formula::Globally(g) => Formula::globally(to_nnf(g)),
        Formula::Finally(g) => Formula::finally(to_nnf(g)),
        Formula::Until(a, b) => Formula::until(to_nnf(a), to_nnf(b)),
        Formula::WeakUntil(a, b) => Formula::weak_until(to_nnf(a), to_nnf(b)),
        Formula::Release(a, b) => Formula::release(to_nnf(a), to_nnf(b)),
    }
}

/// Negation normal form of `!f`.
fn negate_nnf(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Atom(_) => Formula::not(f.clone()),
        Formula::Not(g) => to_nnf(g),
        Formula::And(a, b) => Formula::or(negate_nnf(a), negate_nnf(b)),
        Formula::Or(a, b) => Formula::and(negate_nnf(a), negate_nnf(b)),
        Formula::Implies(a, b) => Formula::and(to_nnf(a), negate_nnf(b)),
        Formula::Next(g) => Formula::next(negate_nnf(g)),
        Formula::Globally(g) => Formula::finally(negate_nnf(g)),
        Formula::Finally(g) => Formula::globally(negate_nnf(g)),
        Formula::Until(a, b) => Formula::weak_until(
            negate_nnf(b),
            Formula::and(negate_nnf(a), negate_nnf(b)),
        ),
        Formula::WeakUntil(a, b) => Formula::until(
            negate_nnf(b),
            Formula::and(negate_nnf(a), negate_nnf(b)),
        ),
        Formula::Release(a, b) => Formula::until(negate_nnf(a), negate_nnf(b)),
    }
}

/// The counter-formula transformation: negate `f`, convert to negation
/// normal form, and replace each negated atom `!p` by the complement
/// proposition `~p`.
///
/// The result mentions no negation node at all; checking a model against it
/// searches for violations of `f` over the complement-closed alphabet.
/// `f` must range over base propositions only.
pub fn tau_transform(f: &Formula) -> Result<Formula, TauError> {
    if let Some(c) = f.atoms().iter().find(|a| is_complement_name(a)) {
        return Err(TauError::ComplementInInput(c.clone()));
    }
    let negated = negate_nnf(f);
    let result = replace_negated_atoms(&negated)?;
    debug_assert!(result.is_negation_free());
    Ok(result)
}

fn replace_negated_atoms(f: &Formula) -> Result<Formula, TauError> {
    Ok(match f {
        Formula::True | Formula::False | Formula::Atom(_) => f.clone(),
        Formula::Not(g) => match g.as_ref() {
            Formula::Atom(a) => Formula::Atom(complement_name(a)?),
            // to_nnf only leaves negations directly on atoms
            other => unreachable!("negation on non-atom after NNF: {other}"),
        },
        Formula::And(a, b) => Formula::and(replace_negated_atoms(a)?, replace_negated_atoms(b)?),
        Formula::Or(a, b) => Formula::or(replace_negated_atoms(a)?, replace_negated_atoms(b)?),
        Formula::Implies(a, b) => {
            Formula::implies(replace_negated_atoms(a)?, replace_negated_atoms(b)?)
        }
        Formula::Next(g) => Formula::next(replace_negated_atoms(g)?),
        Formula::Globally(g) => Formula::globally(replace_negated_atoms(g)?),
        Formula::Finally(g) => Formula::finally(replace_negated_atoms(g)?),
        Formula::Until(a, b) => {
            Formula::until(replace_negated_atoms(a)?, replace_negated_atoms(b)?)
        }
        Formula::WeakUntil(a, b) => {
            Formula::weak_until(replace_negated_atoms(a)?, replace_negated_atoms(b)?)
        }
        Formula::Release(a, b) => {
            Formula::release(replace_negated_atoms(a)?, replace_negated_atoms(b)?)
        }
    })
}

/// Folds boolean constants out of a formula. The result either is a constant
/// or contains no constant at all. Uses the usual simplifications, e.g.
/// `a U true = true`, `a U false = false`, `a W false = G a`,
/// `false R b = G b`, `X c = c` for constant `c`.
pub(crate) fn fold_constants(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        True | False | Atom(_) => f.clone(),
        Not(g) => match fold_constants(g) {
            True => False,
            False => True,
            g => Formula::not(g),
        },
        And(a, b) => match (fold_constants(a), fold_constants(b)) {
            (False, _) | (_, False) => False,
            (True, g) | (g, True) => g,
            (a, b) => Formula::and(a, b),
        },
        Or(a, b) => match (fold_constants(a), fold_constants(b)) {
            (True, _) | (_, True) => True,
            (False, g) | (g, False) => g,
            (a, b) => Formula::or(a, b),
        },
        Implies(a, b) => match (fold_constants(a), fold_constants(b)) {
            (False, _) | (_, True) => True,
            (True, g) => g,
            (a, False) => fold_constants(&Formula::not(a)),
            (a, b) => Formula::implies(a, b),
        },
        Next(g) => match fold_constants(g) {
            c @ (True | False) => c,
            g => Formula::next(g),
        },
        Globally(g) => match fold_constants(g) {
            c @ (True | False) => c,
            g => Formula::globally(g),
        },
        Finally(g) => match fold_constants(g) {
            c @ (True | False) => c,
            g => Formula::finally(g),
        },
        Until(a, b) => match (fold_constants(a), fold_constants(b)) {
            (_, False) => False,
            (_, True) => True,
            (False, b) => b,
            (True, b) => Formula::finally(b),
            (a, b) => Formula::until(a, b),
        },
        WeakUntil(a, b) => match (fold_constants(a), fold_constants(b)) {
            (True, _) | (_, True) => True,
            (False, b) => b,
            (a, False) => Formula::globally(a),
            (a, b) => Formula::weak_until(a, b),
        },
        Release(a, b) => match (fold_constants(a), fold_constants(b)) {
            (_, False) => False,
            (_, True) => True,
            (True, b) => b,
            (False, b) => Formula::globally(b),
            (a, b) => Formula::release(a, b),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;

    #[test]
    fn nnf_pushes_negations_to_atoms() {
        let f = parse_ltl("!(a & X b)").unwrap();
        assert_eq!(to_nnf(&f), parse_ltl("!a | X !b").unwrap());

        let f = parse_ltl("!(a -> b)").unwrap();
        assert_eq!(to_nnf(&f), parse_ltl("a & !b").unwrap());

        let f = parse_ltl("!G a").unwrap();
        assert_eq!(to_nnf(&f), parse_ltl("F !a").unwrap());
    }

    #[test]
    fn until_weak_until_duality() {
        // !((!move) W on) = (!on) U (move & !on)
        let f = parse_ltl("!((!move) W on)").unwrap();
        assert_eq!(to_nnf(&f), parse_ltl("(!on) U (move & !on)").unwrap());

        let f = parse_ltl("!(a U b)").unwrap();
        assert_eq!(to_nnf(&f), parse_ltl("(!b) W (!a & !b)").unwrap());

        let f = parse_ltl("!(a R b)").unwrap();
        assert_eq!(to_nnf(&f), parse_ltl("(!a) U (!b)").unwrap());
    }

    #[test]
    fn constants_are_self_dual() {
        assert_eq!(to_nnf(&parse_ltl("!true").unwrap()), Formula::False);
        assert_eq!(to_nnf(&parse_ltl("!false").unwrap()), Formula::True);
    }

    #[test]
    fn tau_examples() {
        // tau(G p) = F ~p
        let tau = tau_transform(&parse_ltl("G p").unwrap()).unwrap();
        assert_eq!(tau, Formula::finally(Formula::atom("~p")));

        // tau(p) = ~p
        let tau = tau_transform(&parse_ltl("p").unwrap()).unwrap();
        assert_eq!(tau, Formula::atom("~p"));

        // tau(G((!move) W on)) = F(~on U (move & ~on))
        let tau = tau_transform(&parse_ltl("G((!move) W on)").unwrap()).unwrap();
        assert_eq!(
            tau,
            Formula::finally(Formula::until(
                Formula::atom("~on"),
                Formula::and(Formula::atom("move"), Formula::atom("~on"))
            ))
        );
    }

    #[test]
    fn tau_output_is_negation_free() {
        let samples = [
            "G(suck -> reached)",
            "(!suck) W (move & (!suck))",
            "a U (b R !c)",
            "F(a & !b) -> G c",
        ];
        for s in samples {
            let tau = tau_transform(&parse_ltl(s).unwrap()).unwrap();
            assert!(tau.is_negation_free(), "tau({s}) = {tau} has a negation");
        }
    }

    #[test]
    fn tau_rejects_complement_inputs() {
        let f = Formula::globally(Formula::atom("~p"));
        assert!(matches!(
            tau_transform(&f),
            Err(TauError::ComplementInInput(_))
        ));
    }

    #[test]
    fn constant_folding() {
        let cases = [
            ("a U true", "true"),
            ("a U false", "false"),
            ("true U b", "F b"),
            ("a W false", "G a"),
            ("false R b", "G b"),
            ("X true & a", "a"),
            ("a -> false", "!a"),
        ];
        for (input, expected) in cases {
            assert_eq!(
                fold_constants(&parse_ltl(input).unwrap()),
                parse_ltl(expected).unwrap(),
                "folding {input}"
            );
        }
    }
}
