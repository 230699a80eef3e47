//! LTL formulas: abstract syntax, parsing, normal forms, and evaluation on
//! ultimately periodic words.

mod eval;
mod nnf;
mod parse;

pub use eval::{eval_classical, eval_three_valued, EvalError};
pub use nnf::{tau_transform, to_nnf, TauError};
pub(crate) use nnf::fold_constants;
pub use parse::{is_identifier, parse_ltl, parse_properties, ParseError};

use std::collections::BTreeSet;
use std::fmt;

/// Prefix that marks a proposition as the complement of another one.
///
/// A proposition named `~p` is true exactly where `p` is false. Complement
/// names are generated internally (by `tau_transform` and the alphabet
/// closure); user-facing parsers reject them.
pub const COMPLEMENT_PREFIX: char = '~';

/// Returns the complement name for a base proposition (`p` -> `~p`).
/// Complements never nest, so complementing a complement name is an error.
pub fn complement_name(base: &str) -> Result<String, TauError> {
    if is_complement_name(base) {
        return Err(TauError::NestedComplement(base.to_string()));
    }
    Ok(format!("{COMPLEMENT_PREFIX}{base}"))
}

/// True if `name` is a complement name (`~p`).
pub fn is_complement_name(name: &str) -> bool {
    name.starts_with(COMPLEMENT_PREFIX)
}

/// Strips the complement marker if present: `~p` -> `p`, `p` -> `p`.
pub fn base_name(name: &str) -> &str {
    name.strip_prefix(COMPLEMENT_PREFIX).unwrap_or(name)
}

/// An LTL formula over named propositions.
///
/// `WeakUntil` (`W`) and `Release` (`R`) are first-class constructors rather
/// than sugar, so negation-normal-form conversion never needs `Globally` on
/// the right-hand side of an `Until`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Globally(Box<Formula>),
    Finally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    WeakUntil(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }
    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }
    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }
    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }
    pub fn weak_until(a: Formula, b: Formula) -> Formula {
        Formula::WeakUntil(Box::new(a), Box::new(b))
    }
    pub fn release(a: Formula, b: Formula) -> Formula {
        Formula::Release(Box::new(a), Box::new(b))
    }

    /// The set of proposition names occurring in the formula.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) | Formula::Next(f) | Formula::Globally(f) | Formula::Finally(f) => {
                f.collect_atoms(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::WeakUntil(a, b)
            | Formula::Release(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// True if no negation node occurs anywhere in the formula.
    pub fn is_negation_free(&self) -> bool {
        match self {
            Formula::Not(_) => false,
            Formula::True | Formula::False | Formula::Atom(_) => true,
            Formula::Next(f) | Formula::Globally(f) | Formula::Finally(f) => f.is_negation_free(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(a, b)
            | Formula::WeakUntil(a, b)
            | Formula::Release(a, b) => a.is_negation_free() && b.is_negation_free(),
        }
    }

    /// True if any atom is a complement name.
    pub fn mentions_complements(&self) -> bool {
        self.atoms().iter().any(|a| is_complement_name(a))
    }
}

// Operator precedence, used by the printer to insert the minimal number of
// parentheses. Must mirror the parser: unary > U/W/R > & > | > ->.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Until(..) | Formula::WeakUntil(..) | Formula::Release(..) => 4,
        Formula::Not(_) | Formula::Next(_) | Formula::Globally(_) | Formula::Finally(_) => 5,
        Formula::True | Formula::False | Formula::Atom(_) => 6,
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(
            f: &mut fmt::Formatter<'_>,
            node: &Formula,
            min_prec: u8,
            space_before: bool,
        ) -> fmt::Result {
            if space_before {
                write!(f, " ")?;
            }
            if precedence(node) < min_prec {
                write!(f, "({node})")
            } else {
                write!(f, "{node}")
            }
        }

        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(g) => {
                write!(f, "!")?;
                child(f, g, 5, false)
            }
            Formula::Next(g) => {
                write!(f, "X")?;
                child(f, g, 5, true)
            }
            Formula::Globally(g) => {
                write!(f, "G")?;
                child(f, g, 5, true)
            }
            Formula::Finally(g) => {
                write!(f, "F")?;
                child(f, g, 5, true)
            }
            // Right-associative binaries: the left child needs strictly higher
            // precedence, the right child may share the operator's own level.
            Formula::Until(a, b) => {
                child(f, a, 5, false)?;
                write!(f, " U")?;
                child(f, b, 4, true)
            }
            Formula::WeakUntil(a, b) => {
                child(f, a, 5, false)?;
                write!(f, " W")?;
                child(f, b, 4, true)
            }
            Formula::Release(a, b) => {
                child(f, a, 5, false)?;
                write!(f, " R")?;
                child(f, b, 4, true)
            }
            // Left-associative: left child may share the level.
            Formula::And(a, b) => {
                child(f, a, 3, false)?;
                write!(f, " &")?;
                child(f, b, 4, true)
            }
            Formula::Or(a, b) => {
                child(f, a, 2, false)?;
                write!(f, " |")?;
                child(f, b, 3, true)
            }
            Formula::Implies(a, b) => {
                child(f, a, 2, false)?;
                write!(f, " ->")?;
                child(f, b, 1, true)
            }
        }
    }
}

/// An ultimately periodic word or path: a finite prefix followed by a
/// nonempty cycle repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso<T> {
    pub prefix: Vec<T>,
    pub cycle: Vec<T>,
}

impl<T> Lasso<T> {
    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Lasso<T> {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        Lasso { prefix, cycle }
    }

    /// Number of distinct positions (prefix plus one unrolling of the cycle).
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the cycle is never empty
    }

    /// The element at position `i` of the infinite unrolling.
    pub fn at(&self, i: usize) -> &T {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor of position `i` within the folded representation
    /// (`0 <= i < self.len()`), wrapping from the last cycle position back to
    /// the start of the cycle.
    pub(crate) fn next_position(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Lasso<U> {
        let mut f = f;
        Lasso {
            prefix: self.prefix.iter().map(&mut f).collect(),
            cycle: self.cycle.iter().map(&mut f).collect(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Lasso<T> {
    /// Renders as `s0,s1,(t0,t1)^ω`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.prefix {
            write!(f, "{p},")?;
        }
        write!(f, "(")?;
        for (i, c) in self.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")^\u{03c9}")
    }
}

/// A classical assignment of truth values to propositions at one position.
pub type Valuation = std::collections::BTreeMap<String, bool>;
