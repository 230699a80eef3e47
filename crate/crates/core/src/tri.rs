//! The three-valued truth domain used for labels and verdicts.

use std::fmt;
use std::str::FromStr;

/// A truth value in the three-valued domain: false, unknown, or true.
///
/// The derived `Ord` is the information order `False < Unknown < True`,
/// which is exactly the order used by the conjunction (`min`) and
/// disjunction (`max`) operations of the logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tri {
    False,
    Unknown,
    True,
}

impl Tri {
    /// Three-valued complement: swaps true and false, leaves unknown fixed.
    pub fn comp(self) -> Tri {
        match self {
            Tri::True => Tri::False,
            Tri::Unknown => Tri::Unknown,
            Tri::False => Tri::True,
        }
    }

    /// Three-valued conjunction (minimum in the truth order).
    pub fn and(self, other: Tri) -> Tri {
        self.min(other)
    }

    /// Three-valued disjunction (maximum in the truth order).
    pub fn or(self, other: Tri) -> Tri {
        self.max(other)
    }

    /// Conjunction over an iterator; the empty conjunction is `True`.
    pub fn all<I: IntoIterator<Item = Tri>>(values: I) -> Tri {
        values.into_iter().fold(Tri::True, Tri::and)
    }

    /// Disjunction over an iterator; the empty disjunction is `False`.
    pub fn any<I: IntoIterator<Item = Tri>>(values: I) -> Tri {
        values.into_iter().fold(Tri::False, Tri::or)
    }

    /// True exactly for the definite values `True` and `False`.
    pub fn is_definite(self) -> bool {
        self != Tri::Unknown
    }

    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tri::True => "T",
            Tri::Unknown => "?",
            Tri::False => "F",
        };
        write!(f, "{s}")
    }
}

/// Error returned when parsing a [`Tri`] from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected one of T, F, ? but found {0:?}")]
pub struct ParseTriError(pub String);

impl FromStr for Tri {
    type Err = ParseTriError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" => Ok(Tri::True),
            "F" => Ok(Tri::False),
            "?" => Ok(Tri::Unknown),
            other => Err(ParseTriError(other.to_string())),
        }
    }
}
