//! Line-oriented text format for partial Kripke structures.
//!
//! ```text
//! pks vacuum
//! ap move suck on reached
//! state OFF move=F suck=F on=F reached=F
//! init OFF
//! trans OFF IDLE
//! ```
//!
//! `#` starts a comment (full line or trailing). All state lines must come
//! after the `ap` line and before any `init`/`trans` line, and must assign
//! every proposition. [`serialize_pks`] emits a canonical form: one `init`
//! line, transitions sorted by declaration order, labels in alphabet order.
//! Parsing the canonical form back yields an identical structure.

use std::fmt::Write as _;

use super::{ModelError, Pks};
use crate::tri::Tri;

/// Error raised while reading a model file.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line,
            message: message.into(),
        }
    }

    fn model(line: usize, err: ModelError) -> FormatError {
        FormatError::new(line, err.to_string())
    }
}

/// Parses the text format described in the module docs.
pub fn parse_pks(text: &str) -> Result<Pks, FormatError> {
    let mut model: Option<Pks> = None;
    let mut saw_ap = false;
    let mut saw_body = false; // any init/trans line yet

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let keyword = words.next().expect("nonempty line");
        let rest: Vec<&str> = words.collect();
        match keyword {
            "pks" => {
                if model.is_some() {
                    return Err(FormatError::new(line_no, "duplicate pks line"));
                }
                let [name] = rest[..] else {
                    return Err(FormatError::new(line_no, "expected: pks <name>"));
                };
                model = Some(
                    Pks::new(name, Vec::new()).map_err(|e| FormatError::model(line_no, e))?,
                );
            }
            "ap" => {
                let m = model
                    .as_mut()
                    .ok_or_else(|| FormatError::new(line_no, "ap before pks line"))?;
                if saw_ap {
                    return Err(FormatError::new(line_no, "duplicate ap line"));
                }
                saw_ap = true;
                *m = Pks::new(m.name(), rest.iter().map(|p| p.to_string()).collect())
                    .map_err(|e| FormatError::model(line_no, e))?;
            }
            "state" => {
                let m = checked_model(&mut model, saw_ap, line_no)?;
                if saw_body {
                    return Err(FormatError::new(
                        line_no,
                        "state lines must precede init/trans lines",
                    ));
                }
                let (name, assigns) = rest
                    .split_first()
                    .ok_or_else(|| FormatError::new(line_no, "expected: state <name> <p>=<v> ..."))?;
                let mut labels = vec![None; m.prop_count()];
                for a in assigns {
                    let (p, v) = a.split_once('=').ok_or_else(|| {
                        FormatError::new(line_no, format!("expected <prop>=<value>, got {a:?}"))
                    })?;
                    let pi = m.prop_index(p).ok_or_else(|| {
                        FormatError::model(line_no, ModelError::UnknownProposition(p.to_string()))
                    })?;
                    let tri: Tri = v.parse().map_err(|_| {
                        FormatError::new(line_no, format!("bad label value {v:?} (want T, F or ?)"))
                    })?;
                    if labels[pi].replace(tri).is_some() {
                        return Err(FormatError::new(
                            line_no,
                            format!("proposition {p:?} assigned twice"),
                        ));
                    }
                }
                if let Some(missing) = labels.iter().position(Option::is_none) {
                    return Err(FormatError::new(
                        line_no,
                        format!("state {name:?} misses a value for {:?}", m.prop_name(missing)),
                    ));
                }
                m.add_state(name, labels.into_iter().flatten().collect())
                    .map_err(|e| FormatError::model(line_no, e))?;
            }
            "init" => {
                let m = checked_model(&mut model, saw_ap, line_no)?;
                saw_body = true;
                if rest.is_empty() {
                    return Err(FormatError::new(line_no, "expected: init <state> ..."));
                }
                for s in rest {
                    m.mark_initial(s).map_err(|e| FormatError::model(line_no, e))?;
                }
            }
            "trans" => {
                let m = checked_model(&mut model, saw_ap, line_no)?;
                saw_body = true;
                let [from, to] = rest[..] else {
                    return Err(FormatError::new(line_no, "expected: trans <src> <dst>"));
                };
                m.add_transition(from, to)
                    .map_err(|e| FormatError::model(line_no, e))?;
            }
            other => {
                return Err(FormatError::new(
                    line_no,
                    format!("unknown keyword {other:?}"),
                ));
            }
        }
    }

    let end = text.lines().count();
    let model = model.ok_or_else(|| FormatError::new(end, "missing pks line"))?;
    if !saw_ap {
        return Err(FormatError::new(end, "missing ap line"));
    }
    if model.state_count() == 0 {
        return Err(FormatError::new(end, "no state lines"));
    }
    Ok(model)
}

fn checked_model<'a>(
    model: &'a mut Option<Pks>,
    saw_ap: bool,
    line_no: usize,
) -> Result<&'a mut Pks, FormatError> {
    let m = model
        .as_mut()
        .ok_or_else(|| FormatError::new(line_no, "content before pks line"))?;
    if !saw_ap {
        return Err(FormatError::new(line_no, "content before ap line"));
    }
    Ok(m)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Serializes a model in canonical form.
pub fn serialize_pks(m: &Pks) -> String {
    let mut out = String::new();
    writeln!(out, "pks {}", m.name()).unwrap();
    writeln!(out, "ap {}", m.props().join(" ")).unwrap();
    for s in 0..m.state_count() {
        write!(out, "state {}", m.state_name(s)).unwrap();
        for p in 0..m.prop_count() {
            write!(out, " {}={}", m.prop_name(p), m.label_idx(s, p)).unwrap();
        }
        out.push('\n');
    }
    let initials: Vec<&str> = m.initial_idx().map(|s| m.state_name(s)).collect();
    writeln!(out, "init {}", initials.join(" ")).unwrap();
    for (f, t) in m.transitions_idx() {
        writeln!(out, "trans {} {}", m.state_name(f), m.state_name(t)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{vacuum_model, VACUUM_PKS};

    #[test]
    fn parses_the_vacuum_fixture() {
        let m = parse_pks(VACUUM_PKS).unwrap();
        assert_eq!(m, vacuum_model());
    }

    #[test]
    fn round_trip_is_exact() {
        let m = vacuum_model();
        let text = serialize_pks(&m);
        let back = parse_pks(&text).unwrap();
        assert_eq!(back, m);
        // canonical text is a fixed point of parse∘serialize
        assert_eq!(serialize_pks(&back), text);
    }

    #[test]
    fn comments_and_duplicates_are_tolerated() {
        let text = "\
# a tiny model
pks two
ap p   # alphabet
state a p=T
state b p=?
init a
init b a
trans a b
trans a b  # duplicate is fine
trans b a
";
        let m = parse_pks(text).unwrap();
        assert_eq!(m.transition_count(), 2);
        assert_eq!(m.initial_count(), 2);
    }

    #[test]
    fn reports_offending_line() {
        let cases: &[(&str, usize, &str)] = &[
            ("ap p\n", 1, "before pks"),
            ("pks m\nap p\nstate a p=X\n", 3, "bad label value"),
            ("pks m\nap p\nstate a p=T q=F\n", 3, "unknown proposition"),
            ("pks m\nap p q\nstate a p=T\n", 3, "misses a value"),
            ("pks m\nap p\nstate a p=T\ninit a\nstate b p=F\n", 5, "must precede"),
            ("pks m\nap p\nstate a p=T\ntrans a b\n", 4, "unknown state"),
            ("pks m\nap p\nstate a p=T\nwibble\n", 4, "unknown keyword"),
        ];
        for &(text, line, needle) in cases {
            let err = parse_pks(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?}");
            assert!(
                err.message.contains(needle),
                "{:?} should mention {needle:?}",
                err.message
            );
        }
        // a missing init line parses; validation reports it
        let m = parse_pks("pks m\nap p\nstate a p=T\ntrans a a\n").unwrap();
        assert_eq!(m.validate(), vec!["no initial state".to_string()]);
    }
}
