//! Unsatisfiable-core extraction for clause sets.
//!
//! Given an unsatisfiable set of clauses, [`extract_uc`] returns an
//! irreducible subset that is still unsatisfiable: removing any single clause
//! from the core makes it satisfiable. Cores are the raw material for
//! topological proofs, which is why the deletion pass has a fixed bias — it
//! tries to discard regularity and property clauses first, so that the core
//! leans on the clauses that talk about the model itself (labels,
//! transitions, initial states) whenever there is a choice.

use crate::sat::{sat_with_limits, EngineError, Limits};
use crate::snf::{Provenance, SnfClause};

/// Error raised by core extraction.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UcError {
    #[error("clause set is satisfiable; it has no unsatisfiable core")]
    Satisfiable,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// An irreducible unsatisfiable subset of an input clause set, in the input's
/// clause order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsatCore {
    clauses: Vec<SnfClause>,
}

impl UnsatCore {
    pub fn clauses(&self) -> &[SnfClause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// The clauses that came from a property encoding.
    pub fn property_clauses(&self) -> impl Iterator<Item = &SnfClause> {
        self.clauses
            .iter()
            .filter(|c| matches!(c.provenance(), Provenance::Property(_)))
    }

    /// The clauses that came from a model encoding.
    pub fn model_clauses(&self) -> impl Iterator<Item = &SnfClause> {
        self.clauses
            .iter()
            .filter(|c| !matches!(c.provenance(), Provenance::Property(_)))
    }
}

/// How eagerly the deletion pass tries to drop a clause; lower goes first.
fn deletion_rank(p: &Provenance) -> u8 {
    match p {
        Provenance::Regularity(_, _) => 0,
        Provenance::Property(_) => 1,
        Provenance::LabelTrue(_, _) | Provenance::LabelFalse(_, _) => 2,
        Provenance::Reach(_) => 3,
        Provenance::Init => 4,
    }
}

pub fn extract_uc(clauses: &[SnfClause]) -> Result<UnsatCore, UcError> {
    extract_uc_with_limits(clauses, &Limits::default())
}

pub fn extract_uc_with_limits(
    clauses: &[SnfClause],
    limits: &Limits,
) -> Result<UnsatCore, UcError> {
    if sat_with_limits(clauses, limits)?.satisfiable {
        return Err(UcError::Satisfiable);
    }

    let mut kept = vec![true; clauses.len()];
    let mut order: Vec<usize> = (0..clauses.len()).collect();
    order.sort_by_key(|&i| (deletion_rank(clauses[i].provenance()), i));

    // one deletion pass; a clause that survives it is necessary relative to
    // every subset of what was left at the time, so the result is irreducible
    let mut trial: Vec<SnfClause> = Vec::with_capacity(clauses.len());
    for &i in &order {
        kept[i] = false;
        trial.clear();
        trial.extend(
            clauses
                .iter()
                .enumerate()
                .filter(|&(j, _)| kept[j])
                .map(|(_, c)| c.clone()),
        );
        if sat_with_limits(&trial, limits)?.satisfiable {
            kept[i] = true;
        }
    }

    let core: Vec<SnfClause> = clauses
        .iter()
        .enumerate()
        .filter(|&(j, _)| kept[j])
        .map(|(_, c)| c.clone())
        .collect();
    assert!(
        !sat_with_limits(&core, limits)?.satisfiable,
        "deletion pass lost unsatisfiability"
    );
    Ok(UnsatCore { clauses: core })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{parse_ltl, tau_transform};
    use crate::pks::Approximation;
    use crate::snf::{ks_to_snf, property_to_snf, SnfLiteral};
    use crate::testutil::vacuum_model;

    fn initial(lits: Vec<SnfLiteral>, provenance: Provenance) -> SnfClause {
        SnfClause::Initial {
            now: lits,
            provenance,
        }
    }

    fn pos(p: &str) -> SnfLiteral {
        SnfLiteral::Pos(p.into())
    }

    fn neg(p: &str) -> SnfLiteral {
        SnfLiteral::Neg(p.into())
    }

    #[test]
    fn satisfiable_input_is_an_error() {
        let clauses = property_to_snf(&parse_ltl("G p & F p").unwrap());
        assert_eq!(extract_uc(&clauses).unwrap_err(), UcError::Satisfiable);
    }

    #[test]
    fn contradiction_survives_and_padding_goes() {
        let clauses = vec![
            initial(vec![pos("p")], Provenance::Init),
            initial(vec![pos("q"), neg("p")], Provenance::Reach("s".into())),
            initial(vec![neg("p")], Provenance::LabelFalse("s".into(), "p".into())),
            initial(vec![pos("r")], Provenance::Reach("t".into())),
        ];
        let core = extract_uc(&clauses).unwrap();
        assert_eq!(core.clauses(), &[clauses[0].clone(), clauses[2].clone()]);
    }

    #[test]
    fn deletion_prefers_dropping_property_and_regularity_clauses() {
        // three ways to build the same contradiction; which copy survives is
        // decided by the deletion order, not the input order
        let clauses = vec![
            initial(vec![pos("a")], Provenance::LabelTrue("s".into(), "a".into())),
            initial(vec![neg("a")], Provenance::Property(0)),
            initial(vec![pos("a")], Provenance::Init),
            initial(vec![neg("a")], Provenance::Regularity("s".into(), "t".into())),
        ];
        let core = extract_uc(&clauses).unwrap();
        // both negative copies are tried before the positives; the property
        // copy is restored only because deleting it breaks unsatisfiability
        // after the regularity copy is already gone
        let provs: Vec<String> = core
            .clauses()
            .iter()
            .map(|c| c.provenance().to_string())
            .collect();
        assert_eq!(provs, vec!["prop 0", "init"]);
    }

    #[test]
    fn core_keeps_input_order() {
        let clauses = vec![
            initial(vec![pos("a")], Provenance::Init),
            initial(vec![pos("z"), pos("a")], Provenance::Property(0)),
            initial(vec![neg("a")], Provenance::Reach("s".into())),
        ];
        let core = extract_uc(&clauses).unwrap();
        assert_eq!(core.clauses()[0], clauses[0]);
        assert_eq!(core.clauses()[1], clauses[2]);
    }

    #[test]
    fn model_plus_held_property_negation_yields_a_minimal_core() {
        // the optimistic vacuum robot meets "no motion before power-on", so
        // pairing its encoding with the normalized negation is unsatisfiable
        let closed = vacuum_model().complement_closure().unwrap();
        let opt = closed.approximate(Approximation::Optimistic);
        let phi2 = parse_ltl("G ((!move) W on)").unwrap();
        let tau = tau_transform(&phi2).unwrap();

        let mut clauses = ks_to_snf(&opt).unwrap();
        clauses.extend(property_to_snf(&tau));
        let core = extract_uc(&clauses).unwrap();

        assert!(!core.is_empty());
        assert!(core.len() < clauses.len());
        for c in core.clauses() {
            assert!(clauses.contains(c));
        }
        // irreducible: dropping any single clause makes the rest satisfiable
        for skip in 0..core.len() {
            let rest: Vec<SnfClause> = core
                .clauses()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, c)| c.clone())
                .collect();
            assert!(crate::sat::sat(&rest).unwrap().satisfiable, "clause {skip} is redundant");
        }
        // and extraction is a pure function of its input
        assert_eq!(extract_uc(&clauses).unwrap(), core);
    }
}
