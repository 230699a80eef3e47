//! Verdicts, counterexamples, and topological proofs.
//!
//! [`analyze`] renders one of three verdicts for a property over a partial
//! model. A violated property comes with a counterexample path; a satisfied
//! or possibly-satisfied one comes with a [`TopologicalProof`]: the slice of
//! the model — initial states, some transitions, some labels — that the
//! verdict actually rests on. When the model is revised, [`recheck`] replays
//! stored proofs purely syntactically: if the slice is untouched, the old
//! verdict still stands and the property does not need to be re-checked.
//!
//! Proof slices are read off an unsatisfiable core. A passed check means the
//! clause encoding of the approximated model conjoined with the normalized
//! negation of the property has no model; the core names exactly the model
//! facts that exclusion needs, and its clause provenances translate
//! one-for-one into slice constraints.

pub mod format;
pub mod mutants;

use std::collections::BTreeSet;
use std::fmt;

use crate::ltl::{base_name, tau_transform, Formula, Lasso};
use crate::pks::{Approximation, ModelError, Pks};
use crate::sat::{check_star_with_limits, EngineError, Limits};
use crate::snf::{ks_to_snf, property_to_snf, Provenance, SnfClause};
use crate::tri::Tri;
use crate::uc::{extract_uc_with_limits, UcError, UnsatCore};

/// One constraint a revision must keep for a stored proof to remain valid.
///
/// The variants mirror the proof file's `tpi` / `tpt` / `tpp` lines, and the
/// derived order is the canonical clause order within a proof.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TpClause {
    /// The model must start in exactly these states.
    Init(BTreeSet<String>),
    /// The state must keep exactly these successors.
    Trans(String, BTreeSet<String>),
    /// The state must keep this value for the proposition — including
    /// keeping it unknown if it was unknown when the proof was computed.
    Prop(String, String, Tri),
}

impl TpClause {
    /// Contribution to the size of a proof: one per pinned label, one per
    /// pinned transition or initial state.
    pub fn size(&self) -> usize {
        match self {
            TpClause::Init(states) => states.len(),
            TpClause::Trans(_, succs) => succs.len(),
            TpClause::Prop(_, _, _) => 1,
        }
    }
}

impl fmt::Display for TpClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TpClause::Init(states) => {
                write!(f, "tpi")?;
                for s in states {
                    write!(f, " {s}")?;
                }
                Ok(())
            }
            TpClause::Trans(state, succs) => {
                write!(f, "tpt {state} :")?;
                for t in succs {
                    write!(f, " {t}")?;
                }
                Ok(())
            }
            TpClause::Prop(state, prop, value) => write!(f, "tpp {state} {prop} {value}"),
        }
    }
}

/// Strength of the verdict a proof certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProofLevel {
    /// The property holds; the slice keeps it that way.
    Definitive,
    /// The property is not violated; the slice keeps the verdict out of
    /// "violated", though a revision may still upgrade it to "holds".
    Possible,
}

impl fmt::Display for ProofLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProofLevel::Definitive => "T",
            ProofLevel::Possible => "?",
        })
    }
}

/// The part of a model a verdict depends on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalProof {
    /// Name of the property this proof belongs to.
    pub property: String,
    pub level: ProofLevel,
    /// The alphabet of the model the proof was computed from; a revision
    /// must retain it (it may add propositions of its own).
    pub origin_ap: Vec<String>,
    /// Slice constraints in canonical order.
    pub clauses: Vec<TpClause>,
}

impl TopologicalProof {
    /// Number of model elements the proof pins down.
    pub fn size(&self) -> usize {
        self.clauses.iter().map(TpClause::size).sum()
    }
}

/// Outcome of analyzing one property against a partial model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalysisResult {
    /// Some path violates the property no matter how the unknowns resolve.
    Violated { counterexample: Lasso<String> },
    /// Every path satisfies the property no matter how the unknowns resolve.
    Satisfied { proof: TopologicalProof },
    /// Neither: the counterexample is a path that violates the property
    /// under some resolution of the unknowns, the proof certifies that no
    /// path violates it under all of them.
    PossiblySatisfied {
        counterexample: Lasso<String>,
        proof: TopologicalProof,
    },
}

impl AnalysisResult {
    pub fn verdict(&self) -> Tri {
        match self {
            AnalysisResult::Violated { .. } => Tri::False,
            AnalysisResult::Satisfied { .. } => Tri::True,
            AnalysisResult::PossiblySatisfied { .. } => Tri::Unknown,
        }
    }

    pub fn proof(&self) -> Option<&TopologicalProof> {
        match self {
            AnalysisResult::Violated { .. } => None,
            AnalysisResult::Satisfied { proof }
            | AnalysisResult::PossiblySatisfied { proof, .. } => Some(proof),
        }
    }

    pub fn counterexample(&self) -> Option<&Lasso<String>> {
        match self {
            AnalysisResult::Satisfied { .. } => None,
            AnalysisResult::Violated { counterexample }
            | AnalysisResult::PossiblySatisfied { counterexample, .. } => Some(counterexample),
        }
    }
}

/// Error raised by analysis.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalyzeError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Analyzes `phi` (recorded under `name`) against the partial model `m`,
/// producing a verdict together with its evidence.
pub fn analyze(m: &Pks, name: &str, phi: &Formula) -> Result<AnalysisResult, AnalyzeError> {
    analyze_with_limits(m, name, phi, &Limits::default())
}

pub fn analyze_with_limits(
    m: &Pks,
    name: &str,
    phi: &Formula,
    limits: &Limits,
) -> Result<AnalysisResult, AnalyzeError> {
    let closed = m.complement_closure()?;
    let pes = closed.approximate(Approximation::Pessimistic);
    let on_pes = check_star_with_limits(&pes, phi, limits)?;
    if !on_pes.holds {
        // the offending path satisfies the negation even with every unknown
        // resolved against it, so the violation is definitive
        return Ok(AnalysisResult::Violated {
            counterexample: on_pes
                .counterexample
                .expect("failed check carries a counterexample"),
        });
    }
    let opt = closed.approximate(Approximation::Optimistic);
    let on_opt = check_star_with_limits(&opt, phi, limits)?;
    if on_opt.holds {
        let proof = compute_tp(m, Approximation::Optimistic, name, phi, ProofLevel::Definitive, limits)?;
        Ok(AnalysisResult::Satisfied { proof })
    } else {
        let proof = compute_tp(m, Approximation::Pessimistic, name, phi, ProofLevel::Possible, limits)?;
        Ok(AnalysisResult::PossiblySatisfied {
            counterexample: on_opt
                .counterexample
                .expect("failed check carries a counterexample"),
            proof,
        })
    }
}

/// The verdict alone, skipping proof extraction. Cheaper than [`analyze`]
/// when the evidence is not needed.
pub fn verdict(m: &Pks, phi: &Formula) -> Result<Tri, AnalyzeError> {
    verdict_with_limits(m, phi, &Limits::default())
}

pub fn verdict_with_limits(m: &Pks, phi: &Formula, limits: &Limits) -> Result<Tri, AnalyzeError> {
    let closed = m.complement_closure()?;
    let pes = closed.approximate(Approximation::Pessimistic);
    if !check_star_with_limits(&pes, phi, limits)?.holds {
        return Ok(Tri::False);
    }
    let opt = closed.approximate(Approximation::Optimistic);
    if check_star_with_limits(&opt, phi, limits)?.holds {
        Ok(Tri::True)
    } else {
        Ok(Tri::Unknown)
    }
}

/// The clause set whose unsatisfiability certifies a held check: the encoding
/// of the chosen approximation of `m`, followed by the translated negation of
/// `phi`.
///
/// Label clauses for propositions that are still unknown in `m` are moved to
/// the front. Core extraction considers clauses for deletion in input order,
/// so putting the undecided facts first makes it drop them whenever the
/// decided facts alone carry the argument — and a proof built on decided
/// facts survives the revisions that settle the open ones.
pub fn certificate_clauses(
    m: &Pks,
    mode: Approximation,
    phi: &Formula,
) -> Result<Vec<SnfClause>, AnalyzeError> {
    let a = m.complement_closure()?.approximate(mode);
    let tau = tau_transform(phi).map_err(EngineError::from)?;
    let mut clauses =
        ks_to_snf(&a).expect("model propositions never use the reserved prefix");
    clauses.sort_by_key(|c| match c.provenance() {
        Provenance::LabelTrue(s, p) | Provenance::LabelFalse(s, p) => {
            usize::from(m.label(s, base_name(p)) != Some(Tri::Unknown))
        }
        _ => 1,
    });
    clauses.extend(property_to_snf(&tau));
    Ok(clauses)
}

/// Builds the proof slice for a check of `phi` that held on the given
/// approximation of the partial model `m`.
fn compute_tp(
    m: &Pks,
    mode: Approximation,
    name: &str,
    phi: &Formula,
    level: ProofLevel,
    limits: &Limits,
) -> Result<TopologicalProof, AnalyzeError> {
    let clauses = certificate_clauses(m, mode, phi)?;
    let core = match extract_uc_with_limits(&clauses, limits) {
        Ok(core) => core,
        Err(UcError::Satisfiable) => {
            unreachable!("a check that held makes the encoding unsatisfiable")
        }
        Err(UcError::Engine(e)) => return Err(AnalyzeError::Engine(e)),
    };
    Ok(slice_from_core(m, &core, name, level))
}

/// Reads the slice off a core: each model clause pins the original model
/// element it was generated from. Property and regularity clauses carry no
/// model information and are dropped.
fn slice_from_core(
    m: &Pks,
    core: &UnsatCore,
    name: &str,
    level: ProofLevel,
) -> TopologicalProof {
    let state_names = |idx: Vec<usize>| -> BTreeSet<String> {
        idx.into_iter()
            .map(|s| m.state_name(s).to_string())
            .collect()
    };
    let mut clauses = BTreeSet::new();
    for c in core.clauses() {
        match c.provenance() {
            Provenance::Init => {
                clauses.insert(TpClause::Init(state_names(m.initial_idx().collect())));
            }
            Provenance::Reach(s) => {
                let si = m.state_index(s).expect("core states come from the model");
                clauses.insert(TpClause::Trans(s.clone(), state_names(m.successors_idx(si))));
            }
            Provenance::LabelTrue(s, p) | Provenance::LabelFalse(s, p) => {
                let base = base_name(p).to_string();
                let value = m
                    .label(s, &base)
                    .expect("core propositions come from the model");
                clauses.insert(TpClause::Prop(s.clone(), base, value));
            }
            Provenance::Regularity(_, _) | Provenance::Property(_) => {}
        }
    }
    TopologicalProof {
        property: name.to_string(),
        level,
        origin_ap: m.props().to_vec(),
        clauses: clauses.into_iter().collect(),
    }
}

/// A proof constraint the revised model no longer meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseViolation {
    /// The constraint from the stored proof.
    pub expected: TpClause,
    /// The corresponding facts of the revised model, or `None` when the
    /// state or proposition the constraint talks about no longer exists.
    pub observed: Option<TpClause>,
}

/// Outcome of replaying a stored proof against a revised model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecheckReport {
    /// Propositions of the proof's origin model that the revision dropped.
    pub missing_props: Vec<String>,
    pub violations: Vec<ClauseViolation>,
}

impl RecheckReport {
    /// Whether the proof still applies, meaning its verdict carries over.
    pub fn passed(&self) -> bool {
        self.missing_props.is_empty() && self.violations.is_empty()
    }
}

/// Replays `proof` against the revision `m` without model checking: every
/// slice constraint is compared against the current model, and the proof
/// survives exactly when all of them are untouched.
pub fn recheck(proof: &TopologicalProof, m: &Pks) -> RecheckReport {
    let missing_props = proof
        .origin_ap
        .iter()
        .filter(|p| m.prop_index(p).is_none())
        .cloned()
        .collect();
    let names = |idx: Vec<usize>| -> BTreeSet<String> {
        idx.into_iter()
            .map(|s| m.state_name(s).to_string())
            .collect()
    };
    let mut violations = Vec::new();
    for clause in &proof.clauses {
        let observed = match clause {
            TpClause::Init(_) => Some(TpClause::Init(names(m.initial_idx().collect()))),
            TpClause::Trans(s, _) => m
                .state_index(s)
                .map(|si| TpClause::Trans(s.clone(), names(m.successors_idx(si)))),
            TpClause::Prop(s, p, _) => m
                .label(s, p)
                .map(|v| TpClause::Prop(s.clone(), p.clone(), v)),
        };
        if observed.as_ref() != Some(clause) {
            violations.push(ClauseViolation {
                expected: clause.clone(),
                observed,
            });
        }
    }
    RecheckReport {
        missing_props,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::eval_three_valued;
    use crate::testutil::{vacuum_model, vacuum_properties, vacuum_rev1, vacuum_rev2};

    fn vacuum_results() -> Vec<(String, Formula, AnalysisResult)> {
        vacuum_properties()
            .into_iter()
            .map(|(name, phi)| {
                let r = analyze(&vacuum_model(), &name, &phi).unwrap();
                (name, phi, r)
            })
            .collect()
    }

    #[test]
    fn first_design_sketch_gets_the_expected_verdicts() {
        let verdicts: Vec<(String, Tri)> = vacuum_results()
            .into_iter()
            .map(|(name, _, r)| (name, r.verdict()))
            .collect();
        assert_eq!(
            verdicts,
            vec![
                ("phi1".to_string(), Tri::Unknown),
                ("phi2".to_string(), Tri::True),
                ("phi3".to_string(), Tri::False),
                ("phi4".to_string(), Tri::Unknown),
            ]
        );
    }

    #[test]
    fn verdict_only_path_agrees_with_full_analysis() {
        for (_, phi, r) in vacuum_results() {
            assert_eq!(verdict(&vacuum_model(), &phi).unwrap(), r.verdict());
        }
    }

    #[test]
    fn counterexamples_are_paths_of_the_model() {
        let m = vacuum_model();
        for (name, phi, r) in vacuum_results() {
            if let Some(ce) = r.counterexample() {
                // the evaluator rejects anything that is not a real path
                let value = eval_three_valued(&phi, ce, &m)
                    .unwrap_or_else(|e| panic!("{name}: bad counterexample: {e}"));
                match r.verdict() {
                    Tri::False => assert_eq!(value, Tri::False, "{name}"),
                    // no path violates definitively once the strict check
                    // passed, so a possible counterexample evaluates to ?
                    Tri::Unknown => assert_eq!(value, Tri::Unknown, "{name}"),
                    Tri::True => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn evidence_matches_the_verdict() {
        for (name, _, r) in vacuum_results() {
            match r.verdict() {
                Tri::False => {
                    assert!(r.counterexample().is_some(), "{name}");
                    assert!(r.proof().is_none(), "{name}");
                }
                Tri::True => {
                    assert!(r.counterexample().is_none(), "{name}");
                    assert_eq!(r.proof().unwrap().level, ProofLevel::Definitive, "{name}");
                }
                Tri::Unknown => {
                    assert!(r.counterexample().is_some(), "{name}");
                    assert_eq!(r.proof().unwrap().level, ProofLevel::Possible, "{name}");
                }
            }
        }
    }

    #[test]
    fn fresh_proofs_recheck_against_their_own_model() {
        let m = vacuum_model();
        for (name, _, r) in vacuum_results() {
            if let Some(proof) = r.proof() {
                let report = recheck(proof, &m);
                assert!(report.passed(), "{name}: {:?}", report.violations);
                assert_eq!(proof.property, name);
                assert_eq!(proof.origin_ap, m.props());
                assert!(proof.size() > 0, "{name}: empty proof");
            }
        }
    }

    #[test]
    fn proof_clauses_are_canonically_ordered_and_deduplicated() {
        for (name, _, r) in vacuum_results() {
            if let Some(proof) = r.proof() {
                for w in proof.clauses.windows(2) {
                    assert!(w[0] < w[1], "{name}: clause order");
                }
            }
        }
    }

    #[test]
    fn recheck_pinpoints_touched_slice_elements() {
        let m = vacuum_model();
        let proof = TopologicalProof {
            property: "phi4".into(),
            level: ProofLevel::Possible,
            origin_ap: m.props().to_vec(),
            clauses: vec![
                TpClause::Init(["OFF".to_string()].into()),
                TpClause::Trans("IDLE".into(), ["OFF", "IDLE", "MOVING"].map(String::from).into()),
                TpClause::Prop("MOVING".into(), "suck".into(), Tri::Unknown),
            ],
        };
        assert!(recheck(&proof, &m).passed());

        // resolving a pinned unknown invalidates the proof
        let mut resolved = m.clone();
        resolved.set_label("MOVING", "suck", Tri::True).unwrap();
        let report = recheck(&proof, &resolved);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(
            report.violations[0].observed,
            Some(TpClause::Prop("MOVING".into(), "suck".into(), Tri::True))
        );

        // touching a pinned transition set invalidates the proof
        let mut rerouted = m.clone();
        let (idle, cleaning) = (
            rerouted.state_index("IDLE").unwrap(),
            rerouted.state_index("CLEANING").unwrap(),
        );
        rerouted.add_transition_idx(idle, cleaning);
        let report = recheck(&proof, &rerouted);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].expected, proof.clauses[1]);

        // dropping a labelled proposition is reported, not a panic
        let mut shrunk = Pks::new("vacuum", vec!["move".into(), "on".into()]).unwrap();
        for s in ["OFF", "IDLE"] {
            shrunk.add_state(s, vec![Tri::False, Tri::False]).unwrap();
        }
        shrunk.add_transition("OFF", "OFF").unwrap();
        shrunk.add_transition("OFF", "IDLE").unwrap();
        shrunk.add_transition("IDLE", "IDLE").unwrap();
        shrunk.mark_initial("OFF").unwrap();
        let report = recheck(&proof, &shrunk);
        assert_eq!(report.missing_props, vec!["suck", "reached"]);
        assert!(report
            .violations
            .iter()
            .any(|v| v.observed.is_none()), "missing elements observe nothing");
    }

    #[test]
    fn definitive_proof_survives_changes_outside_its_slice() {
        let m = vacuum_model();
        let phi2 = vacuum_properties().remove(1).1;
        let r = analyze(&m, "phi2", &phi2).unwrap();
        let proof = r.proof().unwrap().clone();
        assert_eq!(proof.level, ProofLevel::Definitive);

        // find a label slot the proof does not pin and flip it
        let pinned: BTreeSet<(String, String)> = proof
            .clauses
            .iter()
            .filter_map(|c| match c {
                TpClause::Prop(s, p, _) => Some((s.clone(), p.clone())),
                _ => None,
            })
            .collect();
        let mut revised = m.clone();
        let mut flipped = None;
        'outer: for s in m.states() {
            for p in m.props() {
                if !pinned.contains(&(s.clone(), p.clone()))
                    && m.label(s, p) == Some(Tri::Unknown)
                {
                    revised.set_label(s, p, Tri::True).unwrap();
                    flipped = Some((s.clone(), p.clone()));
                    break 'outer;
                }
            }
        }
        let flipped = flipped.expect("some unknown outside the slice");
        assert!(recheck(&proof, &revised).passed(), "flip of {flipped:?} broke the slice");
        assert_eq!(verdict(&revised, &phi2).unwrap(), Tri::True);
    }

    #[test]
    fn proofs_are_much_smaller_than_the_model() {
        let m = vacuum_model();
        for (name, _, r) in vacuum_results() {
            if let Some(proof) = r.proof() {
                assert!(
                    proof.size() < m.model_size(),
                    "{name}: proof of size {} does not beat model size {}",
                    proof.size(),
                    m.model_size()
                );
            }
        }
    }

    #[test]
    fn proof_slices_prefer_decided_facts() {
        // Keeping the first requirement out of "violated" needs, per
        // reachable state, one of two label facts: suck stays off, or the
        // position counts as reached. In IDLE both readings are available
        // (suck=F decided, reached=? pessimistically off); the slice must
        // rest on the decided one, so a revision that settles the open slot
        // cannot disturb it.
        let m = vacuum_model();
        let phi1 = vacuum_properties().remove(0).1;
        let r = analyze(&m, "phi1", &phi1).unwrap();
        let proof = r.proof().unwrap();
        assert!(proof
            .clauses
            .contains(&TpClause::Prop("IDLE".into(), "suck".into(), Tri::False)));
        assert!(
            !proof.clauses.iter().any(
                |c| matches!(c, TpClause::Prop(s, p, _) if s == "IDLE" && p == "reached")
            ),
            "slice leans on an undecided label: {:?}",
            proof.clauses
        );
    }

    #[test]
    fn first_revision_settles_three_verdicts() {
        let rev1 = vacuum_rev1();
        let expected = [Tri::Unknown, Tri::True, Tri::True, Tri::True];
        for ((name, phi), want) in vacuum_properties().into_iter().zip(expected) {
            assert_eq!(verdict(&rev1, &phi).unwrap(), want, "{name}");
        }
    }

    #[test]
    fn second_revision_passes_every_stored_recheck() {
        let rev1 = vacuum_rev1();
        let rev2 = vacuum_rev2();
        for (name, phi) in vacuum_properties() {
            let r = analyze(&rev1, &name, &phi).unwrap();
            let proof = r.proof().expect("no verdict is false on the first revision");
            let report = recheck(proof, &rev2);
            assert!(report.passed(), "{name}: {report:?}");
            let after = verdict(&rev2, &phi).unwrap();
            match proof.level {
                ProofLevel::Definitive => assert_eq!(after, Tri::True, "{name}"),
                ProofLevel::Possible => assert_ne!(after, Tri::False, "{name}"),
            }
        }
    }

    #[test]
    fn clause_rendering_matches_the_file_tokens() {
        assert_eq!(
            TpClause::Init(["OFF".to_string(), "IDLE".to_string()].into()).to_string(),
            "tpi IDLE OFF"
        );
        assert_eq!(
            TpClause::Trans("IDLE".into(), ["OFF".to_string()].into()).to_string(),
            "tpt IDLE : OFF"
        );
        assert_eq!(
            TpClause::Prop("MOVING".into(), "suck".into(), Tri::Unknown).to_string(),
            "tpp MOVING suck ?"
        );
    }
}
