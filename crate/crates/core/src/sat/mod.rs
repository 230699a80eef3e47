//! Satisfiability of LTL formulas and SNF clause sets, and the path check
//! behind every verdict.
//!
//! Two construction routes feed the same Büchi machinery:
//!
//! * [`sat`] decides a clause set directly ([`clauses`]) — this is the route
//!   used for unsatisfiable-core extraction;
//! * [`sat_formula`] and the model checks go through the tableau
//!   construction ([`tableau`]), where [`check_star`] builds the product of a
//!   Kripke structure with the automaton of the normalized negated property,
//!   so counterexamples come out as model-state lassos.
//!
//! The routes are deliberately independent: tests cross-check one against
//! the other on random formulas.

mod buchi;
mod clauses;
mod tableau;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::ltl::{tau_transform, Formula, Lasso, TauError, Valuation};
use crate::pks::Ks;
use crate::tri::Tri;

use buchi::{degeneralize, find_accepting_lasso, Buchi, Gba};

/// Resource bounds for automaton construction.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Maximum number of automaton states any single construction may build.
    pub max_nodes: usize,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_nodes: 1_000_000,
        }
    }
}

/// Error raised by the satisfiability engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("automaton would need {nodes} states, over the limit of {limit}")]
    ResourceLimit { nodes: usize, limit: usize },
    #[error(transparent)]
    Property(#[from] TauError),
    #[error("formula mentions {0:?}, which the model does not label")]
    UnknownProposition(String),
}

/// Outcome of a satisfiability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub satisfiable: bool,
    /// An ultimately periodic model, present exactly when satisfiable.
    pub witness: Option<Lasso<Valuation>>,
}

/// Outcome of a path check against a Kripke structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckStarResult {
    pub holds: bool,
    /// A state lasso of the structure witnessing the offending path,
    /// present exactly when the check fails.
    pub counterexample: Option<Lasso<String>>,
}

/// Decides satisfiability of a clause set (the conjunction of its clauses
/// over infinite words).
pub fn sat(clauses: &[crate::snf::SnfClause]) -> Result<SatResult, EngineError> {
    sat_with_limits(clauses, &Limits::default())
}

pub fn sat_with_limits(
    clauses: &[crate::snf::SnfClause],
    limits: &Limits,
) -> Result<SatResult, EngineError> {
    let ca = clauses::clause_gba(clauses, limits)?;
    let b = degeneralize(&ca.gba, limits)?;
    Ok(match find_accepting_lasso(&b) {
        None => SatResult {
            satisfiable: false,
            witness: None,
        },
        Some((prefix, cycle)) => {
            let decode = |ids: Vec<usize>| {
                ids.into_iter()
                    .map(|q| {
                        ca.props
                            .iter()
                            .enumerate()
                            .map(|(i, p)| (p.clone(), b.labels[q] >> i & 1 == 1))
                            .collect::<Valuation>()
                    })
                    .collect::<Vec<_>>()
            };
            SatResult {
                satisfiable: true,
                witness: Some(Lasso::new(decode(prefix), decode(cycle))),
            }
        }
    })
}

/// Decides satisfiability of a formula directly via its tableau automaton.
pub fn sat_formula(f: &Formula) -> Result<SatResult, EngineError> {
    sat_formula_with_limits(f, &Limits::default())
}

pub fn sat_formula_with_limits(f: &Formula, limits: &Limits) -> Result<SatResult, EngineError> {
    let g = tableau::formula_gba(f, limits)?;
    let b = degeneralize(&g, limits)?;
    let atoms = f.atoms();
    Ok(match find_accepting_lasso(&b) {
        None => SatResult {
            satisfiable: false,
            witness: None,
        },
        Some((prefix, cycle)) => {
            let decode = |ids: Vec<usize>| {
                ids.into_iter()
                    .map(|q| {
                        let mut v: Valuation =
                            atoms.iter().map(|a| (a.clone(), false)).collect();
                        for p in &b.labels[q].pos {
                            v.insert(p.clone(), true);
                        }
                        for p in &b.labels[q].neg {
                            v.insert(p.clone(), false);
                        }
                        v
                    })
                    .collect::<Vec<_>>()
            };
            SatResult {
                satisfiable: true,
                witness: Some(Lasso::new(decode(prefix), decode(cycle))),
            }
        }
    })
}

/// The three-valued engine's workhorse: does some path of `a` satisfy the
/// normalized negation of `phi`? `holds` means no such path exists. The
/// structure is expected to be complement-closed, since the normalization
/// turns negated propositions into complement propositions.
pub fn check_star(a: &Ks, phi: &Formula) -> Result<CheckStarResult, EngineError> {
    check_star_with_limits(a, phi, &Limits::default())
}

pub fn check_star_with_limits(
    a: &Ks,
    phi: &Formula,
    limits: &Limits,
) -> Result<CheckStarResult, EngineError> {
    let tau = tau_transform(phi)?;
    product_check(a, &tau, limits)
}

/// Classical model check (no complement propositions): do all paths of `a`
/// satisfy `phi`? Used as an oracle against completions of partial models.
pub fn check_classical(a: &Ks, phi: &Formula) -> Result<CheckStarResult, EngineError> {
    let negated = crate::ltl::to_nnf(&Formula::not(phi.clone()));
    product_check(a, &negated, &Limits::default())
}

/// Emptiness of the product of `a` with the automaton of `f`; a witness is
/// projected back to a state lasso.
fn product_check(a: &Ks, f: &Formula, limits: &Limits) -> Result<CheckStarResult, EngineError> {
    for atom in f.atoms() {
        if a.prop_index(&atom).is_none() {
            return Err(EngineError::UnknownProposition(atom));
        }
    }
    let auto = tableau::formula_gba(f, limits)?;

    // resolve each node's letter constraint against the model's alphabet
    let constraints: Vec<Vec<(usize, Tri)>> = auto
        .labels
        .iter()
        .map(|c| {
            let mut wants = Vec::new();
            for p in &c.pos {
                wants.push((a.prop_index(p).expect("checked above"), Tri::True));
            }
            for p in &c.neg {
                wants.push((a.prop_index(p).expect("checked above"), Tri::False));
            }
            wants
        })
        .collect();
    let compatible = |q: usize, s: usize| {
        constraints[q]
            .iter()
            .all(|&(p, want)| a.label_idx(s, p) == want)
    };

    let mut ids: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut nodes: Vec<(usize, usize)> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let mut intern = |q: usize,
                      s: usize,
                      nodes: &mut Vec<(usize, usize)>,
                      queue: &mut std::collections::VecDeque<usize>|
     -> Result<usize, EngineError> {
        if let Some(&id) = ids.get(&(q, s)) {
            return Ok(id);
        }
        let id = nodes.len();
        if id >= limits.max_nodes {
            return Err(EngineError::ResourceLimit {
                nodes: id + 1,
                limit: limits.max_nodes,
            });
        }
        ids.insert((q, s), id);
        nodes.push((q, s));
        queue.push_back(id);
        Ok(id)
    };

    let mut initial = Vec::new();
    for &q in &auto.initial {
        for s in a.initial_idx() {
            if compatible(q, s) {
                initial.push(intern(q, s, &mut nodes, &mut queue)?);
            }
        }
    }
    initial.sort_unstable();

    let mut succs: Vec<Vec<usize>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (q, s) = nodes[id];
        let mut out = Vec::new();
        for &q2 in &auto.succs[q] {
            for s2 in a.successors_idx(s) {
                if compatible(q2, s2) {
                    out.push(intern(q2, s2, &mut nodes, &mut queue)?);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        debug_assert_eq!(succs.len(), id);
        succs.push(out);
    }

    let product = Gba {
        labels: nodes.iter().map(|&(_, s)| s).collect(),
        succs,
        initial,
        acceptance: auto
            .acceptance
            .iter()
            .map(|set| nodes.iter().map(|&(q, _)| set[q]).collect())
            .collect(),
    };
    let b: Buchi<usize> = degeneralize(&product, limits)?;
    Ok(match find_accepting_lasso(&b) {
        None => CheckStarResult {
            holds: true,
            counterexample: None,
        },
        Some((prefix, cycle)) => {
            let name = |ids: Vec<usize>| {
                ids.into_iter()
                    .map(|n| a.state_name(b.labels[n]).to_string())
                    .collect::<Vec<_>>()
            };
            CheckStarResult {
                holds: false,
                counterexample: Some(Lasso::new(name(prefix), name(cycle))),
            }
        }
    })
}

/// Human-readable dump of the tableau automaton for `f`, for debugging.
pub fn automaton_description(f: &Formula) -> Result<String, EngineError> {
    let g = tableau::formula_gba(f, &Limits::default())?;
    let mut out = String::new();
    writeln!(
        out,
        "states: {}, initial: {:?}, acceptance sets: {}",
        g.labels.len(),
        g.initial,
        g.acceptance.len()
    )
    .unwrap();
    for q in 0..g.labels.len() {
        let c = &g.labels[q];
        let mut lits: Vec<String> = c.pos.iter().cloned().collect();
        lits.extend(c.neg.iter().map(|p| format!("!{p}")));
        let sets: Vec<String> = (0..g.acceptance.len())
            .filter(|&i| g.acceptance[i][q])
            .map(|i| i.to_string())
            .collect();
        writeln!(
            out,
            "state {q}: requires [{}] -> {:?} in sets [{}]",
            lits.join(" "),
            g.succs[q],
            sets.join(" ")
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::{eval_classical, parse_ltl};
    use crate::pks::{Approximation, Pks};
    use crate::snf::{clauses_to_formula, property_to_snf};
    use crate::testutil::{vacuum_model, vacuum_properties};

    fn assert_sat_with_valid_witness(clauses: &[crate::snf::SnfClause]) {
        let res = sat(clauses).unwrap();
        assert!(res.satisfiable);
        let w = res.witness.unwrap();
        let eta = clauses_to_formula(clauses);
        assert_eq!(eval_classical(&eta, &w), Ok(true), "witness violates {eta}");
    }

    #[test]
    fn clause_route_produces_replayable_witnesses() {
        let clauses = property_to_snf(&parse_ltl("p & G (p -> X p) & F q").unwrap());
        assert_sat_with_valid_witness(&clauses);

        let unsat = property_to_snf(&parse_ltl("G p & F !p").unwrap());
        let res = sat(&unsat).unwrap();
        assert!(!res.satisfiable);
        assert!(res.witness.is_none());
    }

    #[test]
    fn formula_route_agrees_on_simple_cases() {
        assert!(!sat_formula(&parse_ltl("G p & F !p").unwrap()).unwrap().satisfiable);
        let res = sat_formula(&parse_ltl("F p").unwrap()).unwrap();
        assert!(res.satisfiable);
        let w = res.witness.unwrap();
        assert_eq!(eval_classical(&parse_ltl("F p").unwrap(), &w), Ok(true));

        // one of the robot requirements, checked for plain satisfiability
        let phi2 = parse_ltl("G ((!move) W on)").unwrap();
        let res = sat_formula(&phi2).unwrap();
        assert!(res.satisfiable);
        assert_eq!(eval_classical(&phi2, &res.witness.unwrap()), Ok(true));
    }

    #[test]
    fn single_state_structure_satisfies_its_own_label() {
        let mut m = Pks::new("one", vec!["p".into()]).unwrap();
        m.add_state("s", vec![Tri::True]).unwrap();
        m.add_transition("s", "s").unwrap();
        m.mark_initial("s").unwrap();
        let a = m.complement_closure().unwrap().approximate(Approximation::Optimistic);
        let res = check_star(&a, &parse_ltl("G p").unwrap()).unwrap();
        assert!(res.holds);
        assert_eq!(res.counterexample, None);
    }

    #[test]
    fn optimistic_vacuum_violates_the_activity_requirement() {
        let closed = vacuum_model().complement_closure().unwrap();
        let opt = closed.approximate(Approximation::Optimistic);
        let phi3 = parse_ltl("G (on -> (move | suck))").unwrap();
        let res = check_star(&opt, &phi3).unwrap();
        assert!(!res.holds);

        // the counterexample is a real path whose optimistic trace
        // satisfies the normalized negation
        let ce = res.counterexample.unwrap();
        let tau = tau_transform(&phi3).unwrap();
        let trace = ce.clone().map(|s| {
            let idx = opt.state_index(&s).unwrap();
            opt.props()
                .iter()
                .enumerate()
                .map(|(p, name)| (name.clone(), opt.label_idx(idx, p) == Tri::True))
                .collect::<Valuation>()
        });
        assert_eq!(eval_classical(&tau, &trace), Ok(true));
        // and it really is a path: the three-valued evaluator validates it
        assert!(crate::ltl::eval_three_valued(&phi3, &ce, &opt).is_ok());
    }

    #[test]
    fn pessimistic_vacuum_meets_the_motion_requirement() {
        let closed = vacuum_model().complement_closure().unwrap();
        let pes = closed.approximate(Approximation::Pessimistic);
        let phi2 = parse_ltl("G ((!move) W on)").unwrap();
        assert!(check_star(&pes, &phi2).unwrap().holds);
    }

    // The optimistic approximation makes every literal of the normalized
    // negation at least as true as the pessimistic one does, so it admits a
    // superset of the offending paths: passing on it is the stronger claim.
    #[test]
    fn optimistic_pass_implies_pessimistic_pass() {
        let closed = vacuum_model().complement_closure().unwrap();
        let opt = closed.approximate(Approximation::Optimistic);
        let pes = closed.approximate(Approximation::Pessimistic);
        for (name, phi) in vacuum_properties() {
            let on_pes = check_star(&pes, &phi).unwrap().holds;
            let on_opt = check_star(&opt, &phi).unwrap().holds;
            assert!(!on_opt || on_pes, "{name}: optimistic holds but pessimistic fails");
        }
    }

    #[test]
    fn unknown_propositions_are_reported() {
        let closed = vacuum_model().complement_closure().unwrap();
        let opt = closed.approximate(Approximation::Optimistic);
        let err = check_star(&opt, &parse_ltl("G wibble").unwrap()).unwrap_err();
        assert_eq!(err, EngineError::UnknownProposition("~wibble".into()));
    }

    #[test]
    fn automaton_dump_is_stable() {
        let a = automaton_description(&parse_ltl("F p").unwrap()).unwrap();
        let b = automaton_description(&parse_ltl("F p").unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("acceptance sets: 1"));
    }
}
