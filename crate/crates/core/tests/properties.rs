//! Property-based invariants of the formula layer: parsing, normal forms,
//! and the two evaluation semantics.

use proofslice_core::ltl::{
    complement_name, eval_classical, eval_three_valued, parse_ltl, tau_transform, to_nnf, Formula,
    Lasso, Valuation,
};
use proofslice_core::pks::Pks;
use proofslice_core::tri::Tri;
use proptest::prelude::*;

const ATOMS: [&str; 3] = ["p", "q", "r"];

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::True),
        1 => Just(Formula::False),
        6 => prop::sample::select(&ATOMS[..]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::globally),
            inner.clone().prop_map(Formula::finally),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::weak_until(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::release(a, b)),
        ]
    })
}

fn arb_valuation() -> impl Strategy<Value = Valuation> {
    any::<[bool; 3]>().prop_map(|bits| {
        ATOMS
            .iter()
            .zip(bits)
            .map(|(a, b)| (a.to_string(), b))
            .collect()
    })
}

fn arb_word() -> impl Strategy<Value = Lasso<Valuation>> {
    (
        prop::collection::vec(arb_valuation(), 0..3),
        prop::collection::vec(arb_valuation(), 1..4),
    )
        .prop_map(|(prefix, cycle)| Lasso::new(prefix, cycle))
}

fn arb_tri() -> impl Strategy<Value = Tri> {
    prop::sample::select(&[Tri::False, Tri::Unknown, Tri::True][..])
}

/// Adds, for every atom, its complement with the opposite value.
fn close_word(w: &Lasso<Valuation>) -> Lasso<Valuation> {
    w.map(|v| {
        let mut closed = v.clone();
        for (a, b) in v {
            closed.insert(complement_name(a).unwrap(), !b);
        }
        closed
    })
}

/// A one-lasso model whose single path carries exactly the given labels,
/// paired with that path.
fn chain_model(labels: &Lasso<Vec<Tri>>) -> (Pks, Lasso<String>) {
    let mut m = Pks::new("chain", ATOMS.iter().map(|a| a.to_string()).collect()).unwrap();
    let n = labels.len();
    for i in 0..n {
        m.add_state(&format!("s{i}"), labels.at(i).clone()).unwrap();
    }
    for i in 0..n - 1 {
        m.add_transition_idx(i, i + 1);
    }
    m.add_transition_idx(n - 1, labels.prefix.len().min(n - 1));
    m.mark_initial("s0").unwrap();
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let path = Lasso::new(
        names[..labels.prefix.len()].to_vec(),
        names[labels.prefix.len()..].to_vec(),
    );
    (m, path)
}

proptest! {
    #[test]
    fn printed_formulas_parse_back(f in arb_formula()) {
        let printed = f.to_string();
        let reparsed = parse_ltl(&printed).unwrap();
        prop_assert_eq!(reparsed, f, "printed as {}", printed);
    }

    #[test]
    fn nnf_keeps_the_classical_meaning(f in arb_formula(), w in arb_word()) {
        let nnf = to_nnf(&f);
        prop_assert_eq!(
            eval_classical(&nnf, &w).unwrap(),
            eval_classical(&f, &w).unwrap(),
            "nnf printed as {}", nnf
        );
    }

    #[test]
    fn tau_is_negation_free_over_complement_atoms(f in arb_formula()) {
        let tau = tau_transform(&f).unwrap();
        prop_assert!(tau.is_negation_free());
    }

    #[test]
    fn tau_denotes_the_complement_closed_negation(f in arb_formula(), w in arb_word()) {
        let tau = tau_transform(&f).unwrap();
        prop_assert_eq!(
            eval_classical(&tau, &close_word(&w)).unwrap(),
            !eval_classical(&f, &w).unwrap()
        );
    }

    #[test]
    fn three_valued_eval_on_definite_paths_is_classical(
        f in arb_formula(),
        w in arb_word(),
    ) {
        let labels = w.map(|v| v.values().map(|&b| Tri::from_bool(b)).collect::<Vec<_>>());
        let (m, path) = chain_model(&labels);
        prop_assert_eq!(
            eval_three_valued(&f, &path, &m).unwrap(),
            Tri::from_bool(eval_classical(&f, &w).unwrap())
        );
    }

    #[test]
    fn definite_path_verdicts_survive_completion(
        f in arb_formula(),
        labels in (
            prop::collection::vec(prop::collection::vec((arb_tri(), any::<bool>()), 3), 0..3),
            prop::collection::vec(prop::collection::vec((arb_tri(), any::<bool>()), 3), 1..4),
        ).prop_map(|(prefix, cycle)| Lasso::new(prefix, cycle)),
    ) {
        let partial = labels.map(|row| row.iter().map(|&(t, _)| t).collect::<Vec<_>>());
        let completed = labels.map(|row| {
            row.iter()
                .map(|&(t, pick)| if t == Tri::Unknown { Tri::from_bool(pick) } else { t })
                .collect::<Vec<_>>()
        });
        let (pm, path) = chain_model(&partial);
        let (cm, _) = chain_model(&completed);
        let before = eval_three_valued(&f, &path, &pm).unwrap();
        let after = eval_three_valued(&f, &path, &cm).unwrap();
        if before != Tri::Unknown {
            prop_assert_eq!(after, before);
        }
    }
}
