mod common;

use common::*;
use gwalk_core::gwa::simulate;
use gwalk_core::hardness::{
    canonical_colored_graph, canonical_grid_graph, extract_coloring, find_accepting_computation,
    gen_3col_signature, gen_grid_automaton, gen_grid_signature, gen_universal_star_automaton,
    grid_mutations, Move, TmTransition, TuringMachine,
};
use gwalk_core::solver::{signature_nonempty, SearchLimits, SignatureVerdict};
use gwalk_core::star::{check_tiling, star_nonempty, TilingAssignment};
use gwalk_core::Error;
use indexmap::IndexMap;

#[test]
fn three_colouring_verdicts() {
    for (name, g, colourable) in [
        ("K3", complete(3), true),
        ("K4", complete(4), false),
        ("C5", cycle(5), true),
        ("K3,3", complete_bipartite(3, 3), true),
    ] {
        let sig = gen_3col_signature(&g).unwrap();
        assert!(sig.validate().ok, "{name}");
        let v = signature_nonempty(&sig, &SearchLimits::default()).unwrap();
        assert_eq!(v.is_nonempty(), colourable, "{name}");
        if let SignatureVerdict::NonEmpty { witness } = v {
            assert!(
                is_proper(&g, &extract_coloring(&g, &witness).unwrap()),
                "{name}"
            );
        }
    }
}

#[test]
fn three_colouring_signature_size() {
    // Per vertex 3 labels, per edge 6 labels and 12 directions.
    let g = cycle(5);
    let sig = gen_3col_signature(&g).unwrap();
    assert_eq!(sig.labels.len(), 5 * 3 + 5 * 6);
    assert_eq!(sig.directions.len(), 5 * 12);
    assert_eq!(sig.initial_labels.len(), 3);
}

#[test]
fn canonical_coloured_graph_round_trip() {
    let g = cycle(5);
    let colouring: IndexMap<String, u8> = (0..5)
        .map(|v| (v.to_string(), [1, 2, 1, 2, 3][v]))
        .collect();
    let sig = gen_3col_signature(&g).unwrap();
    let h = canonical_colored_graph(&g, &colouring).unwrap();
    assert!(h.validate(&sig).ok);
    assert_eq!(h.nodes.len(), 10);
    assert_eq!(extract_coloring(&g, &h).unwrap(), colouring);

    let mut bad = colouring.clone();
    bad.insert("1".into(), 1);
    assert!(canonical_colored_graph(&g, &bad).is_err());
}

#[test]
fn disconnected_graphs_are_refused() {
    let g = simple_graph(4, &[(0, 1), (2, 3)]);
    assert!(!g.validate().ok);
    assert!(matches!(gen_3col_signature(&g), Err(Error::Invalid { .. })));
}

#[test]
fn universal_star_automaton_accepts_everything() {
    let sig = sig_line();
    let a = gen_universal_star_automaton(&sig).unwrap();
    assert_eq!(a.states.len(), 1);
    assert_eq!(a.stars.len(), 3);
    for g in gwalk_core::solver::enumerate_graphs(&sig, 4).unwrap() {
        let t = TilingAssignment {
            state_of: g
                .nodes
                .iter()
                .map(|v| (v.clone(), a.states[0].clone()))
                .collect(),
        };
        assert!(check_tiling(&sig, &a, &g, &t).unwrap());
    }
    let empty = gen_universal_star_automaton(&sig_odd()).unwrap();
    assert!(!star_nonempty(&sig_odd(), &empty, &SearchLimits::default())
        .unwrap()
        .is_nonempty());
}

fn instant() -> TuringMachine {
    TuringMachine {
        states: strings(&["s"]),
        input_alphabet: strings(&["x"]),
        work_alphabet: strings(&["x", "_"]),
        blank: "_".into(),
        initial: strings(&["s"]),
        accept: vec![("s".into(), "x".into())],
        delta: vec![],
    }
}

/// Writes y over x, steps right onto a blank, steps back and accepts on y.
fn right_left() -> TuringMachine {
    let t = |q: &str, a: &str, p: &str, b: &str, m| TmTransition {
        from: (q.into(), a.into()),
        to: (p.into(), b.into(), m),
    };
    TuringMachine {
        states: strings(&["s", "t", "u"]),
        input_alphabet: strings(&["x"]),
        work_alphabet: strings(&["x", "y", "_"]),
        blank: "_".into(),
        initial: strings(&["s"]),
        accept: vec![("u".into(), "y".into())],
        delta: vec![
            t("s", "x", "t", "y", Move::R),
            t("t", "_", "u", "_", Move::L),
        ],
    }
}

#[test]
fn grid_signature_counts() {
    let sig = gen_grid_signature(1, &instant()).unwrap();
    assert!(sig.validate().ok);
    // 5 tree labels, 9 positions × 2 symbols × (1 state + no head), 4 chain labels.
    assert_eq!(sig.labels.len(), 5 + 36 + 4);
    // Tree ±l1,±r1,±l2,±r2, ±leaf, ±1, ±2, ±chain, ±c1.
    assert_eq!(sig.directions.len(), 8 + 2 + 4 + 2 + 2);

    let sig = gen_grid_signature(2, &right_left()).unwrap();
    assert_eq!(sig.labels.len(), 9 + 9 * 3 * 4 + 8);
}

#[test]
fn grid_for_n1_accepts_and_rejects_every_mutant() {
    let (m, w) = (instant(), strings(&["x"]));
    let sig = gen_grid_signature(1, &m).unwrap();
    let a = gen_grid_automaton(1, &m, &w, true).unwrap();
    assert!(a.validate(&sig).ok);
    let run = find_accepting_computation(&m, &w, 2, 2).unwrap().unwrap();
    assert_eq!(run.len(), 1);
    let g = canonical_grid_graph(1, &m, &w, &run).unwrap();
    assert_eq!(g.nodes.len(), 19);
    assert!(simulate(&sig, &a, &g).unwrap().is_accept());
    let mutants = grid_mutations(1, &m, &w, &run).unwrap();
    assert!(mutants.len() >= 10);
    for (name, h) in mutants {
        assert!(!simulate(&sig, &a, &h).unwrap().is_accept(), "{name}");
    }
}

#[test]
fn grid_for_n2_follows_a_real_computation() {
    let (m, w) = (right_left(), strings(&["x"]));
    let sig = gen_grid_signature(2, &m).unwrap();
    let a = gen_grid_automaton(2, &m, &w, true).unwrap();
    let run = find_accepting_computation(&m, &w, 4, 4).unwrap().unwrap();
    assert_eq!(run.len(), 3);
    let g = canonical_grid_graph(2, &m, &w, &run).unwrap();
    assert!(simulate(&sig, &a, &g).unwrap().is_accept());
    // A machine that never accepts leaves nothing to accept.
    let mut stuck = m.clone();
    stuck.accept.clear();
    let b = gen_grid_automaton(2, &stuck, &w, true).unwrap();
    assert!(!simulate(&sig, &b, &g).unwrap().is_accept());
}

#[test]
fn grid_preconditions() {
    let m = instant();
    assert!(matches!(
        gen_grid_automaton(1, &m, &strings(&["x", "x"]), true),
        Err(Error::Precondition(_))
    ));
    assert!(gen_grid_automaton(1, &m, &strings(&["x"]), false).is_err());
    assert!(gen_grid_signature(0, &m).is_err());
    let run = find_accepting_computation(&m, &strings(&["x"]), 2, 2)
        .unwrap()
        .unwrap();
    assert!(canonical_grid_graph(1, &m, &strings(&["_"]), &run).is_err());
}
