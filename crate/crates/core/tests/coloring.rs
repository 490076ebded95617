mod common;

use fq_core::coloring::{
    build_constraints, exhaustive, holonomy, solve_good_coloring, verify_good_coloring,
    ColoringOutcome, Holonomy, SolveMode,
};
use fq_core::complex::DirectedEdge;
use fq_core::loops::trace_geodesic_loops;
use fq_core::ColoringError;

#[test]
fn good_colorings_are_fixed_by_loop_holonomy() {
    let mut checked = 0;
    for fx in common::suite() {
        let Ok(ColoringOutcome::Colored(c)) =
            solve_good_coloring(&fx.complex, SolveMode::Propagate)
        else {
            continue;
        };
        let topo = fx.complex.right_angled_topology().unwrap();
        let report = trace_geodesic_loops(&fx.complex).unwrap();
        for l in &report.loops {
            let base = topo.tail(l.directed_edges[0]);
            let ring = topo.ring_edges(base);
            let pair = (c.color(ring[0]), c.color(ring[1]));
            let h = holonomy(&fx.complex, &l.directed_edges).unwrap();
            assert_eq!(h.apply(pair), pair, "{} loop {}", fx.name, l.id);
            checked += 1;
        }
    }
    assert!(checked > 50, "only {checked} loops checked");
}

#[test]
fn holonomy_composes_along_concatenated_walks() {
    let complex = common::block(6, 2);
    let report = trace_geodesic_loops(&complex).unwrap();
    let topo = complex.topology().unwrap();
    // Two loops through a common vertex, each rotated to start there.
    let (a, b) = report
        .intersections
        .first()
        .map(|x| (&report.loops[x.a], &report.loops[x.b]))
        .unwrap();
    let start_at = |walk: &[DirectedEdge], v: usize| {
        let k = walk.iter().position(|&d| topo.tail(d) == v).unwrap();
        [&walk[k..], &walk[..k]].concat()
    };
    let v = a
        .directed_edges
        .iter()
        .map(|&d| topo.tail(d))
        .find(|&v| b.directed_edges.iter().any(|&d| topo.tail(d) == v))
        .unwrap();
    let (wa, wb) = (
        start_at(&a.directed_edges, v),
        start_at(&b.directed_edges, v),
    );
    let ha = holonomy(&complex, &wa).unwrap();
    let hb = holonomy(&complex, &wb).unwrap();
    let both = holonomy(&complex, &[wa.clone(), wb.clone()].concat()).unwrap();
    assert_eq!(both, hb.after(ha));

    let back: Vec<DirectedEdge> = wa.iter().rev().map(|d| d.reverse()).collect();
    assert_eq!(holonomy(&complex, &back).unwrap(), ha.inverse());
    assert!(holonomy(&complex, &[]).unwrap().is_identity());
}

#[test]
fn walks_must_be_closed_and_continuous() {
    let complex = common::block(6, 2);
    let report = trace_geodesic_loops(&complex).unwrap();
    let walk = &report.loops[0].directed_edges;
    assert!(matches!(
        holonomy(&complex, &walk[..walk.len() - 1]),
        Err(ColoringError::NotClosed)
    ));
    let mut broken = walk.clone();
    broken[1] = broken[1].reverse();
    assert!(matches!(
        holonomy(&complex, &broken),
        Err(ColoringError::Discontinuous(_))
    ));
}

#[test]
fn odd_loops_produce_verified_witnesses() {
    let mut contradictions = 0;
    for fx in common::suite() {
        let report = trace_geodesic_loops(&fx.complex).unwrap();
        match solve_good_coloring(&fx.complex, SolveMode::Propagate) {
            Ok(ColoringOutcome::Colored(c)) => {
                assert!(report.all_even(), "{}", fx.name);
                let v = verify_good_coloring(&fx.complex, &c).unwrap();
                assert!(v.good, "{}: {:?}", fx.name, v.violations);
            }
            Ok(ColoringOutcome::Contradiction(w)) => {
                assert!(!report.all_even(), "{}", fx.name);
                assert_eq!(w.total_parity(), 1, "{}", fx.name);
                contradictions += 1;
            }
            Err(e) => panic!("{}: {e}", fx.name),
        }
    }
    assert!(contradictions > 0);
}

#[test]
fn exhaustive_count_matches_components() {
    let complex = common::block(6, 2);
    let report = trace_geodesic_loops(&complex).unwrap();
    let system = build_constraints(&complex, &report).unwrap();
    let result = exhaustive(&system).unwrap();
    let first = result.first.expect("colorable");
    assert!(system.violations(&first).is_empty());
    assert_eq!(result.count, 1u64 << system.num_components());
}

#[test]
fn holonomy_inverse_round_trips() {
    for swap in [false, true] {
        for a in 0..2 {
            for b in 0..2 {
                let h = Holonomy {
                    swap,
                    offset: (a, b),
                };
                assert!(h.after(h.inverse()).is_identity());
                assert!(h.inverse().after(h).is_identity());
            }
        }
    }
}
