mod common;

use std::collections::BTreeSet;

use fq_core::coloring::{solve_good_coloring, ColoringOutcome, EdgeColoring, SolveMode};
use fq_core::lattice::{
    assign_groups, build_link_graph, decide, is_two_symmetric_about, loop_obstructions,
    loop_obstructions_with, loop_types_from_labels, symmetry_closure, Factor, Method, Reason,
    SymmetryGenerator, TypeSequence, Verdict,
};
use fq_core::loops::trace_geodesic_loops;
use fq_core::tessellation::subdivide;
use fq_core::{LatticeError, SurfaceComplex};
use proptest::prelude::*;

fn seq(s: &str) -> TypeSequence {
    s.parse().unwrap()
}

fn coloring(complex: &SurfaceComplex) -> EdgeColoring {
    match solve_good_coloring(complex, SolveMode::Propagate).unwrap() {
        ColoringOutcome::Colored(c) => c,
        ColoringOutcome::Contradiction(w) => panic!("no coloring: {w:?}"),
    }
}

#[test]
fn thick_hexagons_have_k46_links() {
    let complex = common::block(6, 2);
    let q = seq("4,6,4,6,4,6");
    let a = assign_groups(&complex, &coloring(&complex), &q).unwrap();
    assert!(a.certified);
    assert_eq!((a.decomposition.d, a.decomposition.e), (4, 6));
    assert_eq!(a.order(Factor::D), 3);
    assert_eq!(a.order(Factor::E), 5);

    let mut odd_indices = BTreeSet::new();
    let mut even_indices = BTreeSet::new();
    for v in 0..a.vertices.len() {
        let (i, j) = a.vertices[v].types;
        for (&e, &t) in a.vertices[v].edges.iter().zip(&[i, j, i, j]) {
            let idx = a.index_in_vertex(v, &a.edge_groups[e]);
            if t % 2 == 1 {
                odd_indices.insert(idx);
            } else {
                even_indices.insert(idx);
            }
        }
        let check = &a.checks[v];
        assert!(check.passed, "vertex {v}: {check:?}");
        let expected = (q.get(i as i64 + 1), q.get(i as i64));
        assert_eq!(check.index_sums, expected);

        let link = build_link_graph(&a, v);
        assert!(link.well_defined && link.complete_bipartite);
        assert_eq!(link.sides(), (expected.0 as usize, expected.1 as usize));
        assert_eq!(link.edges.len(), 24);
    }
    assert_eq!(odd_indices, BTreeSet::from([5, 1]));
    assert_eq!(even_indices, BTreeSet::from([3, 1]));
}

#[test]
fn broken_coloring_is_rejected() {
    let complex = common::block(6, 2);
    let mut c = coloring(&complex);
    c.colors[0] ^= 1;
    assert!(matches!(
        assign_groups(&complex, &c, &seq("2,3,2,3,2,3")),
        Err(LatticeError::NotGoodColoring(_))
    ));
}

#[test]
fn coprime_thickness_is_rejected() {
    let complex = common::block(6, 2);
    assert!(matches!(
        assign_groups(&complex, &coloring(&complex), &seq("2,3,5,3,2,3")),
        Err(LatticeError::NotAlternatingNonCoprime)
    ));
    assert!(matches!(
        assign_groups(&complex, &coloring(&complex), &seq("2,3,2,3")),
        Err(LatticeError::SequenceLength {
            found: 4,
            expected: 6
        })
    ));
}

#[test]
fn label_types_explain_odd_loops_of_untyped_sources() {
    let source = common::rect(8, 1, 2);
    let (_, map) = subdivide(&source, 2, Some(1)).unwrap();
    let report = trace_geodesic_loops(&source).unwrap();
    let types = loop_types_from_labels(&report, &map, 1);
    assert_eq!(types.len(), report.loops.len());
    assert!(types.iter().all(Option::is_some));
    assert!(
        loop_obstructions(&report).is_empty(),
        "untyped loops carry no type"
    );

    let gens = loop_obstructions_with(&report, |l| types[l.id]);
    let q = seq("3,2,9,2,3,2,9,2");
    for g in &gens {
        let SymmetryGenerator::Reflection { axis } = g else {
            panic!("{g:?}");
        };
        assert!(is_two_symmetric_about(q.entries(), *axis), "axis {axis}");
    }
    let closure = symmetry_closure(8, &gens);
    assert!(closure.admits(q.entries()));
}

#[test]
fn decide_examples() {
    let d = decide(6, &seq("2,3,2,3,2,3"), 2, true).unwrap();
    let Verdict::Exists {
        method: Method::Block,
        certificate: Some(cert),
    } = &d.verdict
    else {
        panic!("{:?}", d.verdict);
    };
    assert!(cert.certified);

    let d = decide(8, &seq("3,2,9,2,3,2,9,2"), 2, true).unwrap();
    let Verdict::Exists {
        method: Method::Subdiv2 { axis: 1 },
        certificate: Some(cert),
    } = &d.verdict
    else {
        panic!("{:?}", d.verdict);
    };
    assert!(cert.certified);
    assert_eq!(cert.q.entries(), &[3, 2, 9, 2, 3, 2]);

    let d = decide(12, &TypeSequence::constant(12, 2).unwrap(), 10, true).unwrap();
    assert!(matches!(
        d.verdict,
        Verdict::Exists {
            method: Method::Subdiv4 { axis: 1 },
            certificate: Some(ref c)
        } if c.certified
    ));

    let d = decide(12, &seq("3,2,2,2,2,2,2,2,2,2,2,2"), 10, false).unwrap();
    assert_eq!(
        d.verdict,
        Verdict::RuledOut {
            reason: Reason::FourSymmetry
        }
    );
    let d = decide(12, &seq("2,3,2,3,2,3,2,3,2,3,2,3"), 10, false).unwrap();
    assert_eq!(
        d.verdict,
        Verdict::Unknown {
            reason: Reason::GcdParity
        }
    );
    let d = decide(8, &seq("2,3,4,3,2,3,4,3"), 2, false).unwrap();
    assert_eq!(
        d.verdict,
        Verdict::Unknown {
            reason: Reason::OddOffsetGcdOdd
        }
    );
    let d = decide(8, &seq("2,3,5,3,2,3,5,3"), 2, false).unwrap();
    assert_eq!(
        d.verdict,
        Verdict::Unknown {
            reason: Reason::NotAlternatingNonCoprime
        }
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Any alternating non-coprime sequence on the (6, 2) block certifies,
    /// and every link is the complete bipartite graph the index sums predict.
    #[test]
    fn block_assignments_certify(
        d in 2u64..5,
        e in 2u64..5,
        r in proptest::collection::vec(1u64..4, 6),
    ) {
        let q: Vec<u64> = (0..6).map(|k| if k % 2 == 0 { d * r[k] } else { e * r[k] }).collect();
        let q = TypeSequence::new(q).unwrap();
        prop_assume!(fq_core::lattice::alternating_noncoprime(q.entries()).is_some());
        let complex = common::block(6, 2);
        let a = assign_groups(&complex, &coloring(&complex), &q).unwrap();
        prop_assert!(a.certified);
        for v in 0..a.vertices.len() {
            let (i, _) = a.vertices[v].types;
            let link = build_link_graph(&a, v);
            prop_assert!(link.complete_bipartite);
            prop_assert_eq!(
                link.sides(),
                (q.get(i as i64 + 1) as usize, q.get(i as i64) as usize)
            );
        }
    }
}
