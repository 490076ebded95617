mod common;

use std::collections::BTreeSet;

use fq_core::complex::DirectedEdge;
use fq_core::loops::{
    difference_is_face_sum, loops_generate_h1, straight_successor, trace_geodesic_loops,
    GeodesicLoop,
};
use fq_core::tessellation::genus_of;
use fq_core::SurfaceComplex;

/// Fraction-free elimination. Returns the rank and the absolute value of a
/// nonzero maximal minor (1 for the zero matrix).
fn bareiss(mut a: Vec<Vec<i128>>) -> (usize, i128) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let (mut r, mut prev) = (0, 1i128);
    for c in 0..cols {
        let Some(pivot) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pivot);
        for i in r + 1..rows {
            for j in 0..cols {
                if j != c {
                    a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
                }
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        r += 1;
    }
    (r, prev.abs())
}

fn rank_mod(a: &[Vec<i128>], l: i128) -> usize {
    let mut a: Vec<Vec<i128>> = a
        .iter()
        .map(|row| row.iter().map(|x| x.rem_euclid(l)).collect())
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let pow = |mut b: i128, mut e: i128| {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % l;
            }
            b = b * b % l;
            e >>= 1;
        }
        acc
    };
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pivot);
        let inv = pow(a[r][c], l - 2);
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c] * inv % l;
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[r][j]).rem_euclid(l);
                }
            }
        }
        r += 1;
    }
    r
}

fn prime_factors(mut n: i128) -> Vec<i128> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Independent check that `loops` plus face boundaries span the cycle
/// lattice: equal rational rank, and no prime dividing a maximal minor drops
/// the rank (cycles form a direct summand, so that rules out a finite
/// index).
fn generates_h1_oracle(complex: &SurfaceComplex, loops: &[&GeodesicLoop]) -> bool {
    let topo = complex.topology().unwrap();
    let e = complex.num_edges();
    let mut d1 = vec![vec![0i128; e]; topo.num_vertices()];
    for edge in 0..e {
        let d = DirectedEdge::new(edge, false);
        d1[topo.head(d)][edge] += 1;
        d1[topo.tail(d)][edge] -= 1;
    }
    let cycle_rank = e - bareiss(d1).0;
    let mut gens: Vec<Vec<i128>> = loops
        .iter()
        .map(|l| l.chain(e).into_iter().map(i128::from).collect())
        .collect();
    for face in complex.faces() {
        let mut col = vec![0i128; e];
        for s in &face.sides {
            col[s.edge] += if s.reversed { -1 } else { 1 };
        }
        gens.push(col);
    }
    // Rows are generators; rank and minors are transpose-invariant.
    let (r, minor) = bareiss(gens.clone());
    r == cycle_rank
        && prime_factors(minor)
            .into_iter()
            .all(|l| rank_mod(&gens, l) == r)
}

#[test]
fn h1_generation_agrees_with_oracle_on_all_loop_subsets() {
    let cases = [
        ("block p6 g2", common::block(6, 2)),
        ("block p8 g3", common::block(8, 3)),
        ("rect p8 1x2", common::rect(8, 1, 2)),
        ("rect p12 1x1", common::rect(12, 1, 1)),
        ("square torus", common::square_torus()),
    ];
    for (name, complex) in cases {
        assert!(complex.num_edges() <= 16, "{name}");
        let report = trace_geodesic_loops(&complex).unwrap();
        let n = report.loops.len();
        assert!(n <= 12, "{name}: {n} loops");
        let mut generating = 0;
        for mask in 0u32..1 << n {
            let chosen: Vec<GeodesicLoop> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| report.loops[i].clone())
                .collect();
            let refs: Vec<&GeodesicLoop> = chosen.iter().collect();
            let expected = generates_h1_oracle(&complex, &refs);
            assert_eq!(
                loops_generate_h1(&complex, &chosen).unwrap(),
                expected,
                "{name} mask {mask:b}"
            );
            generating += expected as usize;
        }
        assert!(
            generates_h1_oracle(&complex, &report.loops.iter().collect::<Vec<_>>()),
            "{name}: full loop set"
        );
        assert!(generating < 1 << n, "{name}: empty set cannot generate");
    }
}

#[test]
fn loops_partition_the_edges_of_clean_complexes() {
    for fx in common::suite() {
        let report = trace_geodesic_loops(&fx.complex).unwrap();
        if report.loops.iter().any(|l| l.degenerate) {
            continue;
        }
        let total: usize = report.loops.iter().map(|l| l.length).sum();
        assert_eq!(total, fx.complex.num_edges(), "{}", fx.name);
        let covered: BTreeSet<usize> = report.loops.iter().flat_map(|l| l.edges()).collect();
        assert_eq!(covered.len(), fx.complex.num_edges(), "{}", fx.name);
        for l in &report.loops {
            assert_eq!(l.length, l.directed_edges.len(), "{}", fx.name);
        }
    }
}

#[test]
fn straight_successor_is_a_permutation() {
    for fx in common::suite() {
        let topo = fx.complex.topology().unwrap();
        let image: BTreeSet<usize> = (0..topo.num_sides())
            .map(|s| straight_successor(topo, s))
            .collect();
        assert_eq!(image.len(), topo.num_sides(), "{}", fx.name);
    }
}

#[test]
fn double_crossing_violates_hypotheses() {
    let complex = common::double_crossing();
    let report = trace_geodesic_loops(&complex).unwrap();
    assert!(report.all_even());
    assert_eq!(report.max_intersection(), 2);
    assert!(!report.hypotheses_ok);
    let faces = complex.num_faces();
    assert_eq!(genus_of(6, faces), Some(3));
}

#[test]
fn builder_loops_satisfy_hypotheses() {
    for (p, g) in [(6, 2), (6, 3), (8, 3), (10, 4)] {
        let report = trace_geodesic_loops(&common::block(p, g)).unwrap();
        assert!(report.hypotheses_ok, "block p{p} g{g}");
        assert!(report.max_intersection() <= 1);
    }
}

#[test]
fn face_boundaries_are_null_homologous() {
    let complex = common::block(6, 2);
    let e = complex.num_edges();
    let report = trace_geodesic_loops(&complex).unwrap();
    let a = report.loops[0].chain(e);

    let mut shifted = a.clone();
    for s in &complex.face(1).sides {
        shifted[s.edge] -= if s.reversed { -1 } else { 1 };
    }
    let x = difference_is_face_sum(&complex, &a, &shifted)
        .unwrap()
        .expect("differs by one face");
    let mut rebuilt = vec![0i64; e];
    for (f, coef) in x.iter().enumerate() {
        for s in &complex.face(f).sides {
            rebuilt[s.edge] += coef * if s.reversed { -1 } else { 1 };
        }
    }
    let diff: Vec<i64> = a.iter().zip(&shifted).map(|(u, v)| u - v).collect();
    assert_eq!(rebuilt, diff);

    assert!(difference_is_face_sum(&complex, &a, &vec![0; e])
        .unwrap()
        .is_none());
    assert!(difference_is_face_sum(&complex, &a, &a).unwrap().is_some());
}
