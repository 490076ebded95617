//! Complexes shared by the integration tests.
#![allow(dead_code)]

use fq_core::complex::{build_complex, Chirality, EdgeSpec, FaceSpec, Side, SurfaceComplex};
use fq_core::tessellation::{
    build_block_tessellation, build_rect_tessellation, pair_shift, pair_swap, subdivide,
    typed_gluing,
};

pub struct Fixture {
    pub name: &'static str,
    pub complex: SurfaceComplex,
    /// Genus the fixture is built for.
    pub genus: i64,
}

fn fixture(name: &'static str, complex: SurfaceComplex, genus: i64) -> Fixture {
    Fixture {
        name,
        complex,
        genus,
    }
}

/// Typed gluing of 8 hexagons in which several loop pairs meet twice.
pub fn double_crossing() -> SurfaceComplex {
    let (c, s) = (pair_shift(4), pair_swap(4));
    typed_gluing(6, &[c.clone(), s.clone(), c, s.clone(), s.clone(), s]).unwrap()
}

/// One square with sides `a b a^-1 b^-1`.
pub fn square_torus() -> SurfaceComplex {
    let edges = [
        EdgeSpec {
            id: 0,
            edge_type: None,
        },
        EdgeSpec {
            id: 1,
            edge_type: None,
        },
    ];
    let faces = [FaceSpec {
        id: 0,
        chirality: Chirality::CounterClockwise,
        sides: vec![
            Side::forward(0),
            Side::forward(1),
            Side::backward(0),
            Side::backward(1),
        ],
    }];
    build_complex(4, &edges, &faces).unwrap()
}

pub fn block(p: usize, g: usize) -> SurfaceComplex {
    build_block_tessellation(p, g).unwrap()
}

pub fn rect(p: usize, a: usize, b: usize) -> SurfaceComplex {
    build_rect_tessellation(p, a, b).unwrap()
}

pub fn sub(source: &SurfaceComplex, pieces: usize) -> SurfaceComplex {
    subdivide(source, pieces, Some(1)).unwrap().0
}

/// Builder outputs, subdivisions and hand-made complexes, with and without
/// odd loops.
pub fn suite() -> Vec<Fixture> {
    vec![
        fixture("block p6 g2", block(6, 2), 2),
        fixture("block p6 g3", block(6, 3), 3),
        fixture("block p8 g3", block(8, 3), 3),
        fixture("block p10 g4", block(10, 4), 4),
        fixture("block p6 g4", block(6, 4), 4),
        fixture("rect p8 1x2", rect(8, 1, 2), 2),
        fixture("rect p8 1x4", rect(8, 1, 4), 3),
        fixture("rect p8 2x3", rect(8, 2, 3), 4),
        fixture("rect p12 1x1", rect(12, 1, 1), 2),
        fixture("rect p12 1x2", rect(12, 1, 2), 3),
        fixture("rect p12 3x3", rect(12, 3, 3), 10),
        fixture("sub2 rect p8 1x2", sub(&rect(8, 1, 2), 2), 2),
        fixture("sub2 rect p8 2x3", sub(&rect(8, 2, 3), 2), 4),
        fixture("sub4 rect p12 1x1", sub(&rect(12, 1, 1), 4), 2),
        fixture("sub4 rect p12 3x3", sub(&rect(12, 3, 3), 4), 10),
        fixture("double crossing", double_crossing(), 3),
        fixture("square torus", square_torus(), 1),
    ]
}
