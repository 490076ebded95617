//! Boundary geodesic loops: tracing, intersections, homology generation and
//! dual-graph face orientation.
//!
//! At a degree-4 vertex the straight continuation of an incoming side `s`
//! leaves along the edge of corner `sigma^2(s)`; the edges of `sigma(s)` and
//! `sigma^3(s)` hang off the loop to its left and right respectively.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::complex::{dual_graph, DirectedEdge, EdgeType, SurfaceComplex, Topology};
use crate::error::{ComplexError, LoopError};
use crate::homology::{
    boundary_matrices, smith_normal_form, solve_integer, to_i64_vec, IntegerMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicLoop {
    pub id: usize,
    /// Common type of the loop's edges; `None` on untyped complexes.
    #[serde(rename = "type")]
    pub edge_type: Option<EdgeType>,
    pub directed_edges: Vec<DirectedEdge>,
    /// Number of distinct undirected edges.
    pub length: usize,
    pub parity: Parity,
    /// Some edge is traversed in both directions.
    pub degenerate: bool,
}

impl GeodesicLoop {
    /// The loop as an integer 1-chain on `num_edges` edges.
    pub fn chain(&self, num_edges: usize) -> Vec<i64> {
        let mut c = vec![0; num_edges];
        for d in &self.directed_edges {
            c[d.edge()] += if d.reversed() { -1 } else { 1 };
        }
        c
    }

    pub fn edges(&self) -> BTreeSet<usize> {
        self.directed_edges.iter().map(|d| d.edge()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopIntersection {
    pub a: usize,
    pub b: usize,
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopReport {
    pub loops: Vec<GeodesicLoop>,
    /// Loop count per edge type; untyped loops are not counted.
    pub counts_by_type: BTreeMap<usize, usize>,
    pub odd_loops: Vec<usize>,
    /// Nonzero intersection counts between distinct loops, `a < b`.
    pub intersections: Vec<LoopIntersection>,
    pub hypotheses_ok: bool,
}

impl LoopReport {
    pub fn intersection(&self, a: usize, b: usize) -> usize {
        let (a, b) = (a.min(b), a.max(b));
        self.intersections
            .iter()
            .find(|x| x.a == a && x.b == b)
            .map_or(0, |x| x.vertices)
    }

    pub fn max_intersection(&self) -> usize {
        self.intersections
            .iter()
            .map(|x| x.vertices)
            .max()
            .unwrap_or(0)
    }

    pub fn all_even(&self) -> bool {
        self.odd_loops.is_empty()
    }
}

/// Side through which the geodesic leaves the head of `side`.
pub fn straight_successor(topo: &Topology, side: usize) -> usize {
    topo.opposite(topo.sigma_pow(side, 2))
}

/// Edges hanging off a loop at the head of `side`: (left, right).
pub fn hanging_edges(topo: &Topology, side: usize) -> (usize, usize) {
    (
        topo.edge_of(topo.sigma(side)),
        topo.edge_of(topo.sigma_pow(side, 3)),
    )
}

/// Traces all boundary geodesic loops.
///
/// Requires every vertex to have degree 4.
pub fn trace_geodesic_loops(complex: &SurfaceComplex) -> Result<LoopReport, ComplexError> {
    let topo = complex.right_angled_topology()?;
    let n = 2 * complex.num_edges();
    let mut seen = vec![false; n];
    let mut cycles: Vec<Vec<DirectedEdge>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = DirectedEdge(start);
        while !seen[d.0] {
            seen[d.0] = true;
            cycle.push(d);
            d = topo.directed_of(straight_successor(topo, topo.side_of(d)));
        }
        cycles.push(cycle);
    }

    // Each undirected loop appears as a cycle and its reverse; keep the one
    // holding the smaller directed edge (cycles are found in that order).
    let mut taken = vec![false; n];
    let mut loops = Vec::new();
    for cycle in cycles {
        if taken[cycle[0].0] {
            continue;
        }
        let degenerate = cycle.iter().any(|d| cycle.contains(&d.reverse()));
        for d in &cycle {
            taken[d.0] = true;
            taken[d.reverse().0] = true;
        }
        let edges: BTreeSet<usize> = cycle.iter().map(|d| d.edge()).collect();
        let first = complex.edge_type(cycle[0].edge());
        let edge_type = first.filter(|_| edges.iter().all(|&e| complex.edge_type(e) == first));
        loops.push(GeodesicLoop {
            id: loops.len(),
            edge_type,
            length: edges.len(),
            parity: Parity::of(edges.len()),
            directed_edges: cycle,
            degenerate,
        });
    }

    let mut counts_by_type = BTreeMap::new();
    for l in &loops {
        if let Some(t) = l.edge_type {
            *counts_by_type.entry(t.value()).or_insert(0) += 1;
        }
    }
    let odd_loops: Vec<usize> = loops
        .iter()
        .filter(|l| l.parity == Parity::Odd)
        .map(|l| l.id)
        .collect();
    let intersections = pairwise_intersections(complex, &loops)?
        .into_iter()
        .map(|((a, b), vertices)| LoopIntersection { a, b, vertices })
        .collect::<Vec<_>>();
    let hypotheses_ok = odd_loops.is_empty()
        && intersections.iter().all(|x| x.vertices <= 1)
        && loops.iter().all(|l| !l.degenerate);
    Ok(LoopReport {
        loops,
        counts_by_type,
        odd_loops,
        intersections,
        hypotheses_ok,
    })
}

/// Number of shared vertices for every pair of distinct loops that meet.
pub fn pairwise_intersections(
    complex: &SurfaceComplex,
    loops: &[GeodesicLoop],
) -> Result<BTreeMap<(usize, usize), usize>, ComplexError> {
    let topo = complex.topology()?;
    let mut through: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); topo.num_vertices()];
    for (i, l) in loops.iter().enumerate() {
        for &d in &l.directed_edges {
            through[topo.head(d)].insert(i);
        }
    }
    let mut counts = BTreeMap::new();
    for at_vertex in &through {
        let ids: Vec<usize> = at_vertex.iter().copied().collect();
        for (x, &a) in ids.iter().enumerate() {
            for &b in &ids[x + 1..] {
                *counts.entry((a, b)).or_insert(0) += 1;
            }
        }
    }
    Ok(counts)
}

/// Whether the loops together with the face boundaries span `ker d1` over
/// the integers, i.e. whether the loops generate the first homology group.
pub fn loops_generate_h1(
    complex: &SurfaceComplex,
    loops: &[GeodesicLoop],
) -> Result<bool, LoopError> {
    let (d2, d1) = boundary_matrices(complex)?;
    let e = complex.num_edges();
    let chains: Vec<Vec<i64>> = loops.iter().map(|l| l.chain(e)).collect();
    let generators = IntegerMatrix::from_columns(e, &chains).hstack(&d2);
    let kernel_rank = e - smith_normal_form(&d1).rank;
    let snf = smith_normal_form(&generators);
    Ok(snf.rank == kernel_rank && snf.torsion().is_empty())
}

/// Face coefficients `x` with `cycle1 - cycle2 = d2 x`, if the two cycles are
/// homologous.
pub fn difference_is_face_sum(
    complex: &SurfaceComplex,
    cycle1: &[i64],
    cycle2: &[i64],
) -> Result<Option<Vec<i64>>, LoopError> {
    let e = complex.num_edges();
    for c in [cycle1, cycle2] {
        if c.len() != e {
            return Err(LoopError::ChainLength {
                found: c.len(),
                expected: e,
            });
        }
    }
    let (d2, d1) = boundary_matrices(complex)?;
    for c in [cycle1, cycle2] {
        let v: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        if d1.mul_vec(&v).iter().any(|x| !x.is_zero()) {
            return Err(LoopError::NotACycle);
        }
    }
    let diff: Vec<BigInt> = cycle1
        .iter()
        .zip(cycle2)
        .map(|(a, b)| BigInt::from(a - b))
        .collect();
    Ok(solve_integer(&d2, &diff).and_then(|x| to_i64_vec(&x)))
}

/// Result of 2-coloring the dual graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum FaceOrientation {
    /// Adjacent faces get different colors.
    Bipartite { colors: Vec<u8> },
    /// A closed walk in the dual graph with an odd number of edges.
    OddCycle {
        faces: Vec<usize>,
        edges: Vec<usize>,
    },
}

impl FaceOrientation {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, FaceOrientation::Bipartite { .. })
    }
}

pub fn assign_face_orientations(complex: &SurfaceComplex) -> Result<FaceOrientation, ComplexError> {
    let dual = dual_graph(complex)?;
    let n = dual.num_vertices;
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(a, b)) in dual.edges.iter().enumerate() {
        incident[a].push((b, e));
        if a != b {
            incident[b].push((a, e));
        }
    }
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u].unwrap();
            for &(v, e) in &incident[u] {
                match color[v] {
                    None => {
                        color[v] = Some(1 - cu);
                        parent[v] = Some((u, e));
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => {
                        return Ok(odd_cycle_witness(u, v, e, &parent, &depth));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(FaceOrientation::Bipartite {
        colors: color.into_iter().map(Option::unwrap).collect(),
    })
}

fn odd_cycle_witness(
    u: usize,
    v: usize,
    e: usize,
    parent: &[Option<(usize, usize)>],
    depth: &[usize],
) -> FaceOrientation {
    // Walk both endpoints up the BFS tree to their common ancestor.
    let (mut a, mut b) = (u, v);
    let (mut up_a, mut up_b) = (vec![], vec![]);
    while a != b {
        if depth[a] >= depth[b] {
            let (pa, ea) = parent[a].unwrap();
            up_a.push((a, ea));
            a = pa;
        } else {
            let (pb, eb) = parent[b].unwrap();
            up_b.push((b, eb));
            b = pb;
        }
    }
    // Cycle: lca -> ... -> u --e--> v -> ... -> lca
    let mut faces = vec![a];
    let mut edges = Vec::new();
    for &(f, edge) in up_a.iter().rev() {
        edges.push(edge);
        faces.push(f);
    }
    edges.push(e);
    for &(f, edge) in &up_b {
        if faces.last() != Some(&f) {
            faces.push(f);
        }
        edges.push(edge);
    }
    if faces.len() > 1 && faces.last() == faces.first() {
        faces.pop();
    }
    FaceOrientation::OddCycle { faces, edges }
}
