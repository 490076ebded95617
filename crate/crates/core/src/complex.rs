//! Closed orientable surfaces tessellated by typed p-gons.
//!
//! A face lists its sides in the orientation of the surface; side `k` of
//! face `f` has the global index `f * p + k` and runs from corner `k - 1`
//! to corner `k` of that face. The corner at the head of side `s` is also
//! indexed by `s`. Each side is one direction of one edge, so sides and
//! directed edges are in bijection once the complex is closed.
//!
//! Vertices are the orbits of `sigma(s) = opposite(next(s))` on corners.
//! Listing an orbit in that order walks around the vertex, and the edges of
//! the visited corners give the cyclic edge order at the vertex.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ComplexError;

/// Edge type label in `1..=p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeType(pub usize);

impl EdgeType {
    pub fn new(value: usize, p: usize) -> Result<Self, ComplexError> {
        if value == 0 || value > p {
            return Err(ComplexError::BadEdgeType { value, p });
        }
        Ok(EdgeType(value))
    }

    pub fn value(self) -> usize {
        self.0
    }

    /// The type `self + delta`, wrapped into `1..=p`.
    pub fn shifted(self, delta: i64, p: usize) -> EdgeType {
        let zero_based = (self.0 as i64 - 1 + delta).rem_euclid(p as i64);
        EdgeType(zero_based as usize + 1)
    }
}

impl fmt::Display for EdgeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Direction in which edge types increase around a face, relative to the
/// surface orientation in which its sides are listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    #[serde(rename = "ccw")]
    CounterClockwise,
    #[serde(rename = "cw")]
    Clockwise,
}

impl Chirality {
    pub fn flipped(self) -> Self {
        match self {
            Chirality::CounterClockwise => Chirality::Clockwise,
            Chirality::Clockwise => Chirality::CounterClockwise,
        }
    }
}

/// One side of a face: an edge and the sense in which the face traverses it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Side {
    pub edge: usize,
    pub reversed: bool,
}

impl Side {
    pub fn forward(edge: usize) -> Self {
        Side {
            edge,
            reversed: false,
        }
    }

    pub fn backward(edge: usize) -> Self {
        Side {
            edge,
            reversed: true,
        }
    }
}

/// A directed edge, encoded as `2 * edge + reversed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectedEdge(pub usize);

impl DirectedEdge {
    pub fn new(edge: usize, reversed: bool) -> Self {
        DirectedEdge(2 * edge + reversed as usize)
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn reversed(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn reverse(self) -> Self {
        DirectedEdge(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: usize,
    pub edge_type: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSpec {
    pub id: usize,
    pub chirality: Chirality,
    pub sides: Vec<Side>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub chirality: Chirality,
    pub sides: Vec<Side>,
}

/// Incidence structure derived from a closed complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    p: usize,
    side_edge: Vec<usize>,
    side_reversed: Vec<bool>,
    opposite: Vec<usize>,
    corner_vertex: Vec<usize>,
    rings: Vec<Vec<usize>>,
    side_of_directed: Vec<usize>,
}

impl Topology {
    fn derive(p: usize, faces: &[Face], num_edges: usize) -> Result<Topology, ComplexError> {
        let sides = faces.len() * p;
        let mut side_edge = Vec::with_capacity(sides);
        let mut side_reversed = Vec::with_capacity(sides);
        let mut side_of_directed = vec![usize::MAX; 2 * num_edges];
        for (s, side) in faces.iter().flat_map(|f| f.sides.iter()).enumerate() {
            side_edge.push(side.edge);
            side_reversed.push(side.reversed);
            let d = DirectedEdge::new(side.edge, side.reversed).0;
            if side_of_directed[d] != usize::MAX {
                return Err(ComplexError::NotClosed(side.edge));
            }
            side_of_directed[d] = s;
        }
        if let Some(d) = side_of_directed.iter().position(|&s| s == usize::MAX) {
            return Err(ComplexError::NotClosed(d / 2));
        }
        let opposite: Vec<usize> = (0..sides)
            .map(|s| {
                let d = DirectedEdge::new(side_edge[s], side_reversed[s]);
                side_of_directed[d.reverse().0]
            })
            .collect();

        let mut topo = Topology {
            p,
            side_edge,
            side_reversed,
            opposite,
            corner_vertex: vec![usize::MAX; sides],
            rings: Vec::new(),
            side_of_directed,
        };
        for start in 0..sides {
            if topo.corner_vertex[start] != usize::MAX {
                continue;
            }
            let vertex = topo.rings.len();
            let mut ring = Vec::new();
            let mut c = start;
            loop {
                topo.corner_vertex[c] = vertex;
                ring.push(c);
                c = topo.sigma(c);
                if c == start {
                    break;
                }
            }
            topo.rings.push(ring);
        }
        Ok(topo)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn num_sides(&self) -> usize {
        self.side_edge.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.rings.len()
    }

    pub fn face_of(&self, side: usize) -> usize {
        side / self.p
    }

    pub fn next(&self, side: usize) -> usize {
        let base = side - side % self.p;
        base + (side % self.p + 1) % self.p
    }

    pub fn prev(&self, side: usize) -> usize {
        let base = side - side % self.p;
        base + (side % self.p + self.p - 1) % self.p
    }

    pub fn opposite(&self, side: usize) -> usize {
        self.opposite[side]
    }

    /// Next corner around the vertex at the head of `side`.
    pub fn sigma(&self, side: usize) -> usize {
        self.opposite[self.next(side)]
    }

    pub fn edge_of(&self, side: usize) -> usize {
        self.side_edge[side]
    }

    pub fn directed_of(&self, side: usize) -> DirectedEdge {
        DirectedEdge::new(self.side_edge[side], self.side_reversed[side])
    }

    pub fn side_of(&self, directed: DirectedEdge) -> usize {
        self.side_of_directed[directed.0]
    }

    /// Vertex at the head of `side` (the corner it ends in).
    pub fn head_vertex(&self, side: usize) -> usize {
        self.corner_vertex[side]
    }

    pub fn tail_vertex(&self, side: usize) -> usize {
        self.corner_vertex[self.prev(side)]
    }

    pub fn head(&self, directed: DirectedEdge) -> usize {
        self.head_vertex(self.side_of(directed))
    }

    pub fn tail(&self, directed: DirectedEdge) -> usize {
        self.tail_vertex(self.side_of(directed))
    }

    /// Corners around vertex `v`, in rotation order.
    pub fn ring(&self, vertex: usize) -> &[usize] {
        &self.rings[vertex]
    }

    /// Edges around vertex `v`, in rotation order.
    pub fn ring_edges(&self, vertex: usize) -> Vec<usize> {
        self.rings[vertex]
            .iter()
            .map(|&c| self.side_edge[c])
            .collect()
    }

    /// Position `j` such that `sigma^j(from) == to`, when both are corners of
    /// the same vertex.
    pub fn ring_offset(&self, from: usize, to: usize) -> Option<usize> {
        let mut c = from;
        for j in 0..self.rings[self.corner_vertex[from]].len() {
            if c == to {
                return Some(j);
            }
            c = self.sigma(c);
        }
        None
    }

    pub fn sigma_pow(&self, side: usize, k: usize) -> usize {
        (0..k).fold(side, |c, _| self.sigma(c))
    }

    /// Requires every vertex to have exactly four corners.
    pub fn require_right_angled(&self) -> Result<(), ComplexError> {
        match self.rings.iter().position(|r| r.len() != 4) {
            Some(v) => Err(ComplexError::NotRightAngled {
                vertex: v,
                degree: self.rings[v].len(),
            }),
            None => Ok(()),
        }
    }
}

/// A closed polygonal surface whose faces are p-gons with optionally typed
/// edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceComplex {
    p: usize,
    edge_types: Vec<Option<EdgeType>>,
    faces: Vec<Face>,
    topology: Option<Topology>,
}

/// Assembles a complex from edge and face records.
///
/// Ids must be dense. Semantic axioms are left to [`validate`]; when the
/// gluing is not closed the derived topology is absent.
pub fn build_complex(
    p: usize,
    edge_specs: &[EdgeSpec],
    face_specs: &[FaceSpec],
) -> Result<SurfaceComplex, ComplexError> {
    if p < 3 {
        return Err(ComplexError::BadSideCount(p));
    }
    let mut edge_types: Vec<Option<Option<EdgeType>>> = vec![None; edge_specs.len()];
    for spec in edge_specs {
        if spec.id >= edge_specs.len() {
            return Err(ComplexError::NonDenseId {
                kind: "edge",
                id: spec.id,
                len: edge_specs.len(),
            });
        }
        if edge_types[spec.id].is_some() {
            return Err(ComplexError::DuplicateId {
                kind: "edge",
                id: spec.id,
            });
        }
        let t = spec.edge_type.map(|v| EdgeType::new(v, p)).transpose()?;
        edge_types[spec.id] = Some(t);
    }
    let edge_types: Vec<Option<EdgeType>> = edge_types.into_iter().map(Option::unwrap).collect();

    let mut faces: Vec<Option<Face>> = vec![None; face_specs.len()];
    for spec in face_specs {
        if spec.id >= face_specs.len() {
            return Err(ComplexError::NonDenseId {
                kind: "face",
                id: spec.id,
                len: face_specs.len(),
            });
        }
        if faces[spec.id].is_some() {
            return Err(ComplexError::DuplicateId {
                kind: "face",
                id: spec.id,
            });
        }
        if spec.sides.len() != p {
            return Err(ComplexError::WrongSideCount {
                face: spec.id,
                found: spec.sides.len(),
                expected: p,
            });
        }
        if let Some(side) = spec.sides.iter().find(|s| s.edge >= edge_types.len()) {
            return Err(ComplexError::DanglingEdgeReference {
                face: spec.id,
                edge: side.edge,
            });
        }
        faces[spec.id] = Some(Face {
            chirality: spec.chirality,
            sides: spec.sides.clone(),
        });
    }
    let faces: Vec<Face> = faces.into_iter().map(Option::unwrap).collect();
    let topology = Topology::derive(p, &faces, edge_types.len()).ok();
    Ok(SurfaceComplex {
        p,
        edge_types,
        faces,
        topology,
    })
}

impl SurfaceComplex {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn num_edges(&self) -> usize {
        self.edge_types.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_vertices(&self) -> Result<usize, ComplexError> {
        Ok(self.topology()?.num_vertices())
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> &Face {
        &self.faces[f]
    }

    pub fn edge_type(&self, e: usize) -> Option<EdgeType> {
        self.edge_types[e]
    }

    pub fn edge_types(&self) -> &[Option<EdgeType>] {
        &self.edge_types
    }

    /// True when every edge carries a type.
    pub fn is_typed(&self) -> bool {
        !self.edge_types.is_empty() && self.edge_types.iter().all(Option::is_some)
    }

    pub fn topology(&self) -> Result<&Topology, ComplexError> {
        self.topology.as_ref().ok_or_else(|| {
            let e = (0..self.num_edges())
                .find(|&e| self.side_count(e) != (1, 1))
                .unwrap_or(0);
            ComplexError::NotClosed(e)
        })
    }

    /// Like [`Self::topology`], additionally requiring degree-4 vertices.
    pub fn right_angled_topology(&self) -> Result<&Topology, ComplexError> {
        let topo = self.topology()?;
        topo.require_right_angled()?;
        Ok(topo)
    }

    pub fn to_specs(&self) -> (Vec<EdgeSpec>, Vec<FaceSpec>) {
        let edges = self
            .edge_types
            .iter()
            .enumerate()
            .map(|(id, t)| EdgeSpec {
                id,
                edge_type: t.map(EdgeType::value),
            })
            .collect();
        let faces = self
            .faces
            .iter()
            .enumerate()
            .map(|(id, f)| FaceSpec {
                id,
                chirality: f.chirality,
                sides: f.sides.clone(),
            })
            .collect();
        (edges, faces)
    }

    /// Same combinatorics with all edge types dropped.
    pub fn untyped(&self) -> SurfaceComplex {
        SurfaceComplex {
            edge_types: vec![None; self.edge_types.len()],
            ..self.clone()
        }
    }

    /// (forward uses, reversed uses) of edge `e`.
    fn side_count(&self, e: usize) -> (usize, usize) {
        let mut count = (0, 0);
        for side in self
            .faces
            .iter()
            .flat_map(|f| f.sides.iter())
            .filter(|s| s.edge == e)
        {
            if side.reversed {
                count.1 += 1;
            } else {
                count.0 += 1;
            }
        }
        count
    }

    /// Type read at side `k` of face `f`.
    pub fn side_type(&self, f: usize, k: usize) -> Option<EdgeType> {
        self.edge_types[self.faces[f].sides[k].edge]
    }

    pub fn euler_characteristic(&self) -> Result<i64, ComplexError> {
        let v = self.num_vertices()? as i64;
        Ok(v - self.num_edges() as i64 + self.num_faces() as i64)
    }
}

/// One failed axiom found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    Closedness {
        edge: usize,
        forward: usize,
        reversed: usize,
    },
    VertexDegree {
        vertex: usize,
        degree: usize,
    },
    Disconnected {
        components: usize,
    },
    CornerCount {
        faces: usize,
        p: usize,
        vertices: usize,
    },
    OddEulerCharacteristic {
        euler_characteristic: i64,
    },
    GenusMismatch {
        expected: i64,
        found: i64,
    },
    PartialTyping {
        untyped_edges: usize,
    },
    FaceLabeling {
        face: usize,
    },
    VertexCondition {
        vertex: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub failures: Vec<Finding>,
    pub typed: bool,
    pub euler_characteristic: Option<i64>,
    pub genus: Option<i64>,
}

/// Checks the surface axioms and, for typed complexes, the labeling axioms.
///
/// Untyped complexes are checked for closedness, degree-4 vertices,
/// connectivity and Euler characteristic only.
pub fn validate(complex: &SurfaceComplex, expected_genus: Option<i64>) -> ValidationReport {
    let mut failures = Vec::new();
    let mut euler = None;
    let mut genus = None;

    for e in 0..complex.num_edges() {
        let (forward, reversed) = complex.side_count(e);
        if (forward, reversed) != (1, 1) {
            failures.push(Finding::Closedness {
                edge: e,
                forward,
                reversed,
            });
        }
    }

    if let Ok(topo) = complex.topology() {
        for v in 0..topo.num_vertices() {
            let degree = topo.ring(v).len();
            if degree != 4 {
                failures.push(Finding::VertexDegree { vertex: v, degree });
            }
        }
        let components = face_components(complex, topo);
        if components != 1 {
            failures.push(Finding::Disconnected { components });
        }
        if complex.num_faces() * complex.p() != 4 * topo.num_vertices() {
            failures.push(Finding::CornerCount {
                faces: complex.num_faces(),
                p: complex.p(),
                vertices: topo.num_vertices(),
            });
        }
        let chi =
            topo.num_vertices() as i64 - complex.num_edges() as i64 + complex.num_faces() as i64;
        euler = Some(chi);
        if chi % 2 != 0 {
            failures.push(Finding::OddEulerCharacteristic {
                euler_characteristic: chi,
            });
        } else if components == 1 {
            let g = (2 - chi) / 2;
            genus = Some(g);
            if let Some(expected) = expected_genus {
                if expected != g {
                    failures.push(Finding::GenusMismatch { expected, found: g });
                }
            }
        }

        let untyped = complex.edge_types.iter().filter(|t| t.is_none()).count();
        if untyped > 0 && untyped < complex.num_edges() {
            failures.push(Finding::PartialTyping {
                untyped_edges: untyped,
            });
        } else if untyped == 0 {
            check_typing(complex, topo, &mut failures);
        }
    }

    ValidationReport {
        passed: failures.is_empty(),
        failures,
        typed: complex.is_typed(),
        euler_characteristic: euler,
        genus,
    }
}

fn check_typing(complex: &SurfaceComplex, topo: &Topology, failures: &mut Vec<Finding>) {
    let p = complex.p();
    for (f, face) in complex.faces.iter().enumerate() {
        let step: i64 = match face.chirality {
            Chirality::CounterClockwise => 1,
            Chirality::Clockwise => -1,
        };
        let ok = (0..p).all(|k| {
            let here = complex.side_type(f, k).unwrap();
            let there = complex.side_type(f, (k + 1) % p).unwrap();
            here.shifted(step, p) == there
        });
        if !ok {
            failures.push(Finding::FaceLabeling { face: f });
        }
    }
    for v in 0..topo.num_vertices() {
        let types: Vec<EdgeType> = topo
            .ring_edges(v)
            .iter()
            .map(|&e| complex.edge_types[e].unwrap())
            .collect();
        let ok = types.len() == 4
            && types[0] == types[2]
            && types[1] == types[3]
            && (types[0].shifted(1, p) == types[1] || types[1].shifted(1, p) == types[0]);
        if !ok {
            failures.push(Finding::VertexCondition { vertex: v });
        }
    }
}

fn face_components(complex: &SurfaceComplex, topo: &Topology) -> usize {
    let n = complex.num_faces();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for k in 0..complex.p() {
                let g = topo.face_of(topo.opposite(f * complex.p() + k));
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
    }
    components
}

/// Face adjacency multigraph: one node per face, one edge per primal edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub num_vertices: usize,
    /// Indexed by primal edge: (face of the forward side, face of the reversed side).
    pub edges: Vec<(usize, usize)>,
}

pub fn dual_graph(complex: &SurfaceComplex) -> Result<DualGraph, ComplexError> {
    let topo = complex.topology()?;
    let edges = (0..complex.num_edges())
        .map(|e| {
            let fwd = topo.side_of(DirectedEdge::new(e, false));
            let rev = topo.side_of(DirectedEdge::new(e, true));
            (topo.face_of(fwd), topo.face_of(rev))
        })
        .collect();
    Ok(DualGraph {
        num_vertices: complex.num_faces(),
        edges,
    })
}

impl DualGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dual {\n");
        for f in 0..self.num_vertices {
            out.push_str(&format!("  f{f};\n"));
        }
        for (e, (a, b)) in self.edges.iter().enumerate() {
            out.push_str(&format!("  f{a} -- f{b} [label=\"e{e}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A square with sides a, b, a^-1, b^-1: the one-face torus.
    fn square_torus() -> SurfaceComplex {
        let edges = vec![
            EdgeSpec {
                id: 0,
                edge_type: None,
            },
            EdgeSpec {
                id: 1,
                edge_type: None,
            },
        ];
        let faces = vec![FaceSpec {
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

    #[test]
    fn one_face_torus_topology() {
        let c = square_torus();
        let topo = c.topology().unwrap();
        assert_eq!(topo.num_vertices(), 1);
        assert_eq!(topo.ring(0).len(), 4);
        let report = validate(&c, Some(1));
        assert!(report.passed, "{:?}", report.failures);
        assert_eq!(report.euler_characteristic, Some(0));
        assert_eq!(report.genus, Some(1));
        assert!(!report.typed);
    }

    #[test]
    fn dangling_reference_is_rejected() {
        let edges = vec![EdgeSpec {
            id: 0,
            edge_type: None,
        }];
        let faces = vec![FaceSpec {
            id: 0,
            chirality: Chirality::CounterClockwise,
            sides: vec![Side::forward(0), Side::backward(99), Side::backward(0)],
        }];
        assert_eq!(
            build_complex(3, &edges, &faces),
            Err(ComplexError::DanglingEdgeReference { face: 0, edge: 99 })
        );
    }

    #[test]
    fn duplicate_and_wrong_side_count() {
        let edges = vec![
            EdgeSpec {
                id: 0,
                edge_type: None,
            },
            EdgeSpec {
                id: 0,
                edge_type: None,
            },
        ];
        assert!(matches!(
            build_complex(4, &edges, &[]),
            Err(ComplexError::DuplicateId { .. })
        ));
        let edges = vec![EdgeSpec {
            id: 0,
            edge_type: None,
        }];
        let faces = vec![FaceSpec {
            id: 0,
            chirality: Chirality::Clockwise,
            sides: vec![Side::forward(0)],
        }];
        assert!(matches!(
            build_complex(4, &edges, &faces),
            Err(ComplexError::WrongSideCount { .. })
        ));
    }

    #[test]
    fn triple_use_fails_closedness() {
        let edges = vec![
            EdgeSpec {
                id: 0,
                edge_type: None,
            },
            EdgeSpec {
                id: 1,
                edge_type: None,
            },
        ];
        let faces = vec![FaceSpec {
            id: 0,
            chirality: Chirality::CounterClockwise,
            sides: vec![
                Side::forward(0),
                Side::forward(0),
                Side::backward(0),
                Side::backward(1),
            ],
        }];
        let c = build_complex(4, &edges, &faces).unwrap();
        assert!(c.topology().is_err());
        let report = validate(&c, None);
        assert!(!report.passed);
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, Finding::Closedness { edge: 0, .. })));
    }

    #[test]
    fn dual_of_one_face_is_all_self_loops() {
        let dual = dual_graph(&square_torus()).unwrap();
        assert_eq!(dual.num_vertices, 1);
        assert_eq!(dual.edges, vec![(0, 0), (0, 0)]);
        assert!(dual.to_dot().contains("f0 -- f0 [label=\"e1\"]"));
    }

    #[test]
    fn edge_type_shift_wraps() {
        assert_eq!(EdgeType(6).shifted(1, 6), EdgeType(1));
        assert_eq!(EdgeType(1).shifted(-1, 6), EdgeType(6));
        assert!(EdgeType::new(0, 6).is_err());
        assert!(EdgeType::new(7, 6).is_err());
    }
}
