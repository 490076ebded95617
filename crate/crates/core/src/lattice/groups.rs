//! Cyclic-factor local groups on a colored tessellation and the local
//! conditions that make the complex of groups develop to the building.
//!
//! With `d`, `e` the gcds of the odd- and even-indexed thicknesses and
//! `q_i = d q'_i` (odd `i`) or `e q'_i` (even `i`), a vertex of type
//! `{i, i+1}` carries `V = Z_{d-1} x Z_{e-1} x Z_{q'_i} x Z_{q'_{i+1}}`.
//! Edges carry products of some of these factors chosen by their color,
//! faces the common factors of their edges. Subgroups are therefore
//! described by which factors they contain, and the index of one in `V` is
//! the product of the orders of the missing factors. Factors of order 1
//! (`d = 2`, `e = 2` or `q'_i = 1`) stay in the sets, so two sets name the
//! same subgroup when they differ only in such factors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coloring::{verify_good_coloring, EdgeColoring};
use crate::complex::SurfaceComplex;
use crate::error::ComplexError;
use crate::error::LatticeError;
use crate::lattice::sequence::{alternating_noncoprime, AlternatingDecomposition, TypeSequence};

/// Largest coset count enumerated when building a link graph.
pub const LINK_ENUMERATION_LIMIT: u64 = 1 << 20;

/// One cyclic factor of a vertex group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Factor {
    /// `Z_{d-1}`
    D,
    /// `Z_{e-1}`
    E,
    /// `Z_{q'_i}` for type `i`.
    A(usize),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::D => write!(f, "D"),
            Factor::E => write!(f, "E"),
            Factor::A(i) => write!(f, "A{i}"),
        }
    }
}

impl From<Factor> for String {
    fn from(f: Factor) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for Factor {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        match s.as_str() {
            "D" => Ok(Factor::D),
            "E" => Ok(Factor::E),
            _ => s
                .strip_prefix('A')
                .and_then(|i| i.parse().ok())
                .map(Factor::A)
                .ok_or_else(|| format!("unknown factor {s:?}")),
        }
    }
}

/// A subgroup given by the factors it contains.
pub type FactorSubgroup = BTreeSet<Factor>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexData {
    /// `(i, i+1)`, types mod p in `1..=p`.
    pub types: (usize, usize),
    /// Edges in rotation order.
    pub edges: [usize; 4],
    /// `corner_faces[k]` is the face between `edges[k]` and `edges[k+1]`.
    pub corner_faces: [usize; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCheck {
    pub vertex: usize,
    pub types: (usize, usize),
    /// Adjacent edge groups generate the vertex group.
    pub product: bool,
    /// Adjacent edge groups meet in the face group of their corner.
    pub intersection: bool,
    /// Index sums over the two type-`i` and the two type-`(i+1)` edges.
    pub index_sums: (u64, u64),
    /// Type-`i` edges sum to `q_{i+1}` and type-`(i+1)` edges to `q_i`.
    pub index: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupAssignment {
    pub q: TypeSequence,
    pub decomposition: AlternatingDecomposition,
    pub edge_types: Vec<usize>,
    pub colors: Vec<u8>,
    pub edge_groups: Vec<FactorSubgroup>,
    /// Read at the corner between the first two sides of each face.
    pub face_groups: Vec<FactorSubgroup>,
    /// Faces whose corners disagree on the face group.
    pub inconsistent_faces: Vec<usize>,
    pub vertices: Vec<VertexData>,
    pub checks: Vec<VertexCheck>,
    pub certified: bool,
}

impl GroupAssignment {
    pub fn p(&self) -> usize {
        self.q.p()
    }

    pub fn order(&self, factor: Factor) -> u64 {
        factor_order(&self.decomposition, factor)
    }

    /// Whether two factor sets describe the same subgroup, i.e. agree up to
    /// factors of order 1.
    pub fn same_subgroup(&self, a: &FactorSubgroup, b: &FactorSubgroup) -> bool {
        nontrivial(&self.decomposition, a) == nontrivial(&self.decomposition, b)
    }

    /// Whether `a` is a subgroup of `b`.
    pub fn is_subgroup(&self, a: &FactorSubgroup, b: &FactorSubgroup) -> bool {
        nontrivial(&self.decomposition, a).is_subset(b)
    }

    pub fn vertex_universe(&self, v: usize) -> FactorSubgroup {
        let (i, j) = self.vertices[v].types;
        [Factor::D, Factor::E, Factor::A(i), Factor::A(j)]
            .into_iter()
            .collect()
    }

    /// `|V : H|` for a subgroup of the vertex group at `v`.
    pub fn index_in_vertex(&self, v: usize, subgroup: &FactorSubgroup) -> u64 {
        self.vertex_universe(v)
            .difference(subgroup)
            .map(|&f| self.order(f))
            .product()
    }

    pub fn thickness(&self, i: usize) -> u64 {
        self.q.get(i as i64)
    }
}

fn factor_order(dec: &AlternatingDecomposition, factor: Factor) -> u64 {
    match factor {
        Factor::D => dec.d - 1,
        Factor::E => dec.e - 1,
        Factor::A(i) => dec.reduced[i - 1],
    }
}

/// The factors of order greater than 1; two factor sets are the same
/// subgroup exactly when these agree.
fn nontrivial(dec: &AlternatingDecomposition, g: &FactorSubgroup) -> FactorSubgroup {
    g.iter()
        .copied()
        .filter(|&f| factor_order(dec, f) > 1)
        .collect()
}

fn edge_group(edge_type: usize, color: u8) -> FactorSubgroup {
    let (own, other) = if edge_type % 2 == 1 {
        (Factor::D, Factor::E)
    } else {
        (Factor::E, Factor::D)
    };
    let mut g: FactorSubgroup = [own, Factor::A(edge_type)].into_iter().collect();
    if color == 1 {
        g.insert(other);
    }
    g
}

/// Assigns local groups from a good coloring and certifies the link
/// conditions at every vertex.
pub fn assign_groups(
    complex: &SurfaceComplex,
    coloring: &EdgeColoring,
    q: &TypeSequence,
) -> Result<GroupAssignment, LatticeError> {
    preflight(complex, q)?;
    if alternating_noncoprime(q.entries()).is_none() {
        return Err(LatticeError::NotAlternatingNonCoprime);
    }
    if let Some(e) =
        (0..complex.num_edges()).find(|&e| coloring.colors.get(e).is_none_or(|&c| c > 1))
    {
        return Err(LatticeError::NotGoodColoring(format!(
            "edge {e} is not colored 0 or 1"
        )));
    }
    let verification = verify_good_coloring(complex, coloring)?;
    if let Some(c) = verification.violations.first() {
        return Err(LatticeError::NotGoodColoring(format!(
            "{:?} constraint between edges {} and {} fails on loop {}",
            c.kind, c.a, c.b, c.loop_id
        )));
    }
    let assignment = assign_groups_unchecked(complex, &coloring.colors, q)?;
    if let Some(&face) = assignment.inconsistent_faces.first() {
        return Err(LatticeError::FaceGroupInconsistency { face });
    }
    Ok(assignment)
}

fn preflight(complex: &SurfaceComplex, q: &TypeSequence) -> Result<(), LatticeError> {
    let p = complex.p();
    if p % 2 == 1 {
        return Err(LatticeError::OddPUnsupported(p));
    }
    if q.p() != p {
        return Err(LatticeError::SequenceLength {
            found: q.p(),
            expected: p,
        });
    }
    if !complex.is_typed() {
        return Err(ComplexError::Untyped.into());
    }
    complex.right_angled_topology()?;
    Ok(())
}

/// Like [`assign_groups`] but accepts any 0/1 coloring; the resulting
/// checks simply fail where the coloring is bad.
pub fn assign_groups_unchecked(
    complex: &SurfaceComplex,
    colors: &[u8],
    q: &TypeSequence,
) -> Result<GroupAssignment, LatticeError> {
    preflight(complex, q)?;
    let decomposition =
        alternating_noncoprime(q.entries()).ok_or(LatticeError::NotAlternatingNonCoprime)?;
    if colors.len() != complex.num_edges() {
        return Err(LatticeError::NotGoodColoring(format!(
            "{} colors for {} edges",
            colors.len(),
            complex.num_edges()
        )));
    }
    let topo = complex.topology()?;
    let p = complex.p();
    let edge_types: Vec<usize> = complex
        .edge_types()
        .iter()
        .map(|t| t.unwrap().value())
        .collect();
    let edge_groups: Vec<FactorSubgroup> = (0..complex.num_edges())
        .map(|e| edge_group(edge_types[e], colors[e]))
        .collect();

    let mut face_groups = Vec::with_capacity(complex.num_faces());
    let mut inconsistent_faces = Vec::new();
    for (f, face) in complex.faces().iter().enumerate() {
        let corner = |k: usize| -> FactorSubgroup {
            let a = &edge_groups[face.sides[k].edge];
            let b = &edge_groups[face.sides[(k + 1) % p].edge];
            a.intersection(b).copied().collect()
        };
        let first = corner(0);
        let reduced = nontrivial(&decomposition, &first);
        if (1..p).any(|k| nontrivial(&decomposition, &corner(k)) != reduced) {
            inconsistent_faces.push(f);
        }
        face_groups.push(first);
    }

    let vertices = (0..topo.num_vertices())
        .map(|v| {
            let ring = topo.ring(v);
            let edges = [0, 1, 2, 3].map(|k| topo.edge_of(ring[k]));
            let corner_faces = [0, 1, 2, 3].map(|k| topo.face_of(ring[k]));
            let (t0, t1) = (edge_types[edges[0]], edge_types[edges[1]]);
            let types = if t0 % p + 1 == t1 { (t0, t1) } else { (t1, t0) };
            VertexData {
                types,
                edges,
                corner_faces,
            }
        })
        .collect();

    let mut assignment = GroupAssignment {
        q: q.clone(),
        decomposition,
        edge_types,
        colors: colors.to_vec(),
        edge_groups,
        face_groups,
        inconsistent_faces,
        vertices,
        checks: Vec::new(),
        certified: false,
    };
    assignment.checks = verify_link_conditions(&assignment);
    assignment.certified =
        assignment.inconsistent_faces.is_empty() && assignment.checks.iter().all(|c| c.passed);
    Ok(assignment)
}

/// Product, intersection and index conditions at every vertex.
pub fn verify_link_conditions(assignment: &GroupAssignment) -> Vec<VertexCheck> {
    (0..assignment.vertices.len())
        .map(|v| check_vertex(assignment, v))
        .collect()
}

fn check_vertex(a: &GroupAssignment, v: usize) -> VertexCheck {
    let data = &a.vertices[v];
    let universe = a.vertex_universe(v);
    let groups: Vec<&FactorSubgroup> = data.edges.iter().map(|&e| &a.edge_groups[e]).collect();
    let mut product = true;
    let mut intersection = true;
    for k in 0..4 {
        let (x, y) = (groups[k], groups[(k + 1) % 4]);
        let union: FactorSubgroup = x.union(y).copied().collect();
        product &= a.same_subgroup(&union, &universe);
        let meet: FactorSubgroup = x.intersection(y).copied().collect();
        intersection &= a.same_subgroup(&meet, &a.face_groups[data.corner_faces[k]]);
    }
    let (i, j) = data.types;
    let mut sums = (0, 0);
    for (k, &e) in data.edges.iter().enumerate() {
        let index = a.index_in_vertex(v, groups[k]);
        if a.edge_types[e] == i {
            sums.0 += index;
        } else {
            sums.1 += index;
        }
    }
    let index = sums == (a.thickness(j), a.thickness(i));
    VertexCheck {
        vertex: v,
        types: data.types,
        product,
        intersection,
        index_sums: sums,
        index,
        passed: product && intersection && index,
    }
}

/// Link of a lifted vertex in the local development: one node per coset of
/// each edge group, one edge per coset of each corner's face group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkGraph {
    pub vertex: usize,
    /// Nodes from the two type-`i` edges.
    pub left: usize,
    /// Nodes from the two type-`(i+1)` edges.
    pub right: usize,
    /// Pairs (left node, right node), with multiplicity.
    pub edges: Vec<(usize, usize)>,
    /// False when a face group is not contained in its edge groups or the
    /// enumeration limit was hit.
    pub well_defined: bool,
    pub complete_bipartite: bool,
}

impl LinkGraph {
    pub fn sides(&self) -> (usize, usize) {
        (self.left, self.right)
    }
}

/// Enumerates the link at `vertex` from explicit cosets.
///
/// A coset `gH` of a factor subgroup is identified by the coordinates of
/// `g` on the factors missing from `H`.
pub fn build_link_graph(assignment: &GroupAssignment, vertex: usize) -> LinkGraph {
    let data = &assignment.vertices[vertex];
    let universe: Vec<Factor> = assignment.vertex_universe(vertex).into_iter().collect();
    let (i, _) = data.types;
    let groups: Vec<&FactorSubgroup> = data
        .edges
        .iter()
        .map(|&e| &assignment.edge_groups[e])
        .collect();

    let missing = |h: &FactorSubgroup| -> Vec<Factor> {
        universe
            .iter()
            .copied()
            .filter(|f| !h.contains(f))
            .collect()
    };
    let count = |fs: &[Factor]| -> u64 { fs.iter().map(|&f| assignment.order(f)).product() };
    let mut graph = LinkGraph {
        vertex,
        left: 0,
        right: 0,
        edges: Vec::new(),
        well_defined: true,
        complete_bipartite: false,
    };

    // Node ids: left nodes from type-i edges, right nodes from the others.
    let mut node_base = [0usize; 4];
    for k in 0..4 {
        let n = count(&missing(groups[k]));
        if n > LINK_ENUMERATION_LIMIT {
            graph.well_defined = false;
            return graph;
        }
        let side = if assignment.edge_types[data.edges[k]] == i {
            &mut graph.left
        } else {
            &mut graph.right
        };
        node_base[k] = *side;
        *side += n as usize;
    }

    for k in 0..4 {
        let face_group = &assignment.face_groups[data.corner_faces[k]];
        let (x, y) = (k, (k + 1) % 4);
        if !assignment.is_subgroup(face_group, groups[x])
            || !assignment.is_subgroup(face_group, groups[y])
        {
            graph.well_defined = false;
            return graph;
        }
        let coords = missing(face_group);
        if count(&coords) > LINK_ENUMERATION_LIMIT {
            graph.well_defined = false;
            return graph;
        }
        for g in enumerate(&coords, |f| assignment.order(f)) {
            let node = |h: &FactorSubgroup, base: usize| -> usize {
                // Mixed-radix position of g restricted to the factors missing from h.
                let mut idx = 0u64;
                for (pos, f) in coords.iter().enumerate() {
                    if !h.contains(f) {
                        idx = idx * assignment.order(*f) + g[pos];
                    }
                }
                base + idx as usize
            };
            let (nx, ny) = (node(groups[x], node_base[x]), node(groups[y], node_base[y]));
            let x_left = assignment.edge_types[data.edges[x]] == i;
            graph.edges.push(if x_left { (nx, ny) } else { (ny, nx) });
        }
    }

    let distinct: BTreeSet<(usize, usize)> = graph.edges.iter().copied().collect();
    let (qi, qj) = (
        assignment.thickness(i) as usize,
        assignment.thickness(data.types.1) as usize,
    );
    graph.complete_bipartite = distinct.len() == graph.edges.len()
        && distinct.len() == graph.left * graph.right
        && (graph.left, graph.right) == (qj, qi);
    graph
}

/// All coordinate tuples for the given factors, in mixed-radix order.
fn enumerate(factors: &[Factor], order: impl Fn(Factor) -> u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &f in factors {
        let n = order(f);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Per-type summary of edge group orders, useful in reports.
pub fn edge_group_orders(assignment: &GroupAssignment) -> BTreeMap<usize, BTreeSet<u64>> {
    let mut out: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
    for (e, g) in assignment.edge_groups.iter().enumerate() {
        let order = g.iter().map(|&f| assignment.order(f)).product();
        out.entry(assignment.edge_types[e])
            .or_default()
            .insert(order);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_names_round_trip() {
        for f in [Factor::D, Factor::E, Factor::A(12)] {
            assert_eq!(Factor::try_from(String::from(f)).unwrap(), f);
        }
        assert!(Factor::try_from("B3".to_string()).is_err());
    }

    #[test]
    fn edge_groups_follow_parity_and_color() {
        assert_eq!(
            edge_group(3, 0),
            [Factor::D, Factor::A(3)].into_iter().collect()
        );
        assert_eq!(
            edge_group(3, 1),
            [Factor::D, Factor::E, Factor::A(3)].into_iter().collect()
        );
        assert_eq!(
            edge_group(4, 0),
            [Factor::E, Factor::A(4)].into_iter().collect()
        );
        assert_eq!(
            edge_group(4, 1),
            [Factor::D, Factor::E, Factor::A(4)].into_iter().collect()
        );
    }

    #[test]
    fn enumeration_is_mixed_radix() {
        let tuples = enumerate(
            &[Factor::D, Factor::E],
            |f| if f == Factor::D { 2 } else { 3 },
        );
        assert_eq!(tuples.len(), 6);
        assert_eq!(tuples[0], vec![0, 0]);
        assert_eq!(tuples[5], vec![1, 2]);
    }
}
