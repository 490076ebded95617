//! Surface tessellations by right-angled p-gons and their chord subdivisions.
//!
//! Typed complexes are glued from permutation data. Take `N` faces `A_a`
//! whose types increase along the side list and `N` faces `B_b` whose types
//! decrease. Given fixed-point-free involutions `tau_1, ..., tau_p` of
//! `0..N` with `tau_1 ∘ ... ∘ tau_p = id`, put `pi_1 = id` and
//! `pi_{i+1} = pi_i ∘ tau_i`, and glue the type-`i` side of `A_a` to the
//! type-`i` side of `B_{pi_i(a)}`. The vertices of type `{i, i+1}` are then
//! the pairs `{a, tau_i(a)}`, so every vertex has degree 4, and the type-`i`
//! geodesic loops are the orbits of `<tau_{i-1}, tau_i>`. Orbits of a group
//! generated by two fixed-point-free involutions have even size, so every
//! loop of a typed complex is even.
//!
//! The rectangular complexes, which may carry odd loops, are obtained by
//! erasing the chord edges of a typed complex with finer faces and merging
//! the edges that meet at the resulting degree-2 vertices.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::{
    build_complex, validate, Chirality, DirectedEdge, EdgeSpec, EdgeType, FaceSpec, Side,
    SurfaceComplex,
};
use crate::error::TessellationError;
use crate::lattice::sequence::{is_four_symmetric_about, is_two_symmetric_about, TypeSequence};
use crate::loops::trace_geodesic_loops;

/// Number of faces `F = 8(g-1)/(p-4)` of a right-angled p-gon tessellation
/// of the genus-g surface.
pub fn face_count(p: usize, g: usize) -> Result<usize, TessellationError> {
    if p < 5 {
        return Err(TessellationError::InvalidParameters(format!(
            "p must be at least 5, got {p}"
        )));
    }
    if g < 2 {
        return Err(TessellationError::InvalidParameters(format!(
            "genus must be at least 2, got {g}"
        )));
    }
    let numerator = 8 * (g as i64 - 1);
    let denominator = p as i64 - 4;
    if numerator % denominator != 0 {
        return Err(TessellationError::NonIntegralFaceCount {
            numerator,
            denominator,
        });
    }
    Ok((numerator / denominator) as usize)
}

/// Genus of a closed surface tessellated by `faces` right-angled p-gons,
/// if it is an integer.
pub fn genus_of(p: usize, faces: usize) -> Option<usize> {
    let twice_excess = faces * (p - 4);
    twice_excess.is_multiple_of(8).then(|| 1 + twice_excess / 8)
}

/// `2j <-> 2j+1` on `0..n`.
pub fn pair_swap(n: usize) -> Vec<usize> {
    (0..n).map(|a| a ^ 1).collect()
}

/// `2j+1 <-> 2j+2 (mod n)` on `0..n`.
pub fn pair_shift(n: usize) -> Vec<usize> {
    (0..n)
        .map(|a| {
            if a % 2 == 0 {
                (a + n - 1) % n
            } else {
                (a + 1) % n
            }
        })
        .collect()
}

/// Typed complex glued from involutions, as described in the module docs.
///
/// Edge `(i, a)` (type `i`, joining `A_a` and `B_{pi_i(a)}`) gets id
/// `(i-1) N + a`; face `A_a` has id `a` and `B_b` has id `N + b`.
pub fn typed_gluing(
    p: usize,
    involutions: &[Vec<usize>],
) -> Result<SurfaceComplex, TessellationError> {
    let bad = |msg: String| Err(TessellationError::InvalidParameters(msg));
    if involutions.len() != p {
        return bad(format!("need {p} involutions, got {}", involutions.len()));
    }
    let n = involutions[0].len();
    for (i, tau) in involutions.iter().enumerate() {
        let ok = tau.len() == n && (0..n).all(|a| tau[a] < n && tau[a] != a && tau[tau[a]] == a);
        if !ok {
            return bad(format!(
                "tau_{} is not a fixed-point-free involution of 0..{n}",
                i + 1
            ));
        }
    }
    // pis[i-1] = pi_i
    let mut pis: Vec<Vec<usize>> = vec![(0..n).collect()];
    for tau in involutions {
        let last = pis.last().unwrap();
        pis.push((0..n).map(|a| last[tau[a]]).collect());
    }
    if pis[p] != pis[0] {
        return bad("product of the involutions is not the identity".into());
    }
    let mut inverse = vec![vec![0; n]; p];
    for i in 0..p {
        for a in 0..n {
            inverse[i][pis[i][a]] = a;
        }
    }

    let edge = |t: usize, a: usize| (t - 1) * n + a;
    let edges: Vec<EdgeSpec> = (0..p * n)
        .map(|id| EdgeSpec {
            id,
            edge_type: Some(id / n + 1),
        })
        .collect();
    let mut faces = Vec::with_capacity(2 * n);
    for a in 0..n {
        let sides = (1..=p).map(|t| Side::forward(edge(t, a))).collect();
        faces.push(FaceSpec {
            id: a,
            chirality: Chirality::CounterClockwise,
            sides,
        });
    }
    for b in 0..n {
        let sides = (0..p)
            .map(|k| p - k)
            .map(|t| Side::backward(edge(t, inverse[t - 1][b])))
            .collect();
        faces.push(FaceSpec {
            id: n + b,
            chirality: Chirality::Clockwise,
            sides,
        });
    }
    Ok(build_complex(p, &edges, &faces)?)
}

/// Involutions `(shift^{p-2}, swap, swap)`: even loops meeting pairwise at
/// most once.
fn standard_involutions(p: usize, n: usize) -> Vec<Vec<usize>> {
    let mut taus = vec![pair_shift(n); p - 2];
    taus.push(pair_swap(n));
    taus.push(pair_swap(n));
    taus
}

fn require_even_p(p: usize) -> Result<(), TessellationError> {
    if p < 6 || !p.is_multiple_of(2) {
        return Err(TessellationError::InvalidParameters(format!(
            "p must be even and at least 6, got {p}"
        )));
    }
    Ok(())
}

/// Block tessellation of the genus-g surface when `F ≡ 0 (mod 4)`.
///
/// The `F/2` counterclockwise faces are arranged in blocks of two; the
/// resulting typed complex has only even geodesic loops, and distinct loops
/// share at most one vertex.
pub fn build_block_tessellation(p: usize, g: usize) -> Result<SurfaceComplex, TessellationError> {
    require_even_p(p)?;
    let f = face_count(p, g)?;
    if f % 4 != 0 {
        return Err(TessellationError::BadDivisibility(format!(
            "block construction needs 4 | F, got F = {f}"
        )));
    }
    let complex = typed_gluing(p, &standard_involutions(p, f / 2))?;
    check_builder_output(&complex, Some(g), true)?;
    Ok(complex)
}

/// Grid `a x b = faces` with `a` the largest divisor not above `sqrt(faces)`.
pub fn default_grid(faces: usize) -> (usize, usize) {
    let a = (1..=faces)
        .take_while(|k| k * k <= faces)
        .filter(|k| faces.is_multiple_of(*k))
        .last()
        .unwrap_or(1);
    (a, faces / a)
}

/// Rectangular tessellation with `F = a b` faces, genus `1 + F(p-4)/8`.
///
/// The result is untyped: for `F ≡ 2 (mod 4)` it carries odd geodesic
/// loops, which no consistent typing allows. Only the face count `a b`
/// affects the combinatorics.
pub fn build_rect_tessellation(
    p: usize,
    a: usize,
    b: usize,
) -> Result<SurfaceComplex, TessellationError> {
    require_even_p(p)?;
    if a == 0 || b == 0 {
        return Err(TessellationError::InvalidParameters(
            "grid dimensions must be positive".into(),
        ));
    }
    if !p.is_multiple_of(4) {
        return Err(TessellationError::BadDivisibility(format!(
            "rectangular construction needs 4 | p, got p = {p}"
        )));
    }
    let f = a * b;
    let genus = genus_of(p, f).ok_or_else(|| {
        TessellationError::BadDivisibility(format!(
            "F (p-4) / 8 is not an integer for F = {f}, p = {p}"
        ))
    })?;
    let complex = if f.is_multiple_of(2) {
        let fine_p = (p + 4) / 2;
        let fine = typed_gluing(fine_p, &standard_involutions(fine_p, f))?;
        erase_chords(&fine, &[fine_p])?
    } else {
        if p % 8 != 4 {
            return Err(TessellationError::BadDivisibility(format!(
                "odd F needs p ≡ 4 (mod 8), got p = {p}"
            )));
        }
        let fine_p = p / 4 + 3;
        let fine = typed_gluing(fine_p, &standard_involutions(fine_p, 2 * f))?;
        erase_chords(&fine, &[fine_p - 1, fine_p])?
    };
    check_builder_output(&complex, Some(genus), false)?;
    Ok(complex)
}

fn check_builder_output(
    complex: &SurfaceComplex,
    genus: Option<usize>,
    require_hypotheses: bool,
) -> Result<(), TessellationError> {
    let report = validate(complex, genus.map(|g| g as i64));
    if !report.passed {
        return Err(TessellationError::ConstructionFailure(format!(
            "validation failed: {:?}",
            report.failures
        )));
    }
    if require_hypotheses {
        let loops = trace_geodesic_loops(complex)?;
        if !loops.hypotheses_ok {
            return Err(TessellationError::ConstructionFailure(
                "loop hypotheses fail".into(),
            ));
        }
    }
    Ok(())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut y = x;
        while self.0[y] != root {
            let next = self.0[y];
            self.0[y] = root;
            y = next;
        }
        root
    }

    /// Keeps the smaller root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Erases every edge whose type is in `chord_types`, merges the faces they
/// separated, and merges the two edges at each vertex left with degree 2.
fn erase_chords(
    fine: &SurfaceComplex,
    chord_types: &[usize],
) -> Result<SurfaceComplex, TessellationError> {
    let fail = |msg: &str| Err(TessellationError::ConstructionFailure(msg.to_string()));
    let topo = fine.topology()?;
    let is_chord = |e: usize| {
        fine.edge_type(e)
            .is_some_and(|t| chord_types.contains(&t.value()))
    };

    let mut groups = UnionFind::new(fine.num_faces());
    for e in (0..fine.num_edges()).filter(|&e| is_chord(e)) {
        let fwd = topo.face_of(topo.side_of(DirectedEdge::new(e, false)));
        let rev = topo.face_of(topo.side_of(DirectedEdge::new(e, true)));
        groups.union(fwd, rev);
    }

    // Boundary walks of the merged faces, as lists of fine sides.
    let mut visited = vec![false; topo.num_sides()];
    let mut walks: Vec<Vec<usize>> = Vec::new();
    for s0 in 0..topo.num_sides() {
        if visited[s0] || is_chord(topo.edge_of(s0)) {
            continue;
        }
        let mut walk = Vec::new();
        let mut s = s0;
        loop {
            visited[s] = true;
            walk.push(s);
            let mut t = topo.next(s);
            let mut guard = 0;
            while is_chord(topo.edge_of(t)) {
                t = topo.next(topo.opposite(t));
                guard += 1;
                if guard > topo.num_sides() {
                    return fail("chord system encloses a face");
                }
            }
            s = t;
            if s == s0 {
                break;
            }
            if visited[s] {
                return fail("merged region is not a disk");
            }
        }
        walks.push(walk);
    }
    if walks.len()
        != (0..fine.num_faces())
            .filter(|&f| groups.find(f) == f)
            .count()
    {
        return fail("merged region is not a disk");
    }

    let kept_degree: Vec<usize> = (0..topo.num_vertices())
        .map(|v| {
            topo.ring(v)
                .iter()
                .filter(|&&c| !is_chord(topo.edge_of(c)))
                .count()
        })
        .collect();
    let mut chains = UnionFind::new(fine.num_edges());
    for walk in &walks {
        for (i, &s) in walk.iter().enumerate() {
            let t = walk[(i + 1) % walk.len()];
            if kept_degree[topo.head_vertex(s)] == 2 {
                chains.union(topo.edge_of(s), topo.edge_of(t));
            }
        }
    }

    // Each merged face becomes a list of (chain representative, reversed),
    // the orientation being that of the representative within the chain.
    let mut coarse_faces: Vec<(usize, Vec<(usize, bool)>)> = Vec::new();
    for walk in &walks {
        let m = walk.len();
        let Some(start) = (0..m).find(|&i| kept_degree[topo.tail_vertex(walk[i])] != 2) else {
            return fail("face boundary has no corner");
        };
        let mut sides = Vec::new();
        let (mut i, mut consumed) = (start, 0);
        while consumed < m {
            let rep = chains.find(topo.edge_of(walk[i]));
            let mut reversed = None;
            loop {
                if topo.edge_of(walk[i]) == rep {
                    reversed = Some(topo.directed_of(walk[i]).reversed());
                }
                consumed += 1;
                i = (i + 1) % m;
                if consumed == m || kept_degree[topo.tail_vertex(walk[i])] != 2 {
                    break;
                }
            }
            let Some(reversed) = reversed else {
                return fail("merged edge is not a single chain");
            };
            sides.push((rep, reversed));
        }
        let min_face = walk.iter().map(|&s| topo.face_of(s)).min().unwrap();
        coarse_faces.push((min_face, sides));
    }
    coarse_faces.sort_by_key(|(min_face, _)| *min_face);

    let mut reps: Vec<usize> = coarse_faces
        .iter()
        .flat_map(|(_, l)| l.iter().map(|&(e, _)| e))
        .collect();
    reps.sort_unstable();
    reps.dedup();
    let new_id: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let p = coarse_faces[0].1.len();
    if coarse_faces.iter().any(|(_, l)| l.len() != p) {
        return fail("merged faces have different side counts");
    }
    let edges: Vec<EdgeSpec> = (0..reps.len())
        .map(|id| EdgeSpec {
            id,
            edge_type: None,
        })
        .collect();
    let faces: Vec<FaceSpec> = coarse_faces
        .iter()
        .enumerate()
        .map(|(id, (_, list))| FaceSpec {
            id,
            chirality: Chirality::CounterClockwise,
            sides: list
                .iter()
                .map(|&(e, r)| Side {
                    edge: new_id[&e],
                    reversed: r,
                })
                .collect(),
        })
        .collect();
    Ok(build_complex(p, &edges, &faces)?)
}

/// Records how a subdivided complex sits over its source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionMap {
    pub pieces: usize,
    pub source_p: usize,
    pub target_p: usize,
    pub source_faces: usize,
    pub source_edges: usize,
    /// Reference axis `m` for transporting thickness sequences.
    pub axis: Option<usize>,
    /// Folded distance of each source edge from the cut edges' axis.
    pub edge_labels: Vec<usize>,
    /// Source edge -> new edges (two halves for cut edges, tail half first).
    pub edge_map: Vec<Vec<usize>>,
    /// Source face -> new faces.
    pub face_map: Vec<Vec<usize>>,
    pub chords: Vec<ChordRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordRecord {
    pub face: usize,
    /// Side index of the face carrying label 0 on the first cut.
    pub offset: usize,
    /// New chord edges (pieces = 2) or center-to-midpoint segments (pieces = 4).
    pub edges: Vec<usize>,
    /// New midpoint vertices, in the order of the cut sides.
    pub midpoints: Vec<usize>,
    pub center: Option<usize>,
}

/// Splits every face into two `(p+4)/2`-gons by a chord between midpoints
/// of opposite sides.
pub fn subdivide_two(
    complex: &SurfaceComplex,
) -> Result<(SurfaceComplex, SubdivisionMap), TessellationError> {
    subdivide(complex, 2, None)
}

/// Splits every face into four `(p/4+3)`-gons by two chords crossing at a
/// new center vertex.
pub fn subdivide_four(
    complex: &SurfaceComplex,
) -> Result<(SurfaceComplex, SubdivisionMap), TessellationError> {
    subdivide(complex, 4, None)
}

/// Chord subdivision into `pieces` (2 or 4) pieces per face.
///
/// Each source edge gets a label: its distance, folded by the face's
/// reflection symmetry, from the first cut side. Labels must agree across
/// edges and on opposite edges at every vertex; edges labelled 0 or with
/// the largest label are cut at their midpoints. A new edge with label `d`
/// gets type `d + 1`; chords through the label-0 midpoints get type `p'`
/// and, for four pieces, the remaining chord halves get `p' - 1`.
///
/// On a typed source with `axis = Some(m)` the labels are read off the types
/// as the folded distance to `m`. Otherwise labelings are searched in a
/// fixed order until the pieces form a valid complex whose geodesic loops
/// are all even and meet pairwise at most once; `axis` is then only
/// recorded.
pub fn subdivide(
    complex: &SurfaceComplex,
    pieces: usize,
    axis: Option<usize>,
) -> Result<(SurfaceComplex, SubdivisionMap), TessellationError> {
    let p = complex.p();
    match pieces {
        2 if !p.is_multiple_of(4) => {
            return Err(TessellationError::BadDivisibility(format!(
                "two pieces need 4 | p so that (p+4)/2 is even, got p = {p}"
            )))
        }
        4 if p % 8 != 4 => {
            return Err(TessellationError::BadDivisibility(format!(
                "four pieces need p ≡ 4 (mod 8), got p = {p}"
            )))
        }
        2 | 4 => {}
        _ => {
            return Err(TessellationError::InvalidParameters(format!(
                "pieces must be 2 or 4, got {pieces}"
            )))
        }
    }
    if let Some(m) = axis {
        if m == 0 || m > p {
            return Err(TessellationError::InvalidParameters(format!(
                "axis {m} outside 1..={p}"
            )));
        }
    }
    complex.right_angled_topology()?;
    let genus = validate(complex, None).genus;
    let period = if pieces == 2 { p } else { p / 2 };

    if let (Some(m), true) = (axis, complex.is_typed()) {
        let offsets: Vec<usize> = (0..complex.num_faces())
            .map(|f| {
                (0..p)
                    .find(|&k| complex.side_type(f, k) == Some(EdgeType(m)))
                    .unwrap()
                    % period
            })
            .collect();
        let search = LabelSearch::new(complex, pieces);
        if !search.consistent(&offsets) {
            return Err(TessellationError::CutSystemFailure(
                "type-induced labels are inconsistent".into(),
            ));
        }
        return match assemble(complex, pieces, &offsets, axis, genus)? {
            Some(result) => Ok(result),
            None => Err(TessellationError::CutSystemFailure(format!(
                "axis {m} leaves odd or crossing loops"
            ))),
        };
    }

    let mut search = LabelSearch::new(complex, pieces);
    let mut found = None;
    let mut error = None;
    search.run(
        &mut |offsets| match assemble(complex, pieces, offsets, axis, genus) {
            Ok(Some(result)) => {
                found = Some(result);
                true
            }
            Ok(None) => false,
            Err(e) => {
                error = Some(e);
                true
            }
        },
    );
    if let Some(e) = error {
        return Err(e);
    }
    found.ok_or_else(|| {
        TessellationError::CutSystemFailure(format!(
            "searched {} labelings without success",
            search.leaves
        ))
    })
}

fn fold(d: usize, period: usize) -> usize {
    let d = d % period;
    d.min(period - d)
}

/// Backtracking over per-face label offsets.
struct LabelSearch<'a> {
    complex: &'a SurfaceComplex,
    p: usize,
    period: usize,
    order: Vec<usize>,
    face_vertices: Vec<Vec<usize>>,
    labels: Vec<Option<usize>>,
    nodes: usize,
    leaves: usize,
}

const SEARCH_NODE_LIMIT: usize = 1_000_000;

impl<'a> LabelSearch<'a> {
    fn new(complex: &'a SurfaceComplex, pieces: usize) -> Self {
        let topo = complex.topology().expect("closed complex");
        let p = complex.p();
        let n = complex.num_faces();
        // Breadth-first face order so that each face meets labelled edges.
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(f) = queue.pop_front() {
                order.push(f);
                for k in 0..p {
                    let g = topo.face_of(topo.opposite(f * p + k));
                    if !seen[g] {
                        seen[g] = true;
                        queue.push_back(g);
                    }
                }
            }
        }
        let face_vertices = (0..n)
            .map(|f| {
                let mut vs: Vec<usize> = (0..p).map(|k| topo.head_vertex(f * p + k)).collect();
                vs.sort_unstable();
                vs.dedup();
                vs
            })
            .collect();
        LabelSearch {
            complex,
            p,
            period: if pieces == 2 { p } else { p / 2 },
            order,
            face_vertices,
            labels: vec![None; complex.num_edges()],
            nodes: 0,
            leaves: 0,
        }
    }

    fn side_label(&self, k: usize, offset: usize) -> usize {
        fold(k + self.p - offset, self.period)
    }

    /// Assigns the labels of face `f`; returns the edges newly labelled, or
    /// `None` (with nothing changed) on conflict.
    fn place(&mut self, f: usize, offset: usize) -> Option<Vec<usize>> {
        let mut placed = Vec::new();
        for (k, side) in self.complex.face(f).sides.iter().enumerate() {
            let label = self.side_label(k, offset);
            match self.labels[side.edge] {
                Some(existing) if existing != label => {
                    for &e in &placed {
                        self.labels[e] = None;
                    }
                    return None;
                }
                Some(_) => {}
                None => {
                    self.labels[side.edge] = Some(label);
                    placed.push(side.edge);
                }
            }
        }
        let topo = self.complex.topology().unwrap();
        let ok = self.face_vertices[f].iter().all(|&v| {
            let ring = topo.ring_edges(v);
            let l: Vec<Option<usize>> = ring.iter().map(|&e| self.labels[e]).collect();
            let opposite_ok =
                |a: Option<usize>, b: Option<usize>| a.is_none() || b.is_none() || a == b;
            opposite_ok(l[0], l[2]) && opposite_ok(l[1], l[3])
        });
        if !ok {
            for &e in &placed {
                self.labels[e] = None;
            }
            return None;
        }
        Some(placed)
    }

    fn consistent(mut self, offsets: &[usize]) -> bool {
        for f in 0..offsets.len() {
            if self.place(f, offsets[f]).is_none() {
                return false;
            }
        }
        true
    }

    /// Calls `accept` on complete labelings until it returns true.
    fn run(&mut self, accept: &mut dyn FnMut(&[usize]) -> bool) {
        let mut offsets = vec![0; self.complex.num_faces()];
        self.recurse(0, &mut offsets, accept);
    }

    fn recurse(
        &mut self,
        depth: usize,
        offsets: &mut Vec<usize>,
        accept: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == self.order.len() {
            self.leaves += 1;
            return accept(offsets);
        }
        let f = self.order[depth];
        for offset in 0..self.period {
            self.nodes += 1;
            if self.nodes > SEARCH_NODE_LIMIT {
                return true;
            }
            if let Some(placed) = self.place(f, offset) {
                offsets[f] = offset;
                if self.recurse(depth + 1, offsets, accept) {
                    return true;
                }
                for e in placed {
                    self.labels[e] = None;
                }
            }
        }
        false
    }
}

/// Builds the pieces for a consistent labeling; `None` when the result
/// misses the postconditions.
fn assemble(
    complex: &SurfaceComplex,
    pieces: usize,
    offsets: &[usize],
    axis: Option<usize>,
    genus: Option<i64>,
) -> Result<Option<(SurfaceComplex, SubdivisionMap)>, TessellationError> {
    let p = complex.p();
    let period = if pieces == 2 { p } else { p / 2 };
    let top = period / 2;
    let new_p = if pieces == 2 { (p + 4) / 2 } else { p / 4 + 3 };
    let quarter = p / pieces;

    let mut edge_labels = vec![0; complex.num_edges()];
    for (f, face) in complex.faces().iter().enumerate() {
        for (k, side) in face.sides.iter().enumerate() {
            edge_labels[side.edge] = fold(k + p - offsets[f], period);
        }
    }
    let is_cut = |e: usize| edge_labels[e] == 0 || edge_labels[e] == top;

    let mut edges: Vec<EdgeSpec> = Vec::new();
    let mut edge_map = Vec::with_capacity(complex.num_edges());
    for e in 0..complex.num_edges() {
        let t = Some(edge_labels[e] + 1);
        let count = if is_cut(e) { 2 } else { 1 };
        let ids: Vec<usize> = (0..count).map(|i| edges.len() + i).collect();
        for &id in &ids {
            edges.push(EdgeSpec { id, edge_type: t });
        }
        edge_map.push(ids);
    }
    let chord_base = edges.len();
    let per_face = if pieces == 2 { 1 } else { 4 };
    for f in 0..complex.num_faces() {
        for t in 0..per_face {
            let ty = if pieces == 2 || t % 2 == 0 {
                new_p
            } else {
                new_p - 1
            };
            edges.push(EdgeSpec {
                id: chord_base + f * per_face + t,
                edge_type: Some(ty),
            });
        }
    }

    let first_half = |side: &Side| {
        let h = &edge_map[side.edge];
        if side.reversed {
            Side::backward(h[1])
        } else {
            Side::forward(h[0])
        }
    };
    let second_half = |side: &Side| {
        let h = &edge_map[side.edge];
        if side.reversed {
            Side::backward(h[0])
        } else {
            Side::forward(h[1])
        }
    };
    let whole = |side: &Side| Side {
        edge: edge_map[side.edge][0],
        reversed: side.reversed,
    };

    let mut faces = Vec::with_capacity(complex.num_faces() * pieces);
    for (f, face) in complex.faces().iter().enumerate() {
        let cuts: Vec<usize> = (0..pieces)
            .map(|t| (offsets[f] + t * quarter) % p)
            .collect();
        for t in 0..pieces {
            let (from, to) = (cuts[t], cuts[(t + 1) % pieces]);
            let mut sides = vec![second_half(&face.sides[from])];
            let mut k = (from + 1) % p;
            while k != to {
                sides.push(whole(&face.sides[k]));
                k = (k + 1) % p;
            }
            sides.push(first_half(&face.sides[to]));
            if pieces == 2 {
                // The chord runs forward from the midpoint of cut 0 to cut 1.
                let chord = chord_base + f;
                sides.push(if t == 0 {
                    Side::backward(chord)
                } else {
                    Side::forward(chord)
                });
            } else {
                // Segment t runs forward from the center to the midpoint of cut t.
                sides.push(Side::backward(chord_base + 4 * f + (t + 1) % 4));
                sides.push(Side::forward(chord_base + 4 * f + t));
            }
            let ty = |s: &Side| edges[s.edge].edge_type.map(EdgeType).unwrap();
            let chirality = if ty(&sides[0]).shifted(1, new_p) == ty(&sides[1]) {
                Chirality::CounterClockwise
            } else {
                Chirality::Clockwise
            };
            faces.push(FaceSpec {
                id: faces.len(),
                chirality,
                sides,
            });
        }
    }

    let result = build_complex(new_p, &edges, &faces)?;
    let report = validate(&result, genus);
    if !report.passed {
        return Ok(None);
    }
    let loops = trace_geodesic_loops(&result)?;
    if !loops.hypotheses_ok {
        return Ok(None);
    }

    let topo = result.topology()?;
    let midpoint = |e: usize| topo.head(DirectedEdge::new(edge_map[e][0], false));
    let chords = (0..complex.num_faces())
        .map(|f| {
            let cuts: Vec<usize> = (0..pieces)
                .map(|t| (offsets[f] + t * quarter) % p)
                .collect();
            let chord_edges: Vec<usize> = (0..per_face)
                .map(|t| chord_base + f * per_face + t)
                .collect();
            ChordRecord {
                face: f,
                offset: offsets[f],
                midpoints: cuts
                    .iter()
                    .map(|&k| midpoint(complex.face(f).sides[k].edge))
                    .collect(),
                center: (pieces == 4).then(|| topo.tail(DirectedEdge::new(chord_edges[0], false))),
                edges: chord_edges,
            }
        })
        .collect();
    let map = SubdivisionMap {
        pieces,
        source_p: p,
        target_p: new_p,
        source_faces: complex.num_faces(),
        source_edges: complex.num_edges(),
        axis,
        edge_labels,
        edge_map,
        face_map: (0..complex.num_faces())
            .map(|f| (0..pieces).map(|t| pieces * f + t).collect())
            .collect(),
        chords,
    };
    Ok(Some((result, map)))
}

/// Thickness sequence of the subdivided complex.
///
/// Two pieces: `(q_m, ..., q_{m+p/2}, 2)`; four pieces:
/// `(q_m, ..., q_{m+p/4}, 2, 2)`. Requires the matching symmetry of `q`
/// about `m`.
pub fn derived_sequence(
    q: &TypeSequence,
    pieces: usize,
    m: usize,
) -> Result<TypeSequence, TessellationError> {
    let p = q.p();
    let (span, extra, symmetric) = match pieces {
        2 => (
            p / 2,
            1,
            p.is_multiple_of(2) && is_two_symmetric_about(q.entries(), m),
        ),
        4 => {
            if !p.is_multiple_of(4) {
                return Err(TessellationError::BadDivisibility(format!(
                    "four pieces need 4 | p, got p = {p}"
                )));
            }
            (p / 4, 2, is_four_symmetric_about(q.entries(), m))
        }
        _ => {
            return Err(TessellationError::InvalidParameters(format!(
                "pieces must be 2 or 4, got {pieces}"
            )))
        }
    };
    if !symmetric {
        return Err(TessellationError::SymmetryViolation {
            kind: pieces,
            axis: m,
        });
    }
    let mut entries: Vec<u64> = (0..=span).map(|j| q.get((m + j) as i64)).collect();
    entries.extend(std::iter::repeat_n(2, extra));
    TypeSequence::new(entries).map_err(|e| TessellationError::InvalidParameters(e.to_string()))
}
