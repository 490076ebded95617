//! Good colorings: 0/1 edge colorings that alternate along every geodesic
//! loop and are constant on the edges hanging off each side of a loop.
//!
//! Both conditions are parity constraints between pairs of edges, so the
//! problem is 2-coloring a signed graph.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::complex::{DirectedEdge, SurfaceComplex, Topology};
use crate::error::ColoringError;
use crate::loops::{hanging_edges, trace_geodesic_loops, LoopReport};

/// Largest edge count accepted by the exhaustive solver.
pub const EXHAUSTIVE_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// Consecutive edges of a loop differ.
    Alternating,
    /// Hanging edges on the same side of a loop agree.
    Consistency,
}

/// `c(a) + c(b) = parity (mod 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    pub a: usize,
    pub b: usize,
    pub parity: u8,
    pub kind: ConstraintKind,
    #[serde(rename = "loop")]
    pub loop_id: usize,
}

impl Constraint {
    pub fn holds(&self, colors: &[u8]) -> bool {
        colors[self.a] ^ colors[self.b] == self.parity
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityConstraintSystem {
    pub num_edges: usize,
    pub constraints: Vec<Constraint>,
}

impl ParityConstraintSystem {
    /// Connected components of the constraint graph, edges without
    /// constraints counting as singletons.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.num_edges).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for c in &self.constraints {
            let (ra, rb) = (find(&mut parent, c.a), find(&mut parent, c.b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        (0..self.num_edges).map(|e| find(&mut parent, e)).collect()
    }

    pub fn num_components(&self) -> usize {
        let roots = self.components();
        (0..self.num_edges).filter(|&e| roots[e] == e).count()
    }

    pub fn violations(&self, colors: &[u8]) -> Vec<Constraint> {
        self.constraints
            .iter()
            .filter(|c| !c.holds(colors))
            .copied()
            .collect()
    }
}

/// Constraints along each loop: consecutive edges alternate, and the left
/// (respectively right) hanging edges at consecutive vertices agree.
///
/// Left and right are taken with respect to the surface orientation, in
/// which every face lists its sides with the face on their left.
pub fn build_constraints(
    complex: &SurfaceComplex,
    report: &LoopReport,
) -> Result<ParityConstraintSystem, ColoringError> {
    let topo = complex.right_angled_topology()?;
    let mut constraints = Vec::new();
    for l in &report.loops {
        if l.degenerate {
            return Err(ColoringError::DegenerateLoop(l.id));
        }
        let n = l.directed_edges.len();
        let hanging: Vec<(usize, usize)> = l
            .directed_edges
            .iter()
            .map(|&d| hanging_edges(topo, topo.side_of(d)))
            .collect();
        for j in 0..n {
            let k = (j + 1) % n;
            let push = |constraints: &mut Vec<Constraint>, a, b, parity, kind| {
                constraints.push(Constraint {
                    a,
                    b,
                    parity,
                    kind,
                    loop_id: l.id,
                })
            };
            push(
                &mut constraints,
                l.directed_edges[j].edge(),
                l.directed_edges[k].edge(),
                1,
                ConstraintKind::Alternating,
            );
            push(
                &mut constraints,
                hanging[j].0,
                hanging[k].0,
                0,
                ConstraintKind::Consistency,
            );
            push(
                &mut constraints,
                hanging[j].1,
                hanging[k].1,
                0,
                ConstraintKind::Consistency,
            );
        }
    }
    Ok(ParityConstraintSystem {
        num_edges: complex.num_edges(),
        constraints,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Propagate,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub colors: Vec<u8>,
    pub base_vertex: usize,
    /// Colors of the base vertex's edges in rotation order.
    pub seed: Vec<u8>,
}

impl EdgeColoring {
    pub fn new(complex: &SurfaceComplex, colors: Vec<u8>) -> Result<Self, ColoringError> {
        let topo = complex.topology()?;
        let seed = topo.ring_edges(0).iter().map(|&e| colors[e]).collect();
        Ok(EdgeColoring {
            colors,
            base_vertex: 0,
            seed,
        })
    }

    pub fn color(&self, e: usize) -> u8 {
        self.colors[e]
    }
}

/// A cycle of constraints whose parities sum to 1. Empty when emptiness
/// was established by enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionWitness {
    pub cycle: Vec<Constraint>,
}

impl ContradictionWitness {
    pub fn total_parity(&self) -> u8 {
        self.cycle.iter().fold(0, |acc, c| acc ^ c.parity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ColoringOutcome {
    Colored(EdgeColoring),
    Contradiction(ContradictionWitness),
}

impl ColoringOutcome {
    pub fn coloring(&self) -> Option<&EdgeColoring> {
        match self {
            ColoringOutcome::Colored(c) => Some(c),
            ColoringOutcome::Contradiction(_) => None,
        }
    }
}

pub fn solve_good_coloring(
    complex: &SurfaceComplex,
    mode: SolveMode,
) -> Result<ColoringOutcome, ColoringError> {
    let report = trace_geodesic_loops(complex)?;
    let system = build_constraints(complex, &report)?;
    match mode {
        SolveMode::Propagate => {
            let topo = complex.topology()?;
            let seed: Vec<(usize, u8)> = topo.ring_edges(0).into_iter().zip([0, 0, 1, 1]).collect();
            match propagate(&system, &seed) {
                Ok(colors) => Ok(ColoringOutcome::Colored(EdgeColoring::new(
                    complex, colors,
                )?)),
                Err(w) => Ok(ColoringOutcome::Contradiction(w)),
            }
        }
        SolveMode::Exhaustive => match exhaustive(&system)?.first {
            Some(colors) => Ok(ColoringOutcome::Colored(EdgeColoring::new(
                complex, colors,
            )?)),
            None => Ok(ColoringOutcome::Contradiction(ContradictionWitness {
                cycle: Vec::new(),
            })),
        },
    }
}

/// Breadth-first propagation of parities.
///
/// Seeds are applied in order to edges not yet determined; every remaining
/// component is rooted at its smallest edge with color 0.
pub fn propagate(
    system: &ParityConstraintSystem,
    seed: &[(usize, u8)],
) -> Result<Vec<u8>, ContradictionWitness> {
    let n = system.num_edges;
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in system.constraints.iter().enumerate() {
        adjacency[c.a].push(i);
        if c.b != c.a {
            adjacency[c.b].push(i);
        }
    }
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let roots = seed.iter().copied().chain((0..n).map(|e| (e, 0)));
    for (root, value) in roots {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(value);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &ci in &adjacency[u] {
                let c = system.constraints[ci];
                let v = if c.a == u { c.b } else { c.a };
                let want = color[u].unwrap() ^ c.parity;
                match color[v] {
                    None => {
                        color[v] = Some(want);
                        parent[v] = Some(ci);
                        depth[v] = depth[u] + 1;
                        queue.push_back(v);
                    }
                    Some(have) if have != want => {
                        return Err(witness(system, u, v, ci, &parent, &depth));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(color.into_iter().map(Option::unwrap).collect())
}

fn witness(
    system: &ParityConstraintSystem,
    u: usize,
    v: usize,
    closing: usize,
    parent: &[Option<usize>],
    depth: &[usize],
) -> ContradictionWitness {
    let other = |ci: usize, x: usize| {
        let c = system.constraints[ci];
        if c.a == x {
            c.b
        } else {
            c.a
        }
    };
    let (mut a, mut b) = (u, v);
    let (mut up_a, mut up_b) = (Vec::new(), Vec::new());
    while a != b {
        if depth[a] >= depth[b] {
            let ci = parent[a].expect("path to root");
            up_a.push(ci);
            a = other(ci, a);
        } else {
            let ci = parent[b].expect("path to root");
            up_b.push(ci);
            b = other(ci, b);
        }
    }
    // root side -> u, closing constraint, v -> root side
    let mut cycle: Vec<Constraint> = up_a
        .iter()
        .rev()
        .map(|&ci| system.constraints[ci])
        .collect();
    cycle.push(system.constraints[closing]);
    cycle.extend(up_b.iter().map(|&ci| system.constraints[ci]));
    ContradictionWitness { cycle }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveResult {
    /// Lexicographically least solution (edge 0 most significant).
    pub first: Option<Vec<u8>>,
    pub count: u64,
}

/// Scans all `2^E` colorings.
pub fn exhaustive(system: &ParityConstraintSystem) -> Result<ExhaustiveResult, ColoringError> {
    let n = system.num_edges;
    if n > EXHAUSTIVE_LIMIT {
        return Err(ColoringError::TooLargeForExhaustive {
            edges: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let shift = |e: usize| (n - 1 - e) as u32;
    let checks: Vec<(u32, u32, u32)> = system
        .constraints
        .iter()
        .map(|c| (shift(c.a), shift(c.b), c.parity as u32))
        .collect();
    let mut first = None;
    let mut count = 0;
    for mask in 0u32..(1u32 << n) {
        if checks
            .iter()
            .all(|&(sa, sb, par)| ((mask >> sa) ^ (mask >> sb)) & 1 == par)
        {
            if first.is_none() {
                first = Some((0..n).map(|e| ((mask >> shift(e)) & 1) as u8).collect());
            }
            count += 1;
        }
    }
    Ok(ExhaustiveResult { first, count })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringVerification {
    pub good: bool,
    pub violations: Vec<Constraint>,
}

pub fn verify_good_coloring(
    complex: &SurfaceComplex,
    coloring: &EdgeColoring,
) -> Result<ColoringVerification, ColoringError> {
    let report = trace_geodesic_loops(complex)?;
    let system = build_constraints(complex, &report)?;
    if coloring.colors.len() != complex.num_edges() || coloring.colors.iter().any(|&c| c > 1) {
        return Ok(ColoringVerification {
            good: false,
            violations: Vec::new(),
        });
    }
    let violations = system.violations(&coloring.colors);
    Ok(ColoringVerification {
        good: violations.is_empty(),
        violations,
    })
}

/// Affine map `x -> L x + offset` of `{0,1}^2`, `L` the identity or the
/// coordinate swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Holonomy {
    pub swap: bool,
    pub offset: (u8, u8),
}

impl Holonomy {
    pub const IDENTITY: Holonomy = Holonomy {
        swap: false,
        offset: (0, 0),
    };

    pub fn apply(self, (a, b): (u8, u8)) -> (u8, u8) {
        let (x, y) = if self.swap { (b, a) } else { (a, b) };
        (x ^ self.offset.0, y ^ self.offset.1)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(self, first: Holonomy) -> Holonomy {
        let moved = if self.swap {
            (first.offset.1, first.offset.0)
        } else {
            first.offset
        };
        Holonomy {
            swap: self.swap ^ first.swap,
            offset: (moved.0 ^ self.offset.0, moved.1 ^ self.offset.1),
        }
    }

    pub fn inverse(self) -> Holonomy {
        let (a, b) = self.offset;
        Holonomy {
            swap: self.swap,
            offset: if self.swap { (b, a) } else { (a, b) },
        }
    }

    pub fn is_identity(self) -> bool {
        self == Self::IDENTITY
    }

    /// Moving the reference corner one step around the vertex.
    fn rotation() -> Holonomy {
        Holonomy {
            swap: true,
            offset: (0, 1),
        }
    }

    fn rotation_pow(k: usize) -> Holonomy {
        (0..k % 4).fold(Self::IDENTITY, |h, _| Self::rotation().after(h))
    }

    /// Transfer along the edge at ring position `j` relative to the arrival
    /// corner.
    fn transfer(j: usize) -> Holonomy {
        // Departing straight ahead of the reference flips the first
        // coordinate; departing at position j first rotates by j.
        let straight_back = Holonomy {
            swap: false,
            offset: (0, 1),
        };
        straight_back.after(Self::rotation_pow(j))
    }
}

/// Transport of the local color pair around a closed walk of directed edges
/// starting and ending at the tail of the first edge.
///
/// At a vertex, the pair `(a, b)` lists the colors of the edge at a corner
/// and of the next edge around the vertex; in a good coloring the other two
/// edges carry `1-a` and `1-b`. The pair at the base vertex is read at its
/// first ring corner, so walks at the same base compose:
/// `holonomy(w1 + w2) = holonomy(w2) ∘ holonomy(w1)`.
pub fn holonomy(
    complex: &SurfaceComplex,
    walk: &[DirectedEdge],
) -> Result<Holonomy, ColoringError> {
    let topo = complex.right_angled_topology()?;
    if walk.is_empty() {
        return Ok(Holonomy::IDENTITY);
    }
    for k in 1..walk.len() {
        if topo.tail(walk[k]) != topo.head(walk[k - 1]) {
            return Err(ColoringError::Discontinuous(k));
        }
    }
    let base = topo.tail(walk[0]);
    if topo.head(*walk.last().unwrap()) != base {
        return Err(ColoringError::NotClosed);
    }
    let reference = topo.ring(base)[0];
    let mut h = Holonomy::IDENTITY;
    let mut corner = reference;
    for (k, &d) in walk.iter().enumerate() {
        let j = departure(topo, corner, d).ok_or(ColoringError::Discontinuous(k))?;
        h = Holonomy::transfer(j).after(h);
        corner = topo.side_of(d);
    }
    let back = topo
        .ring_offset(reference, corner)
        .ok_or(ColoringError::NotClosed)?;
    Ok(Holonomy::rotation_pow(4 - back % 4).after(h))
}

/// Ring position, relative to `corner`, of the edge along which `d` leaves.
fn departure(topo: &Topology, corner: usize, d: DirectedEdge) -> Option<usize> {
    topo.ring_offset(corner, topo.opposite(topo.side_of(d)))
}
