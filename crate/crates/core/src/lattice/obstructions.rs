//! Index identifications forced by odd geodesic loops.
//!
//! An odd loop of type `i` closes up with a reflection of the link: going
//! once around swaps the types `i+1` and `i-1` on its two sides, and by
//! induction `i+k` with `i-k`. Any lattice for the complex must therefore
//! have `q` constant on the orbits of these reflections.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::EdgeType;
use crate::loops::{LoopReport, Parity};
use crate::tessellation::SubdivisionMap;

/// A map on the index set `Z/p`, written on representatives `1..=p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymmetryGenerator {
    /// `k -> k + shift`
    Rotation { shift: usize },
    /// `k -> 2 axis - k`
    Reflection { axis: usize },
}

impl SymmetryGenerator {
    pub fn apply(self, k: usize, p: usize) -> usize {
        let (p, k) = (p as i64, k as i64);
        let image = match self {
            SymmetryGenerator::Rotation { shift } => k + shift as i64,
            SymmetryGenerator::Reflection { axis } => 2 * axis as i64 - k,
        };
        ((image - 1).rem_euclid(p) + 1) as usize
    }
}

impl fmt::Display for SymmetryGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymmetryGenerator::Rotation { shift } => write!(f, "k -> k+{shift}"),
            SymmetryGenerator::Reflection { axis } => write!(f, "k -> {}-k", 2 * axis),
        }
    }
}

/// Generators together with the orbit partition of `{1..p}` they induce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSymmetry {
    pub p: usize,
    pub generators: Vec<SymmetryGenerator>,
    /// Sorted orbits, ordered by their smallest element.
    pub orbits: Vec<Vec<usize>>,
}

impl IndexSymmetry {
    /// Whether `q` (1-based) is constant on every orbit.
    pub fn admits(&self, q: &[u64]) -> bool {
        q.len() == self.p
            && self
                .orbits
                .iter()
                .all(|orbit| orbit.iter().all(|&k| q[k - 1] == q[orbit[0] - 1]))
    }

    pub fn orbit_of(&self, k: usize) -> Option<&[usize]> {
        self.orbits
            .iter()
            .find(|o| o.contains(&k))
            .map(Vec::as_slice)
    }
}

/// Reflections about the type of every odd loop, deduplicated and sorted.
///
/// Loops without a type are skipped; see [`loop_types_from_labels`] for
/// untyped complexes that were subdivided.
pub fn loop_obstructions(report: &LoopReport) -> Vec<SymmetryGenerator> {
    loop_obstructions_with(report, |l| l.edge_type)
}

/// Like [`loop_obstructions`] with loop types supplied by `type_of`.
pub fn loop_obstructions_with(
    report: &LoopReport,
    type_of: impl Fn(&crate::loops::GeodesicLoop) -> Option<EdgeType>,
) -> Vec<SymmetryGenerator> {
    let axes: BTreeSet<usize> = report
        .loops
        .iter()
        .filter(|l| l.parity == Parity::Odd)
        .filter_map(|l| type_of(l).map(EdgeType::value))
        .collect();
    axes.into_iter()
        .map(|axis| SymmetryGenerator::Reflection { axis })
        .collect()
}

/// Types for the loops of an untyped source complex, read from the labels a
/// subdivision put on its edges: label `d` stands for type `axis + d`.
///
/// Since opposite edges at a vertex share a label, every edge of a loop has
/// the same label. The choice of `axis + d` over `axis - d` is immaterial
/// once `q` is symmetric about `axis`.
pub fn loop_types_from_labels(
    report: &LoopReport,
    map: &SubdivisionMap,
    axis: usize,
) -> Vec<Option<EdgeType>> {
    let p = map.source_p;
    report
        .loops
        .iter()
        .map(|l| {
            let first = *l.edges().iter().next()?;
            let label = *map.edge_labels.get(first)?;
            Some(EdgeType::new(axis, p).ok()?.shifted(label as i64, p))
        })
        .collect()
}

/// Orbits of `{1..p}` under the group generated by `generators`.
pub fn symmetry_closure(p: usize, generators: &[SymmetryGenerator]) -> IndexSymmetry {
    let mut parent: Vec<usize> = (0..=p).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    for g in generators {
        for k in 1..=p {
            let (a, b) = (find(&mut parent, k), find(&mut parent, g.apply(k, p)));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut root_index = vec![usize::MAX; p + 1];
    for k in 1..=p {
        let r = find(&mut parent, k);
        if root_index[r] == usize::MAX {
            root_index[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[root_index[r]].push(k);
    }
    IndexSymmetry {
        p,
        generators: generators.to_vec(),
        orbits,
    }
}
