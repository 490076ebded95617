//! Existence decision for lattices acting on `I_{p,q}` with quotient a
//! genus-`g` surface, and the certificates backing positive answers.

use serde::{Deserialize, Serialize};

use crate::coloring::{solve_good_coloring, ColoringOutcome, EdgeColoring, SolveMode};
use crate::complex::SurfaceComplex;
use crate::error::LatticeError;
use crate::lattice::groups::{assign_groups, build_link_graph, FactorSubgroup, GroupAssignment};
use crate::lattice::sequence::{
    alternating_noncoprime, symmetric_axes, SymmetryKind, TypeSequence,
};
use crate::tessellation::{
    build_block_tessellation, build_rect_tessellation, default_grid, derived_sequence, face_count,
    subdivide,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    /// Block tessellation colored directly.
    Block,
    /// Rectangular tessellation cut into two pieces per face along axis `m`.
    Subdiv2 { axis: usize },
    /// Rectangular tessellation cut into four pieces per face along axis `m`.
    Subdiv4 { axis: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// `F ≡ 2 (mod 4)` and `q` has no 2-symmetry axis.
    TwoSymmetry,
    /// `F` odd and `q` has no 4-symmetry axis.
    FourSymmetry,
    NotAlternatingNonCoprime,
    /// No axis with an even gcd over the entries at odd offsets.
    OddOffsetGcdOdd,
    /// `d` or `e` is odd.
    GcdParity,
    /// No tessellation method is available for a prime face count.
    PrimeFaceCount,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Exists {
        #[serde(flatten)]
        method: Method,
        certificate: Option<Box<Certificate>>,
    },
    RuledOut {
        reason: Reason,
    },
    Unknown {
        reason: Reason,
    },
}

impl Verdict {
    pub fn exists(&self) -> bool {
        matches!(self, Verdict::Exists { .. })
    }

    pub fn is_ruled_out(&self) -> bool {
        matches!(self, Verdict::RuledOut { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub p: usize,
    pub genus: usize,
    pub faces: usize,
    pub q: TypeSequence,
    #[serde(flatten)]
    pub verdict: Verdict,
}

/// How the certified complex was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub builder: String,
    /// Grid dimensions for the rectangular builder.
    pub grid: Option<(usize, usize)>,
    pub pieces: Option<usize>,
    pub axis: Option<usize>,
    pub p: usize,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCertificate {
    pub vertex: usize,
    pub types: (usize, usize),
    pub product: bool,
    pub intersection: bool,
    pub index: bool,
    pub index_sums: (u64, u64),
    /// Sizes of the two sides of the coset link.
    pub link_sides: (usize, usize),
    pub link_complete_bipartite: bool,
}

/// Checkable summary of a group assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub construction: Option<Construction>,
    pub q: TypeSequence,
    pub d: u64,
    pub e: u64,
    pub colors: Vec<u8>,
    pub edge_groups: Vec<FactorSubgroup>,
    pub face_groups: Vec<FactorSubgroup>,
    pub vertices: Vec<VertexCertificate>,
    /// All algebraic conditions hold and every link is complete bipartite.
    pub certified: bool,
}

/// Runs the coset-link oracle at every vertex and packages the result.
pub fn certificate(
    assignment: &GroupAssignment,
    construction: Option<Construction>,
) -> Certificate {
    let vertices: Vec<VertexCertificate> = assignment
        .checks
        .iter()
        .map(|c| {
            let link = build_link_graph(assignment, c.vertex);
            VertexCertificate {
                vertex: c.vertex,
                types: c.types,
                product: c.product,
                intersection: c.intersection,
                index: c.index,
                index_sums: c.index_sums,
                link_sides: link.sides(),
                link_complete_bipartite: link.complete_bipartite,
            }
        })
        .collect();
    let certified = assignment.certified && vertices.iter().all(|v| v.link_complete_bipartite);
    Certificate {
        construction,
        q: assignment.q.clone(),
        d: assignment.decomposition.d,
        e: assignment.decomposition.e,
        colors: assignment.colors.clone(),
        edge_groups: assignment.edge_groups.clone(),
        face_groups: assignment.face_groups.clone(),
        vertices,
        certified,
    }
}

/// Colors `complex`, assigns groups for `q` and certifies the result.
pub fn certify_complex(
    complex: &SurfaceComplex,
    q: &TypeSequence,
    construction: Option<Construction>,
) -> Result<Certificate, LatticeError> {
    let coloring = match solve_good_coloring(complex, SolveMode::Propagate)? {
        ColoringOutcome::Colored(c) => c,
        ColoringOutcome::Contradiction(w) => {
            return Err(LatticeError::NotGoodColoring(format!(
                "parity contradiction along {} constraints",
                w.cycle.len()
            )))
        }
    };
    certify_coloring(complex, &coloring, q, construction)
}

pub fn certify_coloring(
    complex: &SurfaceComplex,
    coloring: &EdgeColoring,
    q: &TypeSequence,
    construction: Option<Construction>,
) -> Result<Certificate, LatticeError> {
    let assignment = assign_groups(complex, coloring, q)?;
    Ok(certificate(&assignment, construction))
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|k| k * k <= n)
            .all(|k| !n.is_multiple_of(k))
}

fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Decides whether a lattice `Γ_{p,q,g}` exists, following the proved
/// constructions:
///
/// * `F ≡ 0 (mod 4)`: exists for every alternating non-coprime `q`.
/// * `F ≡ 2 (mod 4)`: needs a 2-symmetry axis; exists when `q` is
///   alternating non-coprime and, for some axis `m`, the entries
///   `q_{m±1}, q_{m±3}, ...` have an even gcd.
/// * `F` odd: needs a 4-symmetry axis; exists when `F` is composite, `q`
///   is alternating non-coprime and both gcds are even.
///
/// Everything else is `Unknown`. With `certify` the construction is run end
/// to end and any failure is reported as [`LatticeError::InternalError`].
pub fn decide(
    p: usize,
    q: &TypeSequence,
    g: usize,
    certify: bool,
) -> Result<Decision, LatticeError> {
    if p % 2 == 1 {
        return Err(LatticeError::OddPUnsupported(p));
    }
    if q.p() != p {
        return Err(LatticeError::SequenceLength {
            found: q.p(),
            expected: p,
        });
    }
    let faces = face_count(p, g)?;
    let entries = q.entries();
    let decomposition = alternating_noncoprime(entries);

    let verdict = if faces % 4 == 0 {
        match decomposition {
            Some(_) => Verdict::Exists {
                method: Method::Block,
                certificate: None,
            },
            None => Verdict::Unknown {
                reason: Reason::NotAlternatingNonCoprime,
            },
        }
    } else if faces % 2 == 0 {
        let axes = symmetric_axes(entries, SymmetryKind::Two)?;
        let odd_offset_gcd = |m: usize| {
            (1..p)
                .step_by(2)
                .map(|j| q.get((m + j) as i64))
                .fold(0, gcd)
        };
        if axes.is_empty() {
            Verdict::RuledOut {
                reason: Reason::TwoSymmetry,
            }
        } else if decomposition.is_none() {
            Verdict::Unknown {
                reason: Reason::NotAlternatingNonCoprime,
            }
        } else if let Some(&axis) = axes.iter().find(|&&m| odd_offset_gcd(m) % 2 == 0) {
            Verdict::Exists {
                method: Method::Subdiv2 { axis },
                certificate: None,
            }
        } else {
            Verdict::Unknown {
                reason: Reason::OddOffsetGcdOdd,
            }
        }
    } else {
        let axes = if p.is_multiple_of(4) {
            symmetric_axes(entries, SymmetryKind::Four)?
        } else {
            Default::default()
        };
        match (axes.first(), decomposition) {
            (None, _) => Verdict::RuledOut {
                reason: Reason::FourSymmetry,
            },
            _ if faces == 1 || is_prime(faces) => Verdict::Unknown {
                reason: Reason::PrimeFaceCount,
            },
            (_, None) => Verdict::Unknown {
                reason: Reason::NotAlternatingNonCoprime,
            },
            (Some(_), Some(dec)) if dec.d % 2 == 1 || dec.e % 2 == 1 => Verdict::Unknown {
                reason: Reason::GcdParity,
            },
            (Some(&axis), Some(_)) => Verdict::Exists {
                method: Method::Subdiv4 { axis },
                certificate: None,
            },
        }
    };

    let verdict = match verdict {
        Verdict::Exists { method, .. } if certify => {
            let cert = run_pipeline(p, q, g, faces, method).map_err(|e| {
                LatticeError::InternalError(format!("{method:?} construction did not certify: {e}"))
            })?;
            if !cert.certified {
                return Err(LatticeError::InternalError(format!(
                    "{method:?} certificate has failing vertices"
                )));
            }
            Verdict::Exists {
                method,
                certificate: Some(Box::new(cert)),
            }
        }
        other => other,
    };
    Ok(Decision {
        p,
        genus: g,
        faces,
        q: q.clone(),
        verdict,
    })
}

fn run_pipeline(
    p: usize,
    q: &TypeSequence,
    g: usize,
    faces: usize,
    method: Method,
) -> Result<Certificate, LatticeError> {
    let summary = |builder: &str,
                   grid,
                   pieces,
                   axis,
                   c: &SurfaceComplex|
     -> Result<Construction, LatticeError> {
        Ok(Construction {
            builder: builder.to_string(),
            grid,
            pieces,
            axis,
            p: c.p(),
            faces: c.num_faces(),
            edges: c.num_edges(),
            vertices: c.num_vertices()?,
        })
    };
    match method {
        Method::Block => {
            let complex = build_block_tessellation(p, g)?;
            let construction = summary("block", None, None, None, &complex)?;
            certify_complex(&complex, q, Some(construction))
        }
        Method::Subdiv2 { axis } | Method::Subdiv4 { axis } => {
            let pieces = if matches!(method, Method::Subdiv2 { .. }) {
                2
            } else {
                4
            };
            let (a, b) = default_grid(faces);
            let source = build_rect_tessellation(p, a, b)?;
            let (complex, _) = subdivide(&source, pieces, Some(axis))?;
            let derived = derived_sequence(q, pieces, axis)?;
            let construction = summary("rect", Some((a, b)), Some(pieces), Some(axis), &complex)?;
            certify_complex(&complex, &derived, Some(construction))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> TypeSequence {
        s.parse().unwrap()
    }

    #[test]
    fn helpers() {
        assert!(is_prime(7) && !is_prime(9) && !is_prime(1));
    }

    #[test]
    fn branches_without_certificates() {
        let d = decide(6, &q("2,3,2,3,2,3"), 2, false).unwrap();
        assert_eq!(d.faces, 4);
        assert_eq!(
            d.verdict,
            Verdict::Exists {
                method: Method::Block,
                certificate: None
            }
        );

        let d = decide(8, &q("2,3,4,5,2,3,4,5"), 2, false).unwrap();
        assert_eq!(
            d.verdict,
            Verdict::RuledOut {
                reason: Reason::TwoSymmetry
            }
        );

        let d = decide(8, &q("3,2,9,2,3,2,9,2"), 2, false).unwrap();
        assert_eq!(
            d.verdict,
            Verdict::Exists {
                method: Method::Subdiv2 { axis: 1 },
                certificate: None
            }
        );

        let d = decide(12, &TypeSequence::constant(12, 3).unwrap(), 2, false).unwrap();
        assert_eq!(
            d.verdict,
            Verdict::Unknown {
                reason: Reason::PrimeFaceCount
            }
        );

        let d = decide(12, &TypeSequence::constant(12, 3).unwrap(), 10, false).unwrap();
        assert_eq!(
            d.verdict,
            Verdict::Unknown {
                reason: Reason::GcdParity
            }
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            decide(7, &TypeSequence::constant(7, 2).unwrap(), 2, false),
            Err(LatticeError::OddPUnsupported(7))
        ));
        assert!(matches!(
            decide(6, &TypeSequence::constant(8, 2).unwrap(), 2, false),
            Err(LatticeError::SequenceLength {
                found: 8,
                expected: 6
            })
        ));
        assert!(decide(10, &TypeSequence::constant(10, 2).unwrap(), 2, false).is_err());
    }

    #[test]
    fn verdict_json_shape() {
        let v = Verdict::Exists {
            method: Method::Subdiv2 { axis: 3 },
            certificate: None,
        };
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["verdict"], "exists");
        assert_eq!(json["method"], "subdiv2");
        assert_eq!(json["axis"], 3);
        let v = Verdict::RuledOut {
            reason: Reason::TwoSymmetry,
        };
        assert_eq!(serde_json::to_value(&v).unwrap()["reason"], "two_symmetry");
    }
}
