//! Versioned JSON artifacts.
//!
//! Every document is a pretty-printed object whose first key is `"format"`.
//! Listings are sorted by id, so writing the same value twice gives the same
//! bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::coloring::{ColoringOutcome, ContradictionWitness, EdgeColoring, SolveMode};
use crate::complex::{
    build_complex, Chirality, EdgeSpec, FaceSpec, Side, SurfaceComplex, ValidationReport,
};
use crate::error::FormatError;
use crate::lattice::{Certificate, Decision};
use crate::loops::LoopReport;
use crate::tessellation::SubdivisionMap;

pub const COMPLEX_FORMAT: &str = "fq-complex/1";
pub const LOOPS_FORMAT: &str = "fq-loops/1";
pub const COLORING_FORMAT: &str = "fq-coloring/1";
pub const CERT_FORMAT: &str = "fq-cert/1";
pub const SUBDIV_FORMAT: &str = "fq-subdiv/1";
pub const VALIDATION_FORMAT: &str = "fq-validation/1";
pub const DECISION_FORMAT: &str = "fq-decision/1";

#[derive(Serialize)]
struct Envelope<'a, T> {
    format: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

#[derive(Deserialize)]
struct FormatProbe {
    format: String,
}

/// Pretty JSON with the `"format"` key first and a trailing newline.
pub fn to_document<T: Serialize>(format: &str, body: &T) -> String {
    let mut s =
        serde_json::to_string_pretty(&Envelope { format, body }).expect("artifact types serialize");
    s.push('\n');
    s
}

fn from_document<T: DeserializeOwned>(
    expected: &'static str,
    text: &str,
) -> Result<T, FormatError> {
    let probe: FormatProbe = serde_json::from_str(text)?;
    if probe.format != expected {
        return Err(FormatError::WrongFormat {
            expected,
            found: probe.format,
        });
    }
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    id: usize,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    edge_type: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FaceRecord {
    id: usize,
    chirality: Chirality,
    sides: Vec<Side>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ComplexDoc {
    p: usize,
    edges: Vec<EdgeRecord>,
    faces: Vec<FaceRecord>,
}

pub fn complex_to_json(complex: &SurfaceComplex) -> String {
    let (edges, faces) = complex.to_specs();
    let doc = ComplexDoc {
        p: complex.p(),
        edges: edges
            .into_iter()
            .map(|e| EdgeRecord {
                id: e.id,
                edge_type: e.edge_type,
            })
            .collect(),
        faces: faces
            .into_iter()
            .map(|f| FaceRecord {
                id: f.id,
                chirality: f.chirality,
                sides: f.sides,
            })
            .collect(),
    };
    to_document(COMPLEX_FORMAT, &doc)
}

/// Parses a complex file. Records may appear in any order; ids must be dense.
pub fn complex_from_json(text: &str) -> Result<SurfaceComplex, FormatError> {
    let doc: ComplexDoc = from_document(COMPLEX_FORMAT, text)?;
    let edges: Vec<EdgeSpec> = doc
        .edges
        .into_iter()
        .map(|e| EdgeSpec {
            id: e.id,
            edge_type: e.edge_type,
        })
        .collect();
    let faces: Vec<FaceSpec> = doc
        .faces
        .into_iter()
        .map(|f| FaceSpec {
            id: f.id,
            chirality: f.chirality,
            sides: f.sides,
        })
        .collect();
    Ok(build_complex(doc.p, &edges, &faces)?)
}

pub fn loops_to_json(report: &LoopReport) -> String {
    to_document(LOOPS_FORMAT, report)
}

pub fn validation_to_json(report: &ValidationReport) -> String {
    to_document(VALIDATION_FORMAT, report)
}

pub fn subdivision_to_json(map: &SubdivisionMap) -> String {
    to_document(SUBDIV_FORMAT, map)
}

pub fn subdivision_from_json(text: &str) -> Result<SubdivisionMap, FormatError> {
    from_document(SUBDIV_FORMAT, text)
}

pub fn certificate_to_json(cert: &Certificate) -> String {
    to_document(CERT_FORMAT, cert)
}

pub fn certificate_from_json(text: &str) -> Result<Certificate, FormatError> {
    from_document(CERT_FORMAT, text)
}

pub fn decision_to_json(decision: &Decision) -> String {
    to_document(DECISION_FORMAT, decision)
}

/// Edge id -> color, written as a JSON object in id order.
#[derive(Debug)]
struct ColorMap(Vec<u8>);

impl Serialize for ColorMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.0.iter().enumerate())
    }
}

impl<'de> Deserialize<'de> for ColorMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, u8>::deserialize(deserializer)?;
        let mut by_id = BTreeMap::new();
        for (key, c) in raw {
            let id: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("bad edge id {key:?}")))?;
            if c > 1 {
                return Err(D::Error::custom(format!(
                    "edge {id} has color {c}, expected 0 or 1"
                )));
            }
            by_id.insert(id, c);
        }
        if let Some((pos, _)) = by_id.keys().enumerate().find(|(pos, &id)| *pos != id) {
            return Err(D::Error::custom(format!("coloring misses edge {pos}")));
        }
        Ok(ColorMap(by_id.into_values().collect()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
enum ColoringDoc {
    Colored {
        mode: SolveMode,
        colors: ColorMap,
        base_vertex: usize,
        seed: Vec<u8>,
    },
    Contradiction {
        mode: SolveMode,
        /// Constraints along an odd cycle, in order.
        witness: ContradictionWitness,
    },
}

pub fn coloring_to_json(outcome: &ColoringOutcome, mode: SolveMode) -> String {
    let doc = match outcome {
        ColoringOutcome::Colored(c) => ColoringDoc::Colored {
            mode,
            colors: ColorMap(c.colors.clone()),
            base_vertex: c.base_vertex,
            seed: c.seed.clone(),
        },
        ColoringOutcome::Contradiction(w) => ColoringDoc::Contradiction {
            mode,
            witness: w.clone(),
        },
    };
    to_document(COLORING_FORMAT, &doc)
}

/// Reads a coloring file; contradiction files are rejected.
pub fn coloring_from_json(text: &str) -> Result<EdgeColoring, FormatError> {
    match from_document::<ColoringDoc>(COLORING_FORMAT, text)? {
        ColoringDoc::Colored {
            colors,
            base_vertex,
            seed,
            ..
        } => Ok(EdgeColoring {
            colors: colors.0,
            base_vertex,
            seed,
        }),
        ColoringDoc::Contradiction { .. } => Err(FormatError::Invalid(
            "file records a contradiction, not a coloring".into(),
        )),
    }
}

pub fn read_to_string(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_string(path: &Path, contents: &str) -> Result<(), FormatError> {
    std::fs::write(path, contents).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}
