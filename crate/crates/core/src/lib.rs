//! Surface quotients of Fuchsian buildings `I_{p,q}`.
//!
//! The crate builds right-angled tessellations of closed orientable
//! surfaces by p-gons, traces their geodesic loops, finds good edge
//! colorings and, from those, assigns cyclic local groups whose links are
//! the complete bipartite graphs `K_{q_i, q_{i+1}}`. A successful assignment
//! certifies a uniform lattice acting on `I_{p,q}` with the surface as
//! quotient.
//!
//! ```
//! use fq_core::lattice::{decide, TypeSequence, Verdict};
//!
//! let q: TypeSequence = "2,3,2,3,2,3".parse().unwrap();
//! let decision = decide(6, &q, 2, true).unwrap();
//! assert!(matches!(decision.verdict, Verdict::Exists { certificate: Some(ref c), .. } if c.certified));
//! ```

pub mod cli;
pub mod coloring;
pub mod complex;
pub mod error;
pub mod homology;
pub mod io;
pub mod lattice;
pub mod loops;
pub mod tessellation;

pub use complex::{build_complex, validate, EdgeType, SurfaceComplex};
pub use error::{
    ColoringError, ComplexError, FormatError, LatticeError, LoopError, TessellationError,
};
