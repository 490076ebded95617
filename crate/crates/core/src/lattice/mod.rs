//! Thickness sequences, group assignments, symmetry obstructions and the
//! existence decision.

pub mod decide;
pub mod groups;
pub mod obstructions;
pub mod sequence;

pub use decide::{
    certificate, certify_coloring, certify_complex, decide, Certificate, Decision, Method, Reason,
    Verdict,
};
pub use groups::{
    assign_groups, assign_groups_unchecked, build_link_graph, verify_link_conditions, Factor,
    FactorSubgroup, GroupAssignment, LinkGraph, VertexCheck,
};
pub use obstructions::{
    loop_obstructions, loop_obstructions_with, loop_types_from_labels, symmetry_closure,
    IndexSymmetry, SymmetryGenerator,
};
pub use sequence::{
    alternating_noncoprime, is_four_symmetric_about, is_two_symmetric_about, symmetric_axes,
    AlternatingDecomposition, SymmetryKind, TypeSequence,
};
