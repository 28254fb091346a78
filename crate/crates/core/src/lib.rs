//! Proportional list coloring with a bounded palette.
//!
//! - [`graph`]: simple graphs, builders, structural analysis, edge-list I/O.
//! - [`assignment`]: `(k, ℓ)`-assignments, multiplicities, quotas, enumeration.
//! - [`solver`]: backtracking search for a proportional `L`-coloring.
//! - [`verifier`]: exhaustive proportional `(k, ℓ)`-choosability checks.
//! - [`witnesses`]: explicit bad assignments and coloring devices.
//! - [`classifier`]: rule-based classification of proportional `(2, ℓ)`-choosability.

pub mod assignment;
pub mod classifier;
pub mod graph;
pub mod solver;
pub mod verifier;
pub mod witnesses;

pub use assignment::{
    assignment_to_index, enumerate_assignments, index_to_assignment, multiplicities, quotas,
    AssignmentError, AssignmentSpace, Color, EnumerationLimit, EnumerationMode, ListAssignment,
    MultiplicityTable, PalettePermutation, Quota, QuotaTable, DEFAULT_ENUMERATION_CAP,
};
pub use classifier::{
    classify, equitably_2_colorable, Classification, ClassifyError, EquitableTwoColoring, Status,
};
pub use graph::{Analysis, Graph, GraphError, GraphSpec, Vertex};
pub use solver::{
    find_proportional_coloring, validate, ProportionalColoring, Pruning, SolveOutcome, SolveStatus,
    Solver, SolverOptions, VertexOrder, Violation,
};
pub use verifier::{
    verify_choosable, verify_table, RowOutcome, TableReport, TableRow, TableRowReport, Verdict,
    VerifyError, VerifyOptions, Witness,
};
pub use witnesses::{
    alpha_coloring, alpha_pattern, extend_with_clique, parity_augment, transplant,
    witness_cycle_23, witness_double_claw_25, witness_even_cycle_24, witness_odd_cycle,
    witness_p3p3_24, witness_p9_24, witness_star_23, AlphaVariant, ParityAugmentation,
    WitnessError, WitnessSpec,
};
