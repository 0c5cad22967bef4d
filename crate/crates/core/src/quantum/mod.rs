//! Measurement stage: graph-state rewriting and its stabilizer oracle.

pub mod clifford;
pub mod graph_state;
pub mod tableau;

pub use clifford::{Clifford, Pauli, SignedPauli};
pub use graph_state::{
    contract_to_hexagonal, contract_to_hexagonal_with, graph_state_from, graph_state_from_grid, measurement_plan,
    verify_concentration, verify_contraction, verify_subgraph, Basis, GraphState, Measurement, MeasurementRecord, Outcome,
    TableauMirror, VerifyReport, TABLEAU_QUBIT_LIMIT,
};
pub use tableau::{stabilizer_groups_equal, tableau_from_graph, tableau_measure, PauliString, StabilizerTableau};
