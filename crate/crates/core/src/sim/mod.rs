// SPDX-License-Identifier: Apache-2.0
//! Statevector simulation of graph states and measurement patterns.

pub mod linalg;
pub mod oracle;
pub mod run;
pub mod state;

pub use run::{
    check_determinism, extract_unitary, max_qubits, prepare_graph_state, run_pattern, run_pattern_capped,
    stabilizer_residual, BranchPolicy, BranchResult, DeterminismOptions, DeterminismReport,
};
pub use oracle::{dressed_state, graph_state, project_graph_state};
pub use state::StateVector;
