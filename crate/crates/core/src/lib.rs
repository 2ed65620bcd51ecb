// SPDX-License-Identifier: Apache-2.0
//! Measurement-based quantum computing with YZ-plane measurements: open
//! graphs, flows, Pauli algebra, a statevector simulator and pattern
//! builders.

pub mod clifford;
pub mod error;
pub mod flow;
pub mod gf2;
pub mod graph;
pub mod pattern;
pub mod patterns;
pub mod pauli;
pub mod sim;
pub mod suite;

pub use error::{Error, Result};
