//! Exact and multiprecision tools for the Gaudin model.

pub mod algebra;
pub mod cartan;
pub mod rep;
pub mod canonical;
pub mod master;
pub mod forms;
pub mod sov;
pub mod solver;
pub mod io;
