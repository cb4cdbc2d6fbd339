//! File formats, oracle cross-checks, demos and benchmarks around
//! [`lpt_core`].

pub mod bench;
pub mod check;
pub mod demo;
pub mod dump;
pub mod generate;
pub mod io;
pub mod sim;

pub use lpt_core as core;
