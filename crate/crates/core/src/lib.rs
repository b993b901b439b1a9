//! Linear-depth QFT schedules for constrained qubit topologies.

pub mod bench;
pub mod circuit;
mod driver;
pub mod error;
pub mod faults;
pub mod grid;
pub mod heavyhex;
pub mod lnn;
pub mod qft;
pub mod sycamore;
pub mod synth;
pub mod sequencer;
pub mod topology;
pub mod verify;

pub use circuit::{Metrics, Mode, ScheduledCircuit};
pub use error::{Error, Result};
pub use topology::{ArchKind, CouplingGraph};
