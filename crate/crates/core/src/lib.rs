//! Duration-aware qubit routing for NISQ coupling graphs.
//!
//! The pipeline is parse ([`qasm`]), place ([`initial`]), route ([`router`]
//! or [`baseline`]), schedule ([`sched`]) and check ([`verify`]).

pub mod arch;
pub mod baseline;
pub mod circuit;
pub mod commute;
pub mod initial;
pub mod mapping;
pub mod pipeline;
pub mod qasm;
pub mod report;
pub mod router;
pub mod sched;
pub mod verify;

pub use arch::{Architecture, DurationMap};
pub use circuit::{Circuit, Gate, GateKind, MappedCircuit};
pub use mapping::Mapping;
pub use router::{route, MappedSchedule, RouterOptions, ScheduledGate};
