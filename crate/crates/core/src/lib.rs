//! Logic gates on trapped-ion registers driven by carrier and sideband pulses.
//!
//! Each ion contributes a two-level internal state and all ions share one
//! truncated phonon mode. Pulses act on a single ion and are built into
//! schedules, which can be simulated, inverted, serialized and checked against
//! target gates.

pub mod angle;
pub mod constructions;
pub mod dd;
pub mod document;
pub mod error;
pub mod hilbert;
pub mod numerics;
pub mod pulse;
pub mod schedule;
pub mod verify;

pub use angle::Angle;
pub use error::{Error, Result};
pub use hilbert::{Operator, RegisterBasisState, StateVector, TrapConfig};
pub use pulse::{Pulse, PulseKind};
pub use schedule::Schedule;
