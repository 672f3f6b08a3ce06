//! V2V broadcast capacity and delay model, a registry of connected and
//! automated vehicle applications with a spatiotemporal classifier, a
//! feasibility checker joining the two, and a discrete-event MAC simulator
//! that checks the model against TDMA and random-access channel sharing.

pub mod error;
pub mod feasibility;
pub mod model;
pub mod registry;
pub mod sim;

pub use error::{Error, Result};
