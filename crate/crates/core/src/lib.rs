//! Cache-aided interference networks with caches at transmitters and
//! receivers: exact placement, delivery planning with zero-forcing,
//! interference cancellation and alignment accounting, numerical
//! zero-forcing checks, and sDoF/NDT evaluation.

pub mod cli;
pub mod combinatorics;
pub mod delivery;
pub mod error;
pub mod metrics;
pub mod model;
pub mod phy;
pub mod placement;
pub mod rational;

pub use combinatorics::{binomial, NodeSet};
pub use error::{Error, Result};
pub use model::{DemandVector, NetworkConfig, SubfileId, TParams};
pub use rational::Rational;
