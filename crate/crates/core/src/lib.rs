pub mod bench;
pub mod cli;
pub mod defaults;
pub mod environment;
pub mod error;
pub mod io;
pub mod planner;
pub mod point;
pub mod potential;
pub mod tree;

pub use environment::{Bounds, Environment, Obstacle};
pub use error::{PlanError, Result};
pub use point::ConfigPoint;

/// Library version, recorded in every run document.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
