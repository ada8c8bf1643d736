//! Semi-instantiated abstract argumentation networks.
//!
//! Frames carry three-valued Caminada labellings. Nodes may be instantiated
//! with propositional, monadic or S5 formulas; the instantiated frame is then
//! solved either directly through its three-valued models or syntactically,
//! by replacing every node with a Boolean attack formation and computing the
//! non-toxic extensions of the resulting top-net.

pub mod baf;
pub mod bipolar;
pub mod cdnet;
pub mod dot;
pub mod error;
pub mod frames;
pub mod io;
pub mod kleene;
pub mod limits;
pub mod monadic;
pub mod pipeline;
pub(crate) mod solve;
pub mod topnet;
pub mod tri;

pub use error::{Error, Result};
pub use frames::{ArgFrame, Assignment, Extension, Labelling, Level, SccPartition, Valuation};
pub use tri::Tri;

/// Names only library transformations may mint.
pub const RESERVED: [&str; 4] = ["TOP", "TAU", "STAR", "INF"];
/// The truth node.
pub const TOP: &str = "TOP";
