//! Exact line-bundle cohomology and strong exceptional collections of line
//! bundles on toric Deligne–Mumford stacks, computed from a stacky fan.
//!
//! Everything is exact: integers are arbitrary precision and all polyhedral
//! work happens over the rationals.

pub mod bigjson;
pub mod cohomology;
pub mod collections;
pub mod complex;
pub mod error;
pub mod exactlin;
pub mod fan;
pub mod fixtures;
pub mod geometry;
pub mod picard;
pub mod windows;

pub use error::{Result, TorexError};
pub use exactlin::{GroupElement as PicClass, Rat};
pub use fan::{FanClass, StackyFan};
pub use picard::PicardGroup;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
