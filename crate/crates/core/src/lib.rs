//! Combinatorial Deligne sheaves and intersection homology.
//!
//! Two independent pipelines compute the same numbers on a doubly subdivided
//! stratified pseudomanifold: the iterated truncated pushforward of the
//! constant sheaf on the finite star topology, and perversity-filtered
//! simplicial chains.

pub mod deligne;
pub mod error;
pub mod fintop;
pub mod ih;
pub mod laws;
pub mod io;
pub mod linalg;
pub mod scx;
pub mod sheaf;
pub mod strata;
pub mod subdivision;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
