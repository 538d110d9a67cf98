//! Exact computation of the cup product on the Hochschild cohomology
//! HH•(S(V), S(V)#G) of a finite matrix group G acting on V = C^n.

pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod exterior;
pub mod group;
pub mod hochschild;
pub mod invariant;
pub mod linalg;
pub mod poly;
pub mod reflength;
pub mod verify;
pub mod poset;

pub use cyclotomic::CycNum;
pub use error::{Error, Result};
