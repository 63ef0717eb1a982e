//! Berezin transforms, Berezin ranges and Berezin numbers of Toeplitz and
//! composition operators on the weighted Bergman spaces `A²_γ(𝔻)`.
//!
//! Every closed-form transform in the crate is paired with an independent
//! numerical route (disk quadrature, kernel power series or truncated
//! matrices) so that identities can be checked rather than assumed.

pub mod bergman;
pub mod composition;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod range;
pub mod symbols;
pub mod toeplitz;
pub mod verify;

pub use bergman::{DiskPoint, SpaceParams};
pub use error::{Error, Result};
pub use symbols::{Automorphism, SymbolExpr};

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
