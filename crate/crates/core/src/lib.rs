//! Toric cluster variables of the dP3 quiver, computed three ways.
//!
//! * [`quiver`] and [`walk`] run seed mutation along generalized tau words.
//! * [`formula`] builds the closed-form Laurent polynomial for a lattice point.
//! * [`contour`], [`tiling`] and [`dimer`] cut subgraphs out of the dP3 brane
//!   tiling and sum weighted perfect matchings.
//!
//! The three routes agree; the test suites cross-check them.

pub mod contour;
pub mod dimer;
pub mod error;
pub mod formula;
pub mod laurent;
pub mod quiver;
pub mod tiling;
pub mod walk;

pub use contour::SixTuple;
pub use error::{DimerError, LaurentError, QuiverError, TilingError, WalkError};
pub use laurent::LaurentPoly;
pub use walk::LatticePoint;
