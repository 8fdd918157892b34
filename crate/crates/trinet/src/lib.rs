//! Analysis toolkit for tripartite quantum states in the triangle network:
//! which states can three pairwise-connected sources prepare, with and
//! without shared classical randomness?
//!
//! - [`linalg`]: dense complex multipartite state algebra.
//! - [`states`]: the state catalog and triangle-network assembly.
//! - [`criteria`]: necessary preparability criteria and witness operators.
//! - [`seesaw`]: alternating maximization of the network overlap.
//! - [`bounds`]: analytical Schmidt-coefficient upper bounds on the overlap.
//! - [`tensorrank`]: matrix-multiplication tensor and decomposition checks.
//! - [`io`]: JSON state files.

pub mod bounds;
pub mod criteria;
pub mod error;
pub mod io;
pub mod linalg;
pub mod random;
pub mod seesaw;
pub mod states;
pub mod tensorrank;

pub use error::{Error, Result};
pub use linalg::{C64, DensityState, PureState, SchmidtData, UnitaryOp};
