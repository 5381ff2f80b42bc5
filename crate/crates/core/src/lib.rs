//! Regge-Wheeler and Zerilli perturbations of Schwarzschild: background
//! geometry and potentials, Gauss hypergeometric evaluation, the Morawetz
//! multiplier construction with its numerically pinned gluing constants, and
//! characteristic (double-null) evolution of the 1+1 reduced equations with
//! decay diagnostics.

pub mod background;
pub mod error;
pub mod evolve;
pub mod morawetz;
pub mod specfun;

pub use background::{BackgroundParams, EquationKind, ModeSpec};
pub use error::{Error, Result};
