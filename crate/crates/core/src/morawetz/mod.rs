//! Morawetz multiplier machinery: bulk quantities, potential lower bounds,
//! the hypergeometric transformation, Frobenius solutions, the glued positive
//! solution with its numerically pinned constants, and the Hardy check.

mod frobenius;
mod glue;
mod hardy;
mod hypergeom;
mod multiplier;

pub use frobenius::{
    frobenius_derivative, frobenius_eval, matching_constants, ratio_limit, FrobeniusBranch,
    MatchingConstants, RatioLimit,
};
pub use glue::{glue, glue_with, GlueReport, GluedSolution};
pub use hardy::{hardy_check, random_bump_suite, BumpFunction, HardyReport};
pub use hypergeom::{
    derive_params, transformed_w, transformed_w_from_spec, HypergeomParams, PotentialSpec, Region,
    RW_BOUND, ZERILLI_INNER, ZERILLI_OUTER,
};
pub use multiplier::{
    cal_v, log_grid, lower_bound_potentials, multiplier_quantities, verify_morawetz_lower_bound,
    LowerBounds, MultiplierQuantities, ScanReport,
};

use crate::error::Result;
use serde::Serialize;

/// The five constants of the glued-solution construction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GoldenConstants {
    pub w11: f64,
    pub w21: f64,
    pub w22: f64,
    pub lambda: f64,
    pub omega: f64,
}

/// Compute all five constants from scratch.
pub fn golden_constants() -> Result<GoldenConstants> {
    let g = glue()?;
    Ok(GoldenConstants {
        w11: g.constants.w11,
        w21: g.constants.w21,
        w22: g.constants.w22,
        lambda: g.ratio.value(),
        omega: g.omega,
    })
}
