//! The glued positive solution of -u'' + W u = 0 across the region boundary
//! x = M, built from the normalized Frobenius solutions.

use super::frobenius::{
    frobenius_derivative, frobenius_eval, matching_constants, ratio_limit, FrobeniusBranch,
    MatchingConstants, RatioLimit,
};
use super::hypergeom::{
    derive_params, transformed_w_from_spec, HypergeomParams, PotentialSpec, ZERILLI_INNER,
    ZERILLI_OUTER,
};
use crate::error::{Error, Result};
use serde::Serialize;

/// The glued solution u (units M = 1): u = u11 on x <= 1 and
/// omega u22 + (1-omega) u21 on x > 1, each factor normalized to 1 at x = 1,
/// so that u(1) = 1 and u'(1) is continuous by the choice of omega.
#[derive(Debug, Clone)]
pub struct GluedSolution {
    inner: HypergeomParams,
    outer: HypergeomParams,
    n11: f64,
    n12: f64,
    n21: f64,
    n22: f64,
    pub constants: MatchingConstants,
    pub omega: f64,
    pub ratio: RatioLimit,
}

/// Numerical certification of the glued solution.
#[derive(Debug, Clone, Serialize)]
pub struct GlueReport {
    pub omega: f64,
    pub lambda: f64,
    /// (1-omega)/omega - lambda, required positive.
    pub omega_margin: f64,
    /// |u'(1-) - u'(1+)|.
    pub c1_mismatch: f64,
    pub min_u: f64,
    pub min_u_x: f64,
    /// max over sampled x of |-u'' + W u| / scale.
    pub max_ode_residual: f64,
    pub g_at_1: f64,
    pub g_min: f64,
}

/// Construct the glued solution for the inner/outer potential specs.
pub fn glue_with(inner_spec: &PotentialSpec, outer_spec: &PotentialSpec) -> Result<GluedSolution> {
    let inner = derive_params(inner_spec)?;
    let outer = derive_params(outer_spec)?;
    let constants = matching_constants(&inner, &outer)?;
    let omega = (constants.w11 - constants.w21) / (constants.w22 - constants.w21);
    let ratio = ratio_limit(&outer)?;
    if (1.0 - omega) / omega <= ratio.value() {
        return Err(Error::Positivity(format!(
            "(1-omega)/omega = {} does not dominate the ratio limit {}",
            (1.0 - omega) / omega,
            ratio.value()
        )));
    }
    Ok(GluedSolution {
        n11: frobenius_eval(&inner, FrobeniusBranch::First, 1.0)?,
        n12: frobenius_eval(&inner, FrobeniusBranch::Second, 1.0)?,
        n21: frobenius_eval(&outer, FrobeniusBranch::First, 1.0)?,
        n22: frobenius_eval(&outer, FrobeniusBranch::Second, 1.0)?,
        inner,
        outer,
        constants,
        omega,
        ratio,
    })
}

/// The glued solution for the Zerilli joint lower bound.
pub fn glue() -> Result<GluedSolution> {
    glue_with(&ZERILLI_INNER, &ZERILLI_OUTER)
}

impl GluedSolution {
    pub fn u11(&self, x: f64) -> Result<f64> {
        Ok(frobenius_eval(&self.inner, FrobeniusBranch::First, x)? / self.n11)
    }

    pub fn u12(&self, x: f64) -> Result<f64> {
        Ok(frobenius_eval(&self.inner, FrobeniusBranch::Second, x)? / self.n12)
    }

    pub fn u21(&self, x: f64) -> Result<f64> {
        Ok(frobenius_eval(&self.outer, FrobeniusBranch::First, x)? / self.n21)
    }

    pub fn u22(&self, x: f64) -> Result<f64> {
        Ok(frobenius_eval(&self.outer, FrobeniusBranch::Second, x)? / self.n22)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if x <= 1.0 {
            self.u11(x)
        } else {
            Ok(self.omega * self.u22(x)? + (1.0 - self.omega) * self.u21(x)?)
        }
    }

    fn derivative_left(&self) -> Result<f64> {
        Ok(frobenius_derivative(&self.inner, FrobeniusBranch::First, 1.0)? / self.n11)
    }

    fn derivative_right(&self) -> Result<f64> {
        let d21 = frobenius_derivative(&self.outer, FrobeniusBranch::First, 1.0)? / self.n21;
        let d22 = frobenius_derivative(&self.outer, FrobeniusBranch::Second, 1.0)? / self.n22;
        Ok(self.omega * d22 + (1.0 - self.omega) * d21)
    }

    fn w_joint(&self, x: f64) -> f64 {
        if x <= 1.0 {
            transformed_w_from_spec(&self.inner.source, x)
        } else {
            transformed_w_from_spec(&self.outer.source, x)
        }
    }

    fn ode_residual(&self, x: f64) -> Result<f64> {
        // keep the 5-point stencil on one side of the matching point
        let mut d = 0.02 * x;
        if x < 1.0 {
            d = d.min(0.4 * (1.0 - x));
        } else {
            d = d.min(0.4 * (x - 1.0));
        }
        if d <= 0.0 {
            return Ok(0.0);
        }
        let u = |xx: f64| self.eval(xx);
        let upp = (-u(x + 2.0 * d)? + 16.0 * u(x + d)? - 30.0 * u(x)? + 16.0 * u(x - d)?
            - u(x - 2.0 * d)?)
            / (12.0 * d * d);
        let w = self.w_joint(x);
        let scale = (w * u(x)?).abs().max(upp.abs()).max(u(x)?.abs());
        Ok((-upp + w * u(x)?).abs() / scale)
    }

    /// Certify u(1) = 1, C1 matching, positivity on the log grid, the ODE
    /// residual on both sides, and the positive minorant G = u22 + Lambda u21.
    pub fn verify(&self) -> Result<GlueReport> {
        let lambda = self.ratio.value();
        let c1_mismatch = (self.derivative_left()? - self.derivative_right()?).abs();
        if c1_mismatch > 1e-9 {
            return Err(Error::CrossCheck(format!(
                "C1 matching failed at x = 1: jump {c1_mismatch:.3e}"
            )));
        }
        let at_one = self.eval(1.0)?;
        if (at_one - 1.0).abs() > 1e-12 {
            return Err(Error::CrossCheck(format!("u(1) = {at_one}, expected 1")));
        }

        // positivity of u on 2000 log points in [1e-6, 1e4]
        let mut min_u = f64::INFINITY;
        let mut min_u_x = f64::NAN;
        let n = 2000;
        for k in 0..n {
            let x = 1e-6 * (1e10_f64).powf(k as f64 / (n - 1) as f64);
            let u = self.eval(x)?;
            if u < min_u {
                min_u = u;
                min_u_x = x;
            }
            if u <= 0.0 {
                return Err(Error::Positivity(format!("glued u({x}) = {u}")));
            }
        }

        // ODE residual on both sides of the matching point
        let mut max_res: f64 = 0.0;
        for k in 0..60 {
            let x = 0.02 * (0.98_f64 / 0.02).powf(k as f64 / 59.0).min(0.995);
            max_res = max_res.max(self.ode_residual(x)?);
        }
        for k in 0..60 {
            let x = 1.005 * (100.0_f64 / 1.005).powf(k as f64 / 59.0);
            max_res = max_res.max(self.ode_residual(x)?);
        }
        if max_res > 1e-6 {
            return Err(Error::CrossCheck(format!("ODE residual {max_res:.3e} > 1e-6")));
        }

        // the minorant G = u22 + Lambda u21 on [1, 1e4]
        let mut g_min = f64::INFINITY;
        for k in 0..n {
            let x = 1.0 * (1e4_f64).powf(k as f64 / (n - 1) as f64);
            let g = self.u22(x)? + lambda * self.u21(x)?;
            g_min = g_min.min(g);
            if g <= 0.0 {
                return Err(Error::Positivity(format!("G({x}) = {g}")));
            }
        }
        let g_at_1 = self.u22(1.0)? + lambda * self.u21(1.0)?;

        Ok(GlueReport {
            omega: self.omega,
            lambda,
            omega_margin: (1.0 - self.omega) / self.omega - lambda,
            c1_mismatch,
            min_u,
            min_u_x,
            max_ode_residual: max_res,
            g_at_1,
            g_min,
        })
    }
}
