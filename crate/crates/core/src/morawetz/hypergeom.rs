//! The ODE-to-hypergeometric transformation: potential specs of the form
//! V = (M/r^4)(V2 r^2 + V1 M r + V0 M^2), the derived exponents and 2F1
//! parameters, and the transformed potential W of -v'' + W v = 0.

use crate::background::BackgroundParams;
use crate::error::{Error, Result};
use serde::Serialize;

/// Dimensionless coefficients of V(r) = (M/r^4)(V2 r^2 + V1 M r + V0 M^2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSpec {
    pub v2: f64,
    pub v1: f64,
    pub v0: f64,
}

impl PotentialSpec {
    pub const fn new(v2: f64, v1: f64, v0: f64) -> Self {
        Self { v2, v1, v0 }
    }

    /// Evaluate V(r) for the given mass.
    pub fn eval(&self, m: f64, r: f64) -> f64 {
        m / (r * r * r * r) * (self.v2 * r * r + self.v1 * m * r + self.v0 * m * m)
    }

    fn radicands(&self) -> (f64, f64, f64) {
        (
            4.0 * self.v2 + 2.0 * self.v1 + self.v0 + 1.0,
            9.0 + self.v0,
            1.0 + 4.0 * self.v2,
        )
    }
}

/// The Regge-Wheeler lower-bound spec (3/2, -9, 13).
pub const RW_BOUND: PotentialSpec = PotentialSpec::new(1.5, -9.0, 13.0);
/// The Zerilli inner-region spec (5/2, -41/3, 18), valid on 2M <= r <= 3M.
pub const ZERILLI_INNER: PotentialSpec = PotentialSpec::new(2.5, -41.0 / 3.0, 18.0);
/// The Zerilli outer-region spec (1/2, -4, 7), valid on r >= 3M.
pub const ZERILLI_OUTER: PotentialSpec = PotentialSpec::new(0.5, -4.0, 7.0);

/// Exponents and 2F1 parameters of the Frobenius solutions adapted to x = 0.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HypergeomParams {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub source: PotentialSpec,
}

impl HypergeomParams {
    /// The proof identities c = 2 alpha and a + b + 1 = 2 alpha + 2 beta,
    /// as residuals.
    pub fn identity_residuals(&self) -> (f64, f64) {
        (
            self.c - 2.0 * self.alpha,
            self.a + self.b + 1.0 - 2.0 * (self.alpha + self.beta),
        )
    }

    /// True when one of c, c-a-b, a-b is within `tol` of an integer, which
    /// would degenerate the fundamental pairs.
    pub fn integer_degenerate(&self, tol: f64) -> bool {
        let near_int = |x: f64| (x - x.round()).abs() < tol;
        near_int(self.c) || near_int(self.c - self.a - self.b) || near_int(self.a - self.b)
    }
}

/// Derive (alpha, beta, a, b, c) from a potential spec:
///
///   alpha = 1/2 + sqrt(4V2+2V1+V0+1)/2   (+ root)
///   beta  = 1/2 - sqrt(9+V0)/2           (- root)
///   a,b   = (1 + sqrt(4V2+2V1+V0+1) - sqrt(9+V0) -/+ sqrt(1+4V2))/2
///   c     = 1 + sqrt(4V2+2V1+V0+1)
///
/// with a <= b by construction.
pub fn derive_params(spec: &PotentialSpec) -> Result<HypergeomParams> {
    let (q1, q2, q3) = spec.radicands();
    for (name, q) in [("4V2+2V1+V0+1", q1), ("9+V0", q2), ("1+4V2", q3)] {
        if q < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "imaginary exponent: radicand {name} = {q} < 0 for spec {spec:?}"
            )));
        }
    }
    let s1 = q1.sqrt();
    let s2 = q2.sqrt();
    let s3 = q3.sqrt();
    Ok(HypergeomParams {
        alpha: 0.5 + 0.5 * s1,
        beta: 0.5 - 0.5 * s2,
        a: 0.5 * (1.0 + s1 - s2 - s3),
        b: 0.5 * (1.0 + s1 - s2 + s3),
        c: 1.0 + s1,
        source: *spec,
    })
}

/// Which branch of the piecewise transformed potential W to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// x <= M: W1 = (15x^2 - 46Mx + 4M^2) / (6 x^2 (x+2M)^2).
    Inner,
    /// x > M: W2 = (x^2 - 12Mx + 2M^2) / (2 x^2 (x+2M)^2).
    Outer,
}

/// The transformed potential of -d^2v/dx^2 + W v = 0 with x = r - 2M, for
/// the Zerilli joint bound. Continuous at x = M where both branches equal
/// -1/(2M^2).
pub fn transformed_w(bg: &BackgroundParams, x: f64, region: Region) -> f64 {
    let m = bg.mass();
    let denom = x * x * (x + 2.0 * m) * (x + 2.0 * m);
    match region {
        Region::Inner => (15.0 * x * x - 46.0 * m * x + 4.0 * m * m) / (6.0 * denom),
        Region::Outer => (x * x - 12.0 * m * x + 2.0 * m * m) / (2.0 * denom),
    }
}

/// W from an arbitrary potential spec (Lemma-form numerator), in units M = 1:
/// W = (V2 x^2 + (4V2+V1-4)x + (4V2+2V1+V0)) / (x^2 (x+2)^2).
pub fn transformed_w_from_spec(spec: &PotentialSpec, x: f64) -> f64 {
    let num = spec.v2 * x * x + (4.0 * spec.v2 + spec.v1 - 4.0) * x
        + (4.0 * spec.v2 + 2.0 * spec.v1 + spec.v0);
    num / (x * x * (x + 2.0) * (x + 2.0))
}
