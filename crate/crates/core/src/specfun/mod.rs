//! Gauss hypergeometric function 2F1(a,b;c;z) for real parameters and
//! real z <= 0, with three independent evaluation routes (series, Pfaff
//! transformation, Euler integral representation) that cross-validate.

mod gamma;
mod quad;

pub use gamma::{gamma, ln_gamma};
pub use quad::integrate;

use crate::error::{Error, Result};

/// Default evaluation tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Arguments of 2F1(a,b;c;z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Args {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Args {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    fn check_c(&self) -> Result<()> {
        if self.c <= 0.0 && self.c == self.c.floor() {
            return Err(Error::InvalidParameter(format!(
                "c must not be a non-positive integer, got c = {}",
                self.c
            )));
        }
        Ok(())
    }
}

/// Power series sum_n (a)_n (b)_n / ((c)_n n!) z^n for |z| < 1.
///
/// Kahan-compensated summation; term budget grows like 1/(1-|z|) because the
/// Pfaff route feeds arguments approaching 1 from below.
pub fn gauss_series(args: &Hyp2F1Args, tol: f64) -> Result<f64> {
    args.check_c()?;
    let Hyp2F1Args { a, b, c, z } = *args;
    if !(z.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "series requires |z| < 1, got z = {z}"
        )));
    }
    let budget = ((120.0 / (1.0 - z.abs())).ceil() as usize).clamp(100_000, 20_000_000);
    let mut sum = 1.0f64;
    let mut comp = 0.0f64; // Kahan compensation
    let mut term = 1.0f64;
    for n in 0..budget {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        // once the term ratio settles below |z|+eps, the tail is geometric
        if n > 8 {
            let tail = term.abs() * z.abs() / (1.0 - z.abs());
            if tail <= 0.5 * tol * sum.abs().max(1.0) && term.abs() <= 0.5 * tol * sum.abs().max(1.0)
            {
                return Ok(sum);
            }
        }
    }
    Err(Error::Convergence(format!(
        "series for 2F1({a},{b};{c};{z}) did not converge within {budget} terms"
    )))
}

/// Pfaff transformation: F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)),
/// summing the transformed series. Maps z <= 0 into [0, 1).
pub fn pfaff_2f1(args: &Hyp2F1Args, tol: f64) -> Result<f64> {
    let Hyp2F1Args { a, b, c, z } = *args;
    if z > 0.0 {
        return Err(Error::Domain(format!("pfaff route expects z <= 0, got {z}")));
    }
    let w = z / (z - 1.0);
    let transformed = Hyp2F1Args::new(a, c - b, c, w);
    let prefactor = (1.0 - z).powf(-a);
    Ok(prefactor * gauss_series(&transformed, tol)?)
}

/// Euler integral representation, valid for 0 < b < c and z not in [1, inf):
///
///   F = Gamma(c)/(Gamma(b)Gamma(c-b)) int_0^1 t^(b-1) (1-t)^(c-b-1) (1-zt)^(-a) dt.
///
/// Endpoint singularities (b < 1 or c-b < 1) are removed by the algebraic
/// substitutions t = s^(1/b) and 1-t = s^(1/(c-b)).
pub fn integral_rep(args: &Hyp2F1Args, tol: f64) -> Result<f64> {
    let Hyp2F1Args { a, b, c, z } = *args;
    if !(b > 0.0 && c > b) {
        return Err(Error::Domain(format!(
            "integral representation requires 0 < b < c, got b = {b}, c = {c}"
        )));
    }
    if z >= 1.0 {
        return Err(Error::Domain(format!("z must not lie in [1, inf), got {z}")));
    }
    let prefactor = (ln_gamma(c) - ln_gamma(b) - ln_gamma(c - b)).exp();
    let kernel = |t: f64| (1.0 - z * t).powf(-a);
    let piece_tol = 0.5 * tol / prefactor.max(1.0);

    // left piece over t in [0, 1/2]
    let left = if b < 1.0 {
        let upper = 0.5f64.powf(b);
        integrate(
            |s: f64| {
                let t = s.powf(1.0 / b);
                (1.0 - t).powf(c - b - 1.0) * kernel(t) / b
            },
            0.0,
            upper,
            piece_tol,
        )?
    } else {
        integrate(
            |t: f64| t.powf(b - 1.0) * (1.0 - t).powf(c - b - 1.0) * kernel(t),
            0.0,
            0.5,
            piece_tol,
        )?
    };

    // right piece over u = 1-t in [0, 1/2]
    let cb = c - b;
    let right = if cb < 1.0 {
        let upper = 0.5f64.powf(cb);
        integrate(
            |s: f64| {
                let u = s.powf(1.0 / cb);
                (1.0 - u).powf(b - 1.0) * kernel(1.0 - u) / cb
            },
            0.0,
            upper,
            piece_tol,
        )?
    } else {
        integrate(
            |u: f64| u.powf(cb - 1.0) * (1.0 - u).powf(b - 1.0) * kernel(1.0 - u),
            0.0,
            0.5,
            piece_tol,
        )?
    };

    Ok(prefactor * (left + right))
}

/// Evaluate 2F1 for z <= 0: direct series for |z| <= 1/2, Pfaff-transformed
/// series otherwise.
pub fn eval_2f1(args: &Hyp2F1Args, tol: f64) -> Result<f64> {
    if args.z > 0.0 {
        return Err(Error::Domain(format!(
            "eval_2f1 covers z <= 0 only, got z = {}",
            args.z
        )));
    }
    if args.z.abs() <= 0.5 {
        gauss_series(args, tol)
    } else {
        pfaff_2f1(args, tol)
    }
}
