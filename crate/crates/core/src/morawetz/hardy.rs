//! Numerical check of the Hardy-type inequality behind the Morawetz bulk:
//! for smooth compactly supported phi,
//!   int (A |phi'|^2 + V phi^2) dr  >=  eps int (Delta^2/r^4 |phi'|^2 + phi^2/r^2) dr
//! with A = M Delta^2/r^4 and V the applicable lower bound.

use super::multiplier::lower_bound_potentials;
use crate::background::{BackgroundParams, EquationKind};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A C-infinity bump phi(r) = amp * exp(-1/(1-s^2)), s = (r-center)/halfwidth,
/// supported on |s| < 1.
#[derive(Debug, Clone, Copy)]
pub struct BumpFunction {
    pub center: f64,
    pub halfwidth: f64,
    pub amplitude: f64,
}

impl BumpFunction {
    pub fn phi(&self, r: f64) -> f64 {
        let s = (r - self.center) / self.halfwidth;
        if s.abs() >= 1.0 {
            0.0
        } else {
            self.amplitude * (-1.0 / (1.0 - s * s)).exp()
        }
    }

    pub fn dphi(&self, r: f64) -> f64 {
        let s = (r - self.center) / self.halfwidth;
        if s.abs() >= 1.0 {
            0.0
        } else {
            let one = 1.0 - s * s;
            self.amplitude * (-1.0 / one).exp() * (-2.0 * s / (one * one)) / self.halfwidth
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.halfwidth, self.center + self.halfwidth)
    }
}

/// Deterministic suite of random bumps supported in (2M, r_max).
pub fn random_bump_suite(
    bg: &BackgroundParams,
    seed: u64,
    n: usize,
    r_max: f64,
) -> Vec<BumpFunction> {
    let m = bg.mass();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let log_lo = (2.05 * m).ln();
            let log_hi = r_max.ln();
            let center = (rng.gen_range(log_lo..log_hi)).exp();
            let halfwidth = rng.gen_range(0.1..0.9) * (center - 2.0 * m);
            let amplitude = rng.gen_range(0.5..2.0);
            BumpFunction {
                center,
                halfwidth,
                amplitude,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct HardyReport {
    pub n_functions: usize,
    pub min_ratio: f64,
    pub min_lhs: f64,
}

// composite 20-point Gauss-Legendre nodes/weights on [-1, 1]
const GL_X: [f64; 10] = [
    0.076526521133497,
    0.227785851141645,
    0.373706088715420,
    0.510867001950827,
    0.636053680726515,
    0.746331906460151,
    0.839116971822219,
    0.912234428251326,
    0.963971927277914,
    0.993128599185095,
];
const GL_W: [f64; 10] = [
    0.152753387130726,
    0.149172986472604,
    0.142096109318382,
    0.131688638449177,
    0.118194531961518,
    0.101930119817240,
    0.083276741576704,
    0.062672048334109,
    0.040601429800387,
    0.017614007139152,
];

fn composite_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let dx = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * dx;
        let center = lo + 0.5 * dx;
        let half = 0.5 * dx;
        for i in 0..10 {
            total += GL_W[i] * (f(center - half * GL_X[i]) + f(center + half * GL_X[i]));
        }
    }
    total * 0.5 * (b - a) / panels as f64
}

/// Evaluate LHS/RHS for each test function and return the suite minimum.
/// Quadrature is composite Gauss-Legendre clipped to [2M + delta, r_cut];
/// the bumps vanish near both ends so the truncation is exact.
pub fn hardy_check(
    bg: &BackgroundParams,
    kind: EquationKind,
    suite: &[BumpFunction],
) -> Result<HardyReport> {
    if suite.is_empty() {
        return Err(Error::InvalidParameter("empty Hardy test suite".into()));
    }
    let m = bg.mass();
    let delta = 1e-8 * m;
    let r_cut = 1e3 * m;
    let mut min_ratio = f64::INFINITY;
    let mut min_lhs = f64::INFINITY;
    for bump in suite {
        let (lo, hi) = bump.support();
        let a = lo.max(2.0 * m + delta);
        let b = hi.min(r_cut);
        if !(b > a) {
            return Err(Error::Domain(format!(
                "bump support [{lo}, {hi}] outside the quadrature window"
            )));
        }
        let lhs = composite_gl(
            |r| {
                let d = bg.delta(r);
                let a_w = m * d * d / (r * r * r * r);
                let bounds = lower_bound_potentials(bg, r);
                let v = match kind {
                    EquationKind::ReggeWheeler => bounds.v_rw,
                    EquationKind::Zerilli => bounds.v_joint,
                };
                let p = bump.phi(r);
                let dp = bump.dphi(r);
                a_w * dp * dp + v * p * p
            },
            a,
            b,
            64,
        );
        let rhs = composite_gl(
            |r| {
                let d = bg.delta(r);
                let p = bump.phi(r);
                let dp = bump.dphi(r);
                d * d / (r * r * r * r) * dp * dp + p * p / (r * r)
            },
            a,
            b,
            64,
        );
        if lhs < 0.0 {
            return Err(Error::Positivity(format!(
                "Hardy LHS = {lhs} < 0 for bump at r = {}",
                bump.center
            )));
        }
        min_lhs = min_lhs.min(lhs);
        min_ratio = min_ratio.min(lhs / rhs);
    }
    Ok(HardyReport {
        n_functions: suite.len(),
        min_ratio,
        min_lhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bg() -> BackgroundParams {
        BackgroundParams::new(1.0).unwrap()
    }

    #[test]
    fn single_bump_positive() {
        let bump = BumpFunction {
            center: 6.0,
            halfwidth: 2.0,
            amplitude: 1.0,
        };
        let rep = hardy_check(&bg(), EquationKind::ReggeWheeler, &[bump]).unwrap();
        assert!(rep.min_lhs > 0.0);
        assert!(rep.min_ratio > 0.0);
    }

    #[test]
    fn suite_of_100_random_bumps_meets_regression_floor() {
        let bg = bg();
        let suite = random_bump_suite(&bg, 20240901, 100, 300.0);
        for kind in [EquationKind::ReggeWheeler, EquationKind::Zerilli] {
            let rep = hardy_check(&bg, kind, &suite).unwrap();
            assert!(
                rep.min_ratio >= 0.01,
                "{kind}: min ratio {} below the frozen floor",
                rep.min_ratio
            );
        }
    }

    #[test]
    fn scaling_invariance() {
        // phi -> 2 phi leaves LHS/RHS invariant
        let bg = bg();
        let b1 = BumpFunction {
            center: 5.0,
            halfwidth: 1.5,
            amplitude: 1.0,
        };
        let b2 = BumpFunction {
            amplitude: 2.0,
            ..b1
        };
        let r1 = hardy_check(&bg, EquationKind::Zerilli, &[b1]).unwrap();
        let r2 = hardy_check(&bg, EquationKind::Zerilli, &[b2]).unwrap();
        assert_relative_eq!(r1.min_ratio, r2.min_ratio, max_relative = 1e-12);
    }

    #[test]
    fn gauss_legendre_panel_accuracy() {
        let v = composite_gl(|x| x.cos(), 0.0, 1.0, 4);
        assert_relative_eq!(v, 1.0_f64.sin(), max_relative = 1e-14);
    }
}
