//! Morawetz multiplier quantities and the continuous lower bounds for the
//! bulk potential, for both equation kinds.

use crate::background::{zeta, zeta_derivative, BackgroundParams, EquationKind, ModeSpec};
use serde::Serialize;

/// The radial functions entering the generalized Morawetz current.
///
/// w = r^5/6, frak_a = Delta/r^4 (the multiplier's z), f = dz/dr,
/// cal_a = M Delta^2 / r^4, cal_u = w f^2 / 2, under_u = (r-3M)^2 / (3 r^3),
/// cal_v = the bulk potential multiplying |psi|^2.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MultiplierQuantities {
    pub w: f64,
    pub frak_a: f64,
    pub f: f64,
    pub cal_a: f64,
    pub cal_u: f64,
    pub under_u: f64,
    pub cal_v: f64,
}

/// The kind-independent part of cal_v:
/// (1/4) d_r(Delta d_r(frak_a d_r(w f))) = (3/2)M/r^2 - (23/3)M^2/r^3 + 9M^3/r^4.
fn cal_v_common(m: f64, r: f64) -> f64 {
    1.5 * m / (r * r) - (23.0 / 3.0) * m * m / (r * r * r) + 9.0 * m * m * m / (r * r * r * r)
}

/// S(r) = frak_a * r^2 * V_g^RW = eta V_g^RW = -8M(r-2M)/r^4, the combination
/// whose r-derivative feeds the potential term of the bulk.
fn s_rw(m: f64, r: f64) -> f64 {
    -8.0 * m * (r - 2.0 * m) / (r * r * r * r)
}

/// dS/dr = 8M(3r - 8M)/r^5.
fn s_rw_prime(m: f64, r: f64) -> f64 {
    8.0 * m * (3.0 * r - 8.0 * m) / (r * r * r * r * r)
}

/// The bulk potential cal_v. For Regge-Wheeler this is the closed form
/// -(5/2)M/r^2 + 15M^2/r^3 - 23M^3/r^4; for Zerilli it is assembled from the
/// common part plus (wf/2) d_r(S (1+zeta)).
pub fn cal_v(bg: &BackgroundParams, mode: &ModeSpec, r: f64) -> f64 {
    let m = bg.mass();
    match mode.kind() {
        EquationKind::ReggeWheeler => {
            -2.5 * m / (r * r) + 15.0 * m * m / (r * r * r)
                - 23.0 * m * m * m / (r * r * r * r)
        }
        EquationKind::Zerilli => {
            let half_wf = -r * (r - 3.0 * m) / 6.0;
            let z = zeta(bg, mode, r);
            let zp = zeta_derivative(bg, mode, r);
            cal_v_common(m, r) + half_wf * (s_rw_prime(m, r) * (1.0 + z) + s_rw(m, r) * zp)
        }
    }
}

pub fn multiplier_quantities(
    bg: &BackgroundParams,
    mode: &ModeSpec,
    r: f64,
) -> MultiplierQuantities {
    let m = bg.mass();
    let r4 = r * r * r * r;
    let delta = bg.delta(r);
    let w = r * r4 / 6.0;
    let frak_a = delta / r4;
    let f = -2.0 * (r - 3.0 * m) / r4;
    let cal_a = m * delta * delta / r4;
    let cal_u = 0.5 * w * f * f;
    let under_u = (r - 3.0 * m) * (r - 3.0 * m) / (3.0 * r * r * r);
    MultiplierQuantities {
        w,
        frak_a,
        f,
        cal_a,
        cal_u,
        under_u,
        cal_v: cal_v(bg, mode, r),
    }
}

/// The closed-form lower bounds of the Morawetz potential.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LowerBounds {
    /// (5/2)M/r^2 - (41/3)M^2/r^3 + 18M^3/r^4, the r <= 3M branch.
    pub v_le_3m: f64,
    /// (1/2)M/r^2 - 4M^2/r^3 + 7M^3/r^4, the r >= 3M branch.
    pub v_ge_3m: f64,
    /// The continuous joint bound: the branches switch at r = 3M.
    pub v_joint: f64,
    /// (3/2)M/r^2 - 9M^2/r^3 + 13M^3/r^4, the Regge-Wheeler bound.
    pub v_rw: f64,
}

pub fn lower_bound_potentials(bg: &BackgroundParams, r: f64) -> LowerBounds {
    let m = bg.mass();
    let r2 = r * r;
    let r3 = r2 * r;
    let r4 = r3 * r;
    let v_le_3m = 2.5 * m / r2 - (41.0 / 3.0) * m * m / r3 + 18.0 * m * m * m / r4;
    let v_ge_3m = 0.5 * m / r2 - 4.0 * m * m / r3 + 7.0 * m * m * m / r4;
    let v_joint = if r <= 3.0 * m { v_le_3m } else { v_ge_3m };
    let v_rw = 1.5 * m / r2 - 9.0 * m * m / r3 + 13.0 * m * m * m / r4;
    LowerBounds {
        v_le_3m,
        v_ge_3m,
        v_joint,
        v_rw,
    }
}

/// Result of the pointwise lower-bound scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub n_points: usize,
    /// min over the grid of (cal_v + 6 under_u) - v_joint, Zerilli form.
    pub min_slack: f64,
    pub min_slack_r: f64,
    pub violations: usize,
    /// min over the grid of (cal_v + 6 under_u (2M/r)) - v_rw, RW form
    /// (an exact identity in the continuum, so this is a roundoff check).
    pub rw_min_slack: f64,
    pub rw_min_slack_r: f64,
    pub rw_violations: usize,
}

/// Scan the Lemma-type inequality cal_v + 6 under_u >= v_joint on a radial
/// grid (Zerilli, with the mode's lambda_bar), together with the RW analogue.
/// Violations are counted against slack >= -1e-12; nothing is thrown.
pub fn verify_morawetz_lower_bound(
    bg: &BackgroundParams,
    mode: &ModeSpec,
    r_grid: &[f64],
) -> ScanReport {
    let m = bg.mass();
    let z_mode = ModeSpec::new(mode.ell(), EquationKind::Zerilli).expect("ell validated");
    let rw_mode = ModeSpec::new(mode.ell(), EquationKind::ReggeWheeler).expect("ell validated");
    let mut report = ScanReport {
        n_points: r_grid.len(),
        min_slack: f64::INFINITY,
        min_slack_r: f64::NAN,
        violations: 0,
        rw_min_slack: f64::INFINITY,
        rw_min_slack_r: f64::NAN,
        rw_violations: 0,
    };
    for &r in r_grid {
        let bounds = lower_bound_potentials(bg, r);
        let under_u = (r - 3.0 * m) * (r - 3.0 * m) / (3.0 * r * r * r);
        let slack = cal_v(bg, &z_mode, r) + 6.0 * under_u - bounds.v_joint;
        if slack < report.min_slack {
            report.min_slack = slack;
            report.min_slack_r = r;
        }
        if slack < -1e-12 {
            report.violations += 1;
        }
        let rw_slack = cal_v(bg, &rw_mode, r) + 6.0 * under_u * (2.0 * m / r) - bounds.v_rw;
        if rw_slack < report.rw_min_slack {
            report.rw_min_slack = rw_slack;
            report.rw_min_slack_r = r;
        }
        if rw_slack < -1e-12 {
            report.rw_violations += 1;
        }
    }
    report
}

/// Log-spaced radial grid on (r_lo, r_hi], open at the lower end.
pub fn log_grid(r_lo: f64, r_hi: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|k| r_lo * (r_hi / r_lo).powf(k as f64 / n as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::background::potential_4d;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn bg() -> BackgroundParams {
        BackgroundParams::new(1.0).unwrap()
    }

    fn zmode(ell: u32) -> ModeSpec {
        ModeSpec::new(ell, EquationKind::Zerilli).unwrap()
    }

    #[test]
    fn photon_sphere_zeros() {
        let q = multiplier_quantities(&bg(), &zmode(2), 3.0);
        assert_eq!(q.f, 0.0);
        assert_eq!(q.cal_u, 0.0);
        assert_eq!(q.under_u, 0.0);
    }

    #[test]
    fn horizon_zero_of_cal_a() {
        let q = multiplier_quantities(&bg(), &zmode(2), 2.0);
        assert_eq!(q.cal_a, 0.0);
        // cal_a >= 0 on r >= 2M, vanishing only there
        for k in 1..400 {
            let r = 2.0 + 0.05 * k as f64;
            assert!(multiplier_quantities(&bg(), &zmode(2), r).cal_a > 0.0);
        }
    }

    #[test]
    fn f_changes_sign_exactly_at_3m() {
        let q_in = multiplier_quantities(&bg(), &zmode(2), 2.999);
        let q_out = multiplier_quantities(&bg(), &zmode(2), 3.001);
        assert!(q_in.f > 0.0 && q_out.f < 0.0);
    }

    #[test]
    fn cal_u_equals_under_u_exactly() {
        for k in 0..2000 {
            let r = 2.0 * (1e4_f64).powf(k as f64 / 1999.0);
            let q = multiplier_quantities(&bg(), &zmode(2), r);
            assert_relative_eq!(q.cal_u, q.under_u, max_relative = 1e-14);
        }
    }

    #[test]
    fn rw_cal_v_spot_value() {
        let rw = ModeSpec::new(2, EquationKind::ReggeWheeler).unwrap();
        // -5/32 + 15/64 - 23/256 = -3/256
        assert_relative_eq!(cal_v(&bg(), &rw, 4.0), -0.01171875, max_relative = 1e-14);
    }

    #[test]
    fn zerilli_cal_v_matches_numerical_differentiation() {
        // oracle: cal_v = common + (wf/2) d_r(eta V_g^Z) with the derivative
        // taken by a 5-point stencil on the defining expression
        let bg = bg();
        for ell in [2u32, 3, 5, 10] {
            let md = zmode(ell);
            for k in 0..200 {
                let r: f64 = 2.0 * (50.0_f64).powf(k as f64 / 199.0);
                let d = 1e-3 * r;
                let s = |rr: f64| bg.eta(rr) * potential_4d(&bg, &md, rr) * 1.0;
                let sp = (-s(r + 2.0 * d) + 8.0 * s(r + d) - 8.0 * s(r - d) + s(r - 2.0 * d))
                    / (12.0 * d);
                let half_wf = -r * (r - 3.0) / 6.0;
                let common = 1.5 / (r * r) - (23.0 / 3.0) / (r * r * r) + 9.0 / (r * r * r * r);
                let oracle = common + half_wf * sp;
                let closed = cal_v(&bg, &md, r);
                assert!(
                    (closed - oracle).abs() <= 1e-8 * closed.abs().max(1e-3),
                    "ell={ell} r={r}: closed {closed} vs FD {oracle}"
                );
            }
        }
    }

    #[test]
    fn lower_bound_spot_values() {
        let b3 = lower_bound_potentials(&bg(), 3.0);
        // both branches meet at r = 3M with the exact value -1/162
        assert_relative_eq!(b3.v_le_3m, -1.0 / 162.0, max_relative = 1e-13);
        assert_relative_eq!(b3.v_ge_3m, -1.0 / 162.0, max_relative = 1e-13);
        let b2 = lower_bound_potentials(&bg(), 2.0);
        assert_relative_eq!(b2.v_le_3m, 1.0 / 24.0, max_relative = 1e-13);
    }

    #[test]
    fn difference_identity_on_grid() {
        // v_le - v_ge = (r-3M)(2r-11M/3) M/r^4 to 1e-14 on 1e4 points
        let bg = bg();
        for r in log_grid(2.0, 100.0, 10_000) {
            let b = lower_bound_potentials(&bg, r);
            let rhs = (r - 3.0) * (2.0 * r - 11.0 / 3.0) / (r * r * r * r);
            assert_abs_diff_eq!(b.v_le_3m - b.v_ge_3m, rhs, epsilon = 1e-14);
        }
    }

    #[test]
    fn lemma_scan_passes_for_all_ell() {
        let bg = bg();
        let grid = log_grid(2.0, 100.0, 10_000);
        for ell in 2..=10 {
            let rep = verify_morawetz_lower_bound(&bg, &zmode(ell), &grid);
            assert_eq!(rep.violations, 0, "ell={ell}: min slack {}", rep.min_slack);
            assert_eq!(rep.rw_violations, 0, "ell={ell} RW");
            assert!(rep.min_slack >= -1e-12);
            // RW form is an identity; slack is pure roundoff
            assert!(rep.rw_min_slack.abs() < 1e-13, "rw slack {}", rep.rw_min_slack);
        }
    }

    #[test]
    fn endpoint_check_at_horizon() {
        // r = 2M: cal_v(2M) + 6 under_u(2M) (2M/r) >= joint bound there
        let bg = bg();
        let md = zmode(2);
        let q = multiplier_quantities(&bg, &md, 2.0);
        let b = lower_bound_potentials(&bg, 2.0);
        assert!(q.cal_v + 6.0 * q.under_u * 1.0 - b.v_joint >= 0.0);
    }

    #[test]
    fn scan_tight_near_photon_sphere() {
        // the inequality is tight at r = 3M (slack -> 0 there)
        let bg = bg();
        let md = zmode(2);
        let q = multiplier_quantities(&bg, &md, 3.0);
        let b = lower_bound_potentials(&bg, 3.0);
        assert_abs_diff_eq!(q.cal_v + 6.0 * q.under_u - b.v_joint, 0.0, epsilon = 1e-15);
    }
}
