//! Schwarzschild background: coordinates, mode bookkeeping, and the
//! Regge-Wheeler/Zerilli potentials in 4D and mode-decomposed 1+1 form.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Schwarzschild background, parametrized by the mass in length units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackgroundParams {
    mass: f64,
}

impl BackgroundParams {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidParameter(format!("mass must be > 0, got {mass}")));
        }
        Ok(Self { mass })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Event horizon radius r = 2M.
    pub fn horizon_radius(&self) -> f64 {
        2.0 * self.mass
    }

    /// Photon sphere radius r = 3M.
    pub fn photon_sphere_radius(&self) -> f64 {
        3.0 * self.mass
    }

    /// mu = 2M/r.
    pub fn mu(&self, r: f64) -> f64 {
        2.0 * self.mass / r
    }

    /// eta = 1 - 2M/r.
    pub fn eta(&self, r: f64) -> f64 {
        1.0 - 2.0 * self.mass / r
    }

    /// Delta = r^2 - 2Mr.
    pub fn delta(&self, r: f64) -> f64 {
        r * (r - 2.0 * self.mass)
    }
}

/// Which of the two perturbation equations a mode obeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationKind {
    ReggeWheeler,
    Zerilli,
}

impl std::fmt::Display for EquationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EquationKind::ReggeWheeler => write!(f, "rw"),
            EquationKind::Zerilli => write!(f, "zerilli"),
        }
    }
}

/// Angular mode: ell >= 2 (the dynamical gravitational modes) plus the
/// equation kind. lambda_bar = (ell-1)(ell+2)/2 >= 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    ell: u32,
    kind: EquationKind,
}

impl ModeSpec {
    pub fn new(ell: u32, kind: EquationKind) -> Result<Self> {
        if ell < 2 {
            return Err(Error::InvalidParameter(format!(
                "ell must be >= 2 (gravitational modes), got {ell}"
            )));
        }
        Ok(Self { ell, kind })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    /// lambda_bar = (ell-1)(ell+2)/2.
    pub fn lambda_bar(&self) -> f64 {
        let l = self.ell as f64;
        (l - 1.0) * (l + 2.0) / 2.0
    }

    /// ell(ell+1), the spherical Laplacian eigenvalue.
    pub fn angular_eigenvalue(&self) -> f64 {
        let l = self.ell as f64;
        l * (l + 1.0)
    }
}

/// Tortoise coordinate r* = r + 2M ln(r-2M) - 3M - 2M ln M, normalized so
/// that r*(3M) = 0.
pub fn tortoise(bg: &BackgroundParams, r: f64) -> Result<f64> {
    let m = bg.mass();
    if !(r > 2.0 * m) {
        return Err(Error::Domain(format!(
            "tortoise requires r > 2M = {}, got r = {r}",
            2.0 * m
        )));
    }
    Ok(r + 2.0 * m * (r - 2.0 * m).ln() - 3.0 * m - 2.0 * m * m.ln())
}

/// Tortoise coordinate as a function of x = r - 2M. Avoids forming r - 2M by
/// subtraction, which underflows near the horizon.
fn tortoise_from_x(m: f64, x: f64, w: f64) -> f64 {
    // w = ln x supplied by the caller
    2.0 * m + x + 2.0 * m * w - 3.0 * m - 2.0 * m * m.ln()
}

/// Inverse tortoise coordinate, returned as x = r - 2M > 0.
///
/// Newton iteration on w = ln x, where the residual derivative is exactly r,
/// safeguarded by a bisection bracket. Near the horizon x decays like
/// exp(r*/2M) and would be destroyed by forming r - 2M in f64; callers that
/// need eta = 1 - 2M/r accurately should use this form (eta = x / (2M + x)).
pub fn inverse_tortoise_shifted(bg: &BackgroundParams, r_star: f64) -> Result<f64> {
    let m = bg.mass();
    let target = r_star;
    // initial guess: asymptotic branches on either side of r* = 0
    let mut w = if r_star > 0.0 {
        (r_star.max(2.1 * m) - 2.0 * m).ln()
    } else {
        m.ln() + (r_star + m) / (2.0 * m)
    };
    w = w.max(-745.0); // keep exp(w) normal-ish
    let tol = 1e-13 * target.abs().max(1.0);

    // expanding bracket for the bisection safeguard
    let mut lo = w - 2.0;
    let mut hi = w + 2.0;
    let g = |w: f64| tortoise_from_x(m, w.exp(), w) - target;
    for _ in 0..200 {
        if g(lo) < 0.0 {
            break;
        }
        lo -= 4.0;
        if lo < -745.0 {
            lo = -745.0;
            break;
        }
    }
    for _ in 0..200 {
        if g(hi) > 0.0 {
            break;
        }
        hi += 4.0;
    }

    for _ in 0..100 {
        let x = w.exp();
        let res = tortoise_from_x(m, x, w) - target;
        if res.abs() <= tol {
            return Ok(x);
        }
        if res > 0.0 {
            hi = hi.min(w);
        } else {
            lo = lo.max(w);
        }
        let r = 2.0 * m + x;
        let mut next = w - res / r;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        w = next.max(-745.0);
    }
    let x = w.exp();
    let res = tortoise_from_x(m, x, w) - target;
    if res.abs() <= tol {
        Ok(x)
    } else {
        Err(Error::Convergence(format!(
            "inverse_tortoise did not converge for r* = {r_star} (residual {res:.3e})"
        )))
    }
}

/// Inverse tortoise coordinate: the unique r > 2M with tortoise(r) = r*.
pub fn inverse_tortoise(bg: &BackgroundParams, r_star: f64) -> Result<f64> {
    Ok(2.0 * bg.mass() + inverse_tortoise_shifted(bg, r_star)?)
}

/// The Zerilli correction factor zeta(r), with Lambda = lambda_bar*r + 3M:
///
///   zeta = (2L+3)/(4L) * (9(1/2 - M/Lambda)^2 - 1/4) - 1,  L = lambda_bar.
///
/// Depends on the mode only through lambda_bar; it enters the potentials for
/// the Zerilli kind. Increasing in r, with zeta(2M) = -3/(2(2L+3)) and
/// zeta -> 3/(2L) as r -> infinity.
pub fn zeta(bg: &BackgroundParams, mode: &ModeSpec, r: f64) -> f64 {
    let m = bg.mass();
    let lb = mode.lambda_bar();
    let lam = lb * r + 3.0 * m;
    (2.0 * lb + 3.0) / (4.0 * lb) * (9.0 * (0.5 - m / lam).powi(2) - 0.25) - 1.0
}

/// d zeta / dr = 9M(2L+3)/2 * (1/2 - M/Lambda) / Lambda^2 > 0.
pub fn zeta_derivative(bg: &BackgroundParams, mode: &ModeSpec, r: f64) -> f64 {
    let m = bg.mass();
    let lb = mode.lambda_bar();
    let lam = lb * r + 3.0 * m;
    4.5 * m * (2.0 * lb + 3.0) * (0.5 - m / lam) / (lam * lam)
}

/// The 4D potential V_g of Box psi - V_g psi = 0:
/// V_g^RW = -8M/r^3, V_g^Z = V_g^RW (1 + zeta).
pub fn potential_4d(bg: &BackgroundParams, mode: &ModeSpec, r: f64) -> f64 {
    let m = bg.mass();
    let v_rw = -8.0 * m / (r * r * r);
    match mode.kind() {
        EquationKind::ReggeWheeler => v_rw,
        EquationKind::Zerilli => v_rw * (1.0 + zeta(bg, mode, r)),
    }
}

/// The Zerilli 4D potential in its direct rational form,
/// V_g^Z = -(8M/r^3) (2L+3)(2Lr+3M) r / (4(Lr+3M)^2); must agree with the
/// (1+zeta) factorization to 1e-13 relative.
pub fn zerilli_potential_direct(bg: &BackgroundParams, mode: &ModeSpec, r: f64) -> f64 {
    let m = bg.mass();
    let lb = mode.lambda_bar();
    let lam = lb * r + 3.0 * m;
    -(8.0 * m / (r * r * r)) * (2.0 * lb + 3.0) * (2.0 * lb * r + 3.0 * m) * r
        / (4.0 * lam * lam)
}

/// V-hat, the potential correction in the 1+1 reduction for Psi = r psi:
/// V-hat^RW = -6M/r^3, V-hat^Z = -6M/r^3 - 8M zeta/r^3.
pub fn potential_vhat(bg: &BackgroundParams, mode: &ModeSpec, r: f64) -> f64 {
    let m = bg.mass();
    let base = -6.0 * m / (r * r * r);
    match mode.kind() {
        EquationKind::ReggeWheeler => base,
        EquationKind::Zerilli => base - 8.0 * m * zeta(bg, mode, r) / (r * r * r),
    }
}

/// Mode-decomposed effective potential for Psi = r psi:
/// V_ell(r) = eta(r) (ell(ell+1)/r^2 + V-hat(r)); positive on r > 2M for
/// ell >= 2 in both kinds.
pub fn potential_1p1(bg: &BackgroundParams, mode: &ModeSpec, r: f64) -> f64 {
    bg.eta(r) * (mode.angular_eigenvalue() / (r * r) + potential_vhat(bg, mode, r))
}

/// Same as [`potential_1p1`] but with eta supplied from an underflow-safe
/// x = r - 2M (used by the evolution cache deep in the horizon region).
pub(crate) fn potential_1p1_from_x(
    bg: &BackgroundParams,
    mode: &ModeSpec,
    x: f64,
) -> f64 {
    let r = 2.0 * bg.mass() + x;
    let eta = x / r;
    eta * (mode.angular_eigenvalue() / (r * r) + potential_vhat(bg, mode, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn bg() -> BackgroundParams {
        BackgroundParams::new(1.0).unwrap()
    }

    fn mode(ell: u32, kind: EquationKind) -> ModeSpec {
        ModeSpec::new(ell, kind).unwrap()
    }

    #[test]
    fn mass_must_be_positive() {
        assert!(BackgroundParams::new(0.0).is_err());
        assert!(BackgroundParams::new(-1.0).is_err());
        assert!(BackgroundParams::new(f64::NAN).is_err());
    }

    #[test]
    fn derived_radii() {
        let bg = BackgroundParams::new(2.5).unwrap();
        assert_eq!(bg.horizon_radius(), 5.0);
        assert_eq!(bg.photon_sphere_radius(), 7.5);
    }

    #[test]
    fn mode_rejects_low_ell() {
        assert!(ModeSpec::new(0, EquationKind::ReggeWheeler).is_err());
        assert!(ModeSpec::new(1, EquationKind::Zerilli).is_err());
        assert!(ModeSpec::new(2, EquationKind::Zerilli).is_ok());
    }

    #[test]
    fn lambda_bar_values() {
        assert_eq!(mode(2, EquationKind::Zerilli).lambda_bar(), 2.0);
        assert_eq!(mode(3, EquationKind::Zerilli).lambda_bar(), 5.0);
        // 2*lambda_bar = ell(ell+1) - 2
        for ell in 2..=10 {
            let md = mode(ell, EquationKind::ReggeWheeler);
            assert_eq!(2.0 * md.lambda_bar(), md.angular_eigenvalue() - 2.0);
        }
    }

    #[test]
    fn tortoise_anchor_and_spot_values() {
        // terms cancel exactly at r = 3M
        assert_eq!(tortoise(&bg(), 3.0).unwrap(), 0.0);
        // direct substitution, frozen from 30-digit arithmetic at the exact
        // f64 input 2.000001000000000139...
        assert_relative_eq!(
            tortoise(&bg(), 2.0 + 1e-6).unwrap(),
            -28.631020115648992,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            tortoise(&bg(), 100.0).unwrap(),
            106.16993495734114,
            max_relative = 1e-14
        );
    }

    #[test]
    fn tortoise_domain_error() {
        assert!(tortoise(&bg(), 2.0).is_err());
        assert!(tortoise(&bg(), 1.5).is_err());
    }

    #[test]
    fn inverse_tortoise_anchors() {
        let bg = bg();
        assert_abs_diff_eq!(inverse_tortoise(&bg, 0.0).unwrap(), 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            inverse_tortoise(&bg, 106.16993495734114).unwrap(),
            100.0,
            epsilon = 1e-10
        );
        // near-horizon branch: r = 2 + delta with delta ~ exp((r*+1)/2)
        let x = inverse_tortoise_shifted(&bg, -50.0).unwrap();
        assert!(x > 0.0 && x < 1e-10, "x = {x}");
        assert_relative_eq!(x, ((-50.0_f64 + 1.0) / 2.0).exp(), max_relative = 1e-6);
        // frozen from the independent reference implementation
        assert_relative_eq!(
            inverse_tortoise(&bg, 2.5).unwrap(),
            4.057254929083467,
            max_relative = 1e-13
        );
    }

    #[test]
    fn inverse_tortoise_round_trip_log_grid() {
        let bg = bg();
        // 1000 log-spaced radii in (2M + 1e-8, 1e6 M)
        let lo: f64 = 1e-8;
        let hi: f64 = 1e6 - 2.0;
        for k in 0..1000 {
            let frac = k as f64 / 999.0;
            let x = lo * (hi / lo).powf(frac);
            let r = 2.0 + x;
            let rs = tortoise(&bg, r).unwrap();
            let back = inverse_tortoise(&bg, rs).unwrap();
            assert!(
                (back - r).abs() <= 1e-10 * r.abs(),
                "round trip failed at r = {r}: got {back}"
            );
        }
    }

    #[test]
    fn tortoise_monotone() {
        let bg = bg();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..2000 {
            let x = 1e-6 * (1e9_f64).powf(k as f64 / 1999.0);
            let rs = tortoise(&bg, 2.0 + x).unwrap();
            assert!(rs > prev);
            prev = rs;
        }
    }

    #[test]
    fn zeta_paper_anchors() {
        let bg = bg();
        let md = mode(2, EquationKind::Zerilli);
        // zeta(2M) = -3/(2(2L+3)) = -3/14 for ell = 2
        assert_relative_eq!(zeta(&bg, &md, 2.0), -3.0 / 14.0, max_relative = 1e-14);
        // zeta(3M) = -1/(4(L+1)^2) = -1/36
        assert_relative_eq!(zeta(&bg, &md, 3.0), -1.0 / 36.0, max_relative = 1e-13);
        // limit 3/(2L) = 3/4
        assert_relative_eq!(zeta(&bg, &md, 1e12), 0.75, max_relative = 1e-9);
    }

    #[test]
    fn zeta_monotone_and_bounded() {
        let bg = bg();
        for ell in 2..=10 {
            let md = mode(ell, EquationKind::Zerilli);
            let lb = md.lambda_bar();
            let lower = -3.0 / (2.0 * (2.0 * lb + 3.0));
            let upper = 3.0 / (2.0 * lb);
            let mut prev = f64::NEG_INFINITY;
            for k in 0..500 {
                let r = 2.0 * (5000.0_f64).powf(k as f64 / 499.0);
                let z = zeta(&bg, &md, r);
                assert!(z >= lower - 1e-15 && z <= upper + 1e-15, "bounds at r={r}");
                assert!(z > prev, "monotonicity at r={r}");
                // finite-difference slope positive
                let dr = 1e-4 * r;
                assert!(zeta(&bg, &md, r + dr) > z);
                assert!(zeta_derivative(&bg, &md, r) > 0.0);
                prev = z;
            }
        }
    }

    #[test]
    fn potential_4d_values() {
        let bg = bg();
        let rw = mode(2, EquationKind::ReggeWheeler);
        let z = mode(2, EquationKind::Zerilli);
        assert_eq!(potential_4d(&bg, &rw, 2.0), -1.0);
        assert_relative_eq!(
            potential_4d(&bg, &z, 2.0),
            -11.0 / 14.0,
            max_relative = 1e-14
        );
        // RW falls off like r^-3
        assert_relative_eq!(
            potential_4d(&bg, &rw, 1e5) * 1e15,
            -8.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn zerilli_two_forms_agree() {
        let bg = bg();
        for ell in 2..=6 {
            let md = mode(ell, EquationKind::Zerilli);
            for k in 0..2000 {
                let r = 2.0 * (1e4_f64).powf(k as f64 / 1999.0);
                let a = potential_4d(&bg, &md, r);
                let b = zerilli_potential_direct(&bg, &md, r);
                assert!(
                    (a - b).abs() <= 1e-13 * a.abs().max(b.abs()),
                    "forms disagree at ell={ell}, r={r}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn potential_1p1_values_and_positivity() {
        let bg = bg();
        let rw = mode(2, EquationKind::ReggeWheeler);
        // (1/3)(6/9 - 6/27) = 4/27
        assert_relative_eq!(potential_1p1(&bg, &rw, 3.0), 4.0 / 27.0, max_relative = 1e-14);
        // eta factor kills the potential at the horizon
        assert_eq!(potential_1p1(&bg, &rw, 2.0), 0.0);
        // positivity on a log grid for both kinds, ell in 2..=10
        for ell in 2..=10 {
            for kind in [EquationKind::ReggeWheeler, EquationKind::Zerilli] {
                let md = mode(ell, kind);
                for k in 0..2000 {
                    let x = 1e-9 * (1e13_f64).powf(k as f64 / 1999.0);
                    let r = 2.0 + x;
                    assert!(
                        potential_1p1(&bg, &md, r) > 0.0,
                        "V_ell <= 0 at ell={ell} kind={kind} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn potential_scales_with_mass() {
        // dimensional consistency: V_ell(M, r) = V_ell(1, r/M)/M^2
        let bg1 = bg();
        let bg2 = BackgroundParams::new(3.0).unwrap();
        let md = mode(2, EquationKind::Zerilli);
        for r_hat in [2.5, 3.0, 10.0, 50.0] {
            let v1 = potential_1p1(&bg1, &md, r_hat);
            let v2 = potential_1p1(&bg2, &md, 3.0 * r_hat);
            assert_relative_eq!(v2, v1 / 9.0, max_relative = 1e-13);
        }
    }
}
