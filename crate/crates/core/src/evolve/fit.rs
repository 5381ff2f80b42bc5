//! Power-law tail fitting: least-squares slope of ln|y| against ln t plus
//! the running local index, with guards against ringing contamination and
//! the double-precision tail floor.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    pub observable: String,
    pub window: (f64, f64),
    pub n_points: usize,
    /// Fitted exponent p in |y| ~ t^p.
    pub exponent: f64,
    pub stderr: f64,
    /// Sampled local index p(t) = d ln|y| / d ln t from centered differences.
    pub local_index: Vec<(f64, f64)>,
}

/// Relative floor below which the tail is considered roundoff-dominated.
pub const TAIL_FLOOR: f64 = 1e-12;

/// Maximum sign changes tolerated inside the window before it is declared
/// ringing-contaminated.
const MAX_SIGN_CHANGES: usize = 2;

pub fn fit_decay(
    observable: &str,
    ts: &[f64],
    ys: &[f64],
    window: (f64, f64),
) -> Result<DecayFit> {
    if ts.len() != ys.len() || ts.is_empty() {
        return Err(Error::InvalidParameter("fit series empty or mismatched".into()));
    }
    let (t0, t1) = window;
    if !(t1 > t0) {
        return Err(Error::FitWindow(format!("window [{t0}, {t1}] is empty")));
    }
    let t_first = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let t_last = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if t0 < t_first || t1 > t_last {
        return Err(Error::FitWindow(format!(
            "window [{t0}, {t1}] outside the sampled range [{t_first}, {t_last}]"
        )));
    }
    let peak = ys.iter().fold(0.0f64, |m, &y| m.max(y.abs()));
    if peak == 0.0 {
        return Err(Error::FitWindow("series is identically zero".into()));
    }

    let mut lt = Vec::new();
    let mut ly = Vec::new();
    let mut sign_changes = 0usize;
    let mut prev_sign = 0i8;
    for (&t, &y) in ts.iter().zip(ys) {
        if t < t0 || t > t1 || !y.is_finite() || !t.is_finite() {
            continue;
        }
        if y.abs() < TAIL_FLOOR * peak {
            return Err(Error::FitWindow(format!(
                "|{observable}| fell below {TAIL_FLOOR:.0e} * peak inside the window (t = {t}); \
                 increase resolution rather than the window"
            )));
        }
        let s = if y > 0.0 { 1 } else { -1 };
        if prev_sign != 0 && s != prev_sign {
            sign_changes += 1;
        }
        prev_sign = s;
        lt.push(t.ln());
        ly.push(y.abs().ln());
    }
    if lt.len() < 8 {
        return Err(Error::FitWindow(format!(
            "only {} usable samples in the window",
            lt.len()
        )));
    }
    if sign_changes > MAX_SIGN_CHANGES {
        return Err(Error::FitWindow(format!(
            "{sign_changes} sign changes in the window: ringing contamination"
        )));
    }

    let n = lt.len() as f64;
    let mean_t = lt.iter().sum::<f64>() / n;
    let mean_y = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in lt.iter().zip(&ly) {
        sxx += (x - mean_t) * (x - mean_t);
        sxy += (x - mean_t) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_t;
    let mut ss_res = 0.0;
    for (&x, &y) in lt.iter().zip(&ly) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
    }
    let stderr = if lt.len() > 2 {
        (ss_res / (n - 2.0) / sxx).sqrt()
    } else {
        f64::INFINITY
    };
    if !slope.is_finite() {
        return Err(Error::FitWindow("fitted exponent is not finite".into()));
    }

    // local index on a coarse stride (about 30 samples across the window)
    let stride = (lt.len() / 30).max(1);
    let mut local_index = Vec::new();
    let mut i = stride;
    while i + stride < lt.len() {
        let dldt = (ly[i + stride] - ly[i - stride]) / (lt[i + stride] - lt[i - stride]);
        local_index.push((lt[i].exp(), dldt));
        i += stride;
    }

    Ok(DecayFit {
        observable: observable.to_string(),
        window,
        n_points: lt.len(),
        exponent: slope,
        stderr,
        local_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn synthetic(p: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
        let ts: Vec<f64> = (0..n).map(|k| 10.0 + k as f64).collect();
        let ys: Vec<f64> = ts.iter().map(|&t| t.powf(p)).collect();
        (ts, ys)
    }

    #[test]
    fn exact_power_law() {
        let (ts, ys) = synthetic(-7.0, 500);
        let fit = fit_decay("psi", &ts, &ys, (20.0, 400.0)).unwrap();
        assert_abs_diff_eq!(fit.exponent, -7.0, epsilon = 1e-6);
        assert!(fit.stderr < 1e-6);
        for &(_, p) in &fit.local_index {
            assert_abs_diff_eq!(p, -7.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn window_outside_range_rejected() {
        let (ts, ys) = synthetic(-2.0, 100);
        assert!(fit_decay("x", &ts, &ys, (5.0, 50.0)).is_err());
        assert!(fit_decay("x", &ts, &ys, (50.0, 5000.0)).is_err());
        assert!(fit_decay("x", &ts, &ys, (50.0, 50.0)).is_err());
    }

    #[test]
    fn ringing_detected() {
        let ts: Vec<f64> = (0..400).map(|k| 10.0 + k as f64 * 0.5).collect();
        let ys: Vec<f64> = ts
            .iter()
            .map(|&t| (0.9 * t).sin() * t.powf(-3.0))
            .collect();
        let err = fit_decay("x", &ts, &ys, (20.0, 200.0)).unwrap_err();
        assert!(matches!(err, Error::FitWindow(_)), "{err}");
    }

    #[test]
    fn floor_guard_triggers() {
        let ts: Vec<f64> = (0..300).map(|k| 10.0 + k as f64).collect();
        // peak O(1) but decays below 1e-12*peak inside the window
        let ys: Vec<f64> = ts.iter().map(|&t| (-(t - 10.0)).exp()).collect();
        let err = fit_decay("x", &ts, &ys, (20.0, 250.0)).unwrap_err();
        assert!(matches!(err, Error::FitWindow(_)), "{err}");
    }
}
