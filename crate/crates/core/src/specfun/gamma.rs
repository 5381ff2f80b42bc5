//! Log-gamma by Lanczos approximation (g = 7, 9 coefficients) plus a
//! reflection-based gamma for negative non-integer arguments.

use std::f64::consts::PI;

// GSL's g=7 coefficient set; |rel err| < 1e-13 on the positive axis.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// ln Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma(x) for real non-pole x, via reflection when x < 0.
pub fn gamma(x: f64) -> f64 {
    if x > 0.0 {
        ln_gamma(x).exp()
    } else {
        assert!(
            x != x.floor(),
            "gamma pole at non-positive integer x = {x}"
        );
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        PI / ((PI * x).sin() * ln_gamma(1.0 - x).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn integer_and_half_integer_values() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.5), std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(10.0), 12.801827480081469, max_relative = 1e-13);
    }

    #[test]
    fn recurrence_on_positive_axis() {
        for k in 0..200 {
            let x = 0.05 + k as f64 * 0.37;
            let lhs = ln_gamma(x + 1.0);
            let rhs = ln_gamma(x) + x.ln();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn reflection_for_negative_arguments() {
        // Gamma(-0.5) = -2 sqrt(pi); Gamma(-1.5) = 4 sqrt(pi)/3
        let sp = std::f64::consts::PI.sqrt();
        assert_relative_eq!(gamma(-0.5), -2.0 * sp, max_relative = 1e-12);
        assert_relative_eq!(gamma(-1.5), 4.0 * sp / 3.0, max_relative = 1e-12);
    }
}
