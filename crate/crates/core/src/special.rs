//! Special functions needed by the reference curves.

use core::f64::consts::PI;

/// Volume of the unit ball in `d` dimensions, `pi^(d/2) / Gamma(d/2 + 1)`.
///
/// Evaluated by the two-step recursion `omega_d = 2 pi / d * omega_{d-2}`
/// from `omega_0 = 1`, `omega_1 = 2`, which is exact up to rounding.
pub fn unit_ball_volume(d: usize) -> f64 {
    let mut omega = if d.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if d.is_multiple_of(2) { 2 } else { 3 };
    while k <= d {
        omega *= 2.0 * PI / k as f64;
        k += 2;
    }
    omega
}

// B_2, B_4, ..., B_10
const BERNOULLI: [f64; 5] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0];

/// Riemann zeta function at an integer argument `s >= 2`.
///
/// Direct sum of the first `N - 1` terms plus the Euler-Maclaurin tail
/// `N^{1-s}/(s-1) + N^{-s}/2 + sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) N^{-s-2k+1}`.
/// With `N = 16` the neglected remainder is below 1e-17 for every `s >= 2`.
pub fn zeta(s: u32) -> f64 {
    assert!(s >= 2, "zeta diverges at s = {s}");
    const N: u32 = 16;
    let sf = f64::from(s);
    let mut sum = 0.0;
    for k in (1..N).rev() {
        sum += libm::pow(f64::from(k), -sf);
    }
    let n = f64::from(N);
    let n_pow = libm::pow(n, -sf);
    let mut tail = n * n_pow / (sf - 1.0) + 0.5 * n_pow;
    // rising factorial s (s+1) ... (s+2k-2) / (2k)!
    let mut coef = sf / 2.0;
    let mut n_term = n_pow / n;
    for (k, b) in BERNOULLI.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            coef *= (sf + j - 1.0) * (sf + j) / ((j + 1.0) * (j + 2.0));
            n_term /= n * n;
        }
        tail += b * coef * n_term;
    }
    sum + tail
}

/// `n!` as a float; exact for `n <= 22`.
pub fn factorial(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((unit_ball_volume(8) - PI.powi(4) / 24.0).abs() < 1e-14);
        assert!((unit_ball_volume(8) - 4.058_712_126_416_768).abs() < 1e-13);
        for d in 1..60 {
            let gamma_form = libm::pow(PI, d as f64 / 2.0) / libm::tgamma(d as f64 / 2.0 + 1.0);
            let rel = (unit_ball_volume(d) - gamma_form).abs() / gamma_form;
            assert!(rel < 1e-12, "d={d} rel={rel}");
        }
    }

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(3) - 1.202_056_903_159_594_2).abs() < 1e-15);
        assert!((zeta(8) - PI.powi(8) / 9450.0).abs() < 1e-15);
        assert!((zeta(60) - 1.0).abs() < 1e-17);
    }

    #[test]
    fn zeta_matches_brute_force_for_large_s() {
        for s in 6..20u32 {
            let brute: f64 = (1..200_000u32).rev().map(|k| libm::pow(k as f64, -(s as f64))).sum();
            assert!((zeta(s) - brute).abs() < 1e-15, "s={s}");
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1.0);
        assert_eq!(factorial(7), 5040.0);
    }
}
