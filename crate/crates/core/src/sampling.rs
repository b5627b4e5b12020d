//! Exact samplers for the join parameter and for uniform simplex weights.

use libm::{exp, fabs, lgamma, log, log1p, pow};

use crate::rng::UniformSource;

/// Beta law with positive integer shapes, inverted exactly so that
/// equal-probability strata on the join parameter are exact.
///
/// Uses `I_t(a, b) = P(Bin(a + b - 1, t) >= a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaInt {
    a: u32,
    b: u32,
    ln_norm: f64,
    ln_choose_a: f64,
}

impl BetaInt {
    pub fn new(a: u32, b: u32) -> Self {
        assert!(a >= 1 && b >= 1, "Beta shapes must be positive");
        let (af, bf) = (f64::from(a), f64::from(b));
        Self {
            a,
            b,
            ln_norm: lgamma(af + bf) - lgamma(af) - lgamma(bf),
            ln_choose_a: lgamma(af + bf) - lgamma(af + 1.0) - lgamma(bf),
        }
    }

    pub fn shapes(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn mean(&self) -> f64 {
        f64::from(self.a) / f64::from(self.a + self.b)
    }

    pub fn pdf(&self, t: f64) -> f64 {
        if !(0.0..=1.0).contains(&t) {
            return 0.0;
        }
        let (a, b) = (f64::from(self.a), f64::from(self.b));
        let mut ln = self.ln_norm;
        if self.a > 1 {
            ln += (a - 1.0) * log(t);
        }
        if self.b > 1 {
            ln += (b - 1.0) * log1p(-t);
        }
        exp(ln)
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let n = self.a + self.b - 1;
        let nf = f64::from(n);
        let (lt, l1t) = (log(t), log1p(-t));
        let odds = t / (1.0 - t);
        // Binomial terms by the ratio recurrence, summing the small tail.
        let (start, end, sign) = if t * nf < f64::from(self.a) {
            (self.a, n, 1.0)
        } else {
            (0, self.a - 1, -1.0)
        };
        let mut term = exp(self.ln_choose(start) + f64::from(start) * lt + f64::from(n - start) * l1t);
        let mut sum = 0.0;
        for k in start..=end {
            sum += term;
            term *= f64::from(n - k) / f64::from(k + 1) * odds;
        }
        if sign > 0.0 {
            sum.min(1.0)
        } else {
            (1.0 - sum).max(0.0)
        }
    }

    fn ln_choose(&self, k: u32) -> f64 {
        if k == 0 {
            0.0
        } else {
            self.ln_choose_a
        }
    }

    /// Inverse CDF on `[0, 1]`.
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return 1.0;
        }
        if self.b == 1 {
            return pow(p, 1.0 / f64::from(self.a));
        }
        if self.a == 1 {
            return 1.0 - pow(1.0 - p, 1.0 / f64::from(self.b));
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut t = self.mean();
        for _ in 0..200 {
            let f = self.cdf(t) - p;
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let dens = self.pdf(t);
            let mut next = if dens > 0.0 { t - f / dens } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if fabs(next - t) <= 1e-15 * t.max(1e-300) || hi - lo <= 1e-16 {
                return next;
            }
            t = next;
        }
        t
    }
}

/// Fills `weights` with a uniform point of the standard simplex
/// (normalised exponential spacings).
pub fn dirichlet_uniform<R: UniformSource + ?Sized>(rng: &mut R, weights: &mut [f64]) {
    let mut total = 0.0;
    for w in weights.iter_mut() {
        *w = -log(rng.next_f64());
        total += *w;
    }
    for w in weights.iter_mut() {
        *w /= total;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    #[test]
    fn cdf_matches_closed_forms() {
        // Beta(3,1): t^3; Beta(1,4): 1-(1-t)^4; Beta(2,2): 3t^2 - 2t^3
        for &t in &[0.01, 0.2, 0.5, 0.77, 0.99] {
            assert!((BetaInt::new(3, 1).cdf(t) - t * t * t).abs() < 1e-14);
            assert!((BetaInt::new(1, 4).cdf(t) - (1.0 - (1.0 - t).powi(4))).abs() < 1e-14);
            assert!((BetaInt::new(2, 2).cdf(t) - (3.0 * t * t - 2.0 * t * t * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn cdf_matches_integrated_pdf() {
        let law = BetaInt::new(3, 9);
        let g = crate::gauss::GaussLegendre::new(40);
        for &t in &[0.05, 0.25, 0.6] {
            let area = g.integrate(0.0, t, |x| law.pdf(x));
            assert!((area - law.cdf(t)).abs() < 1e-13);
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &(a, b) in &[(3, 1), (3, 5), (3, 39), (7, 1), (2, 2), (1, 3)] {
            let law = BetaInt::new(a, b);
            for i in 1..200 {
                let p = f64::from(i) / 200.0;
                let t = law.quantile(p);
                assert!((law.cdf(t) - p).abs() < 1e-12, "a={a} b={b} p={p}");
            }
            assert!(law.quantile(1e-14) >= 0.0);
        }
    }

    #[test]
    fn dirichlet_on_simplex_with_uniform_mean() {
        let mut s = Stream::new(3, 0);
        let mut w = [0.0; 5];
        let mut mean = [0.0; 5];
        let n = 50_000;
        for _ in 0..n {
            dirichlet_uniform(&mut s, &mut w);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (m, x) in mean.iter_mut().zip(&w) {
                *m += x / n as f64;
            }
        }
        for m in mean {
            assert!((m - 0.2).abs() < 0.005);
        }
    }
}
