use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::theta::LogThetaArgs;

/// Sampling ranges for numeric checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericDomain {
    /// `|ab|` is drawn log-uniformly from `[min_abs_ab, max_abs_ab]`.
    pub min_abs_ab: f64,
    pub max_abs_ab: f64,
    /// Bound on `|ln|a||`-style imbalance between `a` and `b`.
    pub max_log_modulus: f64,
    pub max_im_x: f64,
    /// `Im τ` is drawn from this range; `Re τ` from `[-1/2, 1/2]`.
    pub tau_im: (f64, f64),
    /// `|z|` bound for single-variable checks.
    pub max_abs_z: f64,
    /// Real nome range.
    pub q_range: (f64, f64),
}

impl Default for NumericDomain {
    fn default() -> Self {
        Self {
            min_abs_ab: 0.01,
            max_abs_ab: 0.5,
            max_log_modulus: 0.5,
            max_im_x: 0.1,
            tau_im: (0.5, 1.5),
            max_abs_z: 0.7,
            q_range: (0.05, 0.6),
        }
    }
}

impl NumericDomain {
    pub fn is_empty(&self) -> bool {
        !(0.0 < self.min_abs_ab
            && self.min_abs_ab <= self.max_abs_ab
            && self.max_abs_ab < 1.0
            && self.max_log_modulus >= 0.0
            && self.max_im_x >= 0.0
            && 0.0 < self.tau_im.0
            && self.tau_im.0 <= self.tau_im.1
            && 0.0 < self.max_abs_z
            && self.max_abs_z < 1.0
            && 0.0 < self.q_range.0
            && self.q_range.0 <= self.q_range.1
            && self.q_range.1 < 1.0)
    }

    pub fn describe(&self) -> String {
        format!(
            "|ab| in [{}, {}], ln|a| <= {}, |Im x| <= {}, Im tau in [{}, {}], |z| <= {}, q in [{}, {}]",
            self.min_abs_ab,
            self.max_abs_ab,
            self.max_log_modulus,
            self.max_im_x,
            self.tau_im.0,
            self.tau_im.1,
            self.max_abs_z,
            self.q_range.0,
            self.q_range.1
        )
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> NumericSample {
        let span = |rng: &mut R, lo: f64, hi: f64| if lo < hi { rng.random_range(lo..=hi) } else { lo };
        let phase = |rng: &mut R| rng.random_range(-PI..PI);

        let log_ab = span(rng, self.min_abs_ab.ln(), self.max_abs_ab.ln());
        let la = span(rng, log_ab - self.max_log_modulus, self.max_log_modulus);
        let log_a = Complex64::new(la, phase(rng));
        let log_b = Complex64::new(log_ab - la, phase(rng));
        let x = Complex64::new(span(rng, -0.5, 0.5), span(rng, -self.max_im_x, self.max_im_x));

        let tau = Complex64::new(span(rng, -0.5, 0.5), span(rng, self.tau_im.0, self.tau_im.1));
        // Im f and Im(2τ - f) both positive.
        let f_im = 2.0 * tau.im * span(rng, 0.05, 0.95);
        let f_tau = Complex64::new(span(rng, -0.5, 0.5), f_im);

        let z = Complex64::from_polar(span(rng, 0.0, self.max_abs_z), phase(rng));
        let q = span(rng, self.q_range.0, self.q_range.1);
        NumericSample::assemble(log_a, log_b, x, tau, f_tau, z, q)
    }
}

/// One admissible parameter point. Every check reads only the fields it
/// needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericSample {
    pub a: Complex64,
    pub b: Complex64,
    pub x: Complex64,
    pub log_a: Complex64,
    pub log_b: Complex64,
    pub tau: Complex64,
    pub f_tau: Complex64,
    /// `2τ - f(τ)`.
    pub g_tau: Complex64,
    pub z: Complex64,
    pub q: f64,
}

impl NumericSample {
    fn assemble(
        log_a: Complex64,
        log_b: Complex64,
        x: Complex64,
        tau: Complex64,
        f_tau: Complex64,
        z: Complex64,
        q: f64,
    ) -> Self {
        Self {
            a: log_a.exp(),
            b: log_b.exp(),
            x,
            log_a,
            log_b,
            tau,
            f_tau,
            g_tau: 2.0 * tau - f_tau,
            z,
            q,
        }
    }

    /// A sample pinned at the given theta arguments; the remaining fields
    /// take fixed admissible values.
    pub fn with_theta(log_a: Complex64, log_b: Complex64, x: Complex64) -> Self {
        Self::assemble(
            log_a,
            log_b,
            x,
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.3, 0.0),
            0.3,
        )
    }

    /// A sample pinned at the given `(τ, f(τ), x)`.
    pub fn with_jacobi(tau: Complex64, f_tau: Complex64, x: Complex64) -> Self {
        let l = Complex64::new(0.5f64.ln() / 2.0, 0.0);
        Self::assemble(l, l, x, tau, f_tau, Complex64::new(0.3, 0.0), 0.3)
    }

    pub fn theta_args(&self) -> LogThetaArgs {
        LogThetaArgs {
            log_a: self.log_a,
            log_b: self.log_b,
            x: self.x,
        }
    }

    /// Whether every stated domain constraint holds.
    pub fn is_admissible(&self) -> bool {
        (self.a * self.b).norm() < 1.0
            && self.tau.im > 0.0
            && self.f_tau.im > 0.0
            && self.g_tau.im > 0.0
            && self.z.norm() < 1.0
            && 0.0 < self.q
            && self.q < 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_respect_the_domain() {
        let dom = NumericDomain::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let s = dom.draw(&mut rng);
            assert!(s.is_admissible());
            assert!((s.a * s.b).norm() <= dom.max_abs_ab * (1.0 + 1e-12));
            assert!(s.tau.im >= dom.tau_im.0);
            assert!(s.z.norm() <= dom.max_abs_z);
        }
    }

    #[test]
    fn empty_domains() {
        let mut d = NumericDomain::default();
        assert!(!d.is_empty());
        d.max_abs_ab = 1.2;
        assert!(d.is_empty());
        let d = NumericDomain {
            tau_im: (1.0, 0.5),
            ..NumericDomain::default()
        };
        assert!(d.is_empty());
    }
}
