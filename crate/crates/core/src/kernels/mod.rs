//! Special functions and series machinery shared by the closed-form evaluators.

mod bessel;
mod series;

pub use bessel::{bessel_j, bessel_j_range};
pub use series::{finite_difference_slope, jacobi_anger_sum, jacobi_anger_sum_with_derivative, CutoffPolicy, Slope, TruncatedSeriesResult};

use num_complex::Complex64;

/// ln Σ exp(x_i), skipping −∞ terms; −∞ for an empty or all-zero sum.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let v: Vec<f64> = xs.into_iter().collect();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = v.iter().map(|x| (x - max).exp()).sum();
    max + s.ln()
}

/// p·ln|cos θ| together with the sign of cos(θ)^p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPow {
    pub log: f64,
    pub negative: bool,
}

impl LogPow {
    pub fn value(&self) -> f64 {
        let v = self.log.exp();
        if self.negative {
            -v
        } else {
            v
        }
    }
}

/// cos(θ)^p in the log domain. A zero cosine (|cos θ| < 1e−15) gives `log = −∞`; a negative
/// cosine with non-integral p has no real power and gives `log = NaN`.
pub fn log_cos_pow(theta: f64, p: f64) -> LogPow {
    if p == 0.0 {
        return LogPow { log: 0.0, negative: false };
    }
    let c = theta.cos();
    // θ within rounding of a zero of the cosine
    if c.abs() < 1e-15 {
        return LogPow { log: f64::NEG_INFINITY, negative: false };
    }
    let ln_abs = if c.abs() > 0.5 {
        let s = theta.sin();
        0.5 * (-s * s).ln_1p()
    } else {
        c.abs().ln()
    };
    let mut negative = false;
    let mut log = p * ln_abs;
    if c < 0.0 {
        if p.fract() != 0.0 {
            log = f64::NAN;
        } else {
            negative = (p % 2.0) == 1.0;
        }
    }
    LogPow { log, negative }
}

/// e^z − 1 without cancellation for small |z|.
pub fn cexpm1(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let em1 = z.re.exp_m1();
    let half = (0.5 * z.im).sin();
    // e^a cos b − 1 = (e^a − 1) cos b − 2 sin²(b/2)
    Complex64::new(em1 * c - 2.0 * half * half, (em1 + 1.0) * s)
}

/// Regularized lower incomplete gamma P(n, s) = 1 − e^{−s} Σ_{j<n} s^j/j!
/// for integer n ≥ 1 and s ≥ 0, accurate when s ≪ 1.
pub fn gamma_p(n: u32, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s < n as f64 + 30.0 {
        // e^{−s} Σ_{k≥n} s^k/k!
        let mut term = (-s).exp();
        for j in 1..=n {
            term *= s / j as f64;
        }
        let mut sum = 0.0;
        let mut k = n;
        loop {
            sum += term;
            k += 1;
            term *= s / k as f64;
            if term < 1e-17 * sum || term == 0.0 {
                break;
            }
        }
        sum
    } else {
        let mut partial = 0.0;
        let mut term = 1.0;
        for j in 0..n {
            if j > 0 {
                term *= s / j as f64;
            }
            partial += term;
        }
        1.0 - (-s).exp() * partial
    }
}

/// ln k!
pub fn ln_factorial(k: u64) -> f64 {
    if k < 64 {
        (2..=k).map(|i| (i as f64).ln()).sum()
    } else {
        let x = k as f64 + 1.0;
        // Stirling series for ln Γ(x)
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
            + 1.0 / (1260.0 * x.powi(5))
    }
}
