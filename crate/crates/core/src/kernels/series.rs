//! Truncated Jacobi-Anger sums and the finite-difference slope oracle.

use super::{bessel_j_range, ln_factorial};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Value of a truncated series with its truncation bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

/// Where to cut Σ_n iⁿ J_n(x) w(n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPolicy {
    /// Multiplies the default margin 40 + 10|x|^{1/3}.
    pub margin_factor: f64,
    /// Largest tail bound accepted, relative to max(1, |value|).
    pub tolerance: f64,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self { margin_factor: 1.0, tolerance: 1e-12 }
    }
}

impl CutoffPolicy {
    pub fn cutoff(&self, x: Complex64) -> usize {
        let ax = x.norm();
        (ax + self.margin_factor * (40.0 + 10.0 * ax.cbrt())).ceil() as usize
    }
}

/// Bound on Σ_{|n|>M} |J_n(x)| from |J_n(x)| ≤ |x/2|ⁿ e^{|Im x|}/n!.
fn tail_bound(x: Complex64, m: usize) -> f64 {
    let h = 0.5 * x.norm();
    if h == 0.0 {
        return 0.0;
    }
    let k = m as u64 + 1;
    let r = h / (k as f64 + 1.0);
    if r >= 1.0 {
        return f64::INFINITY;
    }
    let log_t = x.im.abs() + k as f64 * h.ln() - ln_factorial(k) - (1.0 - r).ln() + 2f64.ln();
    log_t.exp()
}

fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn j_signed(j: &[Complex64], n: i64) -> Complex64 {
    let k = n.unsigned_abs() as usize;
    if n < 0 && k % 2 == 1 {
        -j[k]
    } else {
        j[k]
    }
}

/// Σ_{|n|≤M} iⁿ J_n(x) w(n) for weights bounded by 1 in magnitude.
pub fn jacobi_anger_sum<W: Fn(i64) -> Complex64>(x: Complex64, weight: W, policy: CutoffPolicy) -> Result<TruncatedSeriesResult> {
    Ok(jacobi_anger_sum_with_derivative(x, weight, policy)?.0)
}

/// The sum and its x-derivative Σ iⁿ J_n'(x) w(n), with J_n' = (J_{n−1} − J_{n+1})/2.
pub fn jacobi_anger_sum_with_derivative<W: Fn(i64) -> Complex64>(
    x: Complex64,
    weight: W,
    policy: CutoffPolicy,
) -> Result<(TruncatedSeriesResult, Complex64)> {
    let m = policy.cutoff(x);
    let j = bessel_j_range(m + 1, x)?;
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    let mi = m as i64;
    for n in -mi..=mi {
        let jn = j_signed(&j, n);
        let djn = 0.5 * (j_signed(&j, n - 1) - j_signed(&j, n + 1));
        if jn == Complex64::new(0.0, 0.0) && djn == Complex64::new(0.0, 0.0) {
            continue;
        }
        let w = i_pow(n) * weight(n);
        value += w * jn;
        deriv += w * djn;
    }
    let tail = tail_bound(x, m);
    if !(tail <= policy.tolerance * value.norm().max(1.0)) {
        return Err(Error::SeriesNonConvergence { tail_bound: tail, tolerance: policy.tolerance });
    }
    Ok((TruncatedSeriesResult { value, terms_used: 2 * m + 1, tail_bound: tail }, deriv))
}

/// Slope estimate and its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slope {
    pub value: f64,
    pub error: f64,
}

/// Fourth-order central difference with step 1e−3·scale. The error estimate is
/// the Richardson difference between the step-h and step-2h second-order
/// estimates.
pub fn finite_difference_slope<F: FnMut(f64) -> f64>(mut f: F, beta0: f64, scale: f64) -> Result<Slope> {
    if !(scale > 0.0) || !beta0.is_finite() {
        return Err(Error::InvalidParameter("finite difference needs scale > 0 and finite beta0".into()));
    }
    let h = 1e-3 * scale;
    let pts = [beta0 - 2.0 * h, beta0 - h, beta0, beta0 + h, beta0 + 2.0 * h];
    let v: Vec<f64> = pts.iter().map(|&b| f(b)).collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("non-finite evaluation in finite-difference stencil".into()));
    }
    let d1 = (v[3] - v[1]) / (2.0 * h);
    let d2 = (v[4] - v[0]) / (4.0 * h);
    let value = (4.0 * d1 - d2) / 3.0;
    let roundoff = 16.0 * f64::EPSILON * v.iter().map(|x| x.abs()).fold(0.0, f64::max) / h;
    let error = (d1 - d2).abs() / 3.0 + roundoff;
    Ok(Slope { value, error })
}
