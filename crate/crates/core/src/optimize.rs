//! One-dimensional minimization over evolution time.

use crate::error::{Error, Result};

/// Coarse scan density before refinement.
pub const POINTS_PER_DECADE: usize = 32;
/// Default relative tolerance on the optimal time.
pub const DEFAULT_REL_TOL: f64 = 1e-4;

/// Direction of a bracket-free objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    /// Smallest value at the lower end of the range.
    Increasing,
    /// Smallest value at the upper end of the range.
    Decreasing,
}

/// Outcome of a scan plus refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimum {
    Interior { t: f64, value: f64, evaluations: usize },
    Monotone { trend: Trend, t: f64, value: f64, evaluations: usize },
}

impl Optimum {
    pub fn t(&self) -> f64 {
        match *self {
            Optimum::Interior { t, .. } | Optimum::Monotone { t, .. } => t,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Optimum::Interior { value, .. } | Optimum::Monotone { value, .. } => value,
        }
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, Optimum::Interior { .. })
    }
}

/// Log-spaced grid from lo to hi with `per_decade` points per decade (both ends included).
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || per_decade == 0 {
        return Err(Error::InvalidParameter(format!("log grid needs 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1) + 1;
    Ok((0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect())
}

/// Minimizes f over [lo, hi]. Failed or non-finite evaluations count as +∞.
pub fn minimize_time<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<Optimum> {
    let mut eval = |t: f64| match f(t) {
        Ok(v) if v.is_finite() => v,
        _ => f64::INFINITY,
    };
    let grid = log_grid(lo, hi, POINTS_PER_DECADE)?;
    let vals: Vec<f64> = grid.iter().map(|&t| eval(t)).collect();
    let mut evaluations = grid.len();
    let (i, &best) = vals.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    if !best.is_finite() {
        return Err(Error::Numeric("objective is not finite anywhere on the scan".into()));
    }
    if i == 0 || i == grid.len() - 1 {
        let trend = if i == 0 { Trend::Increasing } else { Trend::Decreasing };
        return Ok(Optimum::Monotone { trend, t: grid[i], value: best, evaluations });
    }
    // golden section in ln t
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (grid[i - 1].ln(), grid[i + 1].ln());
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (eval(x1.exp()), eval(x2.exp()));
    evaluations += 2;
    while b - a > rel_tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = eval(x1.exp());
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = eval(x2.exp());
        }
        evaluations += 1;
    }
    let (t, value) = if f1 <= f2 { (x1.exp(), f1) } else { (x2.exp(), f2) };
    let (t, value) = if value <= best { (t, value) } else { (grid[i], best) };
    Ok(Optimum::Interior { t, value, evaluations })
}
