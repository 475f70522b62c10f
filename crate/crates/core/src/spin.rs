//! Collective spin algebra in the Dicke basis.
//!
//! Basis index `k = 0..=N` labels `m = N/2 − k`, so index 0 is the fully
//! up-polarized state and index `N` the fully down-polarized one.

use crate::error::{Error, Result};
use crate::kernels::log_sum_exp;
use ndarray::Array2;
use num_complex::Complex64;

/// Magnetic quantum number of Dicke index `k`.
pub fn m_of(n: u64, k: usize) -> f64 {
    n as f64 / 2.0 - k as f64
}

/// ⟨m+1|S⁺|m⟩ = √(S(S+1) − m(m+1)).
pub fn ladder_element(n: u64, m: f64) -> f64 {
    let s = n as f64 / 2.0;
    (s * (s + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// Dense (S_x, S_y, S_z) of dimension N+1.
pub fn spin_operators(n: u64) -> Result<(Array2<Complex64>, Array2<Complex64>, Array2<Complex64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("spin_operators needs N >= 1".into()));
    }
    let d = n as usize + 1;
    let mut sp = Array2::<Complex64>::zeros((d, d));
    let mut sz = Array2::<Complex64>::zeros((d, d));
    for k in 0..d {
        let m = m_of(n, k);
        sz[[k, k]] = Complex64::new(m, 0.0);
        if k > 0 {
            // S⁺|m⟩ lands on index k−1
            sp[[k - 1, k]] = Complex64::new(ladder_element(n, m), 0.0);
        }
    }
    let sm = sp.t().mapv(|z| z.conj());
    let sx = (&sp + &sm).mapv(|z| z * 0.5);
    let sy = (&sp - &sm).mapv(|z| z * Complex64::new(0.0, -0.5));
    Ok((sx, sy, sz))
}

/// Orientation of a spin coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpinAxis {
    PlusX,
    MinusZ,
    /// Polar angle θ from +z and azimuth φ from +x.
    Polar {
        theta: f64,
        phi: f64,
    },
}

/// Spin coherent state coefficients stored as log-magnitudes plus phases.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentCoefficients {
    pub n: u64,
    /// ln|c_k|, −∞ for exact zeros.
    pub log_mag: Vec<f64>,
    /// Unit phases; `None` means every coefficient is real and nonnegative.
    pub phase: Option<Vec<Complex64>>,
}

impl CoherentCoefficients {
    pub fn sign(&self, k: usize) -> Complex64 {
        match &self.phase {
            Some(p) => p[k],
            None => Complex64::new(1.0, 0.0),
        }
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.sign(k) * self.log_mag[k].exp()
    }

    pub fn to_vector(&self) -> Vec<Complex64> {
        (0..self.log_mag.len()).map(|k| self.amplitude(k)).collect()
    }

    /// ln Σ|c_k|², which should be 0.
    pub fn log_norm_sq(&self) -> f64 {
        log_sum_exp(self.log_mag.iter().map(|l| 2.0 * l))
    }
}

/// ln binom(N, k) up to a common additive constant, built outward from the
/// centre by the ratio recurrence so that no factorial is ever formed.
fn relative_log_binomials(n: u64) -> Vec<f64> {
    let d = n as usize + 1;
    let mut out = vec![0.0; d];
    let c = d / 2;
    for k in c..d - 1 {
        // binom(N,k+1)/binom(N,k) = (N−k)/(k+1)
        out[k + 1] = out[k] + ((n - k as u64) as f64 / (k as f64 + 1.0)).ln();
    }
    for k in (1..=c).rev() {
        // binom(N,k−1)/binom(N,k) = k/(N−k+1)
        out[k - 1] = out[k] + (k as f64 / (n - k as u64 + 1) as f64).ln();
    }
    out
}

/// Coefficients of |N/2⟩ rotated onto `axis`, normalized in the log domain.
pub fn coherent_spin_state(n: u64, axis: SpinAxis) -> Result<CoherentCoefficients> {
    if n == 0 {
        return Err(Error::InvalidParameter("coherent_spin_state needs N >= 1".into()));
    }
    let d = n as usize + 1;
    let (theta, phi) = match axis {
        SpinAxis::PlusX => (std::f64::consts::FRAC_PI_2, 0.0),
        SpinAxis::MinusZ => {
            let mut log_mag = vec![f64::NEG_INFINITY; d];
            log_mag[d - 1] = 0.0;
            return Ok(CoherentCoefficients { n, log_mag, phase: None });
        }
        SpinAxis::Polar { theta, phi } => (theta, phi),
    };
    let lb = relative_log_binomials(n);
    let lc = (theta / 2.0).cos().abs().ln();
    let ls = (theta / 2.0).sin().abs().ln();
    let mut log_mag: Vec<f64> = (0..d)
        .map(|k| {
            // index k carries S+m = N−k up-spins
            let up = (n as usize - k) as f64;
            let down = k as f64;
            let a = if up == 0.0 { 0.0 } else { up * lc };
            let b = if down == 0.0 { 0.0 } else { down * ls };
            0.5 * lb[k] + a + b
        })
        .collect();
    let half_norm = 0.5 * log_sum_exp(log_mag.iter().map(|l| 2.0 * l));
    for l in log_mag.iter_mut() {
        *l -= half_norm;
    }
    let cos_neg = (theta / 2.0).cos() < 0.0;
    let sin_neg = (theta / 2.0).sin() < 0.0;
    let phase = if phi == 0.0 && !cos_neg && !sin_neg {
        None
    } else {
        Some(
            (0..d)
                .map(|k| {
                    let m = m_of(n, k);
                    let up = n as usize - k;
                    let mut s = Complex64::from_polar(1.0, -m * phi);
                    if cos_neg && up % 2 == 1 {
                        s = -s;
                    }
                    if sin_neg && k % 2 == 1 {
                        s = -s;
                    }
                    s
                })
                .collect(),
        )
    };
    Ok(CoherentCoefficients { n, log_mag, phase })
}

/// Hermitian (N+1)×(N+1) spin density matrix in the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinDensityMatrix {
    pub n: u64,
    pub data: Array2<Complex64>,
}

impl SpinDensityMatrix {
    pub fn new(n: u64, data: Array2<Complex64>) -> Result<Self> {
        let d = n as usize + 1;
        if data.dim() != (d, d) {
            return Err(Error::InvalidParameter(format!("density matrix must be {d}x{d}, got {:?}", data.dim())));
        }
        Ok(Self { n, data })
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().iter().sum()
    }

    /// max |ρ − ρ†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.data.nrows();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[[i, j]] - self.data[[j, i]].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let ev = crate::linalg::eigvalsh(&self.data)?;
        Ok(ev.first().copied().unwrap_or(0.0))
    }

    /// Checks Hermiticity, unit trace and positivity at the documented tolerances.
    pub fn check_invariants(&self) -> Result<()> {
        if self.hermiticity_defect() > 1e-12 {
            return Err(Error::Numeric("spin density matrix is not Hermitian".into()));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > 1e-12 {
            return Err(Error::Numeric(format!("spin density matrix trace {tr}")));
        }
        let lmin = self.min_eigenvalue()?;
        if lmin < -1e-10 {
            return Err(Error::Positivity(lmin));
        }
        Ok(())
    }
}
