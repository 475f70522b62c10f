//! Wigner functions of superpositions of coherent states.

use crate::error::{Error, Result};
use crate::spin::{coherent_spin_state, m_of, SpinAxis};
use ndarray::Array2;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Rectangular sampling of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub step: f64,
}

impl GridSpec {
    /// Square grid of half-width `half` centred on `centre`.
    pub fn square(centre: Complex64, half: f64, step: f64) -> Self {
        Self { re_min: centre.re - half, re_max: centre.re + half, im_min: centre.im - half, im_max: centre.im + half, step }
    }

    fn axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
        let n = ((hi - lo) / step).round() as usize + 1;
        (0..n).map(|i| lo + i as f64 * step).collect()
    }
}

/// Sampled Wigner function; `values[[i, j]]` is at ζ = re[j] + i·im[i].
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub values: Array2<f64>,
    pub cell_area: f64,
}

impl WignerGrid {
    /// Σ W ΔA.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.cell_area
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Number of sign changes along grid rows and columns.
    pub fn sign_changes(&self, threshold: f64) -> usize {
        let (r, c) = self.values.dim();
        let mut count = 0;
        let sgn = |v: f64| {
            if v > threshold {
                1
            } else if v < -threshold {
                -1
            } else {
                0
            }
        };
        for i in 0..r {
            let mut last = 0;
            for j in 0..c {
                let s = sgn(self.values[[i, j]]);
                if s != 0 {
                    if last != 0 && s != last {
                        count += 1;
                    }
                    last = s;
                }
            }
        }
        count
    }
}

fn overlap(b: Complex64, c: Complex64) -> Complex64 {
    // ⟨b|c⟩
    (-0.5 * b.norm_sqr() - 0.5 * c.norm_sqr() + b.conj() * c).exp()
}

/// Exponent of the Wigner function of the dyad |b⟩⟨c| (without 2/π).
fn dyad_exponent(zeta: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    let d = 2.0 * zeta - b;
    zeta.conj() * b - zeta * b.conj() - 0.5 * c.norm_sqr() - 0.5 * d.norm_sqr() + c.conj() * d
}

/// W(ζ) of 𝒩⁻¹ Σ_j w_j |β_j⟩, evaluated as a sum over coherent dyads.
pub fn wigner_cat(components: &[(Complex64, Complex64)], grid: GridSpec) -> Result<WignerGrid> {
    if components.is_empty() || components.len() > 1000 {
        return Err(Error::InvalidParameter(format!("wigner_cat takes 1..=1000 components, got {}", components.len())));
    }
    // vacuum width σ = 1/2
    let limit = 0.25 * 0.5;
    if !(grid.step > 0.0) || grid.step > limit {
        return Err(Error::GridTooCoarse { step: grid.step, limit });
    }
    if !(grid.re_max > grid.re_min) || !(grid.im_max > grid.im_min) {
        return Err(Error::InvalidParameter("empty Wigner grid".into()));
    }
    let mut norm = Complex64::new(0.0, 0.0);
    for (wj, bj) in components {
        for (wk, bk) in components {
            norm += wj.conj() * wk * overlap(*bj, *bk);
        }
    }
    let norm = norm.re;
    if !(norm > 0.0) {
        return Err(Error::Numeric("superposition has zero norm".into()));
    }
    let re = GridSpec::axis(grid.re_min, grid.re_max, grid.step);
    let im = GridSpec::axis(grid.im_min, grid.im_max, grid.step);
    let mut values = Array2::zeros((im.len(), re.len()));
    for (i, &y) in im.iter().enumerate() {
        for (j, &x) in re.iter().enumerate() {
            let zeta = Complex64::new(x, y);
            let mut acc = Complex64::new(0.0, 0.0);
            for (wj, bj) in components {
                for (wk, bk) in components {
                    acc += wj * wk.conj() * dyad_exponent(zeta, *bj, *bk).exp();
                }
            }
            values[[i, j]] = 2.0 / PI * acc.re / norm;
        }
    }
    Ok(WignerGrid { re, im, values, cell_area: grid.step * grid.step })
}

/// Components (c_m, α e^{−iχmt}) of the bosonic analogue of the spin-cavity cat.
pub fn bosonic_cat_components(n: u64, alpha: f64, chi_t: f64) -> Result<Vec<(Complex64, Complex64)>> {
    let c = coherent_spin_state(n, SpinAxis::PlusX)?;
    Ok((0..=n as usize).map(|k| (c.amplitude(k), Complex64::from_polar(alpha, -chi_t * m_of(n, k)))).collect())
}
