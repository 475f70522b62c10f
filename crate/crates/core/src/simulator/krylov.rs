//! Unitary propagation by Lanczos-Krylov exponentiation.

use super::hamiltonian::JumpSet;
use super::lindblad::evolve_lindblad;
use super::sparse::CsrMatrix;
use super::state::{JointState, Representation};
use super::SimConfig;
use crate::error::{Error, Result};
use crate::linalg::eigh_real;
use ndarray::{Array1, Array2};
use num_complex::Complex64;

/// Krylov subspace dimension.
pub const KRYLOV_DIM: usize = 30;

fn dot(a: &Array1<Complex64>, b: &Array1<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &Array1<Complex64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal Lanczos basis with its real tridiagonal projection.
struct Lanczos {
    basis: Vec<Array1<Complex64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    /// β_m coupling out of the subspace, zero on breakdown.
    residual: f64,
}

impl Lanczos {
    fn build(h: &CsrMatrix, v: &Array1<Complex64>, m: usize) -> Self {
        let scale = h.norm_inf().max(1e-300);
        let mut basis = vec![v.clone()];
        let (mut alpha, mut beta) = (Vec::new(), Vec::new());
        let mut residual = 0.0;
        for j in 0..m {
            let mut w = h.matvec(basis[j].view());
            alpha.push(dot(&basis[j], &w).re);
            // full reorthogonalization, applied twice for stability
            for _ in 0..2 {
                for q in &basis {
                    let p = dot(q, &w);
                    w.scaled_add(-p, q);
                }
            }
            let b = norm(&w);
            if b <= 1e-13 * scale {
                break;
            }
            if j + 1 == m {
                residual = b;
                break;
            }
            beta.push(b);
            basis.push(w.mapv(|z| z / b));
        }
        Self { basis, alpha, beta, residual }
    }

    /// Coefficients of e^{−iT dt}e₁ and the local error estimate.
    fn coefficients(&self, q: &Array2<f64>, lam: &Array1<f64>, dt: f64) -> (Vec<Complex64>, f64) {
        let k = lam.len();
        let c: Vec<Complex64> =
            (0..k).map(|i| (0..k).map(|j| q[[i, j]] * q[[0, j]] * Complex64::from_polar(1.0, -lam[j] * dt)).sum()).collect();
        let err = self.residual * c[k - 1].norm();
        (c, err)
    }
}

/// e^{−iHt}ψ for a Hermitian H, or UρU† for a density matrix.
pub fn evolve_unitary(state: &JointState, h: &CsrMatrix, t: f64, cfg: &SimConfig) -> Result<JointState> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("evolution time must be finite and >= 0, got {t}")));
    }
    if h.nrows != state.space.dim() {
        return Err(Error::InvalidParameter("Hamiltonian and state dimensions differ".into()));
    }
    let mut out = state.clone();
    if t == 0.0 {
        return Ok(out);
    }
    if h.is_diagonal() {
        let theta: Vec<f64> = h.diagonal_values().iter().map(|z| z.re * t).collect();
        out.apply_diagonal_phase(&theta);
        out.check_leakage(cfg.leakage_bound)?;
        return Ok(out);
    }
    let v = match &state.repr {
        Representation::Pure(v) => v.clone(),
        Representation::Mixed(_) => return evolve_lindblad(state, h, &JumpSet::default(), t, cfg),
    };
    out.repr = Representation::Pure(krylov_propagate(h, v, t, cfg.tol)?);
    out.check_leakage(cfg.leakage_bound)?;
    Ok(out)
}

/// Adaptive Krylov stepping with local error ≤ tol·dt/t per step.
pub fn krylov_propagate(h: &CsrMatrix, mut v: Array1<Complex64>, t: f64, tol: f64) -> Result<Array1<Complex64>> {
    let nrm = norm(&v);
    if nrm == 0.0 {
        return Ok(v);
    }
    v.mapv_inplace(|z| z / nrm);
    let mut done = 0.0;
    let mut dt = t;
    while done < t {
        let lz = Lanczos::build(h, &v, KRYLOV_DIM);
        let k = lz.alpha.len();
        let tri = Array2::from_shape_fn((k, k), |(i, j)| {
            if i == j {
                lz.alpha[i]
            } else if i + 1 == j {
                lz.beta[i]
            } else if j + 1 == i {
                lz.beta[j]
            } else {
                0.0
            }
        });
        let (lam, q) = eigh_real(&tri)?;
        let remaining = t - done;
        dt = if lz.residual == 0.0 { remaining } else { (2.0 * dt).min(remaining) };
        let coeffs = loop {
            let (c, err) = lz.coefficients(&q, &lam, dt);
            if err <= tol * dt / t {
                break c;
            }
            dt *= 0.5;
            if dt < 1e-12 * t {
                return Err(Error::StepCollapse(dt));
            }
        };
        let mut next = Array1::zeros(v.len());
        for (c, b) in coeffs.iter().zip(&lz.basis) {
            next.scaled_add(*c, b);
        }
        let n = norm(&next);
        v = next.mapv(|z| z / n);
        done = if remaining - dt <= 1e-15 * t { t } else { done + dt };
    }
    v.mapv_inplace(|z| z * nrm);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm_hermitian;
    use crate::simulator::hamiltonian::{build_hamiltonian, HamiltonianSpec};
    use crate::simulator::state::{JointSpace, SpinSpace};
    use crate::spin::SpinAxis;

    #[test]
    fn krylov_matches_dense_exponential() {
        let space = JointSpace::new(SpinSpace::Dicke(3), 12).unwrap();
        let cfg = SimConfig { leakage_bound: 1.0, ..SimConfig::default() };
        let h = build_hamiltonian(&HamiltonianSpec::TavisCummings { g: 1.0, delta_c: 0.3 }, &space, &cfg).unwrap();
        let st = JointState::coherent(space, SpinAxis::PlusX, Complex64::new(1.5, 0.2)).unwrap();
        let out = evolve_unitary(&st, &h, 2.5, &cfg).unwrap();
        let u = expm_hermitian(&h.to_dense(), 2.5).unwrap();
        let Representation::Pure(v0) = &st.repr else { unreachable!() };
        let Representation::Pure(v1) = &out.repr else { unreachable!() };
        let want = u.dot(v0);
        let err = want.iter().zip(v1.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
        assert!((out.norm() - st.norm()).abs() < 1e-10);
    }

    #[test]
    fn zero_time_is_identity() {
        let space = JointSpace::new(SpinSpace::Dicke(2), 6).unwrap();
        let h = build_hamiltonian(&HamiltonianSpec::TavisCummings { g: 1.0, delta_c: 0.0 }, &space, &SimConfig::default()).unwrap();
        let st = JointState::coherent(space, SpinAxis::PlusX, Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(evolve_unitary(&st, &h, 0.0, &SimConfig::default()).unwrap(), st);
    }

    #[test]
    fn diagonal_path_is_exact_phase() {
        let space = JointSpace::new(SpinSpace::Dicke(4), 30).unwrap();
        let chi = 0.7;
        let h = build_hamiltonian(&HamiltonianSpec::dispersive(chi), &space, &SimConfig::default()).unwrap();
        let st = JointState::coherent(space, SpinAxis::PlusX, Complex64::new(2.0, 0.0)).unwrap();
        let t = 0.9;
        let out = evolve_unitary(&st, &h, t, &SimConfig::default()).unwrap();
        let (Representation::Pure(a), Representation::Pure(b)) = (&st.repr, &out.repr) else { unreachable!() };
        for k in 0..5 {
            let m = 2.0 - k as f64;
            for n in 0..31 {
                let i = k * 31 + n;
                let want = a[i] * Complex64::from_polar(1.0, -chi * m * n as f64 * t);
                assert!((b[i] - want).norm() < 1e-12);
            }
        }
    }
}
