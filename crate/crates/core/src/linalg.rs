//! Dense Hermitian eigensolver and small matrix helpers.

use crate::error::{Error, Result};
use faer::complex_native::c64;
use ndarray::{Array1, Array2, ArrayView2};
use num_complex::Complex64;

/// Entries this far below the largest magnitude are flushed to zero; near-subnormal
/// inputs otherwise make the Householder reduction return non-finite eigenvectors.
const FLUSH_RELATIVE: f64 = 1e-150;

fn to_faer(a: &ArrayView2<Complex64>) -> faer::Mat<c64> {
    let floor = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * FLUSH_RELATIVE;
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        let z = a[[i, j]];
        if z.norm() < floor {
            c64::new(0.0, 0.0)
        } else {
            c64::new(z.re, z.im)
        }
    })
}

fn check_square(a: &ArrayView2<Complex64>) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Eigen(format!("matrix is not square: {:?}", a.dim())));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
/// Only the lower triangle is read.
pub fn eigh(a: &Array2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>)> {
    let v = a.view();
    check_square(&v)?;
    let n = a.nrows();
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let evd = to_faer(&v).selfadjoint_eigendecomposition(faer::Side::Lower);
    let s = evd.s().column_vector();
    let u = evd.u();
    let vals = Array1::from_iter((0..n).map(|i| s.read(i).re));
    if u.col_iter().any(|c| c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())) {
        return Err(Error::Eigen("eigenvectors are not finite".into()));
    }
    let vecs = Array2::from_shape_fn((n, n), |(i, j)| {
        let z = u.read(i, j);
        Complex64::new(z.re, z.im)
    });
    if vals.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen("eigenvalues are not finite".into()));
    }
    Ok((vals, vecs))
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a real symmetric matrix.
pub fn eigh_real(a: &Array2<f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let n = a.nrows();
    if n != a.ncols() || a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Eigen("real symmetric eigensolver needs a finite square matrix".into()));
    }
    if n == 0 {
        return Ok((Array1::zeros(0), Array2::zeros((0, 0))));
    }
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| a[[i, j]]);
    let evd = m.selfadjoint_eigendecomposition(faer::Side::Lower);
    let s = evd.s().column_vector();
    let u = evd.u();
    Ok((Array1::from_iter((0..n).map(|i| s.read(i))), Array2::from_shape_fn((n, n), |(i, j)| u.read(i, j))))
}

/// e^{−iHt} for a dense Hermitian H.
pub fn expm_hermitian(h: &Array2<Complex64>, t: f64) -> Result<Array2<Complex64>> {
    let (vals, vecs) = eigh(h)?;
    let n = vals.len();
    let mut scaled = vecs.clone();
    for j in 0..n {
        let ph = Complex64::from_polar(1.0, -vals[j] * t);
        for i in 0..n {
            scaled[[i, j]] *= ph;
        }
    }
    Ok(scaled.dot(&dagger(&vecs)))
}

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn eigvalsh(a: &Array2<Complex64>) -> Result<Vec<f64>> {
    let v = a.view();
    check_square(&v)?;
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut vals = to_faer(&v).selfadjoint_eigenvalues(faer::Side::Lower);
    vals.sort_by(|x, y| x.total_cmp(y));
    Ok(vals)
}

/// ½‖a − b‖₁ for Hermitian a, b.
pub fn trace_distance(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Result<f64> {
    let diff = a - b;
    Ok(0.5 * eigvalsh(&diff)?.iter().map(|x| x.abs()).sum::<f64>())
}

fn from_faer(m: faer::MatRef<'_, c64>) -> Array2<Complex64> {
    Array2::from_shape_fn((m.nrows(), m.ncols()), |(i, j)| {
        let z = m.read(i, j);
        Complex64::new(z.re, z.im)
    })
}

fn faer_of(a: &Array2<Complex64>) -> faer::Mat<c64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| {
        let z = a[[i, j]];
        c64::new(z.re, z.im)
    })
}

/// Dense complex matrix product.
pub fn matmul(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    assert_eq!(a.ncols(), b.nrows());
    product(faer_of(a).as_ref(), faer::Conj::No, faer_of(b).as_ref())
}

/// a†·b.
pub fn adjoint_matmul(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    assert_eq!(a.nrows(), b.nrows());
    let fa = faer_of(a);
    product(fa.transpose(), faer::Conj::Yes, faer_of(b).as_ref())
}

fn product(a: faer::MatRef<'_, c64>, conj_a: faer::Conj, b: faer::MatRef<'_, c64>) -> Array2<Complex64> {
    let mut out = faer::Mat::<c64>::zeros(a.nrows(), b.ncols());
    faer::linalg::matmul::matmul_with_conj(out.as_mut(), a, conj_a, b, faer::Conj::No, None, c64::new(1.0, 0.0), faer::Parallelism::None);
    from_faer(out.as_ref())
}

/// Conjugate transpose.
pub fn dagger(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|z| z.conj())
}

/// Tr(a·b) without forming the product.
pub fn trace_product(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[[i, k]] * b[[k, i]];
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigh_reconstructs_matrix() {
        let n = 6;
        let a = Array2::from_shape_fn((n, n), |(i, j)| {
            let (i, j) = (i as f64, j as f64);
            if i == j {
                Complex64::new(i, 0.0)
            } else if i < j {
                Complex64::new(0.1 * (i + j), 0.2 * (j - i))
            } else {
                Complex64::new(0.1 * (i + j), -0.2 * (i - j))
            }
        });
        let (w, v) = eigh(&a).unwrap();
        for k in 1..n {
            assert!(w[k] >= w[k - 1]);
        }
        let d = Array2::from_shape_fn((n, n), |(i, j)| if i == j { Complex64::new(w[i], 0.0) } else { Complex64::new(0.0, 0.0) });
        let r = v.dot(&d).dot(&dagger(&v));
        for (x, y) in r.iter().zip(a.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_distance_of_orthogonal_projectors() {
        let mut a = Array2::zeros((2, 2));
        let mut b = Array2::zeros((2, 2));
        a[[0, 0]] = Complex64::new(1.0, 0.0);
        b[[1, 1]] = Complex64::new(1.0, 0.0);
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_finite() {
        let mut a = Array2::zeros((2, 2));
        a[[0, 0]] = Complex64::new(f64::NAN, 0.0);
        assert!(eigh(&a).is_err());
    }
}
