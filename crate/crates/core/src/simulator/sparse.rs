//! Compressed sparse row matrices over complex numbers.

use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64;

/// Square or rectangular CSR matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<usize>,
    pub values: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl CsrMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, indptr: vec![0; nrows + 1], indices: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        Self { nrows: n, ncols: n, indptr: (0..=n).collect(), indices: (0..n).collect(), values: d.to_vec() }
    }

    /// Builds from (row, col, value) triplets, summing duplicates and dropping exact zeros.
    pub fn from_triplets(nrows: usize, ncols: usize, mut t: Vec<(usize, usize, Complex64)>) -> Self {
        t.sort_by_key(|e| (e.0, e.1));
        let mut indptr = vec![0; nrows + 1];
        let mut indices = Vec::with_capacity(t.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(t.len());
        let mut last: Option<(usize, usize)> = None;
        let mut rows = Vec::with_capacity(t.len());
        for (r, c, v) in t {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(c);
                values.push(v);
                rows.push(r);
                last = Some((r, c));
            }
        }
        let mut keep_idx = Vec::with_capacity(indices.len());
        let mut keep_val = Vec::with_capacity(values.len());
        for ((r, c), v) in rows.into_iter().zip(indices).zip(values) {
            if v != zero() {
                indptr[r + 1] += 1;
                keep_idx.push(c);
                keep_val.push(v);
            }
        }
        for r in 0..nrows {
            indptr[r + 1] += indptr[r];
        }
        Self { nrows, ncols, indptr, indices: keep_idx, values: keep_val }
    }

    pub fn from_dense(a: &Array2<Complex64>) -> Self {
        let mut t = Vec::new();
        for ((i, j), &v) in a.indexed_iter() {
            if v != zero() {
                t.push((i, j, v));
            }
        }
        Self::from_triplets(a.nrows(), a.ncols(), t)
    }

    pub fn to_dense(&self) -> Array2<Complex64> {
        let mut a = Array2::zeros((self.nrows, self.ncols));
        for (i, j, v) in self.iter() {
            a[[i, j]] += v;
        }
        a
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// (row, col, value) in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.nrows).flat_map(move |i| (self.indptr[i]..self.indptr[i + 1]).map(move |p| (i, self.indices[p], self.values[p])))
    }

    pub fn triplets(&self) -> Vec<(usize, usize, Complex64)> {
        self.iter().collect()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v *= s);
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut t = self.triplets();
        t.extend(other.iter());
        Self::from_triplets(self.nrows, self.ncols, t)
    }

    pub fn dagger(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.iter().map(|(i, j, v)| (j, i, v.conj())).collect())
    }

    /// Sparse product self·other.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut t = Vec::new();
        let mut acc = vec![zero(); other.ncols];
        let mut seen = vec![false; other.ncols];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..self.nrows {
            for p in self.indptr[i]..self.indptr[i + 1] {
                let k = self.indices[p];
                let a = self.values[p];
                for q in other.indptr[k]..other.indptr[k + 1] {
                    let j = other.indices[q];
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j);
                    }
                    acc[j] += a * other.values[q];
                }
            }
            for &j in &touched {
                t.push((i, j, acc[j]));
                acc[j] = zero();
                seen[j] = false;
            }
            touched.clear();
        }
        Self::from_triplets(self.nrows, other.ncols, t)
    }

    /// Kronecker product self ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        let mut t = Vec::with_capacity(self.nnz() * other.nnz());
        for (i, j, a) in self.iter() {
            for (k, l, b) in other.iter() {
                t.push((i * other.nrows + k, j * other.ncols + l, a * b));
            }
        }
        Self::from_triplets(self.nrows * other.nrows, self.ncols * other.ncols, t)
    }

    pub fn matvec(&self, x: ArrayView1<Complex64>) -> Array1<Complex64> {
        let mut y = Array1::zeros(self.nrows);
        self.matvec_into(x, y.as_slice_mut().unwrap());
        y
    }

    pub fn matvec_into(&self, x: ArrayView1<Complex64>, y: &mut [Complex64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.nrows) {
            let mut s = zero();
            for p in self.indptr[i]..self.indptr[i + 1] {
                s += self.values[p] * x[self.indices[p]];
            }
            *yi = s;
        }
    }

    /// Dense product self·b.
    pub fn mul_dense(&self, b: &Array2<Complex64>) -> Array2<Complex64> {
        assert_eq!(self.ncols, b.nrows());
        let mut out = Array2::zeros((self.nrows, b.ncols()));
        for i in 0..self.nrows {
            let mut row = out.row_mut(i);
            for p in self.indptr[i]..self.indptr[i + 1] {
                let a = self.values[p];
                row.scaled_add(a, &b.row(self.indices[p]));
            }
        }
        out
    }

    /// ⟨x|A|x⟩.
    pub fn expectation(&self, x: ArrayView1<Complex64>) -> Complex64 {
        let mut s = zero();
        for i in 0..self.nrows {
            let mut r = zero();
            for p in self.indptr[i]..self.indptr[i + 1] {
                r += self.values[p] * x[self.indices[p]];
            }
            s += x[i].conj() * r;
        }
        s
    }

    /// Tr(A·ρ).
    pub fn trace_with(&self, rho: &Array2<Complex64>) -> Complex64 {
        let mut s = zero();
        for (i, j, v) in self.iter() {
            s += v * rho[[j, i]];
        }
        s
    }

    /// max |A − A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.add(&self.dagger().scale(Complex64::new(-1.0, 0.0)));
        d.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_diagonal(&self) -> bool {
        self.iter().all(|(i, j, _)| i == j)
    }

    pub fn diagonal_values(&self) -> Vec<Complex64> {
        let mut d = vec![zero(); self.nrows.min(self.ncols)];
        for (i, j, v) in self.iter() {
            if i == j {
                d[i] += v;
            }
        }
        d
    }

    /// Max absolute row sum, an upper bound on the spectral norm of a Hermitian matrix.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows).map(|i| (self.indptr[i]..self.indptr[i + 1]).map(|p| self.values[p].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn bytes(&self) -> u64 {
        (self.values.len() * 24 + self.indptr.len() * 8) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn triplets_sum_and_products_match_dense() {
        let a = CsrMatrix::from_triplets(3, 3, vec![(0, 1, c(1.0, 0.0)), (0, 1, c(0.0, 2.0)), (2, 0, c(3.0, 0.0)), (1, 1, c(0.0, 0.0))]);
        assert_eq!(a.nnz(), 2);
        let b = CsrMatrix::from_triplets(3, 3, vec![(1, 2, c(2.0, 0.0)), (0, 0, c(1.0, -1.0)), (2, 2, c(0.5, 0.0))]);
        let ad = a.to_dense();
        let bd = b.to_dense();
        assert_eq!(a.matmul(&b).to_dense(), ad.dot(&bd));
        assert_eq!(a.mul_dense(&bd), ad.dot(&bd));
        assert_eq!(a.dagger().to_dense(), ad.t().mapv(|z| z.conj()));
        let k = a.kron(&b).to_dense();
        assert_eq!(k[[4, 2]], c(0.0, 0.0));
        assert_eq!(k[[1, 5]], ad[[0, 1]] * bd[[1, 2]]);
        let x = Array1::from_vec(vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)]);
        assert_eq!(a.matvec(x.view()), ad.dot(&x));
        let h = a.add(&a.dagger());
        assert!(h.hermiticity_defect() < 1e-15);
        assert!(!h.is_diagonal());
    }
}
