//! Joint collective-spin and truncated-Fock spaces, operators and states.

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, expm_hermitian};
use crate::moments::{MomentSet, SzSource};
use crate::spin::{coherent_spin_state, ladder_element, m_of, SpinAxis};
use ndarray::{Array1, Array2};
use num_complex::Complex64;

/// Largest atom number for the full 2^N product space.
pub const MAX_PRODUCT_N: u64 = 6;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Spin Hilbert space: the symmetric Dicke manifold or the full product space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSpace {
    /// Basis |k⟩, m = N/2 − k.
    Dicke(u64),
    /// Basis bit strings, bit i set means spin i is down.
    Product(u64),
}

/// Collective or single-spin operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinOp {
    X,
    Y,
    Z,
    Plus,
    Minus,
}

impl SpinSpace {
    pub fn n(&self) -> u64 {
        match *self {
            SpinSpace::Dicke(n) | SpinSpace::Product(n) => n,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            SpinSpace::Dicke(n) => n as usize + 1,
            SpinSpace::Product(n) => 1usize << n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SpinSpace::Dicke(0) | SpinSpace::Product(0) => Err(Error::InvalidParameter("N must be >= 1".into())),
            SpinSpace::Product(n) if n > MAX_PRODUCT_N => {
                Err(Error::InvalidParameter(format!("product spin space is limited to N <= {MAX_PRODUCT_N}, got {n}")))
            }
            _ => Ok(()),
        }
    }

    fn from_ladder(plus: CsrMatrix, z: CsrMatrix, op: SpinOp) -> CsrMatrix {
        let minus = plus.dagger();
        let half = Complex64::new(0.5, 0.0);
        match op {
            SpinOp::Plus => plus,
            SpinOp::Minus => minus,
            SpinOp::Z => z,
            SpinOp::X => plus.add(&minus).scale(half),
            SpinOp::Y => plus.add(&minus.scale(c(-1.0))).scale(Complex64::new(0.0, -0.5)),
        }
    }

    /// Collective operator S_op.
    pub fn collective(&self, op: SpinOp) -> CsrMatrix {
        match *self {
            SpinSpace::Dicke(n) => {
                let d = n as usize + 1;
                let plus = CsrMatrix::from_triplets(d, d, (1..d).map(|k| (k - 1, k, c(ladder_element(n, m_of(n, k))))).collect());
                let z = CsrMatrix::diagonal(&(0..d).map(|k| c(m_of(n, k))).collect::<Vec<_>>());
                Self::from_ladder(plus, z, op)
            }
            SpinSpace::Product(n) => {
                let mut acc = CsrMatrix::zeros(self.dim(), self.dim());
                for i in 0..n as usize {
                    acc = acc.add(&self.single(i, op));
                }
                acc
            }
        }
    }

    /// Single-spin operator s_op on spin i (product space only).
    pub fn single(&self, i: usize, op: SpinOp) -> CsrMatrix {
        let n = self.n() as usize;
        assert!(matches!(self, SpinSpace::Product(_)) && i < n, "single-spin operators need the product space");
        let d = self.dim();
        let bit = 1usize << i;
        // σ⁺ maps down (bit set) to up
        let plus = CsrMatrix::from_triplets(d, d, (0..d).filter(|b| b & bit != 0).map(|b| (b ^ bit, b, c(1.0))).collect());
        let z = CsrMatrix::diagonal(&(0..d).map(|b| c(if b & bit == 0 { 0.5 } else { -0.5 })).collect::<Vec<_>>());
        Self::from_ladder(plus, z, op)
    }

    /// Coherent spin state along `axis`.
    pub fn coherent(&self, axis: SpinAxis) -> Result<Vec<Complex64>> {
        self.validate()?;
        match *self {
            SpinSpace::Dicke(n) => Ok(coherent_spin_state(n, axis)?.to_vector()),
            SpinSpace::Product(n) => {
                let (theta, phi) = match axis {
                    SpinAxis::PlusX => (std::f64::consts::FRAC_PI_2, 0.0),
                    SpinAxis::MinusZ => (std::f64::consts::PI, 0.0),
                    SpinAxis::Polar { theta, phi } => (theta, phi),
                };
                let up = Complex64::from_polar((theta / 2.0).cos(), -phi / 2.0);
                let down = Complex64::from_polar((theta / 2.0).sin(), phi / 2.0);
                let (up, down) = if matches!(axis, SpinAxis::MinusZ) { (c(0.0), c(1.0)) } else { (up, down) };
                Ok((0..self.dim())
                    .map(|b| (0..n as usize).fold(c(1.0), |acc, i| acc * if b & (1 << i) == 0 { up } else { down }))
                    .collect())
            }
        }
    }
}

/// Cavity operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockOp {
    A,
    ADag,
    Num,
    /// X = a + a†.
    X,
    /// Y = i(a† − a).
    Y,
}

pub fn fock_operator(dim: usize, op: FockOp) -> CsrMatrix {
    let a = CsrMatrix::from_triplets(dim, dim, (1..dim).map(|n| (n - 1, n, c((n as f64).sqrt()))).collect());
    match op {
        FockOp::A => a,
        FockOp::ADag => a.dagger(),
        FockOp::Num => CsrMatrix::diagonal(&(0..dim).map(|n| c(n as f64)).collect::<Vec<_>>()),
        FockOp::X => a.add(&a.dagger()),
        FockOp::Y => a.dagger().add(&a.scale(c(-1.0))).scale(Complex64::new(0.0, 1.0)),
    }
}

/// ⌈α² + 10α + 20⌉.
pub fn default_n_max(alpha: f64) -> usize {
    (alpha * alpha + 10.0 * alpha + 20.0).ceil() as usize
}

/// |α⟩ on {0, …, dim−1}, coefficients built in the log domain.
pub fn coherent_fock(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let r = alpha.norm();
    let ph = if r > 0.0 { alpha / r } else { c(1.0) };
    let mut out = Vec::with_capacity(dim);
    let mut log_mag = -0.5 * r * r;
    let mut phase = c(1.0);
    for n in 0..dim {
        if n > 0 {
            log_mag += r.ln() - 0.5 * (n as f64).ln();
            phase *= ph;
        }
        out.push(if r == 0.0 && n > 0 { c(0.0) } else { phase * log_mag.exp() });
    }
    out
}

/// Spin ⊗ Fock space with index s·fock_dim + n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointSpace {
    pub spin: SpinSpace,
    pub fock_dim: usize,
}

impl JointSpace {
    pub fn new(spin: SpinSpace, n_max: usize) -> Result<Self> {
        spin.validate()?;
        Ok(Self { spin, fock_dim: n_max + 1 })
    }

    pub fn dim(&self) -> usize {
        self.spin.dim() * self.fock_dim
    }

    pub fn spin_op(&self, op: SpinOp) -> CsrMatrix {
        self.spin.collective(op).kron(&CsrMatrix::identity(self.fock_dim))
    }

    pub fn fock_op(&self, op: FockOp) -> CsrMatrix {
        CsrMatrix::identity(self.spin.dim()).kron(&fock_operator(self.fock_dim, op))
    }

    /// spin ⊗ fock.
    pub fn product_op(&self, spin: &CsrMatrix, fock: FockOp) -> CsrMatrix {
        spin.kron(&fock_operator(self.fock_dim, fock))
    }

    /// Lift a spin-only operator.
    pub fn lift_spin(&self, spin: &CsrMatrix) -> CsrMatrix {
        spin.kron(&CsrMatrix::identity(self.fock_dim))
    }

    /// Bytes for a pure state and for a density matrix with integrator scratch.
    pub fn bytes_pure(&self) -> u64 {
        self.dim() as u64 * 16 * 40
    }

    pub fn bytes_mixed(&self) -> u64 {
        let d = self.dim() as u64;
        d * d * 16 * 12
    }
}

/// Pure vector or density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Pure(Array1<Complex64>),
    Mixed(Array2<Complex64>),
}

/// State on a joint space with truncation bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub space: JointSpace,
    pub repr: Representation,
    /// Largest top-Fock population seen so far.
    pub leakage: f64,
}

impl JointState {
    pub fn product(space: JointSpace, spin: &[Complex64], fock: &[Complex64]) -> Result<Self> {
        if spin.len() != space.spin.dim() || fock.len() != space.fock_dim {
            return Err(Error::InvalidParameter("factor dimensions do not match the space".into()));
        }
        let mut v = Array1::zeros(space.dim());
        for (s, a) in spin.iter().enumerate() {
            for (n, b) in fock.iter().enumerate() {
                v[s * space.fock_dim + n] = a * b;
            }
        }
        let mut st = Self { space, repr: Representation::Pure(v), leakage: 0.0 };
        st.leakage = st.top_population();
        Ok(st)
    }

    /// Spin coherent state along `axis` times |α⟩.
    pub fn coherent(space: JointSpace, axis: SpinAxis, alpha: Complex64) -> Result<Self> {
        let spin = space.spin.coherent(axis)?;
        Self::product(space, &spin, &coherent_fock(alpha, space.fock_dim))
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, Representation::Pure(_))
    }

    pub fn to_mixed(&self) -> Self {
        match &self.repr {
            Representation::Mixed(_) => self.clone(),
            Representation::Pure(v) => {
                let d = v.len();
                let rho = Array2::from_shape_fn((d, d), |(i, j)| v[i] * v[j].conj());
                Self { space: self.space, repr: Representation::Mixed(rho), leakage: self.leakage }
            }
        }
    }

    /// ‖ψ‖² or Tr ρ.
    pub fn norm(&self) -> f64 {
        match &self.repr {
            Representation::Pure(v) => v.iter().map(|z| z.norm_sqr()).sum(),
            Representation::Mixed(r) => r.diag().iter().map(|z| z.re).sum(),
        }
    }

    /// Population of the top 5% of Fock levels (at least one level).
    pub fn top_population(&self) -> f64 {
        let f = self.space.fock_dim;
        let k = ((0.05 * f as f64).ceil() as usize).max(1);
        let mut p = 0.0;
        for s in 0..self.space.spin.dim() {
            for n in f - k..f {
                let i = s * f + n;
                p += match &self.repr {
                    Representation::Pure(v) => v[i].norm_sqr(),
                    Representation::Mixed(r) => r[[i, i]].re,
                };
            }
        }
        p
    }

    /// Updates the leakage monitor and fails if it exceeds `bound`.
    pub fn check_leakage(&mut self, bound: f64) -> Result<()> {
        self.leakage = self.leakage.max(self.top_population());
        if self.leakage > bound {
            return Err(Error::TruncationLeak { leaked: self.leakage, bound });
        }
        Ok(())
    }

    pub fn expect(&self, op: &CsrMatrix) -> Complex64 {
        match &self.repr {
            Representation::Pure(v) => op.expectation(v.view()),
            Representation::Mixed(r) => op.trace_with(r),
        }
    }

    /// ⟨G²⟩ − ⟨G⟩² for Hermitian G.
    pub fn variance(&self, op: &CsrMatrix) -> f64 {
        let m = self.expect(op).re;
        self.expect(&op.matmul(op)).re - m * m
    }

    /// |⟨φ|ψ⟩|² or ⟨φ|ρ|φ⟩ against a pure reference.
    pub fn fidelity_with_pure(&self, other: &Array1<Complex64>) -> f64 {
        match &self.repr {
            Representation::Pure(v) => other.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr(),
            Representation::Mixed(r) => {
                let rv = r.dot(other);
                other.iter().zip(rv.iter()).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
            }
        }
    }

    /// Reduced spin density matrix Tr_Fock ρ.
    pub fn spin_reduced(&self) -> Array2<Complex64> {
        let ds = self.space.spin.dim();
        let f = self.space.fock_dim;
        let mut out = Array2::zeros((ds, ds));
        for s in 0..ds {
            for t in 0..ds {
                let mut acc = c(0.0);
                for n in 0..f {
                    acc += match &self.repr {
                        Representation::Pure(v) => v[s * f + n] * v[t * f + n].conj(),
                        Representation::Mixed(r) => r[[s * f + n, t * f + n]],
                    };
                }
                out[[s, t]] = acc;
            }
        }
        out
    }

    /// Reduced cavity density matrix Tr_spin ρ.
    pub fn fock_reduced(&self) -> Array2<Complex64> {
        let ds = self.space.spin.dim();
        let f = self.space.fock_dim;
        let mut out = Array2::zeros((f, f));
        for s in 0..ds {
            for n in 0..f {
                for m in 0..f {
                    out[[n, m]] += match &self.repr {
                        Representation::Pure(v) => v[s * f + n] * v[s * f + m].conj(),
                        Representation::Mixed(r) => r[[s * f + n, s * f + m]],
                    };
                }
            }
        }
        out
    }

    /// Applies 1 ⊗ U for a dense Fock-space unitary U.
    pub fn apply_fock_unitary(&mut self, u: &Array2<Complex64>) {
        let ds = self.space.spin.dim();
        let f = self.space.fock_dim;
        match &mut self.repr {
            Representation::Pure(v) => {
                for s in 0..ds {
                    let block = v.slice(ndarray::s![s * f..(s + 1) * f]).to_owned();
                    let out = u.dot(&block);
                    v.slice_mut(ndarray::s![s * f..(s + 1) * f]).assign(&out);
                }
            }
            Representation::Mixed(r) => {
                let ud = u.t().mapv(|z| z.conj());
                for s in 0..ds {
                    for t in 0..ds {
                        let block = r.slice(ndarray::s![s * f..(s + 1) * f, t * f..(t + 1) * f]).to_owned();
                        let out = u.dot(&block).dot(&ud);
                        r.slice_mut(ndarray::s![s * f..(s + 1) * f, t * f..(t + 1) * f]).assign(&out);
                    }
                }
            }
        }
    }

    /// Applies a diagonal unitary e^{−iθ_k} given the phases θ.
    pub fn apply_diagonal_phase(&mut self, theta: &[f64]) {
        match &mut self.repr {
            Representation::Pure(v) => {
                for (z, &t) in v.iter_mut().zip(theta) {
                    *z *= Complex64::from_polar(1.0, -t);
                }
            }
            Representation::Mixed(r) => {
                for ((i, j), z) in r.indexed_iter_mut() {
                    *z *= Complex64::from_polar(1.0, theta[j] - theta[i]);
                }
            }
        }
    }

    /// Smallest eigenvalue of ρ (0 for a pure state).
    pub fn min_eigenvalue(&self) -> Result<f64> {
        match &self.repr {
            Representation::Pure(_) => Ok(0.0),
            Representation::Mixed(r) => Ok(eigvalsh(r)?.first().copied().unwrap_or(0.0)),
        }
    }

    /// Collective-spin moments {⟨S⁺⟩, ⟨S⁺²⟩, ⟨S⁺S⁻⟩, ⟨S_z⟩}, without derivatives.
    pub fn moments(&self) -> MomentSet {
        let sp = self.space.spin.collective(SpinOp::Plus);
        let sm = sp.dagger();
        let sz = self.space.spin.collective(SpinOp::Z);
        let lift = |m: &CsrMatrix| self.space.lift_spin(m);
        MomentSet {
            n: self.space.spin.n(),
            splus: self.expect(&lift(&sp)),
            splus_sq: self.expect(&lift(&sp.matmul(&sp))),
            spm: self.expect(&lift(&sp.matmul(&sm))).re,
            sz: self.expect(&lift(&sz)).re,
            sz_source: SzSource::Computed,
            derivatives: None,
        }
    }
}

/// Dense displacement D(β) = exp(βa† − β*a) on the truncated space.
pub fn displacement(dim: usize, beta: Complex64) -> Result<Array2<Complex64>> {
    // D = exp(−iK) with Hermitian K = i(βa† − β*a)
    let a = fock_operator(dim, FockOp::A).to_dense();
    let ad = a.t().to_owned();
    let k = (&ad.mapv(|z| z * beta) - &a.mapv(|z| z * beta.conj())).mapv(|z| z * Complex64::new(0.0, 1.0));
    expm_hermitian(&k, 1.0)
}
