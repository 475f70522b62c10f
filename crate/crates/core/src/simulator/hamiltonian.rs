//! Hamiltonians and collapse operators on the joint spin-cavity space.

use super::sparse::CsrMatrix;
use super::state::{FockOp, JointSpace, SpinOp, SpinSpace};
use super::SimConfig;
use crate::error::{Error, Result};
use num_complex::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Model Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HamiltonianSpec {
    /// g(a†S⁻ + aS⁺) − Δc a†a.
    TavisCummings { g: f64, delta_c: f64 },
    /// [−Δc a†a] + [(χ/2)S⁺S⁻] + χ a†a S_z; bracketed terms are optional.
    DispersiveEffective { chi: f64, include_spm: bool, delta_c: Option<f64> },
    /// g√n̄(1 − [(N+1)/2n̄])S_x + (g/√n̄) a†a S_x.
    ResonantEffective { g: f64, nbar: f64, include_correction: bool },
}

impl HamiltonianSpec {
    /// Pure χ a†a S_z coupling.
    pub fn dispersive(chi: f64) -> Self {
        HamiltonianSpec::DispersiveEffective { chi, include_spm: false, delta_c: None }
    }

    /// All three terms with χ = 2g²/Δc.
    pub fn dispersive_full(g: f64, delta_c: f64) -> Self {
        HamiltonianSpec::DispersiveEffective { chi: 2.0 * g * g / delta_c, include_spm: true, delta_c: Some(delta_c) }
    }
}

fn check_cap(space: &JointSpace, nnz_estimate: usize, cfg: &SimConfig) -> Result<()> {
    let needed = (nnz_estimate as u64) * 32 + space.bytes_pure();
    if needed > cfg.max_bytes {
        return Err(Error::MemoryCap { needed, cap: cfg.max_bytes });
    }
    Ok(())
}

/// Assembles the Hamiltonian on `space`.
pub fn build_hamiltonian(spec: &HamiltonianSpec, space: &JointSpace, cfg: &SimConfig) -> Result<CsrMatrix> {
    let d = space.dim();
    check_cap(space, 4 * d, cfg)?;
    let num = space.fock_op(FockOp::Num);
    let h = match *spec {
        HamiltonianSpec::TavisCummings { g, delta_c } => {
            let sp = space.spin.collective(SpinOp::Plus);
            let hop = space.product_op(&sp, FockOp::A);
            hop.add(&hop.dagger()).scale(c(g)).add(&num.scale(c(-delta_c)))
        }
        HamiltonianSpec::DispersiveEffective { chi, include_spm, delta_c } => {
            let mut h = space.product_op(&space.spin.collective(SpinOp::Z), FockOp::Num).scale(c(chi));
            if include_spm {
                let sp = space.spin.collective(SpinOp::Plus);
                h = h.add(&space.lift_spin(&sp.matmul(&sp.dagger())).scale(c(chi / 2.0)));
            }
            if let Some(dc) = delta_c {
                h = h.add(&num.scale(c(-dc)));
            }
            h
        }
        HamiltonianSpec::ResonantEffective { g, nbar, include_correction } => {
            if !(nbar > 0.0) {
                return Err(Error::InvalidParameter("resonant model needs nbar > 0".into()));
            }
            let n = space.spin.n() as f64;
            let corr = if include_correction { 1.0 - (n + 1.0) / (2.0 * nbar) } else { 1.0 };
            let sx = space.spin.collective(SpinOp::X);
            space.lift_spin(&sx).scale(c(g * nbar.sqrt() * corr)).add(&space.product_op(&sx, FockOp::Num).scale(c(g / nbar.sqrt())))
        }
    };
    let defect = h.hermiticity_defect();
    if defect > 1e-12 * (1.0 + h.norm_inf()) {
        return Err(Error::Numeric(format!("assembled Hamiltonian is not Hermitian: defect {defect:e}")));
    }
    Ok(h)
}

/// Origin of a collapse operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpRole {
    PhotonLoss,
    /// √(2γ)σ⁻ on spin i.
    SpinEmission(usize),
    /// Per-spin operator of the time-averaged emission dissipator in the Rabi frame.
    RotatedEmission(usize, SpinOp),
}

/// Collapse operators.
#[derive(Debug, Clone, Default)]
pub struct JumpSet {
    pub ops: Vec<(JumpRole, CsrMatrix)>,
}

impl JumpSet {
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// √κ a.
    pub fn with_photon_loss(mut self, space: &JointSpace, kappa: f64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(Error::InvalidParameter("kappa must be >= 0".into()));
        }
        if kappa > 0.0 {
            self.ops.push((JumpRole::PhotonLoss, space.fock_op(FockOp::A).scale(c(kappa.sqrt()))));
        }
        Ok(self)
    }

    fn product_only(space: &JointSpace) -> Result<u64> {
        match space.spin {
            SpinSpace::Product(n) => Ok(n),
            SpinSpace::Dicke(_) => Err(Error::InvalidParameter("per-spin jump operators need the product spin space (N <= 6)".into())),
        }
    }

    /// √(2γ)σ⁻ᵢ for every spin.
    pub fn with_spin_emission(mut self, space: &JointSpace, gamma: f64) -> Result<Self> {
        let n = Self::product_only(space)?;
        if gamma > 0.0 {
            for i in 0..n as usize {
                let op = space.lift_spin(&space.spin.single(i, SpinOp::Minus)).scale(c((2.0 * gamma).sqrt()));
                self.ops.push((JumpRole::SpinEmission(i), op));
            }
        }
        Ok(self)
    }

    /// Emission averaged over fast Rabi flopping, written in the frame where the
    /// coupling is χ a†a S_z: γ(2s_zρs_z + s_xρs_x + s_yρs_y − ρ) per spin.
    pub fn with_rotated_emission(mut self, space: &JointSpace, gamma: f64) -> Result<Self> {
        let n = Self::product_only(space)?;
        if gamma > 0.0 {
            for i in 0..n as usize {
                for (op, w) in [(SpinOp::Z, 2.0 * gamma), (SpinOp::X, gamma), (SpinOp::Y, gamma)] {
                    let m = space.lift_spin(&space.spin.single(i, op)).scale(c(w.sqrt()));
                    self.ops.push((JumpRole::RotatedEmission(i, op), m));
                }
            }
        }
        Ok(self)
    }

    /// H − (i/2)Σ L†L.
    pub fn effective_hamiltonian(&self, h: &CsrMatrix) -> CsrMatrix {
        self.ops.iter().fold(h.clone(), |acc, (_, l)| acc.add(&l.dagger().matmul(l).scale(Complex64::new(0.0, -0.5))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SimConfig {
        SimConfig::default()
    }

    #[test]
    fn jaynes_cummings_block() {
        let space = JointSpace::new(SpinSpace::Dicke(1), 1).unwrap();
        let h = build_hamiltonian(&HamiltonianSpec::TavisCummings { g: 0.7, delta_c: 0.0 }, &space, &cfg()).unwrap();
        let d = h.to_dense();
        assert_eq!(d.dim(), (4, 4));
        // |e,0⟩ = index 0, |g,1⟩ = index 3
        assert!((d[[0, 3]] - c(0.7)).norm() < 1e-15);
        assert!((d[[3, 0]] - c(0.7)).norm() < 1e-15);
        assert_eq!(d.iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn dispersive_commutes_with_sz_and_n() {
        let space = JointSpace::new(SpinSpace::Dicke(5), 8).unwrap();
        let h = build_hamiltonian(&HamiltonianSpec::dispersive(1.3), &space, &cfg()).unwrap();
        for op in [space.spin_op(SpinOp::Z), space.fock_op(FockOp::Num)] {
            let comm = h.matmul(&op).add(&op.matmul(&h).scale(c(-1.0)));
            assert!(comm.norm_inf() < 1e-12);
        }
        let full = build_hamiltonian(&HamiltonianSpec::dispersive_full(1.0, 20.0), &space, &cfg()).unwrap();
        assert!(full.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn rotated_emission_weights() {
        let space = JointSpace::new(SpinSpace::Product(2), 1).unwrap();
        let j = JumpSet::default().with_rotated_emission(&space, 0.3).unwrap();
        assert_eq!(j.ops.len(), 6);
        // Σ L†L = γ per spin
        let sum = j.ops.iter().fold(CsrMatrix::zeros(space.dim(), space.dim()), |a, (_, l)| a.add(&l.dagger().matmul(l)));
        let want = CsrMatrix::identity(space.dim()).scale(c(0.6));
        assert!(sum.add(&want.scale(c(-1.0))).norm_inf() < 1e-14);
        let dicke = JointSpace::new(SpinSpace::Dicke(2), 1).unwrap();
        assert!(JumpSet::default().with_spin_emission(&dicke, 0.1).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let space = JointSpace::new(SpinSpace::Dicke(10), 100).unwrap();
        let tight = SimConfig { max_bytes: 1000, ..SimConfig::default() };
        assert!(matches!(build_hamiltonian(&HamiltonianSpec::dispersive(1.0), &space, &tight), Err(Error::MemoryCap { .. })));
    }
}
