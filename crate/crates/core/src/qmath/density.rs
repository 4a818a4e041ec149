use super::matrix::{eig_hermitian_unchecked, ComplexMatrix, Spectrum, C64};
use crate::error::{argument, validation, Result};

/// Entrywise Hermiticity tolerance for a density matrix.
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_TOL, 0)` are round-off; anything lower is unphysical.
pub const PSD_TOL: f64 = 1e-10;

/// Validated qubit (dim 2) or two-qubit (dim 4) quantum state.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::new_unchecked_psd(matrix)?;
        let lowest = rho.spectrum().min();
        if lowest < -PSD_TOL {
            return Err(validation(format!(
                "density matrix has negative eigenvalue {lowest:.3e}"
            )));
        }
        Ok(rho)
    }

    /// Checks Hermiticity and trace only. Positivity is left to the first
    /// consumer of the spectrum ([`super::von_neumann_entropy`] rejects
    /// negative eigenvalues), which saves one diagonalisation per evaluation
    /// inside optimisation loops.
    pub(crate) fn new_unchecked_psd(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if !(defect <= DENSITY_HERMITIAN_TOL) {
            return Err(validation(format!(
                "density matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = matrix.trace();
        if !((tr - C64::new(1.0, 0.0)).norm() <= TRACE_TOL) {
            return Err(validation(format!(
                "density matrix trace is {:.15} {:+.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        Ok(Self { matrix })
    }

    /// Maximally mixed state `I/dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let m = ComplexMatrix::identity(dim)?.scale_real(1.0 / dim as f64);
        Ok(Self { matrix: m })
    }

    /// Pure qubit state `|ψ⟩⟨ψ|` from an (unnormalised) ket.
    pub fn from_ket(ket: [C64; 2]) -> Result<Self> {
        let norm = (ket[0].norm_sqr() + ket[1].norm_sqr()).sqrt();
        if !(norm > 0.0) {
            return Err(argument("ket has zero norm"));
        }
        let v = [ket[0] / norm, ket[1] / norm];
        Self::new(ComplexMatrix::ket_bra(v))
    }

    /// Pure qubit state on the Bloch sphere.
    pub fn pure(angles: BlochAngles) -> Self {
        Self {
            matrix: ComplexMatrix::ket_bra(angles.ket()),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn spectrum(&self) -> Spectrum {
        eig_hermitian_unchecked(&self.matrix)
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Polar (`theta` ∈ [0, π]) and azimuthal (`phi`) angles of a pure qubit
/// state `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn ket(&self) -> [C64; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        [C64::new(c, 0.0), C64::from_polar(s, self.phi)]
    }
}

/// Which factor of the control ⊗ target space to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    Control,
    Target,
}

/// Reduced state of one qubit of a two-qubit state.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(argument(format!(
            "partial trace needs a 4-dimensional state, got dim {}",
            rho.dim()
        )));
    }
    DensityMatrix::new(partial_trace_matrix(rho.matrix(), keep))
}

pub(crate) fn partial_trace_matrix(m: &ComplexMatrix, keep: Subsystem) -> ComplexMatrix {
    let mut out = [C64::new(0.0, 0.0); 4];
    for a in 0..2 {
        for b in 0..2 {
            out[a * 2 + b] = match keep {
                Subsystem::Control => m.get(2 * a, 2 * b) + m.get(2 * a + 1, 2 * b + 1),
                Subsystem::Target => m.get(a, b) + m.get(2 + a, 2 + b),
            };
        }
    }
    ComplexMatrix::qubit(out[0], out[1], out[2], out[3])
}
