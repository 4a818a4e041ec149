use super::density::DensityMatrix;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{argument, Result};

/// Tolerance on the Bloch norm of a physical Stokes vector.
pub const STOKES_NORM_TOL: f64 = 1e-10;

/// Polarisation Stokes parameters of a qubit.
///
/// The convention places `s1` on the diagonal, `s2` on the real part of the
/// off-diagonal and `s3` on its imaginary part:
///
/// ```text
/// ρ = ½ [[1 + s1, s2 + i·s3],
///        [s2 − i·s3, 1 − s1]]
/// ```
///
/// so `s2` is the diagonal/antidiagonal (Pauli X) component. Data recorded
/// in the textbook ordering must be permuted before use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl StokesVector {
    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self { s1, s2, s3 }
    }

    pub fn norm(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }

    pub fn is_physical(&self) -> bool {
        self.norm() <= 1.0 + STOKES_NORM_TOL
    }
}

pub fn stokes_from_density(rho: &DensityMatrix) -> StokesVector {
    let m = rho.matrix();
    debug_assert_eq!(m.dim(), 2);
    let off = m.get(0, 1);
    StokesVector {
        s1: 2.0 * m.get(0, 0).re - 1.0,
        s2: 2.0 * off.re,
        s3: 2.0 * off.im,
    }
}

pub fn density_from_stokes(s: StokesVector) -> Result<DensityMatrix> {
    if !s.is_physical() {
        return Err(argument(format!(
            "Stokes vector ({}, {}, {}) has Bloch norm {} > 1",
            s.s1,
            s.s2,
            s.s3,
            s.norm()
        )));
    }
    Ok(density_from_stokes_trusted(s))
}

pub(crate) fn density_from_stokes_trusted(s: StokesVector) -> DensityMatrix {
    let m = ComplexMatrix::qubit(
        C64::new(0.5 * (1.0 + s.s1), 0.0),
        C64::new(0.5 * s.s2, 0.5 * s.s3),
        C64::new(0.5 * s.s2, -0.5 * s.s3),
        C64::new(0.5 * (1.0 - s.s1), 0.0),
    );
    DensityMatrix::new_unchecked_psd(m).expect("Stokes matrices are Hermitian with unit trace")
}
