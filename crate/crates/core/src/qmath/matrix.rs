use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{argument, validation, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Hermiticity tolerance accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense square complex matrix of dimension 2 (one qubit) or 4 (control
/// qubit ⊗ target qubit).
///
/// Storage is row-major with stride `dim`. Entries past `dim * dim` are
/// always zero, so equality and hashing of the backing array are well
/// defined.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; 16],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for k in 0..dim {
            m.data[k * dim + k] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be 4 or 16.
    pub fn from_row_major(entries: &[C64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => return Err(argument(format!("expected 4 or 16 entries, got {n}"))),
        };
        let mut data = [ZERO; 16];
        data[..entries.len()].copy_from_slice(entries);
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for r in 0..dim {
            for c in 0..dim {
                m.data[r * dim + c] = f(r, c);
            }
        }
        Ok(m)
    }

    pub(crate) fn qubit(a: C64, b: C64, c: C64, d: C64) -> Self {
        let mut data = [ZERO; 16];
        data[0] = a;
        data[1] = b;
        data[2] = c;
        data[3] = d;
        Self { dim: 2, data }
    }

    /// Rank-one projector |v⟩⟨v| for a 2-component ket.
    pub fn ket_bra(v: [C64; 2]) -> Self {
        Self::qubit(
            v[0] * v[0].conj(),
            v[0] * v[1].conj(),
            v[1] * v[0].conj(),
            v[1] * v[1].conj(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        assert!(row < self.dim && col < self.dim, "index out of range");
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        assert!(row < self.dim && col < self.dim, "index out of range");
        self.data[row * self.dim + col] = value;
    }

    /// Row-major view of the `dim * dim` entries.
    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = *self;
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = self.data[c * n + r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self.data[k * self.dim + k]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= s);
        out
    }

    /// `self += s * other`; both matrices must share a dimension.
    #[inline]
    pub fn add_scaled(&mut self, s: f64, other: &Self) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += b * s;
        }
    }

    /// `A · self · A†`
    pub fn conjugate_by(&self, a: &Self) -> Self {
        a * self * a.adjoint()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity, `max |m[a][b] − conj(m[b][a])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                let d = (self.data[r * n + c] - self.data[c * n + r].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Distance to `other` after removing the best global phase:
    /// `min_φ max |self − e^{iφ}·other|`.
    ///
    /// The phase is aligned on the overlap `tr(other† · self)`, which is exact
    /// whenever the matrices agree up to a phase.
    pub fn phase_insensitive_distance(&self, other: &Self) -> f64 {
        let overlap = (other.adjoint() * self).trace();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        self.max_abs_diff(&other.scale(phase))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(argument(format!(
            "matrix dimension must be 2 or 4, got {dim}"
        )))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[C64]> = self.entries().chunks(self.dim).collect();
        f.debug_struct("ComplexMatrix")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    #[inline]
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix {
            dim: n,
            data: [ZERO; 16],
        };
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Mul<&ComplexMatrix> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        &self * rhs
    }
}

impl Mul<ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        self * &rhs
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        self.add_scaled(1.0, &rhs);
        self
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        self.add_scaled(-1.0, &rhs);
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// Pauli matrix σ₀ = I, σ₁ = X, σ₂ = Y, σ₃ = Z.
pub fn pauli(index: usize) -> Result<ComplexMatrix> {
    match index {
        0 => Ok(ComplexMatrix::qubit(ONE, ZERO, ZERO, ONE)),
        1 => Ok(ComplexMatrix::qubit(ZERO, ONE, ONE, ZERO)),
        2 => Ok(ComplexMatrix::qubit(ZERO, -I, I, ZERO)),
        3 => Ok(ComplexMatrix::qubit(ONE, ZERO, ZERO, -ONE)),
        _ => Err(argument(format!("Pauli index must be 0..=3, got {index}"))),
    }
}

/// All four Paulis, indexed like [`pauli`].
pub fn paulis() -> [ComplexMatrix; 4] {
    [0, 1, 2, 3].map(|k| pauli(k).expect("index in range"))
}

/// Kronecker product `a ⊗ b` of two qubit operators. The first factor is the
/// control, so the composite basis index is `2·control + target`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(argument(format!(
            "tensor expects two 2x2 factors, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    Ok(kron2(a, b))
}

#[inline]
pub(crate) fn kron2(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut data = [ZERO; 16];
    for ar in 0..2 {
        for ac in 0..2 {
            let x = a.data[ar * 2 + ac];
            for br in 0..2 {
                for bc in 0..2 {
                    data[(2 * ar + br) * 4 + 2 * ac + bc] = x * b.data[br * 2 + bc];
                }
            }
        }
    }
    ComplexMatrix { dim: 4, data }
}

/// Real spectrum of a Hermitian matrix in descending order.
#[derive(Clone, Copy, PartialEq)]
pub struct Spectrum {
    values: [f64; 4],
    len: usize,
}

impl Spectrum {
    pub fn as_slice(&self) -> &[f64] {
        &self.values[..self.len]
    }

    pub fn min(&self) -> f64 {
        self.values[self.len - 1]
    }

    pub fn sum(&self) -> f64 {
        self.as_slice().iter().sum()
    }

    fn from_unsorted(mut values: [f64; 4], len: usize) -> Self {
        values[..len].sort_by(|a, b| b.total_cmp(a));
        Self { values, len }
    }
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

/// Eigenvalues of a Hermitian matrix, descending.
///
/// Input must be Hermitian within [`HERMITIAN_TOL`]; only the Hermitian part
/// is diagonalised.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    let defect = m.hermiticity_defect();
    if !(defect <= HERMITIAN_TOL) {
        return Err(validation(format!(
            "matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    Ok(eig_hermitian_unchecked(m))
}

#[inline]
pub(crate) fn eig_hermitian_unchecked(m: &ComplexMatrix) -> Spectrum {
    match m.dim {
        2 => {
            // closed form for 2x2
            let a = m.data[0].re;
            let d = m.data[3].re;
            let b = (m.data[1] + m.data[2].conj()) * 0.5;
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            Spectrum::from_unsorted([mean + radius, mean - radius, 0.0, 0.0], 2)
        }
        _ => {
            let h = Matrix4::from_fn(|r, c| 0.5 * (m.get(r, c) + m.get(c, r).conj()));
            let ev = h.symmetric_eigenvalues();
            Spectrum::from_unsorted([ev[0], ev[1], ev[2], ev[3]], 4)
        }
    }
}

/// Eigenvalues of a 4x4 Hermitian matrix from the invariants of its
/// characteristic polynomial, solved through the resolvent cubic.
///
/// Several times cheaper than [`eig_hermitian`] but loses about half the
/// digits near degenerate eigenvalues, so it is only used to rank candidates.
#[allow(clippy::needless_range_loop)]
pub(crate) fn eigenvalues_by_invariants(m: &ComplexMatrix) -> Spectrum {
    debug_assert_eq!(m.dim, 4);
    let shift = m.trace().re / 4.0;
    let mut b = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            b[r][c] = 0.5 * (m.data[r * 4 + c] + m.data[c * 4 + r].conj());
        }
        b[r][r].re -= shift;
    }
    let mut tr2 = 0.0;
    let mut tr3 = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            tr2 += b[r][c].norm_sqr();
            let sq: C64 = (0..4).map(|k| b[r][k] * b[k][c]).sum();
            tr3 += (sq * b[c][r]).re;
        }
    }
    let det = det4(&b).re;

    // x^4 + p x^2 + q x + r with roots summing to zero
    let p = -tr2 / 2.0;
    let q = -tr3 / 3.0;
    let r = det;
    // resolvent roots are the squared pair sums (x1+x2)^2, (x1+x3)^2, (x1+x4)^2
    let a2 = 2.0 * p;
    let a1 = p * p - 4.0 * r;
    let a0 = -q * q;
    let pp = a1 - a2 * a2 / 3.0;
    let qq = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    let mut z = [-a2 / 3.0; 3];
    if pp < 0.0 {
        let amp = 2.0 * (-pp / 3.0).sqrt();
        let arg = (3.0 * qq / (pp * amp)).clamp(-1.0, 1.0);
        let base = arg.acos() / 3.0;
        for (k, zk) in z.iter_mut().enumerate() {
            *zk += amp * (base - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
        }
    }
    let s = z.map(|v| v.max(0.0).sqrt());
    let sign = if s[0] * s[1] * s[2] * q > 0.0 {
        -1.0
    } else {
        1.0
    };
    let s2 = sign * s[2];
    Spectrum::from_unsorted(
        [
            shift + 0.5 * (s[0] + s[1] + s2),
            shift + 0.5 * (s[0] - s[1] - s2),
            shift + 0.5 * (-s[0] + s[1] - s2),
            shift + 0.5 * (-s[0] - s[1] + s2),
        ],
        4,
    )
}

fn det4(b: &[[C64; 4]; 4]) -> C64 {
    // Laplace expansion along the first two rows
    let minor =
        |r0: usize, r1: usize, c0: usize, c1: usize| b[r0][c0] * b[r1][c1] - b[r0][c1] * b[r1][c0];
    minor(0, 1, 0, 1) * minor(2, 3, 2, 3) - minor(0, 1, 0, 2) * minor(2, 3, 1, 3)
        + minor(0, 1, 0, 3) * minor(2, 3, 1, 2)
        + minor(0, 1, 1, 2) * minor(2, 3, 0, 3)
        - minor(0, 1, 1, 3) * minor(2, 3, 0, 2)
        + minor(0, 1, 2, 3) * minor(2, 3, 0, 1)
}
