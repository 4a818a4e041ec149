//! Holevo capacity of the switched depolarising channels.
//!
//! For a switch with output control `ρ̃_c` the capacity is
//! `χ = 1 + H(ρ̃_c) − H_min`, where `H_min` is the smallest entropy of the
//! two-qubit output over target inputs. Entropy is concave, so the minimum
//! over the convex set of target states is attained on pure states and the
//! search runs over the Bloch sphere.

use std::f64::consts::PI;

use crate::channels::depolarizing_mixture;
use crate::error::{argument, Result};
use crate::qmath::{
    binary_entropy, density_from_stokes_trusted, eig_hermitian_unchecked,
    eigenvalues_by_invariants, kron2, paulis, spectrum_entropy, von_neumann_entropy, BlochAngles,
    ComplexMatrix, DensityMatrix, StokesVector,
};
use crate::switch::{depolarized_control_stokes, depolarizing_switch_mixture, SwitchInput};

/// Coarse grid for the minimum-output-entropy search followed by a local
/// pattern search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchGrid {
    /// Polar samples on `[0, π]`, both poles included.
    pub theta_steps: usize,
    /// Azimuthal samples on `[0, 2π)`.
    pub phi_steps: usize,
    /// Refinement stops once every probe around the incumbent lies within
    /// this many bits of it.
    pub entropy_tol: f64,
}

impl Default for SearchGrid {
    fn default() -> Self {
        Self {
            theta_steps: 64,
            phi_steps: 128,
            entropy_tol: 1e-8,
        }
    }
}

impl SearchGrid {
    fn validate(&self) -> Result<()> {
        if self.theta_steps < 2 || self.phi_steps < 1 {
            return Err(argument(format!(
                "search grid needs at least 2x1 points, got {}x{}",
                self.theta_steps, self.phi_steps
            )));
        }
        if !(self.entropy_tol > 0.0) {
            return Err(argument("search tolerance must be positive"));
        }
        Ok(())
    }
}

/// Outcome of [`min_output_entropy`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinEntropy {
    /// Refined minimum, bits.
    pub h_min: f64,
    pub argmin: BlochAngles,
    /// Best value seen on the coarse grid before refinement.
    pub grid_h_min: f64,
}

/// Smallest von Neumann entropy of `builder(target)` over pure targets, with
/// the default [`SearchGrid`].
pub fn min_output_entropy<F>(builder: F) -> Result<MinEntropy>
where
    F: Fn(BlochAngles) -> Result<DensityMatrix>,
{
    min_output_entropy_with(builder, &SearchGrid::default())
}

pub fn min_output_entropy_with<F>(builder: F, grid: &SearchGrid) -> Result<MinEntropy>
where
    F: Fn(BlochAngles) -> Result<DensityMatrix>,
{
    let entropy = |a| von_neumann_entropy(&builder(a)?);
    search(entropy, entropy, grid)
}

/// `rank` scores the coarse grid, `entropy` is used for the reported value
/// and the refinement. They may differ when a cheaper approximation is
/// available for ranking.
fn search<R, F>(rank: R, entropy: F, grid: &SearchGrid) -> Result<MinEntropy>
where
    R: Fn(BlochAngles) -> Result<f64>,
    F: Fn(BlochAngles) -> Result<f64>,
{
    grid.validate()?;
    let d_theta = PI / (grid.theta_steps - 1) as f64;
    let d_phi = 2.0 * PI / grid.phi_steps as f64;

    let mut best = BlochAngles::new(0.0, 0.0);
    let mut best_h = f64::INFINITY;
    for k in 0..grid.theta_steps {
        let pole = k == 0 || k + 1 == grid.theta_steps;
        let theta = if k + 1 == grid.theta_steps {
            PI
        } else {
            k as f64 * d_theta
        };
        // every azimuth is the same state at a pole
        let phis = if pole { 1 } else { grid.phi_steps };
        for l in 0..phis {
            let a = BlochAngles::new(theta, l as f64 * d_phi);
            let h = rank(a)?;
            if h < best_h {
                best_h = h;
                best = a;
            }
        }
    }
    best_h = entropy(best)?;
    let grid_h_min = best_h;

    // Compass search: probe ±step along each angle, move to the best strict
    // improvement, otherwise halve the steps.
    let (mut st, mut sp) = (d_theta, d_phi);
    for _ in 0..10_000 {
        let probes = [
            BlochAngles::new((best.theta + st).min(PI), best.phi),
            BlochAngles::new((best.theta - st).max(0.0), best.phi),
            BlochAngles::new(best.theta, best.phi + sp),
            BlochAngles::new(best.theta, best.phi - sp),
        ];
        let mut moved: Option<(BlochAngles, f64)> = None;
        let mut spread = 0.0f64;
        for p in probes {
            let h = entropy(p)?;
            spread = spread.max((h - best_h).abs());
            if h < best_h && moved.map_or(true, |(_, hm)| h < hm) {
                moved = Some((p, h));
            }
        }
        match moved {
            Some((p, h)) => {
                best = p;
                best_h = h;
            }
            None if spread < grid.entropy_tol || st < 1e-12 => break,
            None => {
                st *= 0.5;
                sp *= 0.5;
            }
        }
    }
    best.phi = best.phi.rem_euclid(2.0 * PI);

    Ok(MinEntropy {
        h_min: best_h,
        argmin: best,
        grid_h_min,
    })
}

/// A trace-preserving map from target states to two-qubit states, stored as
/// its action on the Bloch vector: `ρ_t = (I + n·σ)/2 ↦ M₀ + Σ_k n_k M_k`.
///
/// Evaluating it costs a handful of multiply-adds, which makes the dense
/// Bloch-sphere search cheap.
#[derive(Clone, Copy, Debug)]
pub struct AffineStateMap {
    offset: ComplexMatrix,
    linear: [ComplexMatrix; 3],
}

impl AffineStateMap {
    /// Samples `f` at `I/2` and at the three `+` Pauli eigenstates. `f` must
    /// be the restriction of a linear map (any quantum channel is).
    pub fn from_channel<F>(f: F) -> Result<Self>
    where
        F: Fn(&DensityMatrix) -> Result<DensityMatrix>,
    {
        let mixed = DensityMatrix::maximally_mixed(2)?;
        let offset = *f(&mixed)?.matrix();
        let axes = [
            BlochAngles::new(PI / 2.0, 0.0),
            BlochAngles::new(PI / 2.0, PI / 2.0),
            BlochAngles::new(0.0, 0.0),
        ];
        let mut linear = [offset; 3];
        for (slot, axis) in linear.iter_mut().zip(axes) {
            *slot = *f(&DensityMatrix::pure(axis))?.matrix() - offset;
        }
        Ok(Self { offset, linear })
    }

    pub fn evaluate(&self, angles: BlochAngles) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix_at(angles))
    }

    fn matrix_at(&self, angles: BlochAngles) -> ComplexMatrix {
        let (st, ct) = angles.theta.sin_cos();
        let (sp, cp) = angles.phi.sin_cos();
        let n = [st * cp, st * sp, ct];
        let mut m = self.offset;
        for (k, part) in n.iter().zip(&self.linear) {
            m.add_scaled(*k, part);
        }
        m
    }

    // Hermiticity and unit trace hold by construction; positivity is checked
    // by the entropy itself.
    fn entropy_at(&self, angles: BlochAngles) -> Result<f64> {
        spectrum_entropy(&eig_hermitian_unchecked(&self.matrix_at(angles)))
    }

    // Ranking only; rounding may leave tiny negative eigenvalues, which are
    // dropped rather than rejected.
    fn approx_entropy_at(&self, angles: BlochAngles) -> Result<f64> {
        let spectrum = eigenvalues_by_invariants(&self.matrix_at(angles));
        Ok(spectrum
            .as_slice()
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| -l * l.log2())
            .sum())
    }
}

/// Capacity of a switch configuration and its entropy components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityResult {
    pub q: f64,
    pub gamma: f64,
    /// `H(ρ̃_c)`, bits.
    pub h_control: f64,
    /// Minimum output entropy, bits.
    pub h_min: f64,
    /// `1 + h_control − h_min`, bits.
    pub chi: f64,
    /// Target state attaining `h_min`.
    pub argmin_target: BlochAngles,
}

impl CapacityResult {
    fn new(q: f64, gamma: f64, h_control: f64, min: MinEntropy) -> Self {
        Self {
            q,
            gamma,
            h_control,
            h_min: min.h_min,
            chi: 1.0 + h_control - min.h_min,
            argmin_target: min.argmin,
        }
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(argument(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn search_affine(map: &AffineStateMap, grid: &SearchGrid) -> Result<MinEntropy> {
    search(|a| map.approx_entropy_at(a), |a| map.entropy_at(a), grid)
}

/// Capacity of the switch with two depolarising channels of strength `q`,
/// using the default search grid.
pub fn holevo_switch(q: f64, gamma: f64) -> Result<CapacityResult> {
    holevo_switch_with(q, gamma, &SearchGrid::default())
}

pub fn holevo_switch_with(q: f64, gamma: f64, grid: &SearchGrid) -> Result<CapacityResult> {
    check_unit("depolarising strength q", q)?;
    check_unit("control weight gamma", gamma)?;
    let control = depolarized_control_stokes(q, gamma)?;
    let h_control = stokes_entropy(control)?;
    let map = AffineStateMap::from_channel(|t| {
        depolarizing_switch_mixture(q, &SwitchInput::new(gamma, *t)?)
    })?;
    let min = search_affine(&map, grid)?;
    Ok(CapacityResult::new(q, gamma, h_control, min))
}

fn stokes_entropy(s: StokesVector) -> Result<f64> {
    binary_entropy(((1.0 + s.norm()) / 2.0).min(1.0))
}

/// Capacity of the two depolarising channels in a definite order: the
/// composition shrinks the Bloch ball by `(1 − q)²`, giving
/// `1 − H₂((1 + (1 − q)²)/2)`.
pub fn holevo_classical(q: f64) -> Result<f64> {
    let shrink = depolarizing_mixture(q)?.shrink();
    let s = shrink * shrink;
    Ok(1.0 - binary_entropy((1.0 + s) / 2.0)?)
}

/// Per-pair control coherences `s_ij = S₂(s[σ_i, σ_j])`, indexed `[i][j]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchCoherences([[f64; 4]; 4]);

impl BranchCoherences {
    pub fn new(values: [[f64; 4]; 4]) -> Result<Self> {
        for (i, row) in values.iter().enumerate() {
            for (j, &s) in row.iter().enumerate() {
                if !(s.abs() <= 1.0) {
                    return Err(argument(format!(
                        "coherence s[{i}][{j}] = {s} is unphysical (|s| > 1)"
                    )));
                }
            }
        }
        Ok(Self(values))
    }

    /// Ideal values: `+1` where `σ_i` and `σ_j` commute, `−1` where they
    /// anticommute.
    pub fn ideal() -> Self {
        let mut v = [[0.0; 4]; 4];
        for (i, row) in v.iter_mut().enumerate() {
            for (j, s) in row.iter_mut().enumerate() {
                *s = if i == 0 || j == 0 || i == j {
                    1.0
                } else {
                    -1.0
                };
            }
        }
        Self(v)
    }

    /// Ideal signs scaled by a uniform visibility.
    pub fn with_visibility(v: f64) -> Result<Self> {
        let ideal = Self::ideal().0;
        Self::new(ideal.map(|row| row.map(|s| s * v)))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn values(&self) -> &[[f64; 4]; 4] {
        &self.0
    }
}

/// Capacity rebuilt from per-pair coherences.
///
/// Each Pauli pair contributes the product state
/// `ρ_c(s_ij) ⊗ U_ij ρ_t U_ij†` with `U_ij = σ_iσ_j`, weighted by `p_i p_j`.
/// The control keeps the input populations (`S₁ = 2γ − 1`) and carries the
/// measured coherence `S₂ = s_ij · 2√(γ(1−γ))`, which is `s_ij` itself for
/// the balanced control `γ = 1/2`.
pub fn holevo_from_branches(s: &BranchCoherences, q: f64, gamma: f64) -> Result<CapacityResult> {
    holevo_from_branches_with(s, q, gamma, &SearchGrid::default())
}

pub fn holevo_from_branches_with(
    s: &BranchCoherences,
    q: f64,
    gamma: f64,
    grid: &SearchGrid,
) -> Result<CapacityResult> {
    check_unit("control weight gamma", gamma)?;
    let p = depolarizing_mixture(q)?.probabilities();
    let sigma = paulis();
    let s1 = 2.0 * gamma - 1.0;
    let s2_scale = 2.0 * (gamma * (1.0 - gamma)).sqrt();

    let mut control_mix = ComplexMatrix::zeros(2)?;
    let mut branches = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let w = p[i] * p[j];
            if w == 0.0 {
                continue;
            }
            let c = density_from_stokes_trusted(StokesVector::new(s1, s.get(i, j) * s2_scale, 0.0));
            control_mix.add_scaled(w, c.matrix());
            branches.push((w, *c.matrix(), &sigma[i] * &sigma[j]));
        }
    }
    let h_control = von_neumann_entropy(&DensityMatrix::new(control_mix)?)?;

    let map = AffineStateMap::from_channel(|t| {
        let mut acc = ComplexMatrix::zeros(4)?;
        for (w, c, u) in &branches {
            acc.add_scaled(*w, &kron2(c, &t.matrix().conjugate_by(u)));
        }
        DensityMatrix::new(acc)
    })?;
    let min = search_affine(&map, grid)?;
    Ok(CapacityResult::new(q, gamma, h_control, min))
}

/// The two entropy terms of the switch capacity, `(H(ρ̃_c), H_min)`.
pub fn entropy_race(q: f64, gamma: f64) -> Result<(f64, f64)> {
    let r = holevo_switch(q, gamma)?;
    Ok((r.h_control, r.h_min))
}
