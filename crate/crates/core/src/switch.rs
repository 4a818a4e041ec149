//! The quantum switch of two qubit channels.
//!
//! A control qubit in `√γ|0⟩ + √(1−γ)|1⟩` decides the order in which two
//! channels act on a target qubit: control `|0⟩` applies `chB` then `chA`,
//! control `|1⟩` applies `chA` then `chB`. With Kraus operators `{A_i}` and
//! `{B_j}` the switched channel has operators
//!
//! ```text
//! S_ij = |0⟩⟨0| ⊗ A_i B_j + |1⟩⟨1| ⊗ B_j A_i
//! ```
//!
//! on control ⊗ target.

use crate::channels::{depolarizing_mixture, kraus_sum, validate_cptp, KrausChannel};
use crate::error::{argument, Error, Result};
use crate::qmath::{
    kron2, partial_trace_matrix, pauli, paulis, stokes_from_density, ComplexMatrix, DensityMatrix,
    StokesVector, Subsystem, C64,
};

/// Control weight and target state fed into the switch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwitchInput {
    gamma: f64,
    target: DensityMatrix,
}

impl SwitchInput {
    pub fn new(gamma: f64, target: DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(argument(format!(
                "control weight gamma must lie in [0, 1], got {gamma}"
            )));
        }
        if target.dim() != 2 {
            return Err(argument("switch target must be a qubit state"));
        }
        Ok(Self { gamma, target })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn target(&self) -> &DensityMatrix {
        &self.target
    }

    /// `|ψ_c⟩⟨ψ_c|` with real amplitudes `√γ` and `√(1−γ)`.
    pub fn control(&self) -> DensityMatrix {
        let ket = [
            C64::new(self.gamma.sqrt(), 0.0),
            C64::new((1.0 - self.gamma).sqrt(), 0.0),
        ];
        DensityMatrix::new(ComplexMatrix::ket_bra(ket)).expect("normalised real ket")
    }

    /// `ρ_c ⊗ ρ_t`
    pub fn product_state(&self) -> DensityMatrix {
        DensityMatrix::new(kron2(self.control().matrix(), self.target.matrix()))
            .expect("product of valid states")
    }
}

/// Block-diagonal control ⊗ target operator `|0⟩⟨0| ⊗ top + |1⟩⟨1| ⊗ bottom`.
fn controlled(top: &ComplexMatrix, bottom: &ComplexMatrix) -> ComplexMatrix {
    blocks([top, &zero2(), &zero2(), bottom])
}

fn zero2() -> ComplexMatrix {
    ComplexMatrix::zeros(2).expect("dimension 2")
}

/// Assembles a 4x4 matrix from 2x2 blocks `[00, 01, 10, 11]` indexed by
/// control row and column.
fn blocks(b: [&ComplexMatrix; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |r, c| b[(r / 2) * 2 + c / 2].get(r % 2, c % 2)).expect("dimension 4")
}

fn check_component(ch: &KrausChannel, which: &str) -> Result<()> {
    if ch.dim() != 2 {
        return Err(argument(format!(
            "switch component {which} must act on a qubit, got dimension {}",
            ch.dim()
        )));
    }
    let report = validate_cptp(ch);
    if !report.passed {
        return Err(argument(format!(
            "switch component {which} ('{}') is not trace preserving (deviation {:.3e})",
            ch.label(),
            report.max_deviation
        )));
    }
    Ok(())
}

/// Kraus operators `S_ij` of the switched channel, `i` (from `ch_a`) major.
pub fn switch_kraus(ch_a: &KrausChannel, ch_b: &KrausChannel) -> Result<KrausChannel> {
    check_component(ch_a, "A")?;
    check_component(ch_b, "B")?;
    let ops = ch_a
        .operators()
        .iter()
        .flat_map(|a| {
            ch_b.operators()
                .iter()
                .map(move |b| controlled(&(a * b), &(b * a)))
        })
        .collect();
    KrausChannel::new(format!("switch[{}, {}]", ch_a.label(), ch_b.label()), ops)
}

/// Output of the switch: `Σ_ij S_ij (ρ_c ⊗ ρ_t) S_ij†`.
pub fn apply_switch(
    ch_a: &KrausChannel,
    ch_b: &KrausChannel,
    input: &SwitchInput,
) -> Result<DensityMatrix> {
    let switched = switch_kraus(ch_a, ch_b)?;
    let out = kraus_sum(switched.operators(), input.product_state().matrix());
    DensityMatrix::new(out).map_err(internal)
}

fn internal(e: Error) -> Error {
    match e {
        Error::Validation(msg) => Error::Internal(format!("switch output invalid: {msg}")),
        other => other,
    }
}

/// Switch of the two unitaries `σ_i` and `σ_j`, written out term by term:
///
/// ```text
///   γ       |0⟩⟨0| ⊗ σ_iσ_j ρ σ_j†σ_i†
/// + (1−γ)   |1⟩⟨1| ⊗ σ_jσ_i ρ σ_i†σ_j†
/// + √(γ(1−γ)) |0⟩⟨1| ⊗ σ_iσ_j ρ σ_i†σ_j†
/// + √(γ(1−γ)) |1⟩⟨0| ⊗ σ_jσ_i ρ σ_j†σ_i†
/// ```
pub fn pauli_pair_switch(i: usize, j: usize, input: &SwitchInput) -> Result<DensityMatrix> {
    let m = pauli_pair_matrix(&paulis(), i, j, input)?;
    DensityMatrix::new(m).map_err(internal)
}

fn pauli_pair_matrix(
    sigma: &[ComplexMatrix; 4],
    i: usize,
    j: usize,
    input: &SwitchInput,
) -> Result<ComplexMatrix> {
    if i > 3 || j > 3 {
        return Err(argument(format!(
            "Pauli pair ({i}, {j}) out of range 0..=3"
        )));
    }
    let (si, sj) = (&sigma[i], &sigma[j]);
    let (si_d, sj_d) = (si.adjoint(), sj.adjoint());
    let rho = input.target().matrix();
    let g = input.gamma();
    let cross = (g * (1.0 - g)).sqrt();

    let ij = si * sj;
    let ji = sj * si;
    let top = (&ij * rho * &sj_d * &si_d).scale_real(g);
    let bottom = (&ji * rho * &si_d * &sj_d).scale_real(1.0 - g);
    let upper = (&ij * rho * &si_d * &sj_d).scale_real(cross);
    let lower = (&ji * rho * &sj_d * &si_d).scale_real(cross);
    Ok(blocks([&top, &upper, &lower, &bottom]))
}

/// Depolarised switch as the weighted mixture `Σ_ij p_i p_j s[σ_i, σ_j]`,
/// summed in lexicographic `(i, j)` order.
pub fn depolarizing_switch_mixture(q: f64, input: &SwitchInput) -> Result<DensityMatrix> {
    let p = depolarizing_mixture(q)?.probabilities();
    let sigma = paulis();
    let mut acc = ComplexMatrix::zeros(4)?;
    for i in 0..4 {
        for j in 0..4 {
            let w = p[i] * p[j];
            if w == 0.0 {
                continue;
            }
            acc.add_scaled(w, &pauli_pair_matrix(&sigma, i, j, input)?);
        }
    }
    DensityMatrix::new(acc).map_err(internal)
}

/// Closed-form control Stokes vector after the depolarised switch:
/// `S₁` and `S₃` of the input control are preserved and
/// `S₂ = S₂^in · (1 − 3q²/4)`.
pub fn depolarized_control_stokes(q: f64, gamma: f64) -> Result<StokesVector> {
    depolarizing_mixture(q)?;
    if !(0.0..=1.0).contains(&gamma) {
        return Err(argument(format!(
            "control weight gamma must lie in [0, 1], got {gamma}"
        )));
    }
    let s2_in = 2.0 * (gamma * (1.0 - gamma)).sqrt();
    Ok(StokesVector::new(
        2.0 * gamma - 1.0,
        s2_in * (1.0 - 0.75 * q * q),
        0.0,
    ))
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(argument(format!(
            "expected a control ⊗ target state, got dimension {}",
            rho.dim()
        )))
    }
}

/// `tr((X ⊗ I) ρ)`: the control's diagonal/antidiagonal expectation value.
pub fn control_s2(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    let observable = kron2(&pauli(1)?, &pauli(0)?);
    Ok((observable * rho.matrix()).trace().re)
}

/// Stokes vector of the control marginal.
pub fn control_marginal_stokes(rho: &DensityMatrix) -> Result<StokesVector> {
    require_two_qubit(rho)?;
    let reduced = DensityMatrix::new(partial_trace_matrix(rho.matrix(), Subsystem::Control))?;
    Ok(stokes_from_density(&reduced))
}

/// Unnormalised target state `⟨M_c| ρ |M_c⟩` conditioned on projecting the
/// control onto `|M_c⟩ = cos θ |0⟩ + e^{iφ} sin θ |1⟩`.
///
/// The trace is the probability of that outcome; use
/// [`normalize_conditional`] for the post-measurement state.
pub fn project_control(rho: &DensityMatrix, theta: f64, phi: f64) -> Result<ComplexMatrix> {
    require_two_qubit(rho)?;
    let m = [
        C64::new(theta.cos(), 0.0),
        C64::from_polar(theta.sin(), phi),
    ];
    let r = rho.matrix();
    ComplexMatrix::from_fn(2, |a, b| {
        let mut acc = C64::new(0.0, 0.0);
        for c in 0..2 {
            for d in 0..2 {
                acc += m[c].conj() * m[d] * r.get(2 * c + a, 2 * d + b);
            }
        }
        acc
    })
}

/// Divides a conditional state by its trace.
pub fn normalize_conditional(conditional: &ComplexMatrix) -> Result<DensityMatrix> {
    let tr = conditional.trace().re;
    if !(tr > 1e-15) {
        return Err(argument(format!(
            "conditional state has vanishing probability {tr:.3e}"
        )));
    }
    DensityMatrix::new(conditional.scale_real(1.0 / tr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping_kraus, compose_definite, depolarizing_kraus};
    use crate::qmath::{partial_trace, von_neumann_entropy, BlochAngles};

    fn ket1() -> DensityMatrix {
        DensityMatrix::from_ket([C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap()
    }

    fn half_input(target: DensityMatrix) -> SwitchInput {
        SwitchInput::new(0.5, target).unwrap()
    }

    #[test]
    fn input_validation() {
        assert!(SwitchInput::new(1.2, ket1()).is_err());
        let two = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(SwitchInput::new(0.5, two).is_err());
    }

    #[test]
    fn switch_of_identities_is_identity() {
        let id = KrausChannel::identity(2).unwrap();
        let s = switch_kraus(&id, &id).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.operators()[0], ComplexMatrix::identity(4).unwrap());
    }

    #[test]
    fn amplitude_switch_has_four_operators() {
        let a = amplitude_damping_kraus(0.3).unwrap();
        let s = switch_kraus(&a, &a).unwrap();
        assert_eq!(s.len(), 4);
        assert!(validate_cptp(&s).max_deviation < 1e-12);
    }

    #[test]
    fn rejects_incomplete_component() {
        let id = pauli(0).unwrap();
        let bad = KrausChannel::new("bad", vec![id, id]).unwrap();
        let good = KrausChannel::identity(2).unwrap();
        assert!(switch_kraus(&bad, &good).is_err());
        assert!(switch_kraus(&good, &bad).is_err());
    }

    #[test]
    fn clean_switch_output_is_pure() {
        let id = KrausChannel::identity(2).unwrap();
        let input = half_input(DensityMatrix::pure(BlochAngles::new(1.0, 0.3)));
        let out = apply_switch(&id, &id, &input).unwrap();
        assert!(von_neumann_entropy(&out).unwrap().abs() < 1e-12);
    }

    #[test]
    fn table_rows_with_ket_one_target() {
        let input = half_input(ket1());
        let d_state = half_input(ket1()).control();

        // σ0σ0: control D, target |1⟩
        let out = pauli_pair_switch(0, 0, &input).unwrap();
        let expected = kron2(d_state.matrix(), ket1().matrix());
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);

        // σ1σ2: control antidiagonal, target ∝ |1⟩
        let out = pauli_pair_switch(1, 2, &input).unwrap();
        assert!((control_s2(&out).unwrap() + 1.0).abs() < 1e-15);
        let t = partial_trace(&out, Subsystem::Target).unwrap();
        assert!(t.matrix().max_abs_diff(ket1().matrix()) < 1e-15);

        // σ3σ3: control D, target |1⟩
        let out = pauli_pair_switch(3, 3, &input).unwrap();
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn pair_index_range() {
        assert!(pauli_pair_switch(4, 0, &half_input(ket1())).is_err());
    }

    #[test]
    fn clean_mixture_is_identity_branch() {
        let input = SwitchInput::new(0.3, DensityMatrix::pure(BlochAngles::new(0.7, 2.0))).unwrap();
        let mix = depolarizing_switch_mixture(0.0, &input).unwrap();
        let branch = pauli_pair_switch(0, 0, &input).unwrap();
        assert!(mix.matrix().max_abs_diff(branch.matrix()) < 1e-15);
    }

    #[test]
    fn full_depolarisation_leaves_quarter_coherence() {
        let input = half_input(ket1());
        let out = depolarizing_switch_mixture(1.0, &input).unwrap();
        let s = control_marginal_stokes(&out).unwrap();
        assert!(s.s1.abs() < 1e-15 && (s.s2 - 0.25).abs() < 1e-15 && s.s3.abs() < 1e-15);
    }

    #[test]
    fn control_s2_signs() {
        let input = half_input(ket1());
        assert!(
            (control_s2(&pauli_pair_switch(0, 3, &input).unwrap()).unwrap() - 1.0).abs() < 1e-15
        );
        assert!(
            (control_s2(&pauli_pair_switch(3, 2, &input).unwrap()).unwrap() + 1.0).abs() < 1e-15
        );
    }

    #[test]
    fn definite_control_reproduces_composition() {
        // Non-commuting components so the order matters.
        let a = amplitude_damping_kraus(0.6).unwrap();
        let b = KrausChannel::unitary("h", {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            ComplexMatrix::from_row_major(&[
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(h, 0.0),
                C64::new(-h, 0.0),
            ])
            .unwrap()
        })
        .unwrap();
        let target = DensityMatrix::pure(BlochAngles::new(2.1, 0.4));
        for (gamma, first, second) in [(1.0, &b, &a), (0.0, &a, &b)] {
            let input = SwitchInput::new(gamma, target).unwrap();
            let out = apply_switch(&a, &b, &input).unwrap();
            let marginal = partial_trace(&out, Subsystem::Target).unwrap();
            let definite =
                crate::channels::apply_channel(&compose_definite(second, first).unwrap(), &target)
                    .unwrap();
            assert!(marginal.matrix().max_abs_diff(definite.matrix()) < 1e-15);
            // control untouched
            let c = partial_trace(&out, Subsystem::Control).unwrap();
            assert!(c.matrix().max_abs_diff(input.control().matrix()) < 1e-15);
        }
    }

    #[test]
    fn projection_onto_basis_states() {
        let d = depolarizing_kraus(0.4).unwrap();
        let input = SwitchInput::new(0.3, DensityMatrix::pure(BlochAngles::new(1.3, 0.5))).unwrap();
        let out = apply_switch(&d, &d, &input).unwrap();
        let p0 = project_control(&out, 0.0, 0.0).unwrap();
        let p1 = project_control(&out, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        // the two outcomes partition the target marginal
        let marginal = partial_trace(&out, Subsystem::Target).unwrap();
        assert!((p0 + p1).max_abs_diff(marginal.matrix()) < 1e-15);
        assert!((p0.trace().re - 0.3).abs() < 1e-15);
    }

    #[test]
    fn normalize_rejects_zero_probability() {
        assert!(normalize_conditional(&ComplexMatrix::zeros(2).unwrap()).is_err());
    }

    #[test]
    fn closed_form_control_stokes() {
        let s = depolarized_control_stokes(1.0, 0.5).unwrap();
        assert!((s.s2 - 0.25).abs() < 1e-15);
        assert!(depolarized_control_stokes(0.5, 1.5).is_err());
    }
}
