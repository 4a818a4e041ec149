//! Noisy qubit channels in Kraus form and their definite-order composition.

use std::fmt;
use std::str::FromStr;

use crate::error::{argument, Error, Result};
use crate::qmath::{pauli, paulis, ComplexMatrix, DensityMatrix, C64};

/// Maximum entrywise deviation of `Σ K†K` from the identity for a channel to
/// count as trace preserving.
pub const CPTP_TOL: f64 = 1e-10;

/// A channel given by an ordered list of Kraus operators.
///
/// Zero operators are kept so that indices line up with the usual labels
/// (e.g. `A₁ = 0` for undamped amplitude damping).
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    label: String,
}

impl KrausChannel {
    /// Requires at least one operator and a common dimension. Completeness is
    /// not enforced here; see [`validate_cptp`].
    pub fn new(label: impl Into<String>, operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| argument("a channel needs at least one Kraus operator"))?;
        let dim = first.dim();
        if let Some(bad) = operators.iter().find(|k| k.dim() != dim) {
            return Err(argument(format!(
                "Kraus operators disagree on dimension ({} vs {})",
                dim,
                bad.dim()
            )));
        }
        Ok(Self {
            operators,
            label: label.into(),
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new("identity", vec![ComplexMatrix::identity(dim)?])
    }

    /// Unitary channel `ρ ↦ UρU†`.
    pub fn unitary(label: impl Into<String>, u: ComplexMatrix) -> Result<Self> {
        Self::new(label, vec![u])
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

/// Pauli error probabilities `p₀ = 1 − 3q/4`, `p₁ = p₂ = p₃ = q/4` of a
/// depolarising channel of strength `q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliMixture {
    q: f64,
    p: [f64; 4],
}

impl PauliMixture {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    /// Bloch-vector shrink factor `1 − q` of the channel.
    pub fn shrink(&self) -> f64 {
        1.0 - self.q
    }
}

fn check_strength(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(argument(format!("{name} must lie in [0, 1], got {value}")))
    }
}

pub fn depolarizing_mixture(q: f64) -> Result<PauliMixture> {
    check_strength("depolarising strength q", q)?;
    let side = q / 4.0;
    Ok(PauliMixture {
        q,
        p: [1.0 - 3.0 * side, side, side, side],
    })
}

/// Kraus form `{√p_i σ_i}` of the depolarising channel.
pub fn depolarizing_kraus(q: f64) -> Result<KrausChannel> {
    let mix = depolarizing_mixture(q)?;
    let ops = paulis()
        .iter()
        .zip(mix.p)
        .map(|(s, p)| s.scale_real(p.sqrt()))
        .collect();
    KrausChannel::new(ChannelFamily::Depolarizing.label(), ops)
}

/// Amplitude damping towards |0⟩ with decay probability `gamma`.
pub fn amplitude_damping_kraus(gamma: f64) -> Result<KrausChannel> {
    check_strength("amplitude damping strength", gamma)?;
    let z = C64::new(0.0, 0.0);
    let a0 = ComplexMatrix::from_row_major(&[
        C64::new(1.0, 0.0),
        z,
        z,
        C64::new((1.0 - gamma).sqrt(), 0.0),
    ])?;
    let a1 = ComplexMatrix::from_row_major(&[z, C64::new(gamma.sqrt(), 0.0), z, z])?;
    KrausChannel::new(ChannelFamily::Amplitude.label(), vec![a0, a1])
}

/// Phase damping `{√(1−Φ)·I, √Φ·|0⟩⟨0|, √Φ·|1⟩⟨1|}`.
pub fn phase_damping_kraus(strength: f64) -> Result<KrausChannel> {
    check_strength("phase damping strength", strength)?;
    let z = C64::new(0.0, 0.0);
    let w = C64::new(strength.sqrt(), 0.0);
    let p0 = pauli(0)?.scale_real((1.0 - strength).sqrt());
    let p1 = ComplexMatrix::from_row_major(&[w, z, z, z])?;
    let p2 = ComplexMatrix::from_row_major(&[z, z, z, w])?;
    KrausChannel::new(ChannelFamily::Phase.label(), vec![p0, p1, p2])
}

/// `Σ_k K_k ρ K_k†`.
pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim() != rho.dim() {
        return Err(argument(format!(
            "channel acts on dimension {} but state has dimension {}",
            ch.dim(),
            rho.dim()
        )));
    }
    let report = validate_cptp(ch);
    if !report.passed {
        return Err(argument(format!(
            "channel '{}' is not trace preserving (deviation {:.3e})",
            ch.label(),
            report.max_deviation
        )));
    }
    let out = kraus_sum(ch.operators(), rho.matrix());
    DensityMatrix::new(out).map_err(|e| match e {
        Error::Validation(msg) => Error::Internal(format!("channel output invalid: {msg}")),
        other => other,
    })
}

pub(crate) fn kraus_sum(ops: &[ComplexMatrix], m: &ComplexMatrix) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(m.dim()).expect("valid dimension");
    for k in ops {
        acc.add_scaled(1.0, &m.conjugate_by(k));
    }
    acc
}

/// Definite causal order `chA ∘ chB`: `chB` acts first, then `chA`. The Kraus
/// set is all products `K_a · K_b`, ordered with `a` as the major index.
pub fn compose_definite(ch_a: &KrausChannel, ch_b: &KrausChannel) -> Result<KrausChannel> {
    if ch_a.dim() != ch_b.dim() {
        return Err(argument(format!(
            "cannot compose channels of dimension {} and {}",
            ch_a.dim(),
            ch_b.dim()
        )));
    }
    let ops = ch_a
        .operators()
        .iter()
        .flat_map(|ka| ch_b.operators().iter().map(move |kb| ka * kb))
        .collect();
    KrausChannel::new(format!("{}∘{}", ch_a.label(), ch_b.label()), ops)
}

/// Outcome of a trace-preservation check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CptpReport {
    /// `‖Σ K†K − I‖_max`
    pub max_deviation: f64,
    pub passed: bool,
}

pub fn validate_cptp(ch: &KrausChannel) -> CptpReport {
    let dim = ch.dim();
    let mut sum = ComplexMatrix::zeros(dim).expect("channel dimension is valid");
    for k in ch.operators() {
        sum.add_scaled(1.0, &(k.adjoint() * k));
    }
    let max_deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim).expect("valid dimension"));
    CptpReport {
        max_deviation,
        passed: max_deviation <= CPTP_TOL,
    }
}

/// Channel families addressable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelFamily {
    Depolarizing,
    Amplitude,
    Phase,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 3] = [Self::Depolarizing, Self::Amplitude, Self::Phase];

    pub fn label(self) -> &'static str {
        match self {
            Self::Depolarizing => "depolarizing",
            Self::Amplitude => "amplitude",
            Self::Phase => "phase",
        }
    }

    pub fn build(self, strength: f64) -> Result<KrausChannel> {
        match self {
            Self::Depolarizing => depolarizing_kraus(strength),
            Self::Amplitude => amplitude_damping_kraus(strength),
            Self::Phase => phase_damping_kraus(strength),
        }
    }
}

impl fmt::Display for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.label() == s)
            .ok_or_else(|| {
                argument(format!(
                    "unknown channel '{s}' (depolarizing|amplitude|phase)"
                ))
            })
    }
}
