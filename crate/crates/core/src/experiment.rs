//! Measured control coherences and the hardware model of the switch.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::io::Read;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::capacity::{holevo_from_branches, BranchCoherences, CapacityResult};
use crate::error::{argument, Error, Result};
use crate::qmath::{pauli, ComplexMatrix, C64};

/// Measured coherences shipped with the crate, one row per Pauli pair
/// (`i,j,s2,sigma`).
pub const BUNDLED_TABLE_CSV: &str = include_str!("../data/table1.csv");

/// One measured control coherence `S₂(σ_i, σ_j)` with its 1σ uncertainty.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub i: usize,
    pub j: usize,
    pub s2: f64,
    pub sigma: f64,
}

/// Exactly one record for each of the 16 Pauli pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSet {
    records: [MeasurementRecord; 16],
    metadata: String,
}

impl MeasurementSet {
    /// Validates ranges and pair coverage. Records may arrive in any order;
    /// they are stored in lexicographic `(i, j)` order.
    pub fn new(records: &[MeasurementRecord], metadata: impl Into<String>) -> Result<Self> {
        let mut slots: [Option<MeasurementRecord>; 16] = [None; 16];
        for r in records {
            check_record(r)?;
            let slot = &mut slots[r.i * 4 + r.j];
            if slot.is_some() {
                return Err(argument(format!(
                    "duplicate record for pair ({}, {})",
                    r.i, r.j
                )));
            }
            *slot = Some(*r);
        }
        let records = collect_slots(slots)
            .map_err(|(i, j)| argument(format!("missing record for pair ({i}, {j})")))?;
        Ok(Self {
            records,
            metadata: metadata.into(),
        })
    }

    /// The bundled measurement table.
    pub fn bundled() -> Self {
        load_measurements(BUNDLED_TABLE_CSV.as_bytes())
            .expect("bundled table is valid")
            .with_metadata("bundled per-pair S2 measurements")
    }

    pub fn with_metadata(mut self, metadata: impl Into<String>) -> Self {
        self.metadata = metadata.into();
        self
    }

    pub fn metadata(&self) -> &str {
        &self.metadata
    }

    pub fn records(&self) -> &[MeasurementRecord] {
        &self.records
    }

    pub fn get(&self, i: usize, j: usize) -> &MeasurementRecord {
        &self.records[i * 4 + j]
    }

    pub fn coherences(&self) -> BranchCoherences {
        let mut v = [[0.0; 4]; 4];
        for r in &self.records {
            v[r.i][r.j] = r.s2;
        }
        BranchCoherences::new(v).expect("records are range-checked")
    }
}

fn check_record(r: &MeasurementRecord) -> Result<()> {
    if r.i > 3 || r.j > 3 {
        return Err(argument(format!(
            "pair ({}, {}) out of range 0..=3",
            r.i, r.j
        )));
    }
    if !(r.s2.abs() <= 1.0) {
        return Err(argument(format!(
            "s2 = {} for pair ({}, {}) is unphysical (|s2| > 1)",
            r.s2, r.i, r.j
        )));
    }
    if !(r.sigma >= 0.0 && r.sigma.is_finite()) {
        return Err(argument(format!(
            "sigma = {} for pair ({}, {}) must be a finite non-negative number",
            r.sigma, r.i, r.j
        )));
    }
    Ok(())
}

fn collect_slots(
    slots: [Option<MeasurementRecord>; 16],
) -> std::result::Result<[MeasurementRecord; 16], (usize, usize)> {
    if let Some(k) = slots.iter().position(Option::is_none) {
        return Err((k / 4, k % 4));
    }
    Ok(slots.map(|s| s.expect("checked above")))
}

/// Reads the `i,j,s2,sigma` CSV schema. Row numbers in errors count the
/// header as row 1.
pub fn load_measurements<R: Read>(source: R) -> Result<MeasurementSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let header = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let expected = ["i", "j", "s2", "sigma"];
    if header.iter().ne(expected.iter().copied()) {
        return Err(parse_err(
            1,
            format!(
                "expected header 'i,j,s2,sigma', found '{}'",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut slots: [Option<MeasurementRecord>; 16] = [None; 16];
    for (idx, row) in reader.records().enumerate() {
        let line = idx + 2;
        let row = row.map_err(|e| parse_err(line, e.to_string()))?;
        if row.len() != 4 {
            return Err(parse_err(
                line,
                format!("expected 4 fields, found {}", row.len()),
            ));
        }
        let index = |k: usize, name: &str| -> Result<usize> {
            row[k]
                .parse::<usize>()
                .map_err(|_| parse_err(line, format!("{name} '{}' is not an index", &row[k])))
        };
        let real = |k: usize, name: &str| -> Result<f64> {
            row[k]
                .parse::<f64>()
                .map_err(|_| parse_err(line, format!("{name} '{}' is not a number", &row[k])))
        };
        let record = MeasurementRecord {
            i: index(0, "i")?,
            j: index(1, "j")?,
            s2: real(2, "s2")?,
            sigma: real(3, "sigma")?,
        };
        check_record(&record).map_err(|e| match e {
            Error::Argument(m) => parse_err(line, m),
            other => other,
        })?;
        let slot = &mut slots[record.i * 4 + record.j];
        if slot.is_some() {
            return Err(parse_err(
                line,
                format!("duplicate record for pair ({}, {})", record.i, record.j),
            ));
        }
        *slot = Some(record);
    }

    let records = collect_slots(slots)
        .map_err(|(i, j)| parse_err(0, format!("missing record for pair ({i}, {j})")))?;
    Ok(MeasurementSet {
        records,
        metadata: String::new(),
    })
}

fn parse_err(row: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        row,
        message: message.into(),
    }
}

/// Capacity rebuilt from the measured coherences at depolarising strength `q`.
pub fn reconstruct_capacity(meas: &MeasurementSet, q: f64, gamma: f64) -> Result<CapacityResult> {
    holevo_from_branches(&meas.coherences(), q, gamma)
}

/// Interferometric visibility `v ± v_err` of the switch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VisibilityModel {
    pub v: f64,
    pub v_err: f64,
}

impl VisibilityModel {
    pub fn new(v: f64, v_err: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&v) {
            return Err(argument(format!("visibility must lie in [0, 1], got {v}")));
        }
        if !(v_err >= 0.0 && v_err.is_finite()) {
            return Err(argument(format!(
                "visibility error must be non-negative, got {v_err}"
            )));
        }
        Ok(Self { v, v_err })
    }

    /// `(v − v_err, v + v_err)` clamped to `[0, 1]`.
    pub fn bounds(&self) -> (f64, f64) {
        (
            (self.v - self.v_err).clamp(0.0, 1.0),
            (self.v + self.v_err).clamp(0.0, 1.0),
        )
    }
}

/// Capacities at the two ends of the visibility interval, ordered low/high.
/// Each end scales the ideal ±1 coherences uniformly.
pub fn visibility_band(vm: &VisibilityModel, q: f64, gamma: f64) -> Result<(f64, f64)> {
    let (lo, hi) = vm.bounds();
    let chi_lo = holevo_from_branches(&BranchCoherences::with_visibility(lo)?, q, gamma)?.chi;
    let chi_hi = if hi == lo {
        chi_lo
    } else {
        holevo_from_branches(&BranchCoherences::with_visibility(hi)?, q, gamma)?.chi
    };
    Ok((chi_lo.min(chi_hi), chi_lo.max(chi_hi)))
}

/// Action of an inverting prism at physical angle `theta` on the target
/// mode: a reflection combined with a `2θ` rotation.
pub fn prism_rotation(theta: f64) -> ComplexMatrix {
    let (s, c) = (2.0 * theta).sin_cos();
    ComplexMatrix::from_row_major(&[
        C64::new(-c, 0.0),
        C64::new(s, 0.0),
        C64::new(s, 0.0),
        C64::new(c, 0.0),
    ])
    .expect("2x2")
}

/// `e^{iφ} R(θₙ)…R(θ₁)` for one or two prisms, the first angle acting first.
pub fn prism_unitary(phi: f64, thetas: &[f64]) -> Result<ComplexMatrix> {
    if thetas.is_empty() || thetas.len() > 2 {
        return Err(argument(format!(
            "a switch arm holds one or two prisms, got {} angles",
            thetas.len()
        )));
    }
    let mut u = ComplexMatrix::identity(2)?;
    for &theta in thetas {
        u = prism_rotation(theta) * u;
    }
    Ok(u.scale(C64::from_polar(1.0, phi)))
}

/// Phase-plate and prism settings realising one Pauli operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardwareSetting {
    pub pauli: usize,
    pub phase: f64,
    pub thetas: &'static [f64],
}

/// Settings used to realise σ₀…σ₃.
pub const HARDWARE_SETTINGS: [HardwareSetting; 4] = [
    HardwareSetting {
        pauli: 0,
        phase: 0.0,
        thetas: &[FRAC_PI_2, FRAC_PI_2],
    },
    HardwareSetting {
        pauli: 1,
        phase: 0.0,
        thetas: &[FRAC_PI_4],
    },
    HardwareSetting {
        pauli: 2,
        phase: FRAC_PI_2,
        thetas: &[FRAC_PI_2, FRAC_PI_4],
    },
    HardwareSetting {
        pauli: 3,
        phase: 0.0,
        thetas: &[FRAC_PI_2],
    },
];

/// Tolerance for the hardware check.
pub const HARDWARE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HardwareCheck {
    pub setting: HardwareSetting,
    /// Max-norm distance to the Pauli after removing the global phase.
    pub distance: f64,
    /// Max-norm distance without any phase correction.
    pub raw_distance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardwareReport {
    pub checks: Vec<HardwareCheck>,
}

impl HardwareReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Compares the prism model at each setting in [`HARDWARE_SETTINGS`] with
/// the Pauli it is meant to realise.
pub fn verify_hardware_settings() -> HardwareReport {
    let checks = HARDWARE_SETTINGS
        .iter()
        .map(|s| check_setting(s).expect("compiled-in settings are well formed"))
        .collect();
    HardwareReport { checks }
}

/// Checks an arbitrary setting against its Pauli.
pub fn check_setting(setting: &HardwareSetting) -> Result<HardwareCheck> {
    let u = prism_unitary(setting.phase, setting.thetas)?;
    let target = pauli(setting.pauli)?;
    let distance = u.phase_insensitive_distance(&target);
    Ok(HardwareCheck {
        setting: *setting,
        distance,
        raw_distance: u.max_abs_diff(&target),
        passed: distance <= HARDWARE_TOL,
    })
}

/// Sample mean and standard deviation of χ under Gaussian resampling of the
/// measured coherences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloBand {
    pub chi_mean: f64,
    pub chi_std: f64,
    pub samples: usize,
}

pub const MIN_MONTE_CARLO_SAMPLES: usize = 100;

/// Draws `n` resampled tables (each `s_ij ~ N(s2, sigma)`, clamped to
/// `[-1, 1]`) and reports the spread of the reconstructed χ. Draws are taken
/// in `(sample, i, j)` order from a ChaCha8 stream seeded with `seed`.
pub fn monte_carlo_band(
    meas: &MeasurementSet,
    q: f64,
    gamma: f64,
    n: usize,
    seed: u64,
) -> Result<MonteCarloBand> {
    if n < MIN_MONTE_CARLO_SAMPLES {
        return Err(argument(format!(
            "Monte Carlo needs at least {MIN_MONTE_CARLO_SAMPLES} samples, got {n}"
        )));
    }
    let dists = meas
        .records()
        .iter()
        .map(|r| Normal::new(r.s2, r.sigma).map_err(|e| argument(e.to_string())))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chis = Vec::with_capacity(n);
    for _ in 0..n {
        let mut v = [[0.0; 4]; 4];
        for (r, d) in meas.records().iter().zip(&dists) {
            v[r.i][r.j] = d.sample(&mut rng).clamp(-1.0, 1.0);
        }
        chis.push(holevo_from_branches(&BranchCoherences::new(v)?, q, gamma)?.chi);
    }
    // shifted by the first draw so identical samples give exactly zero spread
    let x0 = chis[0];
    let sum: f64 = chis.iter().map(|c| c - x0).sum();
    let sum_sq: f64 = chis.iter().map(|c| (c - x0).powi(2)).sum();
    let var = ((sum_sq - sum * sum / n as f64) / (n - 1) as f64).max(0.0);
    Ok(MonteCarloBand {
        chi_mean: x0 + sum / n as f64,
        chi_std: var.sqrt(),
        samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_loads() {
        let m = MeasurementSet::bundled();
        assert_eq!(m.records().len(), 16);
        assert_eq!(m.get(0, 0).s2, 0.8547);
        assert_eq!(m.get(0, 0).sigma, 0.0006);
        assert_eq!(m.get(1, 2).s2, -0.8434);
    }

    #[test]
    fn measured_signs_follow_ideal_signs() {
        let m = MeasurementSet::bundled();
        let ideal = BranchCoherences::ideal();
        for r in m.records() {
            assert_eq!(r.s2.signum(), ideal.get(r.i, r.j), "({}, {})", r.i, r.j);
        }
    }

    #[test]
    fn header_mismatch_is_row_one() {
        let err = load_measurements("a,b,c,d\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { row: 1, .. }), "{err:?}");
    }

    #[test]
    fn set_constructor_rejects_duplicates() {
        let mut records = MeasurementSet::bundled().records().to_vec();
        records[15] = records[0];
        assert!(MeasurementSet::new(&records, "").is_err());
    }

    #[test]
    fn visibility_model_clamps() {
        let vm = VisibilityModel::new(0.99, 0.05).unwrap();
        assert_eq!(vm.bounds(), (0.94, 1.0));
        assert!(VisibilityModel::new(1.2, 0.0).is_err());
        assert!(VisibilityModel::new(0.5, -0.1).is_err());
    }

    #[test]
    fn prism_rows_give_paulis() {
        let s1 = prism_unitary(0.0, &[FRAC_PI_4]).unwrap();
        assert!(s1.max_abs_diff(&pauli(1).unwrap()) < 1e-15);
        let s3 = prism_unitary(0.0, &[FRAC_PI_2]).unwrap();
        assert!(s3.max_abs_diff(&pauli(3).unwrap()) < 1e-15);
        let s2 = prism_unitary(FRAC_PI_2, &[FRAC_PI_2, FRAC_PI_4]).unwrap();
        assert!(s2.max_abs_diff(&pauli(2).unwrap()) < 1e-12);
    }

    #[test]
    fn prism_angle_count_checked() {
        assert!(prism_unitary(0.0, &[]).is_err());
        assert!(prism_unitary(0.0, &[0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn monte_carlo_needs_enough_samples() {
        let m = MeasurementSet::bundled();
        assert!(monte_carlo_band(&m, 1.0, 0.5, 99, 0).is_err());
    }
}
