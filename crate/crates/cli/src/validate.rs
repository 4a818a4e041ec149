use std::io::Write;

use causal_switch_core::{
    apply_switch, control_marginal_stokes, control_s2, depolarizing_kraus, holevo_classical,
    holevo_from_branches, holevo_switch, pauli_pair_switch, switch_kraus, validate_cptp,
    verify_hardware_settings, BlochAngles, BranchCoherences, ChannelFamily, DensityMatrix,
    SwitchInput,
};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{sci, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cptp,
    Switch,
    Capacity,
    Hardware,
    All,
}

/// The depolarised switch state under test, `(q, input) ↦ output`.
pub type MixtureFn = fn(f64, &SwitchInput) -> causal_switch_core::Result<DensityMatrix>;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            deviation,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

const STRENGTHS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

fn cptp_checks() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    for family in ChannelFamily::ALL {
        for s in STRENGTHS {
            let ch = family.build(s)?;
            let single = validate_cptp(&ch);
            checks.push(Check::new(
                format!("cptp/{family}@{s}"),
                single.max_deviation,
                causal_switch_core::channels::CPTP_TOL,
            ));
            let switched = validate_cptp(&switch_kraus(&ch, &ch)?);
            checks.push(Check::new(
                format!("cptp/switch[{family}]@{s}"),
                switched.max_deviation,
                causal_switch_core::channels::CPTP_TOL,
            ));
        }
    }
    Ok(checks)
}

fn switch_checks(mixture: MixtureFn) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let input = SwitchInput::new(0.5, DensityMatrix::pure(BlochAngles::new(0.9, 0.4)))?;
    for i in 0..4 {
        for j in 0..4 {
            let expected = if i == 0 || j == 0 || i == j {
                1.0
            } else {
                -1.0
            };
            let s2 = control_s2(&pauli_pair_switch(i, j, &input)?)?;
            checks.push(Check::new(
                format!("switch/sign({i},{j})"),
                (s2 - expected).abs(),
                1e-12,
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let q = rng.random_range(0.0..=1.0);
        let gamma = rng.random_range(0.0..=1.0);
        let z: f64 = rng.random_range(-1.0..=1.0);
        let angles = BlochAngles::new(z.acos(), rng.random_range(0.0..std::f64::consts::TAU));
        let input = SwitchInput::new(gamma, DensityMatrix::pure(angles))?;
        let ch = depolarizing_kraus(q)?;
        let kraus = apply_switch(&ch, &ch, &input)?;
        worst = worst.max(mixture(q, &input)?.matrix().max_abs_diff(kraus.matrix()));
    }
    checks.push(Check::new("switch/kraus-oracle", worst, 1e-12));

    let mut law = 0.0f64;
    for k in 0..50 {
        let q = k as f64 / 49.0;
        let s = control_marginal_stokes(&mixture(q, &input)?)?;
        law = law
            .max(s.s1.abs())
            .max(s.s3.abs())
            .max((s.s2 - (1.0 - 0.75 * q * q)).abs());
    }
    checks.push(Check::new("switch/control-law", law, 1e-10));
    Ok(checks)
}

fn capacity_checks() -> Result<Vec<Check>, CliError> {
    let mut checks = vec![
        Check::new(
            "capacity/chi(q=1)",
            (holevo_switch(1.0, 0.5)?.chi - 4.88e-2).abs(),
            5e-5,
        ),
        Check::new(
            "capacity/classical(q=0)",
            (holevo_classical(0.0)? - 1.0).abs(),
            0.0,
        ),
        Check::new(
            "capacity/classical(q=1)",
            holevo_classical(1.0)?.abs(),
            1e-12,
        ),
    ];
    let mut identity = 0.0f64;
    let mut definite = 0.0f64;
    let mut branches = 0.0f64;
    for k in 0..=10 {
        let q = k as f64 / 10.0;
        let r = holevo_switch(q, 0.5)?;
        identity = identity.max((r.chi - (1.0 + r.h_control - r.h_min)).abs());
        let classical = holevo_classical(q)?;
        for gamma in [0.0, 1.0] {
            definite = definite.max((holevo_switch(q, gamma)?.chi - classical).abs());
        }
        let rebuilt = holevo_from_branches(&BranchCoherences::ideal(), q, 0.5)?;
        branches = branches.max((rebuilt.chi - r.chi).abs());
    }
    checks.push(Check::new("capacity/identity", identity, 1e-12));
    checks.push(Check::new("capacity/definite-order", definite, 1e-8));
    checks.push(Check::new("capacity/ideal-branches", branches, 1e-10));
    Ok(checks)
}

fn hardware_checks() -> Vec<Check> {
    verify_hardware_settings()
        .checks
        .iter()
        .map(|c| {
            Check::new(
                format!("hardware/sigma{}", c.setting.pauli),
                c.distance,
                causal_switch_core::experiment::HARDWARE_TOL,
            )
        })
        .collect()
}

/// Runs a suite with `mixture` standing in for the depolarised switch.
pub fn run_suite(suite: Suite, mixture: MixtureFn) -> Result<Vec<Check>, CliError> {
    Ok(match suite {
        Suite::Cptp => cptp_checks()?,
        Suite::Switch => switch_checks(mixture)?,
        Suite::Capacity => capacity_checks()?,
        Suite::Hardware => hardware_checks(),
        Suite::All => {
            let mut all = cptp_checks()?;
            all.extend(switch_checks(mixture)?);
            all.extend(capacity_checks()?);
            all.extend(hardware_checks());
            all
        }
    })
}

pub fn cmd_validate(suite: Suite, mixture: MixtureFn, out: &mut dyn Write) -> Result<(), CliError> {
    let checks = run_suite(suite, mixture)?;
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!(
            "{} {} deviation={} tol={}\n",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            sci(c.deviation),
            sci(c.tolerance),
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    text.push_str(&format!(
        "{}/{} checks passed\n",
        checks.len() - failed,
        checks.len()
    ));
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))?;
    if failed > 0 {
        return Err(CliError::ChecksFailed {
            failed,
            total: checks.len(),
        });
    }
    Ok(())
}
