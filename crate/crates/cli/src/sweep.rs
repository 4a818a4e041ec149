use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use causal_switch_core::{
    holevo_classical, holevo_switch, load_measurements, reconstruct_capacity, visibility_band,
    MeasurementSet, VisibilityModel,
};
use clap::Args;
use rayon::prelude::*;

use crate::{sci, CliError};

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    pub q_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, requires = "visibility_err")]
    pub visibility: Option<f64>,
    #[arg(long, requires = "visibility")]
    pub visibility_err: Option<f64>,
    /// Measurement CSV (`i,j,s2,sigma`); adds a chi_exp column.
    #[arg(long, value_name = "PATH")]
    pub measurements: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub q_min: f64,
    pub q_max: f64,
    pub steps: usize,
    pub gamma: f64,
    pub visibility: Option<VisibilityModel>,
    pub measurements: Option<PathBuf>,
    pub out: PathBuf,
}

impl SweepArgs {
    pub fn into_config(self) -> Result<SweepConfig, CliError> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(CliError::Usage(format!(
                    "{name} must lie in [0, 1], got {v}"
                )))
            }
        };
        unit("--q-min", self.q_min)?;
        unit("--q-max", self.q_max)?;
        unit("--gamma", self.gamma)?;
        if self.q_min >= self.q_max {
            return Err(CliError::Usage(format!(
                "--q-min ({}) must be below --q-max ({})",
                self.q_min, self.q_max
            )));
        }
        if self.steps < 2 {
            return Err(CliError::Usage(format!(
                "--steps must be at least 2, got {}",
                self.steps
            )));
        }
        let visibility = match (self.visibility, self.visibility_err) {
            (Some(v), Some(e)) => {
                Some(VisibilityModel::new(v, e).map_err(|err| CliError::Usage(err.to_string()))?)
            }
            _ => None,
        };
        Ok(SweepConfig {
            q_min: self.q_min,
            q_max: self.q_max,
            steps: self.steps,
            gamma: self.gamma,
            visibility,
            measurements: self.measurements,
            out: self.out,
        })
    }
}

impl SweepConfig {
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| {
                if k == last {
                    self.q_max
                } else {
                    self.q_min + (self.q_max - self.q_min) * k as f64 / last as f64
                }
            })
            .collect()
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut h = vec!["q", "chi_switch", "chi_classical"];
        if self.visibility.is_some() {
            h.extend(["chi_vis_low", "chi_vis_high"]);
        }
        if self.measurements.is_some() {
            h.push("chi_exp");
        }
        h
    }
}

pub fn read_measurements(path: &Path) -> Result<MeasurementSet, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    load_measurements(file).map_err(|e| match e {
        causal_switch_core::Error::Parse { row, message } => CliError::Parse {
            path: path.to_path_buf(),
            row,
            message,
        },
        other => other.into(),
    })
}

/// Computes every row, in ascending q.
pub fn sweep_rows(config: &SweepConfig) -> Result<Vec<Vec<f64>>, CliError> {
    let meas = config
        .measurements
        .as_deref()
        .map(read_measurements)
        .transpose()?;
    let gamma = config.gamma;
    config
        .grid()
        .into_par_iter()
        .map(|q| -> Result<Vec<f64>, CliError> {
            let mut row = vec![q, holevo_switch(q, gamma)?.chi, holevo_classical(q)?];
            if let Some(vm) = &config.visibility {
                let (lo, hi) = visibility_band(vm, q, gamma)?;
                row.extend([lo, hi]);
            }
            if let Some(m) = &meas {
                row.push(reconstruct_capacity(m, q, gamma)?.chi);
            }
            Ok(row)
        })
        .collect()
}

pub fn write_csv(config: &SweepConfig, rows: &[Vec<f64>], sink: impl Write) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(config.header())?;
    for row in rows {
        w.write_record(row.iter().map(|&x| sci(x)))?;
    }
    w.flush()
}

pub fn cmd_sweep(config: &SweepConfig) -> Result<(), CliError> {
    let rows = sweep_rows(config)?;
    let file = File::create(&config.out).map_err(|e| CliError::io(&config.out, e))?;
    write_csv(config, &rows, BufWriter::new(file)).map_err(|e| CliError::io(&config.out, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(q_min: f64, q_max: f64, steps: usize) -> SweepArgs {
        SweepArgs {
            q_min,
            q_max,
            steps,
            gamma: 0.5,
            visibility: None,
            visibility_err: None,
            measurements: None,
            out: PathBuf::from("unused.csv"),
        }
    }

    #[test]
    fn grid_hits_both_ends() {
        let cfg = args(0.1, 0.7, 7).into_config().unwrap();
        let g = cfg.grid();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[6], 0.7);
        assert!((g[3] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn invalid_configs_are_usage_errors() {
        for a in [args(0.5, 0.5, 3), args(0.0, 1.0, 1), args(-0.1, 1.0, 3)] {
            let err = a.into_config().unwrap_err();
            assert_eq!(err.exit_code(), 2, "{err}");
        }
    }

    #[test]
    fn header_follows_options() {
        let mut a = args(0.0, 1.0, 2);
        a.visibility = Some(0.9);
        a.visibility_err = Some(0.01);
        a.measurements = Some(PathBuf::from("m.csv"));
        let cfg = a.into_config().unwrap();
        assert_eq!(
            cfg.header(),
            [
                "q",
                "chi_switch",
                "chi_classical",
                "chi_vis_low",
                "chi_vis_high",
                "chi_exp"
            ]
        );
    }
}
