use std::io::Write;
use std::path::PathBuf;

use causal_switch_core::reconstruct_capacity;
use clap::Args;

use crate::sweep::read_measurements;
use crate::{sci, CliError, OutputFormat};

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long, value_name = "PATH")]
    pub measurements: PathBuf,
    #[arg(long)]
    pub q: f64,
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

pub fn cmd_reconstruct(args: &ReconstructArgs, out: &mut dyn Write) -> Result<(), CliError> {
    for (name, v) in [("--q", args.q), ("--gamma", args.gamma)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::Usage(format!(
                "{name} must lie in [0, 1], got {v}"
            )));
        }
    }
    let meas = read_measurements(&args.measurements)?;
    let r = reconstruct_capacity(&meas, args.q, args.gamma)?;
    let fields = [
        ("q", r.q),
        ("gamma", r.gamma),
        ("h_control", r.h_control),
        ("h_min", r.h_min),
        ("chi", r.chi),
    ];
    let text = match args.format {
        OutputFormat::Csv => {
            let names: Vec<_> = fields.iter().map(|f| f.0).collect();
            let values: Vec<_> = fields.iter().map(|f| sci(f.1)).collect();
            format!("{}\n{}\n", names.join(","), values.join(","))
        }
        OutputFormat::Text => fields
            .iter()
            .map(|(name, v)| format!("{name:<10} {}\n", sci(*v)))
            .collect(),
    };
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}
