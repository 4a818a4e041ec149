use super::density::{DensityMatrix, PSD_TOL};
use super::matrix::Spectrum;
use crate::error::{argument, validation, Result};

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&rho.spectrum())
}

/// Shannon entropy (bits) of a spectrum, with `0·log 0 = 0` and round-off
/// negatives in `[-1e-10, 0)` treated as zero.
pub fn spectrum_entropy(spectrum: &Spectrum) -> Result<f64> {
    let mut h = 0.0;
    for &lambda in spectrum.as_slice() {
        if lambda < -PSD_TOL {
            return Err(validation(format!(
                "negative eigenvalue {lambda:.3e} in entropy"
            )));
        }
        if lambda > 0.0 {
            h -= lambda * lambda.log2();
        }
    }
    Ok(h)
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(argument(format!("probability {p} outside [0, 1]")));
    }
    let p = p.clamp(0.0, 1.0);
    Ok(plogp(p) + plogp(1.0 - p))
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}
