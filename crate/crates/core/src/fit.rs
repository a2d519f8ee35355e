//! Least-squares fits for decay and convergence rates. Rates are read off as
//! slopes of log-log fits; the rms log-residual is kept so callers can judge
//! whether a power law is actually present.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// Ordinary least squares y = slope * x + intercept; returns rms residual.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::ValidationError(format!(
            "linear fit needs >= 2 paired samples, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::ValidationError("degenerate abscissa in fit".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok((slope, intercept, rms))
}

/// Fit y ~ C x^slope through positive samples; drops nonpositive y values
/// (they carry no log-scale information) and errors if fewer than two remain.
pub fn power_law_fit(pairs: &[(f64, f64)]) -> Result<ExponentFit> {
    let kept: Vec<(f64, f64)> = pairs
        .iter()
        .copied()
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .collect();
    if kept.len() < 2 {
        return Err(Error::ValidationError(format!(
            "power law fit needs >= 2 positive samples, got {}",
            kept.len()
        )));
    }
    let xs: Vec<f64> = kept.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, residual) = linear_fit(&xs, &ys)?;
    let lo = kept.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = kept.iter().map(|p| p.0).fold(0.0, f64::max);
    Ok(ExponentFit {
        slope,
        intercept,
        residual,
        window: (lo, hi),
        samples: kept.len(),
    })
}

/// Restrict to lo <= x <= hi before fitting.
pub fn power_law_fit_window(pairs: &[(f64, f64)], lo: f64, hi: f64) -> Result<ExponentFit> {
    let kept: Vec<(f64, f64)> = pairs
        .iter()
        .copied()
        .filter(|&(x, _)| x >= lo && x <= hi)
        .collect();
    power_law_fit(&kept)
}
