//! Dispersive decay measurement for the free Klein-Gordon flow.
//!
//! Evolves (U0, U1) exactly in Fourier space, samples L^p norms, and fits a
//! power law; a mass-m wave packet on a 1D torus of sufficient size shows the
//! t^{-1/2} dispersive rate until wrap-around, with a plateau up to t ~ m for
//! heavy masses. The fit window keeps samples beyond twice the mass, where
//! the stationary-phase regime has set in.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::fit::{power_law_fit, power_law_fit_window, ExponentFit};
use crate::halfwave::klein_gordon_free;
use crate::norms::lp_norm;

#[derive(Debug, Clone, serde::Serialize)]
pub struct DecayMeasurement {
    pub mass: f64,
    pub p: f64,
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// Power-law fit over the retained window (t > 2m when at least two
    /// samples survive, otherwise all supplied times).
    pub fit: ExponentFit,
}

/// Evolve the free field to each sample time (one exact Fourier-side shot per
/// time, no time stepping) and fit ||U(t)||_{L^p} ~ t^slope.
pub fn measure_decay(
    f0: &Field,
    f1: &Field,
    m: f64,
    times: &[f64],
    p: f64,
) -> Result<DecayMeasurement> {
    if times.is_empty() {
        return Err(Error::ValidationError("measure_decay needs sample times".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) || times[0] <= 0.0 {
        return Err(Error::ValidationError(
            "measure_decay times must be positive and increasing".into(),
        ));
    }
    let mut norms = Vec::with_capacity(times.len());
    for &t in times {
        let (f, _) = klein_gordon_free(f0, f1, m, t)?;
        norms.push(lp_norm(&f.to_physical(), p));
    }
    let pairs: Vec<(f64, f64)> = times.iter().copied().zip(norms.iter().copied()).collect();
    let windowed: Vec<(f64, f64)> = pairs.iter().copied().filter(|&(t, _)| t > 2.0 * m).collect();
    let fit = if windowed.len() >= 2 {
        power_law_fit(&windowed)?
    } else {
        power_law_fit(&pairs)?
    };
    Ok(DecayMeasurement {
        mass: m,
        p,
        times: times.to_vec(),
        norms,
        fit,
    })
}

/// Log-spaced sample times snapped to whole carrier periods 2pi/m. A real
/// field of mass m rings at the carrier frequency until dispersive spreading
/// develops a crest inside the packet; sampling at whole periods reads the
/// envelope instead of the ring.
pub fn stroboscopic_times(m: f64, lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let period = 2.0 * std::f64::consts::PI / m;
    let (klo, khi) = ((lo / period).ceil().max(1.0), (hi / period).floor());
    let mut out: Vec<f64> = Vec::new();
    for j in 0..count {
        let s = if count > 1 { j as f64 / (count - 1) as f64 } else { 0.0 };
        let k = (klo * (khi / klo).powf(s)).round();
        let t = k * period;
        if out.last().map_or(true, |&prev| t > prev * (1.0 + 1e-12)) {
            out.push(t);
        }
    }
    out
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CrossoverReport {
    pub plateau: ExponentFit,
    pub decay: ExponentFit,
    /// Time where the two fitted lines intersect (log-log coordinates).
    pub t_star: f64,
}

/// Fit the early plateau and the late decay separately on a finished
/// measurement and locate where the two power laws cross; for a heavy mass
/// the crossing should sit near t ~ mass.
pub fn fit_plateau_crossover(
    meas: &DecayMeasurement,
    plateau_window: (f64, f64),
    decay_window: (f64, f64),
) -> Result<CrossoverReport> {
    let pairs: Vec<(f64, f64)> = meas
        .times
        .iter()
        .copied()
        .zip(meas.norms.iter().copied())
        .collect();
    let plateau = power_law_fit_window(&pairs, plateau_window.0, plateau_window.1)?;
    let decay = power_law_fit_window(&pairs, decay_window.0, decay_window.1)?;
    let ds = plateau.slope - decay.slope;
    if ds.abs() < 1e-12 {
        return Err(Error::MinimizationFailed(
            "plateau and decay slopes coincide; no crossover".into(),
        ));
    }
    let t_star = ((decay.intercept - plateau.intercept) / ds).exp();
    Ok(CrossoverReport {
        plateau,
        decay,
        t_star,
    })
}
