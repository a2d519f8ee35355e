//! Bilinear Fourier multipliers: direct-sum application of
//! T_m(f,g)^(rho) = L^{-d} sum_nu m(nu, rho-nu) f^(nu) g^(rho-nu)
//! and a randomized survey of the operator norm of the regularized
//! space-resonant symbol against Hoelder-split product bounds.
//!
//! The nu-sum runs over the full index lattice with circular wrapping, so
//! the symbol-one operator reproduces the pointwise product exactly; for
//! inputs band-limited under the 2/3 cutoff the wrapped pairs carry zero
//! coefficient mass and the symbol is only ever evaluated on physical
//! frequency pairs.

use crate::error::{Error, Result};
use crate::field::{random_band_limited, Field, Space};
use crate::grid::{GridSpec, MAX_DIM};
use crate::norms::wkp_norm;
use crate::par;
use crate::resonance::CutoffPartition;
use crate::rng::SeedTree;
use crate::C64;
use std::sync::Arc;

/// Hard size limits for the direct double sum.
pub const MAX_POINTS_1D: usize = 512;
pub const MAX_POINTS_ND: usize = 16;

#[derive(Clone)]
pub enum BilinearSymbol {
    /// m = 1: the pointwise product.
    One,
    /// chi_S/phi for the light-pair phase: the symbol integrated against
    /// the quadratic source near the space-resonant zone.
    SourceOverPhase(CutoffPartition),
    /// One component of chi_T grad_nu phi / |grad_nu phi|^2, the vector
    /// symbol of the transport (integration-by-parts) term.
    TransportComponent(CutoffPartition, usize),
    /// Caller-supplied symbol; the caller declares it finite on every
    /// frequency pair of the lattice.
    Custom {
        name: String,
        f: Arc<dyn Fn(&[f64], &[f64]) -> C64 + Send + Sync>,
    },
}

impl BilinearSymbol {
    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(&[f64], &[f64]) -> C64 + Send + Sync + 'static,
    ) -> Self {
        BilinearSymbol::Custom {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    /// Evaluate at an input frequency pair (nu1, nu2); output frequency is
    /// their sum.
    pub fn eval(&self, nu1: &[f64], nu2: &[f64]) -> C64 {
        match self {
            BilinearSymbol::One => C64::new(1.0, 0.0),
            BilinearSymbol::SourceOverPhase(part) => {
                let rho: Vec<f64> = nu1.iter().zip(nu2).map(|(a, b)| a + b).collect();
                let phi = part.phase.eval(&rho, nu1);
                let chi = part.chi_s(&rho, nu1);
                if chi == 0.0 {
                    C64::new(0.0, 0.0)
                } else {
                    C64::new(chi / phi, 0.0)
                }
            }
            BilinearSymbol::TransportComponent(part, axis) => {
                let rho: Vec<f64> = nu1.iter().zip(nu2).map(|(a, b)| a + b).collect();
                let chi = part.chi_t(&rho, nu1);
                if chi == 0.0 {
                    return C64::new(0.0, 0.0);
                }
                let g = part.phase.grad_nu(&rho, nu1);
                let g2: f64 = g.iter().map(|x| x * x).sum();
                C64::new(chi * g[*axis] / g2, 0.0)
            }
            BilinearSymbol::Custom { f, .. } => f(nu1, nu2),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            BilinearSymbol::One => "one",
            BilinearSymbol::SourceOverPhase(_) => "source-over-phase",
            BilinearSymbol::TransportComponent(..) => "transport-component",
            BilinearSymbol::Custom { name, .. } => name,
        }
    }
}

/// Half-wave coupling weight of a light output fed by one light and one
/// heavy input: e1 e2 / (4 <nu1> <nu2>_M). Disabled in the default solver
/// configuration; the operator-norm survey can exercise it directly.
pub fn coupling_weight_light_output(m: f64, e1: i8, e2: i8) -> BilinearSymbol {
    let s = e1 as f64 * e2 as f64;
    BilinearSymbol::custom("coupling-light-output", move |nu1, nu2| {
        let j1 = (1.0 + nu1.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let j2m = (m * m + nu2.iter().map(|x| x * x).sum::<f64>()).sqrt();
        C64::new(0.25 * s / (j1 * j2m), 0.0)
    })
}

/// Heavy output fed by two light inputs, the derivative-pair source:
/// (1 - e1 e2 nu1·nu2/(<nu1><nu2>))/4.
pub fn coupling_weight_heavy_output(e1: i8, e2: i8) -> BilinearSymbol {
    let s = e1 as f64 * e2 as f64;
    BilinearSymbol::custom("coupling-heavy-output", move |nu1, nu2| {
        let j1 = (1.0 + nu1.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let j2 = (1.0 + nu2.iter().map(|x| x * x).sum::<f64>()).sqrt();
        let dot: f64 = nu1.iter().zip(nu2).map(|(a, b)| a * b).sum();
        C64::new(0.25 * (1.0 - s * dot / (j1 * j2)), 0.0)
    })
}

fn check_size(grid: &GridSpec) -> Result<()> {
    let limit = if grid.dim == 1 {
        MAX_POINTS_1D
    } else {
        MAX_POINTS_ND
    };
    if grid.n > limit {
        return Err(Error::GridTooLarge {
            points: grid.n,
            limit,
        });
    }
    Ok(())
}

fn check_band_limited(f: &Field, what: &str) -> Result<()> {
    let spectrum = f.to_fourier();
    let peak = spectrum
        .data
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    for (idx, z) in spectrum.data.iter().enumerate() {
        if !crate::field::dealias_keep(&f.grid, idx) && z.norm() > 1e-12 * peak {
            return Err(Error::ValidationError(format!(
                "{what} is not band-limited under the 2/3 cutoff"
            )));
        }
    }
    Ok(())
}

/// Apply the bilinear multiplier by direct double sum; returns a physical
/// field. Inputs must live on the same grid, fit the size limits, and be
/// band-limited under the 2/3 cutoff.
pub fn bilinear_apply(symbol: &BilinearSymbol, f: &Field, g: &Field) -> Result<Field> {
    f.grid.ensure_same(&g.grid, "bilinear_apply")?;
    check_size(&f.grid)?;
    check_band_limited(f, "first input")?;
    check_band_limited(g, "second input")?;
    let grid = f.grid;
    let fs = f.to_fourier();
    let gs = g.to_fourier();
    let total = grid.points();
    let n = grid.n as i64;
    let weight = grid.len.powi(grid.dim as i32).recip();

    // Pre-tabulate lattice coordinates and per-axis physical frequencies.
    let freqs: Vec<f64> = (0..grid.n).map(|c| grid.freq_1d(c)).collect();
    let coords_all: Vec<[usize; MAX_DIM]> = (0..total).map(|i| grid.coords(i)).collect();

    let out: Vec<C64> = par::par_map((0..total).collect(), |out_idx| {
        let c_out = &coords_all[out_idx];
        let mut acc = C64::new(0.0, 0.0);
        let mut nu1 = vec![0.0f64; grid.dim];
        let mut nu2 = vec![0.0f64; grid.dim];
        let mut c_diff = [0usize; MAX_DIM];
        for nu_idx in 0..total {
            let a = fs.data[nu_idx];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let c_nu = &coords_all[nu_idx];
            for ax in 0..grid.dim {
                let d = (c_out[ax] as i64 - c_nu[ax] as i64).rem_euclid(n) as usize;
                c_diff[ax] = d;
                nu1[ax] = freqs[c_nu[ax]];
                nu2[ax] = freqs[d];
            }
            let b = gs.data[grid.flat(&c_diff)];
            if b.norm_sqr() == 0.0 {
                continue;
            }
            let m = symbol.eval(&nu1, &nu2);
            if !m.re.is_finite() || !m.im.is_finite() {
                return Err(Error::ValidationError(format!(
                    "symbol {} is singular at a lattice pair",
                    symbol.name()
                )));
            }
            acc += m * a * b;
        }
        Ok(acc * weight)
    })
    .into_iter()
    .collect::<Result<_>>()?;

    // Real inputs against the even phase symbols used here already produce a
    // hermitian spectrum; complex inputs stay exact, so no symmetrization.
    let spectrum = Field {
        grid,
        space: Space::Fourier,
        data: out,
    };
    Ok(spectrum.to_physical())
}

/// W^{k,p} norm specification.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct NormSpec {
    pub smoothness: f64,
    pub lebesgue: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct OperatorNormConfig {
    /// Output norm W^{k,r}.
    pub out: NormSpec,
    /// Low-smoothness index of the lossy factor in each product term.
    pub low_smoothness: f64,
    /// Lebesgue pair (p, q) of the first Hoelder split; the second split
    /// swaps them. 1/r = 1/p + 1/q is required.
    pub first_lebesgue: f64,
    pub second_lebesgue: f64,
    pub trials: usize,
    pub max_mode: i64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct OperatorNormReport {
    pub mass: f64,
    pub sup_ratio: f64,
    pub mean_ratio: f64,
    pub adversarial_ratio: f64,
    pub trials: usize,
}

fn holder_ok(r: f64, p: f64, q: f64) -> bool {
    let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
    (inv(r) - inv(p) - inv(q)).abs() <= 1e-9
}

/// Randomized ratio survey of
/// ||T_m(f,g)||_{W^{k,r}} /
///   (||f||_{W^{a,p}}||g||_{W^{k,q}} + ||f||_{W^{k,q}}||g||_{W^{a,p}} with
/// the Lebesgue pair swapped in the second term), together with an
/// adversarial pair concentrated on the space-resonant zone.
pub fn estimate_operator_norm(
    symbol: &BilinearSymbol,
    mass: f64,
    grid: GridSpec,
    cfg: &OperatorNormConfig,
    tree: &SeedTree,
) -> Result<OperatorNormReport> {
    if !holder_ok(cfg.out.lebesgue, cfg.first_lebesgue, cfg.second_lebesgue) {
        return Err(Error::InvalidHolderTriple {
            r: cfg.out.lebesgue,
            p: cfg.first_lebesgue,
            q: cfg.second_lebesgue,
        });
    }
    check_size(&grid)?;
    let k = cfg.out.smoothness;
    let a = cfg.low_smoothness;
    let (p, q) = (cfg.first_lebesgue, cfg.second_lebesgue);
    let bound = |f: &Field, g: &Field| {
        wkp_norm(f, a, p, 1.0) * wkp_norm(g, k, q, 1.0)
            + wkp_norm(f, k, q, 1.0) * wkp_norm(g, a, p, 1.0)
    };
    let mut ratios = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let mut rng = tree.stream("opnorm", trial as u64);
        let f = random_band_limited(grid, &mut rng, cfg.max_mode, true);
        let g = random_band_limited(grid, &mut rng, cfg.max_mode, true);
        let t = bilinear_apply(symbol, &f, &g)?;
        let num = wkp_norm(&t, k, cfg.out.lebesgue, 1.0);
        let den = bound(&f, &g);
        if den > 0.0 {
            ratios.push(num / den);
        }
    }
    if ratios.is_empty() {
        return Err(Error::SupportSamplingEmpty(
            "no operator-norm trial produced a nonzero bound".into(),
        ));
    }
    let sup = ratios.iter().fold(0.0f64, |m, &x| m.max(x));
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;

    // Adversarial pair: Gaussian spectral bumps centered at nu* and at
    // rho - nu* for a representative output frequency in the resonant zone.
    let rho_rep = 1.0;
    let star = rho_rep * mass / (mass - 1.0);
    let partner = rho_rep - star;
    let make_bump = |center: f64| {
        let mut bump = Field::zeros(grid, Space::Fourier);
        for idx in 0..grid.points() {
            let c = grid.coords(idx);
            let nu = grid.freq_1d(c[0]);
            let within = c
                .iter()
                .all(|&ci| grid.signed_mode(ci).abs() < cfg.max_mode.min((grid.n as i64) / 3));
            if within {
                let d = nu - center;
                bump.data[idx] = C64::new((-d * d / 0.5).exp(), 0.0);
            }
        }
        bump.hermitian_symmetrize();
        bump.to_physical()
    };
    let f_adv = make_bump(star);
    let g_adv = make_bump(partner);
    let t_adv = bilinear_apply(symbol, &f_adv, &g_adv)?;
    let adv = wkp_norm(&t_adv, k, cfg.out.lebesgue, 1.0) / bound(&f_adv, &g_adv);

    Ok(OperatorNormReport {
        mass,
        sup_ratio: sup,
        mean_ratio: mean,
        adversarial_ratio: adv,
        trials: ratios.len(),
    })
}

/// Smallest low-smoothness index in 0..=max_a whose sup-ratio trend across
/// the mass ladder has slope at most `slope_budget`.
pub fn stabilizing_low_smoothness(
    masses: &[f64],
    grid: GridSpec,
    base: &OperatorNormConfig,
    slope_budget: f64,
    max_a: usize,
    tree: &SeedTree,
) -> Result<Option<usize>> {
    for a in 0..=max_a {
        let mut pts = Vec::new();
        for &m in masses {
            let part = CutoffPartition::new(m)?;
            let symbol = BilinearSymbol::SourceOverPhase(part);
            let cfg = OperatorNormConfig {
                low_smoothness: a as f64,
                ..base.clone()
            };
            let rep = estimate_operator_norm(&symbol, m, grid, &cfg, &tree.child(&format!("a{a}")))?;
            pts.push((m, rep.sup_ratio));
        }
        let fit = crate::fit::power_law_fit(&pts)?;
        if fit.slope <= slope_budget {
            return Ok(Some(a));
        }
    }
    Ok(None)
}
