//! Phase functions of the quadratic interactions, resonance-set geometry,
//! and the smooth frequency-space partition isolating the space-resonant
//! zone.
//!
//! For output frequency rho and input pair (nu, rho - nu), the oscillation
//! phase is phi(rho, nu) = e0<rho>_{m0} + e1<nu>_{m1} + e2<rho-nu>_{m2}.
//! The light-pair phase (signs +,-,+ and masses 1, M, 1) vanishes on an
//! ellipsoid-like time-resonant set and has a single space-resonant point
//! nu* = rho M/(M-1); the partition chi_S + chi_T = 1 splits frequency space
//! so that |phi| is large (relative to M/<rho-nu>) on supp chi_S while
//! |grad phi| is large on supp chi_T.

use crate::error::{Error, Result};
use crate::fit::{power_law_fit, ExponentFit};
use crate::grid::bracket;
use crate::rng::SeedTree;
use rand::Rng;

pub const MAX_FREQ_DIM: usize = 3;

/// Inner radius factor of the ball around nu* used at small |rho|:
/// support |nu - nu*| <= 2/NEAR_ZONE_INVERSE_RADIUS.
pub const NEAR_ZONE_INVERSE_RADIUS: f64 = 2.0;
/// Perpendicular profile factor of the rectangular zone: support
/// |nu_perp| <= 2/PERP_INVERSE_RADIUS. Radius 1 keeps the time-resonant
/// surface, which dips to |nu_perp| ~ 1.4 near the parallel edges for
/// rho ~ M^2, outside the support.
pub const PERP_INVERSE_RADIUS: f64 = 2.0;
/// Parallel profile factor: support |nu_par - |rho|M/(M-1)| <=
/// (2/PARALLEL_WIDTH_FACTOR)·<rho/M>.
pub const PARALLEL_WIDTH_FACTOR: f64 = 4.0;
/// Crossfade between the ball (small rho) and the rectangle: pure ball for
/// |rho| <= 3/4, pure rectangle for |rho| >= 3/2.
pub const SMALL_RHO_INVERSE_RADIUS: f64 = 4.0 / 3.0;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn jp(v: &[f64], m: f64) -> f64 {
    bracket(v.iter().map(|x| x * x).sum(), m)
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PhaseSpec {
    pub signs: [i8; 3],
    pub masses: [f64; 3],
    pub heavy_mass: f64,
}

impl PhaseSpec {
    pub fn new(signs: [i8; 3], masses: [f64; 3], heavy_mass: f64) -> Result<Self> {
        if signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::ValidationError("phase signs must be +-1".into()));
        }
        if masses.iter().any(|&m| m < 1.0) || heavy_mass <= 1.0 {
            return Err(Error::ValidationError(
                "phase masses must be >= 1 with heavy mass > 1".into(),
            ));
        }
        Ok(PhaseSpec {
            signs,
            masses,
            heavy_mass,
        })
    }

    /// Phase of the quadratic source in the light half-wave equation:
    /// one light output against a heavy/light input pair.
    pub fn light_pair(m: f64) -> Self {
        PhaseSpec {
            signs: [1, -1, 1],
            masses: [1.0, m, 1.0],
            heavy_mass: m,
        }
    }

    /// Phase of the quadratic source in the heavy half-wave equation:
    /// heavy output against two light inputs.
    pub fn heavy_pair(m: f64) -> Self {
        PhaseSpec {
            signs: [1, -1, -1],
            masses: [m, 1.0, 1.0],
            heavy_mass: m,
        }
    }

    pub fn eval(&self, rho: &[f64], nu: &[f64]) -> f64 {
        let diff: Vec<f64> = rho.iter().zip(nu).map(|(r, n)| r - n).collect();
        self.signs[0] as f64 * jp(rho, self.masses[0])
            + self.signs[1] as f64 * jp(nu, self.masses[1])
            + self.signs[2] as f64 * jp(&diff, self.masses[2])
    }

    /// Cancellation-resistant evaluation for opposite input signs: with
    /// s1 = -s2 the input pair collapses to
    /// s2 (|rho|^2 - 2 rho·nu + m2^2 - m1^2)/(<rho-nu>_{m2} + <nu>_{m1}),
    /// avoiding the catastrophic cancellation of three large brackets near
    /// the flat far branch of the resonant set.
    pub fn eval_stable(&self, rho: &[f64], nu: &[f64]) -> f64 {
        if self.signs[1] + self.signs[2] != 0 {
            return self.eval(rho, nu);
        }
        let diff: Vec<f64> = rho.iter().zip(nu).map(|(r, n)| r - n).collect();
        let rho2: f64 = rho.iter().map(|x| x * x).sum();
        let rho_dot_nu: f64 = rho.iter().zip(nu).map(|(r, n)| r * n).sum();
        let num = rho2 - 2.0 * rho_dot_nu + self.masses[2] * self.masses[2]
            - self.masses[1] * self.masses[1];
        let den = jp(&diff, self.masses[2]) + jp(nu, self.masses[1]);
        self.signs[0] as f64 * jp(rho, self.masses[0]) + self.signs[2] as f64 * num / den
    }

    /// Gradient in nu at fixed rho.
    pub fn grad_nu(&self, rho: &[f64], nu: &[f64]) -> Vec<f64> {
        let diff: Vec<f64> = rho.iter().zip(nu).map(|(r, n)| r - n).collect();
        let wn = jp(nu, self.masses[1]);
        let wd = jp(&diff, self.masses[2]);
        nu.iter()
            .zip(&diff)
            .map(|(n, d)| self.signs[1] as f64 * n / wn - self.signs[2] as f64 * d / wd)
            .collect()
    }
}

/// nu* = rho·M/(M-1), the unique zero of grad_nu phi for the light-pair
/// phase. The gradient there is checked to vanish to rounding.
pub fn space_resonance_point(spec: &PhaseSpec, rho: &[f64]) -> Result<Vec<f64>> {
    if spec.signs != [1, -1, 1] {
        return Err(Error::ValidationError(
            "space resonance point requires the light-pair sign choice (+,-,+)".into(),
        ));
    }
    let m = spec.heavy_mass;
    let nu: Vec<f64> = rho.iter().map(|r| r * m / (m - 1.0)).collect();
    let g = norm(&spec.grad_nu(rho, &nu));
    let budget = 1e-12 * (1.0 + norm(rho));
    if g > budget {
        return Err(Error::ValidationError(format!(
            "space-resonance gradient {g} exceeds rounding budget {budget}"
        )));
    }
    Ok(nu)
}

/// C^infinity step: 1 on |x| <= 1, 0 on |x| >= 2, strictly monotone between.
pub fn bump_profile(x: f64) -> f64 {
    let t = x.abs();
    if t <= 1.0 {
        return 1.0;
    }
    if t >= 2.0 {
        return 0.0;
    }
    let f = |s: f64| (-1.0 / s).exp();
    let a = f(2.0 - t);
    let b = f(t - 1.0);
    a / (a + b)
}

#[derive(Debug, Clone, Copy)]
pub struct CutoffPartition {
    pub phase: PhaseSpec,
}

impl CutoffPartition {
    pub fn new(heavy_mass: f64) -> Result<Self> {
        if heavy_mass <= 2.0 {
            return Err(Error::ValidationError(
                "partition needs heavy mass > 2 so the light pair can never reach it".into(),
            ));
        }
        Ok(CutoffPartition {
            phase: PhaseSpec::light_pair(heavy_mass),
        })
    }

    /// Smooth cutoff concentrated around the space-resonant zone. Written as
    /// rect + c·(near − rect) so that the value is exactly 1 when both
    /// component cutoffs are on their plateaus (in particular at nu*).
    pub fn chi_s(&self, rho: &[f64], nu: &[f64]) -> f64 {
        let m = self.phase.heavy_mass;
        let rho_mag = norm(rho);
        let c = bump_profile(SMALL_RHO_INVERSE_RADIUS * rho_mag);
        let dist_star: f64 = {
            let d2: f64 = rho
                .iter()
                .zip(nu)
                .map(|(r, n)| {
                    let d = n - r * m / (m - 1.0);
                    d * d
                })
                .sum();
            d2.sqrt()
        };
        let near = bump_profile(NEAR_ZONE_INVERSE_RADIUS * dist_star);
        let rect = if rho_mag == 0.0 {
            0.0
        } else {
            let nu_par: f64 = rho.iter().zip(nu).map(|(r, n)| r * n).sum::<f64>() / rho_mag;
            let perp2: f64 = nu.iter().map(|x| x * x).sum::<f64>() - nu_par * nu_par;
            let perp = perp2.max(0.0).sqrt();
            let center = rho_mag * m / (m - 1.0);
            let width = bracket(rho_mag * rho_mag / (m * m), 1.0);
            bump_profile(PERP_INVERSE_RADIUS * perp)
                * bump_profile(PARALLEL_WIDTH_FACTOR * (nu_par - center).abs() / width)
        };
        rect + c * (near - rect)
    }

    pub fn chi_t(&self, rho: &[f64], nu: &[f64]) -> f64 {
        1.0 - self.chi_s(rho, nu)
    }
}

/// Bisect phi(rho, nu* + s·dir) = 0 for s in (0, inf), expanding the bracket
/// geometrically. `inside` must evaluate negative at s = 0.
fn radial_zero(
    spec: &PhaseSpec,
    rho: &[f64],
    origin: &[f64],
    dir: &[f64],
    s0: f64,
) -> Result<f64> {
    let eval = |s: f64| {
        let p: Vec<f64> = origin.iter().zip(dir).map(|(o, d)| o + s * d).collect();
        spec.eval_stable(rho, &p)
    };
    let f0 = eval(0.0);
    if f0 >= 0.0 {
        return Err(Error::MinimizationFailed(format!(
            "radial search origin is not inside the negative-phase region (phi = {f0})"
        )));
    }
    let mut hi = s0;
    let mut count = 0;
    while eval(hi) < 0.0 {
        hi *= 2.0;
        count += 1;
        if count > 80 {
            return Err(Error::MinimizationFailed(
                "no sign change along ray; time-resonant set not bracketed".into(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * (1.0 + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The two crossings of the time-resonant set along the rho axis, in the
/// signed-parallel coordinate. rho_mag >= 0; for rho = 0 the crossings sit
/// symmetrically at +-M sqrt(M^2-4)/2.
pub fn axis_time_resonant_roots(m: f64, rho_mag: f64) -> Result<(f64, f64)> {
    let spec = PhaseSpec::light_pair(m);
    let rho = [rho_mag];
    let star = rho_mag * m / (m - 1.0);
    let left = radial_zero(&spec, &rho, &[star], &[-1.0], 1.0)?;
    let right = radial_zero(&spec, &rho, &[star], &[1.0], 1.0)?;
    Ok((star - left, star + right))
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SeparationSample {
    pub mass: f64,
    pub rho: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SeparationReport {
    pub samples: Vec<SeparationSample>,
    pub per_mass_min: Vec<(f64, f64)>,
    pub fit: ExponentFit,
}

/// Distance from nu* to the time-resonant set {phi_u = 0}, reduced by
/// cylindrical symmetry to the (parallel, perpendicular) half-plane: rays
/// from the midpoint of the axis crossings sweep a theta grid, each crossing
/// found by bisection, and the best grid minima are polished by golden
/// section.
pub fn resonant_set_distance(m: f64, rho_mag: f64, dim: usize) -> Result<f64> {
    let (left, right) = axis_time_resonant_roots(m, rho_mag)?;
    let star = rho_mag * m / (m - 1.0);
    if dim == 1 {
        return Ok((star - left).min(right - star));
    }
    let spec = PhaseSpec::light_pair(m);
    let rho2 = [rho_mag, 0.0];
    let center = [0.5 * (left + right), 0.0];
    let star2 = [star, 0.0];
    let scale = 0.25 * (right - left).max(1e-3);
    let dist_at = |theta: f64| -> Result<f64> {
        let dir = [theta.cos(), theta.sin()];
        let s = radial_zero(&spec, &rho2, &center, &dir, scale)?;
        let p = [center[0] + s * dir[0], center[1] + s * dir[1]];
        Ok(((p[0] - star2[0]).powi(2) + (p[1] - star2[1]).powi(2)).sqrt())
    };
    let grid = 256usize;
    let step = std::f64::consts::PI / grid as f64; // upper half-plane; set symmetric
    let values: Vec<f64> = (0..=grid)
        .map(|i| dist_at(i as f64 * step))
        .collect::<Result<_>>()?;
    let mut seeds: Vec<usize> = (0..=grid)
        .filter(|&i| {
            let l = if i == 0 { values[i] + 1.0 } else { values[i - 1] };
            let r = if i == grid { values[i] + 1.0 } else { values[i + 1] };
            values[i] <= l && values[i] <= r
        })
        .collect();
    seeds.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    seeds.truncate(9);
    if seeds.is_empty() {
        return Err(Error::MinimizationFailed(
            "no local minimum on the theta grid".into(),
        ));
    }
    let mut best = f64::INFINITY;
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    for &i in &seeds {
        let (mut a, mut b) = (i as f64 * step - step, i as f64 * step + step);
        let (mut c, mut d) = (b - gr * (b - a), a + gr * (b - a));
        let (mut fc, mut fd) = (dist_at(c)?, dist_at(d)?);
        for _ in 0..60 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = dist_at(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = dist_at(d)?;
            }
        }
        best = best.min(fc.min(fd));
    }
    Ok(best)
}

/// Minimum nu*-to-resonant-set distance per mass over the standard rho ladder
/// {1, M/2, M, M^2/4, M^2, 4M^2}, with a power-law fit of distance vs mass.
pub fn verify_separation(m_list: &[f64], dim: usize) -> Result<SeparationReport> {
    if m_list.iter().any(|&m| m < 4.0) {
        return Err(Error::ValidationError(
            "separation sweep needs masses >= 4".into(),
        ));
    }
    let mut samples = Vec::new();
    let mut per_mass_min = Vec::new();
    for &m in m_list {
        let rhos = [1.0, m / 2.0, m, m * m / 4.0, m * m, 4.0 * m * m];
        let mut min_d = f64::INFINITY;
        for &r in &rhos {
            let d = resonant_set_distance(m, r, dim)?;
            min_d = min_d.min(d);
            samples.push(SeparationSample {
                mass: m,
                rho: r,
                distance: d,
            });
        }
        per_mass_min.push((m, min_d));
    }
    let fit = power_law_fit(&per_mass_min)?;
    Ok(SeparationReport {
        samples,
        per_mass_min,
        fit,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct LowerBoundReport {
    pub mass: f64,
    pub dim: usize,
    /// inf of |phi_u|·<rho-nu>/M over sampled {chi_S > 0.01}.
    pub inf_source_bound: f64,
    /// inf of |grad phi_u|·min(<rho-nu>^2, <nu/M>^2) over sampled {chi_T > 0.01}.
    pub inf_gradient_bound: f64,
    pub source_samples: usize,
    pub gradient_samples: usize,
}

fn random_direction(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim)
            .map(|_| {
                let (u1, u2): (f64, f64) = (rng.gen_range(1e-12..1.0), rng.gen_range(0.0..1.0));
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let n = norm(&v);
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Stratified sampling of both supports; the report carries the two infima
/// whose positivity and M-stability the partition is designed to deliver.
pub fn verify_lower_bounds(
    partition: &CutoffPartition,
    dim: usize,
    samples: usize,
    tree: &SeedTree,
) -> Result<LowerBoundReport> {
    let m = partition.phase.heavy_mass;
    let spec = partition.phase;
    let mut rng = tree.stream("lower-bounds", m as u64);
    let mut inf_s = f64::INFINITY;
    let mut inf_t = f64::INFINITY;
    let (mut n_s, mut n_t) = (0usize, 0usize);
    for _ in 0..samples {
        let rho_mag = if rng.gen_bool(0.05) {
            0.0
        } else {
            log_uniform(&mut rng, 0.05, 8.0 * m * m)
        };
        let rho: Vec<f64> = {
            let d = random_direction(&mut rng, dim);
            d.iter().map(|x| x * rho_mag).collect()
        };
        let star: Vec<f64> = rho.iter().map(|r| r * m / (m - 1.0)).collect();
        let width = bracket(rho_mag * rho_mag / (m * m), 1.0);

        // Candidate targeted at the chi_S support.
        let nu_s: Vec<f64> = if rng.gen_bool(0.5) {
            let d = random_direction(&mut rng, dim);
            let r = rng.gen_range(0.0..1.4);
            star.iter().zip(&d).map(|(s, e)| s + r * e).collect()
        } else {
            let along = rng.gen_range(-0.7..0.7) * width;
            let rho_hat: Vec<f64> = if rho_mag > 0.0 {
                rho.iter().map(|r| r / rho_mag).collect()
            } else {
                random_direction(&mut rng, dim)
            };
            let mut p: Vec<f64> = star.iter().zip(&rho_hat).map(|(s, h)| s + along * h).collect();
            if dim > 1 {
                let perp = random_direction(&mut rng, dim);
                let r = rng.gen_range(0.0..1.2);
                for (pi, e) in p.iter_mut().zip(&perp) {
                    *pi += r * e;
                }
            }
            p
        };
        if partition.chi_s(&rho, &nu_s) > 0.01 {
            let diff: Vec<f64> = rho.iter().zip(&nu_s).map(|(r, n)| r - n).collect();
            let q = spec.eval(&rho, &nu_s).abs() * jp(&diff, 1.0) / m;
            inf_s = inf_s.min(q);
            n_s += 1;
        }

        // Candidate targeted at the chi_T support.
        let pick: f64 = rng.gen_range(0.0..1.0);
        let nu_t: Vec<f64> = if pick < 0.4 {
            let d = random_direction(&mut rng, dim);
            let r = log_uniform(&mut rng, 0.05, 8.0 * m * m);
            d.iter().map(|x| x * r).collect()
        } else if pick < 0.7 {
            let d = random_direction(&mut rng, dim);
            let r = rng.gen_range(0.4..2.5);
            star.iter().zip(&d).map(|(s, e)| s + r * e).collect()
        } else {
            let (left, right) = axis_time_resonant_roots(m, rho_mag)?;
            let root = if rng.gen_bool(0.5) { left } else { right };
            let rho_hat: Vec<f64> = if rho_mag > 0.0 {
                rho.iter().map(|r| r / rho_mag).collect()
            } else {
                random_direction(&mut rng, dim)
            };
            let along = root + rng.gen_range(-2.0..2.0);
            let mut p: Vec<f64> = rho_hat.iter().map(|h| along * h).collect();
            if dim > 1 {
                let perp = random_direction(&mut rng, dim);
                let r = rng.gen_range(0.0..2.0);
                for (pi, e) in p.iter_mut().zip(&perp) {
                    *pi += r * e;
                }
            }
            p
        };
        if partition.chi_t(&rho, &nu_t) > 0.01 {
            let diff: Vec<f64> = rho.iter().zip(&nu_t).map(|(r, n)| r - n).collect();
            let nu_over_m: Vec<f64> = nu_t.iter().map(|x| x / m).collect();
            let weight = jp(&diff, 1.0).powi(2).min(jp(&nu_over_m, 1.0).powi(2));
            let q = norm(&spec.grad_nu(&rho, &nu_t)) * weight;
            inf_t = inf_t.min(q);
            n_t += 1;
        }
    }
    if n_s == 0 {
        return Err(Error::SupportSamplingEmpty(
            "no sample hit {chi_S > 0.01}".into(),
        ));
    }
    if n_t == 0 {
        return Err(Error::SupportSamplingEmpty(
            "no sample hit {chi_T > 0.01}".into(),
        ));
    }
    Ok(LowerBoundReport {
        mass: m,
        dim,
        inf_source_bound: inf_s,
        inf_gradient_bound: inf_t,
        source_samples: n_s,
        gradient_samples: n_t,
    })
}

const FD_OFFSETS: [&[(f64, f64)]; 4] = [
    &[(0.0, 1.0)],
    &[(-1.0, -0.5), (1.0, 0.5)],
    &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
    &[(-2.0, -0.5), (-1.0, 1.0), (1.0, -1.0), (2.0, 0.5)],
];

/// Central finite-difference mixed partial of order alpha (per-axis orders
/// <= 3), step h per axis; `valid` guards every stencil point.
pub fn fd_partial(
    f: &impl Fn(&[f64]) -> f64,
    valid: &impl Fn(&[f64]) -> bool,
    center: &[f64],
    alpha: &[usize],
    h: f64,
) -> Result<f64> {
    assert_eq!(center.len(), alpha.len());
    if alpha.iter().any(|&a| a > 3) {
        return Err(Error::ValidationError(
            "finite-difference orders above 3 per axis are not tabulated".into(),
        ));
    }
    // Tensor product of 1D stencils.
    let mut terms: Vec<(Vec<f64>, f64)> = vec![(center.to_vec(), 1.0)];
    for (axis, &a) in alpha.iter().enumerate() {
        let stencil = FD_OFFSETS[a];
        let mut next = Vec::with_capacity(terms.len() * stencil.len());
        for (p, w) in &terms {
            for &(off, c) in stencil {
                let mut q = p.clone();
                q[axis] += off * h;
                next.push((q, w * c / h.powi(a as i32)));
            }
        }
        terms = next;
    }
    let mut out = 0.0;
    for (p, w) in &terms {
        if !valid(p) {
            return Err(Error::StencilOutOfRange(format!(
                "stencil point {p:?} leaves the admissible region"
            )));
        }
        out += w * f(p);
    }
    Ok(out)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SymbolicBoundReport {
    pub mass: f64,
    pub dim: usize,
    /// sup of |d^alpha_{nu_k}(chi_S/phi)|·<nu_k>^{|alpha|} /
    /// min(<nu_1>,<nu_2>)^{2|alpha|+1} over samples, slots, and orders <= 3.
    pub sup_ratio_regularized: f64,
    /// sup of |d^alpha_{nu_2}(1/phi)|·M^{|alpha|+1} / <nu_2>^{|alpha|+1},
    /// orders 0..=3, on the chi_S support where 1/phi is used.
    pub sup_ratio_inverse_phase: f64,
    pub samples_used: usize,
}

fn multi_indices(dim: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; dim];
    loop {
        let total: usize = cur.iter().sum();
        if total <= max_total && cur.iter().all(|&a| a <= 3) {
            out.push(cur.clone());
        }
        // Odometer over 0..=3 per axis.
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= 3 {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Finite-difference survey of the regularized symbol chi_S/phi and of
/// 1/phi, compared against their derivative envelopes on the chi_S support.
pub fn verify_symbolic_bounds(
    partition: &CutoffPartition,
    dim: usize,
    samples: usize,
    tree: &SeedTree,
) -> Result<SymbolicBoundReport> {
    let m = partition.phase.heavy_mass;
    let spec = partition.phase;
    let mut rng = tree.stream("symbolic-bounds", m as u64);
    let orders: Vec<Vec<usize>> = multi_indices(dim, 3)
        .into_iter()
        .filter(|a| a.iter().sum::<usize>() >= 1)
        .collect();
    let mut sup_reg: f64 = 0.0;
    let mut sup_inv: f64 = 0.0;
    let mut used = 0usize;
    // Symbol as a function of the input pair: nu1 free, nu2 = rho - nu1 held
    // fixed when differentiating in slot 1 (so rho moves), and vice versa.
    let eval_sym = |nu1: &[f64], nu2: &[f64]| -> f64 {
        let rho: Vec<f64> = nu1.iter().zip(nu2).map(|(a, b)| a + b).collect();
        let phi = spec.eval(&rho, nu1);
        partition.chi_s(&rho, nu1) / phi
    };
    let eval_inv = |nu1: &[f64], nu2: &[f64]| -> f64 {
        let rho: Vec<f64> = nu1.iter().zip(nu2).map(|(a, b)| a + b).collect();
        1.0 / spec.eval(&rho, nu1)
    };
    let phi_ok = |nu1: &[f64], nu2: &[f64]| -> bool {
        let rho: Vec<f64> = nu1.iter().zip(nu2).map(|(a, b)| a + b).collect();
        spec.eval(&rho, nu1).abs() > 1e-6
    };
    let mut attempts = 0;
    while used < samples && attempts < 50 * samples {
        attempts += 1;
        let rho_mag = log_uniform(&mut rng, 0.1, 4.0 * m * m);
        let rho: Vec<f64> = random_direction(&mut rng, dim)
            .iter()
            .map(|x| x * rho_mag)
            .collect();
        let star: Vec<f64> = rho.iter().map(|r| r * m / (m - 1.0)).collect();
        let width = bracket(rho_mag * rho_mag / (m * m), 1.0);
        let d = random_direction(&mut rng, dim);
        let r = rng.gen_range(0.0..0.4) * width.min(2.5);
        let nu1: Vec<f64> = star.iter().zip(&d).map(|(s, e)| s + r * e).collect();
        if partition.chi_s(&rho, &nu1) < 0.2 {
            continue;
        }
        let nu2: Vec<f64> = rho.iter().zip(&nu1).map(|(a, b)| a - b).collect();
        let (j1, j2) = (jp(&nu1, 1.0), jp(&nu2, 1.0));
        let small = j1.min(j2);
        used += 1;
        for alpha in &orders {
            let total: usize = alpha.iter().sum();
            for slot in 0..2 {
                let h = 1e-3 * (1.0 + if slot == 0 { norm(&nu1) } else { norm(&nu2) });
                let (center, fixed): (&[f64], Vec<f64>) = if slot == 0 {
                    (&nu1, nu2.clone())
                } else {
                    (&nu2, nu1.clone())
                };
                let f = |p: &[f64]| {
                    if slot == 0 {
                        eval_sym(p, &fixed)
                    } else {
                        eval_sym(&fixed, p)
                    }
                };
                let valid = |p: &[f64]| {
                    if slot == 0 {
                        phi_ok(p, &fixed)
                    } else {
                        phi_ok(&fixed, p)
                    }
                };
                let der = fd_partial(&f, &valid, center, alpha, h)?;
                let jk = if slot == 0 { j1 } else { j2 };
                let env = small.powi(2 * total as i32 + 1) / jk.powi(total as i32);
                sup_reg = sup_reg.max(der.abs() / env);
            }
            // Inverse phase, slot 2 only.
            let h = 1e-3 * (1.0 + norm(&nu2));
            let f = |p: &[f64]| eval_inv(&nu1, p);
            let valid = |p: &[f64]| phi_ok(&nu1, p);
            let der = fd_partial(&f, &valid, &nu2, alpha, h)?;
            let env = j2.powi(total as i32 + 1) / m.powi(total as i32 + 1);
            sup_inv = sup_inv.max(der.abs() / env);
        }
        // Order zero for the inverse-phase family.
        let v = eval_inv(&nu1, &nu2).abs();
        sup_inv = sup_inv.max(v * m / j2);
    }
    if used == 0 {
        return Err(Error::SupportSamplingEmpty(
            "no sample landed deep in the chi_S support".into(),
        ));
    }
    Ok(SymbolicBoundReport {
        mass: m,
        dim,
        sup_ratio_regularized: sup_reg,
        sup_ratio_inverse_phase: sup_inv,
        samples_used: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_values_at_origin() {
        let p2 = PhaseSpec::light_pair(2.0);
        assert_eq!(p2.eval(&[0.0], &[0.0]), 0.0);
        let p3 = PhaseSpec::light_pair(3.0);
        assert_eq!(p3.eval(&[0.0], &[0.0]), -1.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let spec = PhaseSpec::light_pair(8.0);
        let tree = SeedTree::new(21);
        let mut rng = tree.stream("grad", 0);
        for _ in 0..50 {
            let rho: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let nu: Vec<f64> = (0..3).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let g = spec.grad_nu(&rho, &nu);
            for a in 0..3 {
                let h = 1e-6;
                let mut p = nu.clone();
                p[a] += h;
                let mut q = nu.clone();
                q[a] -= h;
                let fd = (spec.eval(&rho, &p) - spec.eval(&rho, &q)) / (2.0 * h);
                assert!((g[a] - fd).abs() < 1e-6, "axis {a}: {} vs {fd}", g[a]);
            }
        }
    }

    #[test]
    fn space_resonance_closed_form() {
        let spec = PhaseSpec::light_pair(2.0);
        let nu = space_resonance_point(&spec, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(nu, vec![2.0, 0.0, 0.0]);
        let zero = space_resonance_point(&spec, &[0.0]).unwrap();
        assert_eq!(zero, vec![0.0]);
        for m in [4.0, 32.0] {
            let spec = PhaseSpec::light_pair(m);
            let tree = SeedTree::new(4);
            let mut rng = tree.stream("srp", m as u64);
            for _ in 0..20 {
                let rho: Vec<f64> = (0..3).map(|_| rng.gen_range(-30.0..30.0)).collect();
                space_resonance_point(&spec, &rho).unwrap();
            }
        }
        assert!(space_resonance_point(&PhaseSpec::heavy_pair(4.0), &[1.0]).is_err());
    }

    #[test]
    fn axis_roots_match_quadratic_solution() {
        // Squaring the defining equation twice gives
        // nu_pm = M(rho M +- <rho> sqrt(M^2-4))/2.
        for m in [4.0f64, 12.0] {
            for rho in [0.0f64, 1.0, m / 2.0, m * m] {
                let (left, right) = axis_time_resonant_roots(m, rho).unwrap();
                let disc = (m * m - 4.0).sqrt();
                let jr = (1.0 + rho * rho).sqrt();
                let want_l = m * (rho * m - jr * disc) / 2.0;
                let want_r = m * (rho * m + jr * disc) / 2.0;
                let scale = 1.0 + want_r.abs();
                assert!(
                    (left - want_l).abs() < 1e-8 * scale,
                    "m={m} rho={rho}: left {left} vs {want_l}"
                );
                assert!(
                    (right - want_r).abs() < 1e-8 * scale,
                    "m={m} rho={rho}: right {right} vs {want_r}"
                );
            }
        }
    }

    #[test]
    fn profile_shape() {
        assert_eq!(bump_profile(0.3), 1.0);
        assert_eq!(bump_profile(-1.0), 1.0);
        assert_eq!(bump_profile(2.0), 0.0);
        assert_eq!(bump_profile(1.5), 0.5);
        let mut prev = 1.0;
        for i in 0..=40 {
            let v = bump_profile(1.0 + i as f64 * 0.025);
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn partition_sums_to_one_and_vanishes_at_star() {
        let part = CutoffPartition::new(16.0).unwrap();
        let tree = SeedTree::new(77);
        let mut rng = tree.stream("partition", 0);
        for _ in 0..20_000 {
            let rho: Vec<f64> = (0..3).map(|_| rng.gen_range(-60.0..60.0)).collect();
            let nu: Vec<f64> = (0..3).map(|_| rng.gen_range(-60.0..60.0)).collect();
            let s = part.chi_s(&rho, &nu);
            let t = part.chi_t(&rho, &nu);
            assert!((s + t - 1.0).abs() <= 1e-12);
            assert!((-1e-15..=1.0 + 1e-15).contains(&s));
        }
        for rho_mag in [0.0, 0.4, 1.0, 3.0, 40.0] {
            let rho = [rho_mag, 0.0, 0.0];
            let star: Vec<f64> = rho.iter().map(|r| r * 16.0 / 15.0).collect();
            assert_eq!(part.chi_t(&rho, &star), 0.0, "rho = {rho_mag}");
        }
    }

    #[test]
    fn same_sign_phases_stay_large() {
        for m in [4.0, 32.0] {
            let tree = SeedTree::new(5);
            let mut rng = tree.stream("signs", m as u64);
            for signs in [[1i8, 1, 1], [-1, -1, -1]] {
                let spec = PhaseSpec::new(signs, [1.0, m, 1.0], m).unwrap();
                for _ in 0..500 {
                    let rho: Vec<f64> = (0..3).map(|_| rng.gen_range(-50.0..50.0)).collect();
                    let nu: Vec<f64> = (0..3).map(|_| rng.gen_range(-50.0..50.0)).collect();
                    assert!(spec.eval(&rho, &nu).abs() >= m - 2.0);
                }
            }
        }
    }

    #[test]
    fn separation_at_small_mass_exceeds_one() {
        let d = resonant_set_distance(4.0, 1.0, 3).unwrap();
        assert!(d > 1.0, "distance {d}");
        // 2D reduction agrees with the 1D closed form when the nearest point
        // lies on the axis.
        let d1 = resonant_set_distance(4.0, 1.0, 1).unwrap();
        assert!(d >= d1 * 0.999 && d <= d1 * 1.001, "{d} vs axis {d1}");
    }

    #[test]
    fn separation_slope_grows_with_mass() {
        let rep = verify_separation(&[4.0, 16.0, 64.0], 1).unwrap();
        assert!(rep.fit.slope >= 0.45, "slope {}", rep.fit.slope);
        assert!(rep.per_mass_min.iter().all(|&(_, d)| d > 0.0));
    }

    #[test]
    fn lower_bound_infima_positive() {
        let tree = SeedTree::new(11);
        let part = CutoffPartition::new(8.0).unwrap();
        let rep = verify_lower_bounds(&part, 1, 20_000, &tree).unwrap();
        assert!(rep.inf_source_bound > 0.05, "source inf {}", rep.inf_source_bound);
        assert!(rep.inf_gradient_bound > 0.02, "gradient inf {}", rep.inf_gradient_bound);
        assert!(rep.source_samples > 1000 && rep.gradient_samples > 1000);
    }

    #[test]
    fn near_resonance_bound_value_at_star() {
        // At nu = nu*, chi_S = 1 and |phi|<rho-nu>/M is order one.
        let part = CutoffPartition::new(32.0).unwrap();
        let rho = [3.0];
        let star = [3.0 * 32.0 / 31.0];
        assert_eq!(part.chi_s(&rho, &star), 1.0);
        let spec = part.phase;
        let q = spec.eval(&rho, &star).abs() * (1.0 + (rho[0] - star[0]).powi(2)).sqrt() / 32.0;
        assert!(q > 0.5, "q = {q}");
    }

    #[test]
    fn fd_engine_matches_analytic_inverse_phase_derivative() {
        let part = CutoffPartition::new(16.0).unwrap();
        let spec = part.phase;
        let tree = SeedTree::new(3);
        let mut rng = tree.stream("fd", 0);
        for _ in 0..30 {
            let nu1: Vec<f64> = (0..2).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let nu2: Vec<f64> = (0..2).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let f = |p: &[f64]| {
                let rho: Vec<f64> = nu1.iter().zip(p).map(|(a, b)| a + b).collect();
                1.0 / spec.eval(&rho, &nu1)
            };
            for axis in 0..2 {
                let mut alpha = vec![0usize; 2];
                alpha[axis] = 1;
                let got = fd_partial(&f, &|_: &[f64]| true, &nu2, &alpha, 1e-4).unwrap();
                // d/d nu2 (1/phi) = -(d phi/d nu2)/phi^2 with
                // d phi/d nu2 = e0 (nu1+nu2)/<nu1+nu2>_{m0} + e2 nu2/<nu2>_{m2}.
                let rho: Vec<f64> = nu1.iter().zip(&nu2).map(|(a, b)| a + b).collect();
                let phi = spec.eval(&rho, &nu1);
                let dphi = spec.signs[0] as f64 * rho[axis] / jp(&rho, spec.masses[0])
                    + spec.signs[2] as f64 * nu2[axis] / jp(&nu2, spec.masses[2]);
                let want = -dphi / (phi * phi);
                assert!((got - want).abs() < 1e-5 * (1.0 + want.abs()), "{got} vs {want}");
            }
        }
    }

    #[test]
    fn fd_engine_on_constants_and_guards() {
        let f = |_: &[f64]| 42.0;
        for alpha in [[1usize], [2], [3]] {
            let d = fd_partial(&f, &|_: &[f64]| true, &[0.3], &alpha, 1e-3).unwrap();
            assert!(d.abs() < 1e-6, "order {:?}: {d}", alpha);
        }
        let guarded = fd_partial(&f, &|p: &[f64]| p[0] < 0.301, &[0.3], &[1], 1e-3);
        assert!(matches!(guarded, Err(Error::StencilOutOfRange(_))));
    }

    #[test]
    fn symbolic_ratios_finite_and_sane() {
        let tree = SeedTree::new(9);
        let part = CutoffPartition::new(8.0).unwrap();
        let rep = verify_symbolic_bounds(&part, 1, 60, &tree).unwrap();
        assert!(rep.sup_ratio_regularized.is_finite() && rep.sup_ratio_regularized > 0.0);
        assert!(rep.sup_ratio_inverse_phase.is_finite() && rep.sup_ratio_inverse_phase > 0.0);
        assert!(rep.samples_used >= 50);
    }
}
