//! Adiabatic tower for the heavy field.
//!
//! Dropping the U²V coupling from the heavy equation, the formal expansion
//! V = Σ c_i/M^{2i} solves (□ − M²)V = F₁[U] order by order with
//! c₁ = −F₁ and c_{i+1} = □c_i, i.e. V = −Σ F_i[U]/M^{2i} for the ladder
//! F₁[U] = ∂U·∂U − U⁴/2, F_{i+1} = □F_i (∂U·∂U carries the Lorentzian
//! signature −(∂_tU)² + |∇U|²). This module builds that ladder on jets,
//! generates initial data that starts the heavy field on its slaved value,
//! and subtracts the ladder back off a trajectory to expose the suppressed
//! remainder. All time derivatives come from closing the equations of motion
//! on jets; nothing is finite-differenced, so there is no cancellation
//! catastrophe at large M.

use crate::error::{Error, Result};
use crate::field::{C64, Field, Space};
use crate::jet::JetField;
use crate::norms::h_norm;
use crate::system::{Formulation, UVState};

/// Parameters of the truncated M^{-2} expansion.
#[derive(Debug, Clone, Copy)]
pub struct EFTConfig {
    /// Expansion order n: ladder corrections through F_n/M^{2n} are kept.
    pub order: usize,
    /// Smoothness index for norms and the data budget.
    pub n_smooth: f64,
    /// Companion smoothness index carried along for monitor-grade norms.
    pub k_smooth: f64,
    pub mass: f64,
    /// Jet entries carried by closures. F_n consumes 2n − 1 time derivatives
    /// of the light field plus two more for its own value/velocity pair, so
    /// at least 2·order + 2 entries are required.
    pub jet_depth: usize,
    /// Data budget: mass · ‖U₀‖_{H^{n_smooth + 2·order + 1}} must stay below it.
    pub budget: f64,
    /// Keep the heavy equation's U²V term inside jet closures. The ladder
    /// solves the equation without that term exactly, so data generation
    /// leaves it off by default; its effect enters at relative O(U²/M²).
    pub include_u2v: bool,
}

impl EFTConfig {
    /// Desk-scale defaults for a given expansion order and heavy mass.
    pub fn new(order: usize, mass: f64) -> Self {
        EFTConfig {
            order,
            n_smooth: 8.0,
            k_smooth: 5.0,
            mass,
            jet_depth: 2 * order + 2,
            budget: 1.0,
            include_u2v: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.jet_depth < 2 * self.order + 2 {
            return Err(Error::ValidationError(format!(
                "jet depth {} too shallow for order {}: need at least {}",
                self.jet_depth,
                self.order,
                2 * self.order + 2
            )));
        }
        if !(self.mass >= 2.0) {
            return Err(Error::ValidationError(format!(
                "heavy mass {} must be at least 2",
                self.mass
            )));
        }
        if !(self.budget > 0.0) {
            return Err(Error::ValidationError(format!(
                "data budget {} must be positive",
                self.budget
            )));
        }
        Ok(())
    }
}

/// Entrywise Laplacian of a single field.
fn laplacian_field(f: &Field) -> Field {
    let mut g = f.to_fourier();
    g.apply_multiplier(|rho| {
        let r2: f64 = rho.iter().map(|r| r * r).sum();
        C64::new(-r2, 0.0)
    })
    .expect("fourier by construction");
    g.to_physical()
}

/// Entry s of the two nonlinear forcings (UV − U³/2, U²V − U⁴/2 + ∂U·∂U),
/// formed by Leibniz products of the jets truncated to order s.
fn forcing_entries(
    u: &JetField,
    v: &JetField,
    s: usize,
    include_u2v: bool,
) -> Result<(Field, Field)> {
    let us = u.truncated(s)?;
    let vs = v.truncated(s)?;
    let uv = us.multiply(&vs)?;
    let u2 = us.multiply(&us)?;
    let u3 = u2.multiply(&us)?;
    let mut light = uv.entry(s).clone();
    light.add_scaled(u3.entry(s), -0.5)?;

    let du = u.dt(1)?.truncated(s)?;
    let mut heavy = du.multiply(&du)?.entry(s).clone();
    heavy.scale(-1.0);
    for axis in 0..u.grid().dim {
        let dxa = us.dx(axis)?;
        heavy.add_scaled(dxa.multiply(&dxa)?.entry(s), 1.0)?;
    }
    let u4 = u2.multiply(&u2)?;
    heavy.add_scaled(u4.entry(s), -0.5)?;
    if include_u2v {
        heavy.add_scaled(u2.multiply(&vs)?.entry(s), 1.0)?;
    }
    Ok((light, heavy))
}

/// Extend order-1 data jets of both fields to `depth` entries by recursively
/// differentiating the equations of motion in time:
/// ∂_t²U = ΔU − U − (UV − U³/2) and
/// ∂_t²V = ΔV − M²V − (U²V − U⁴/2 + ∂U·∂U), the U²V term per the flag.
pub fn eom_jet_closure(
    u_data: &JetField,
    v_data: &JetField,
    mass: f64,
    depth: usize,
    include_u2v: bool,
) -> Result<(JetField, JetField)> {
    u_data
        .grid()
        .ensure_same(&v_data.grid(), "equation-of-motion jet closure")?;
    u_data.require_depth(2, "closure seed")?;
    v_data.require_depth(2, "closure seed")?;
    if depth < 2 {
        return Err(Error::ValidationError(format!(
            "closure depth {depth} must be at least 2"
        )));
    }
    let m2 = mass * mass;
    let mut u = u_data.truncated(1)?;
    let mut v = v_data.truncated(1)?;
    while u.depth() < depth {
        let s = u.depth() - 2;
        let (light, heavy) = forcing_entries(&u, &v, s, include_u2v)?;
        let mut next_u = laplacian_field(u.entry(s));
        next_u.add_scaled(u.entry(s), -1.0)?;
        next_u.add_scaled(&light, -1.0)?;
        let mut next_v = laplacian_field(v.entry(s));
        next_v.add_scaled(v.entry(s), -m2)?;
        next_v.add_scaled(&heavy, -1.0)?;
        u.push_entry(&next_u)?;
        v.push_entry(&next_v)?;
    }
    Ok((u, v))
}

/// The two homogeneous halves of F_i, each advanced by the wave operator
/// i − 1 times: the derivative-quadratic part □^{i−1}(∂U·∂U) and the quartic
/// part □^{i−1}(U⁴/2), so F_i = quadratic − quartic.
pub fn eft_functional_parts(i: usize, u: &JetField) -> Result<(JetField, JetField)> {
    if i == 0 {
        return Err(Error::ValidationError(
            "functional ladder index starts at 1".into(),
        ));
    }
    u.require_depth(2 * i + 1, "functional ladder")?;
    let du = u.dt(1)?;
    let mut quad = du.multiply(&du)?.scale(-1.0);
    for axis in 0..u.grid().dim {
        let dxa = u.dx(axis)?;
        quad = quad.add_scaled(&dxa.multiply(&dxa)?, 1.0)?;
    }
    let u2 = u.multiply(u)?;
    let mut quart = u2.multiply(&u2)?.scale(0.5);
    for _ in 1..i {
        quad = quad.dalembert()?;
        quart = quart.dalembert()?;
    }
    Ok((quad, quart))
}

/// F_i as a jet.
pub fn eft_functional(i: usize, u: &JetField) -> Result<JetField> {
    let (quad, quart) = eft_functional_parts(i, u)?;
    quad.add_scaled(&quart, -1.0)
}

/// Initial data with the heavy field slaved to the light field.
#[derive(Debug, Clone)]
pub struct EFTDataBundle {
    pub u0: Field,
    pub u1: Field,
    pub v0: Field,
    pub v1: Field,
    pub order: usize,
    pub mass: f64,
    /// Ladder corrections (value, velocity) per level i = 1..=order, stored
    /// without their mass weights: v0 = Σ p_terms[i−1].0 / M^{2i}.
    pub p_terms: Vec<(Field, Field)>,
}

impl EFTDataBundle {
    /// Package as a rescaled-chart state at t = 0.
    pub fn state(&self) -> Result<UVState> {
        UVState::new(
            self.u0.clone(),
            self.u1.clone(),
            self.v0.clone(),
            self.v1.clone(),
            self.mass,
            0.0,
            Formulation::Rescaled,
        )
    }
}

/// One slaving pass: close jets on the current data, evaluate the ladder,
/// and return the refreshed (V₀, V₁) with the per-level corrections.
fn slaved_pass(
    u0: &Field,
    u1: &Field,
    v0: &Field,
    v1: &Field,
    cfg: &EFTConfig,
) -> Result<(Field, Field, Vec<(Field, Field)>)> {
    let useed = JetField::new(vec![u0.clone(), u1.clone()])?;
    let vseed = JetField::new(vec![v0.clone(), v1.clone()])?;
    let (uj, _) = eom_jet_closure(&useed, &vseed, cfg.mass, cfg.jet_depth, cfg.include_u2v)?;
    let grid = uj.grid();
    let mut nv0 = Field::zeros(grid, Space::Physical);
    let mut nv1 = Field::zeros(grid, Space::Physical);
    let mut terms = Vec::with_capacity(cfg.order);
    for i in 1..=cfg.order {
        let f = eft_functional(i, &uj)?;
        let mut p0 = f.entry(0).clone();
        p0.scale(-1.0);
        let mut p1 = f.entry(1).clone();
        p1.scale(-1.0);
        let w = cfg.mass.powi(-2 * i as i32);
        nv0.add_scaled(&p0, w)?;
        nv1.add_scaled(&p1, w)?;
        terms.push((p0, p1));
    }
    Ok((nv0, nv1, terms))
}

/// Generate order-n data from light-field data alone: iterate the slaving
/// pass n + 1 times from V ≡ 0. Each pass corrects the heavy data at one
/// higher order in M^{-2} (the closure feeds the previous pass's V back into
/// the deeper light jets), so successive V₀ iterates must contract by at
/// least M²/2 or the iteration is declared non-convergent.
pub fn make_eft_data(u0: &Field, u1: &Field, cfg: &EFTConfig) -> Result<EFTDataBundle> {
    cfg.validate()?;
    u0.grid.ensure_same(&u1.grid, "light data pair")?;
    let smooth = cfg.n_smooth + 2.0 * cfg.order as f64 + 1.0;
    let size = cfg.mass * h_norm(u0, smooth, 1.0);
    if size > cfg.budget {
        return Err(Error::BudgetExceeded(format!(
            "mass-weighted light data norm {size:.3e} exceeds budget {:.3e}",
            cfg.budget
        )));
    }
    let grid = u0.grid;
    let mut v0 = Field::zeros(grid, Space::Physical);
    let mut v1 = Field::zeros(grid, Space::Physical);
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for _ in 0..=cfg.order {
        let (nv0, nv1, t) = slaved_pass(u0, u1, &v0, &v1, cfg)?;
        let mut delta = nv0.clone();
        delta.add_scaled(&v0, -1.0)?;
        diffs.push(h_norm(&delta, cfg.n_smooth, 1.0));
        v0 = nv0;
        v1 = nv1;
        terms = t;
    }
    let floor = 1e-13 * (1.0 + h_norm(&v0, cfg.n_smooth, 1.0));
    for w in diffs.windows(2) {
        if w[1] > floor && w[1] * cfg.mass * cfg.mass > 2.0 * w[0] {
            return Err(Error::NonConvergence(format!(
                "slaving pass moved V0 by {:.3e} after {:.3e}; expected contraction by {:.1}",
                w[1],
                w[0],
                cfg.mass * cfg.mass / 2.0
            )));
        }
    }
    Ok(EFTDataBundle {
        u0: u0.to_physical(),
        u1: u1.to_physical(),
        v0,
        v1,
        order: cfg.order,
        mass: cfg.mass,
        p_terms: terms,
    })
}

/// One extra slaving pass seeded from a bundle's own data. The size of the
/// change it produces is the bundle's self-consistency defect.
pub fn refine_eft_data(b: &EFTDataBundle, cfg: &EFTConfig) -> Result<EFTDataBundle> {
    cfg.validate()?;
    if cfg.order != b.order || cfg.mass != b.mass {
        return Err(Error::ValidationError(format!(
            "refine config (order {}, mass {}) does not match bundle (order {}, mass {})",
            cfg.order, cfg.mass, b.order, b.mass
        )));
    }
    let (v0, v1, terms) = slaved_pass(&b.u0, &b.u1, &b.v0, &b.v1, cfg)?;
    Ok(EFTDataBundle {
        u0: b.u0.clone(),
        u1: b.u1.clone(),
        v0,
        v1,
        order: b.order,
        mass: b.mass,
        p_terms: terms,
    })
}

/// Subtract the ladder back off stored states: per state, return
/// (V + Σ_{i≤m} F_i[U]/M^{2i}, ∂_t of the same), the order-m remainder whose
/// size certifies how well the heavy field tracks its slaved value. States
/// in other charts are converted to the rescaled chart first.
pub fn vm_transform(
    states: &[UVState],
    m: usize,
    include_u2v: bool,
) -> Result<Vec<(Field, Field)>> {
    let mut out = Vec::with_capacity(states.len());
    for s in states {
        let r = s.change_variables(Formulation::Rescaled);
        let depth = (2 * m + 2).max(2);
        let useed = JetField::new(vec![r.u.clone(), r.ut.clone()])?;
        let vseed = JetField::new(vec![r.v.clone(), r.vt.clone()])?;
        let (uj, _) = eom_jet_closure(&useed, &vseed, r.mass, depth, include_u2v)?;
        let mut value = r.v.to_physical();
        let mut velocity = r.vt.to_physical();
        for i in 1..=m {
            let f = eft_functional(i, &uj)?;
            let w = r.mass.powi(2 * i as i32).recip();
            value.add_scaled(f.entry(0), w)?;
            velocity.add_scaled(f.entry(1), w)?;
        }
        out.push((value, velocity));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::random_band_limited;
    use crate::grid::GridSpec;
    use crate::rng::SeedTree;

    fn grid1() -> GridSpec {
        GridSpec::new(1, 32, 10.0).unwrap()
    }

    fn constant_field(grid: GridSpec, c: f64) -> Field {
        Field::from_fn_x(grid, |_| C64::new(c, 0.0))
    }

    fn max_abs(f: &Field) -> f64 {
        f.to_physical()
            .data
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    fn assert_uniform(f: &Field, want: f64, tol: f64) {
        for v in &f.to_physical().data {
            assert!(
                (v.re - want).abs() < tol && v.im.abs() < tol,
                "{} vs {want}",
                v.re
            );
        }
    }

    #[test]
    fn closure_matches_hand_derivatives_on_constant_data() {
        // With U = c, V = w and zero velocities the second derivatives read
        // straight off the equations: U₂ = −c − cw + c³/2 and
        // V₂ = −M²w − c²w + c⁴/2; odd entries vanish by time symmetry.
        let g = grid1();
        let (c, w, mass) = (0.1, 0.02, 4.0);
        let u = JetField::new(vec![constant_field(g, c), Field::zeros(g, Space::Physical)]).unwrap();
        let v = JetField::new(vec![constant_field(g, w), Field::zeros(g, Space::Physical)]).unwrap();
        let (uj, vj) = eom_jet_closure(&u, &v, mass, 4, true).unwrap();
        let u2 = -c - c * w + c * c * c / 2.0;
        let v2 = -mass * mass * w - c * c * w + c.powi(4) / 2.0;
        assert_uniform(uj.entry(2), u2, 1e-14);
        assert_uniform(vj.entry(2), v2, 1e-14);
        assert!(max_abs(uj.entry(3)) < 1e-14);
        assert!(max_abs(vj.entry(3)) < 1e-14);
        // The worked number: c = 0.1, w = 0 gives U₂ = −0.0995.
        let (uj0, _) = eom_jet_closure(
            &u,
            &JetField::zeros(g, 1),
            mass,
            3,
            true,
        )
        .unwrap();
        assert_uniform(uj0.entry(2), -0.0995, 1e-15);
    }

    #[test]
    fn ladder_base_on_constants_and_depth_guard() {
        let g = grid1();
        let c = 0.3;
        let u = JetField::new(vec![
            constant_field(g, c),
            Field::zeros(g, Space::Physical),
            Field::zeros(g, Space::Physical),
        ])
        .unwrap();
        let f1 = eft_functional(1, &u).unwrap();
        assert_uniform(f1.entry(0), -c.powi(4) / 2.0, 1e-15);
        assert!(matches!(
            eft_functional(2, &u),
            Err(Error::InsufficientJetDepth { have: 3, need: 5, .. })
        ));
        assert!(eft_functional(0, &u).is_err());
    }

    #[test]
    fn ladder_base_on_a_standing_mode() {
        // U₀ = a cos(κx), U₁ = 0: the base rung is pure gradient minus
        // quartic, a²κ²sin²(κx) − a⁴cos⁴(κx)/2, exactly representable on the
        // grid for small κ.
        let g = GridSpec::new(1, 64, 16.0).unwrap();
        let kappa = 2.0 * std::f64::consts::PI / 16.0 * 2.0;
        let a = 0.3;
        let u0 = Field::from_fn_x(g, |x| C64::new(a * (kappa * x[0]).cos(), 0.0));
        let zero = Field::zeros(g, Space::Physical);
        let u = JetField::new(vec![u0, zero.clone(), zero]).unwrap();
        let f1 = eft_functional(1, &u).unwrap();
        let f = f1.entry(0).to_physical();
        for (flat, v) in f.data.iter().enumerate() {
            let x = g.x_1d(g.coords(flat)[0]);
            let s = (kappa * x).sin();
            let c = (kappa * x).cos();
            let want = a * a * kappa * kappa * s * s - a.powi(4) * c.powi(4) / 2.0;
            assert!((v.re - want).abs() < 1e-12, "x={x}: {} vs {want}", v.re);
        }
    }

    #[test]
    fn ladder_matches_independent_scalar_series() {
        // Spatially constant jets reduce the ladder to scalar Taylor algebra:
        // F₁ = −(u')² − u⁴/2 and each rung applies −d²/dt² (the Laplacian
        // dies on constants). The series arithmetic below is independent of
        // the jet implementation.
        let g = grid1();
        let mut rng = SeedTree::new(31).stream("series", 0);
        use rand::Rng;
        let coeffs: Vec<f64> = (0..9).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let u = JetField::constant(g, &coeffs).unwrap();

        let mul = |a: &[f64], b: &[f64]| -> Vec<f64> {
            let len = a.len().min(b.len());
            let binom = |n: usize, k: usize| -> f64 {
                let mut c = 1.0;
                for i in 0..k {
                    c = c * (n - i) as f64 / (i + 1) as f64;
                }
                c
            };
            (0..len)
                .map(|k| (0..=k).map(|j| binom(k, j) * a[j] * b[k - j]).sum())
                .collect()
        };
        let ddt = |a: &[f64]| a[1..].to_vec();
        let du = ddt(&coeffs);
        let u2 = mul(&coeffs, &coeffs);
        let u4 = mul(&u2, &u2);
        let mut f: Vec<f64> = mul(&du, &du)
            .iter()
            .zip(&u4)
            .map(|(d, q)| -d - q / 2.0)
            .collect();
        for i in 2..=3 {
            f = ddt(&ddt(&f)).iter().map(|x| -x).collect();
            let jet = eft_functional(i, &u).unwrap();
            assert_eq!(jet.depth(), f.len());
            for (k, want) in f.iter().enumerate() {
                let got = jet.entry(k).data[0].re;
                assert!(
                    (got - want).abs() < 1e-12 * (1.0 + want.abs()),
                    "F_{i} entry {k}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn ladder_parts_scale_quadratically_and_quartically() {
        let g = GridSpec::new(1, 64, 20.0).unwrap();
        let tree = SeedTree::new(13);
        let mk = |c: u64| random_band_limited(g, &mut tree.stream("hom", c), 6, true).to_physical();
        let u = JetField::new(vec![mk(0), mk(1), mk(2), mk(3), mk(4)]).unwrap();
        let (q1, r1) = eft_functional_parts(2, &u).unwrap();
        let (q2, r2) = eft_functional_parts(2, &u.scale(2.0)).unwrap();
        for k in 0..q1.depth() {
            let mut err: f64 = 0.0;
            for (a, b) in q2.entry(k).data.iter().zip(&q1.entry(k).data) {
                err = err.max((a - 4.0 * b).norm());
            }
            assert!(err < 1e-12, "quadratic part entry {k}: {err}");
        }
        for k in 0..r1.depth() {
            let mut err: f64 = 0.0;
            for (a, b) in r2.entry(k).data.iter().zip(&r1.entry(k).data) {
                err = err.max((a - 16.0 * b).norm());
            }
            assert!(err < 1e-12, "quartic part entry {k}: {err}");
        }
    }

    #[test]
    fn order_zero_data_has_an_empty_ladder() {
        let g = grid1();
        let cfg = EFTConfig {
            budget: 10.0,
            ..EFTConfig::new(0, 8.0)
        };
        let b = make_eft_data(
            &constant_field(g, 0.05),
            &Field::zeros(g, Space::Physical),
            &cfg,
        )
        .unwrap();
        assert_eq!(max_abs(&b.v0), 0.0);
        assert_eq!(max_abs(&b.v1), 0.0);
        assert!(b.p_terms.is_empty());
    }

    #[test]
    fn order_one_constant_data_sits_on_the_slaved_value() {
        // The adiabatic balance −M²V ≈ F₁ fixes V₀ = −F₁(0)/M²; for U₀ = c,
        // U₁ = 0 the base rung is F₁(0) = −c⁴/2, so V₀ = +c⁴/(2M²).
        let g = grid1();
        let (c, mass) = (0.1, 10.0);
        let cfg = EFTConfig {
            budget: 10.0,
            ..EFTConfig::new(1, mass)
        };
        let b = make_eft_data(
            &constant_field(g, c),
            &Field::zeros(g, Space::Physical),
            &cfg,
        )
        .unwrap();
        let want = c.powi(4) / (2.0 * mass * mass);
        assert!((want - 5e-7).abs() < 1e-20);
        assert_uniform(&b.v0, want, 1e-18);
        assert!(max_abs(&b.v1) < 1e-18);
        assert_eq!(b.p_terms.len(), 1);
        assert_uniform(&b.p_terms[0].0, c.powi(4) / 2.0, 1e-16);
        // Partial-sum identity: v0 is exactly the weighted term sum.
        let mut residual = b.v0.clone();
        residual.add_scaled(&b.p_terms[0].0, -1.0 / (mass * mass)).unwrap();
        assert_eq!(max_abs(&residual), 0.0);
    }

    #[test]
    fn oversized_data_is_rejected_by_the_budget() {
        let g = grid1();
        let cfg = EFTConfig::new(1, 10.0);
        let out = make_eft_data(
            &constant_field(g, 1.0),
            &Field::zeros(g, Space::Physical),
            &cfg,
        );
        assert!(matches!(out, Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn shallow_jet_depth_is_rejected() {
        let g = grid1();
        let cfg = EFTConfig {
            jet_depth: 5,
            budget: 10.0,
            ..EFTConfig::new(2, 8.0)
        };
        let out = make_eft_data(
            &constant_field(g, 0.01),
            &Field::zeros(g, Space::Physical),
            &cfg,
        );
        assert!(matches!(out, Err(Error::ValidationError(_))));
    }

    #[test]
    fn subtraction_at_order_zero_is_the_identity() {
        let g = GridSpec::new(1, 64, 20.0).unwrap();
        let tree = SeedTree::new(5);
        let mk = |label: &str| {
            random_band_limited(g, &mut tree.stream(label, 0), 8, true).to_physical()
        };
        let s = UVState::new(mk("u"), mk("ut"), mk("v"), mk("vt"), 6.0, 0.0, Formulation::Rescaled)
            .unwrap();
        let out = vm_transform(std::slice::from_ref(&s), 0, true).unwrap();
        let mut dv = out[0].0.clone();
        dv.add_scaled(&s.v, -1.0).unwrap();
        let mut dvt = out[0].1.clone();
        dvt.add_scaled(&s.vt, -1.0).unwrap();
        assert_eq!(max_abs(&dv), 0.0);
        assert_eq!(max_abs(&dvt), 0.0);
    }

    #[test]
    fn subtraction_cancels_slaved_data_at_the_initial_time() {
        let g = grid1();
        let (c, mass) = (0.1, 10.0);
        let cfg = EFTConfig {
            budget: 10.0,
            ..EFTConfig::new(1, mass)
        };
        let b = make_eft_data(
            &constant_field(g, c),
            &Field::zeros(g, Space::Physical),
            &cfg,
        )
        .unwrap();
        let s = b.state().unwrap();
        let out = vm_transform(std::slice::from_ref(&s), 1, cfg.include_u2v).unwrap();
        assert!(max_abs(&out[0].0) < 1e-16);
        assert!(max_abs(&out[0].1) < 1e-16);
    }
}
