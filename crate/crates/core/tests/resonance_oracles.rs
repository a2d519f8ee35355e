//! Resonance-geometry oracles: closed-form root locations, separation
//! scaling, and mass-stability of the partition lower bounds.

use kg_lab::resonance::{
    axis_time_resonant_roots, resonant_set_distance, verify_lower_bounds, verify_separation,
    CutoffPartition, PhaseSpec,
};
use kg_lab::rng::SeedTree;

/// Double squaring of <nu>_M = <rho> + <rho-nu> gives a quadratic with roots
/// nu_pm = M(rho M +- <rho> sqrt(M^2 - 4))/2; the bisection root-finder must
/// land on them for every mass and output frequency.
#[test]
fn bisection_roots_match_double_squaring_formula() {
    for m in [4.0f64, 8.0, 32.0, 128.0] {
        for rho in [0.0, 0.3, 1.0, m / 2.0, m, m * m / 4.0, m * m, 4.0 * m * m] {
            let (left, right) = axis_time_resonant_roots(m, rho).unwrap();
            let disc = (m * m - 4.0).sqrt();
            let jr = (1.0 + rho * rho).sqrt();
            let want_l = m * (rho * m - jr * disc) / 2.0;
            let want_r = m * (rho * m + jr * disc) / 2.0;
            let scale = 1.0 + want_r.abs();
            // On the flat far branch the phase slope decays like M^2/(2 nu^2)
            // while evaluation noise is ~eps·rho, so any root-finder carries
            // positioning noise ~eps·rho·2nu^2/M^2; fold that into the bound.
            let tol = |root: f64| {
                1e-6 * scale
                    + 32.0 * f64::EPSILON * rho.max(1.0) * 2.0 * root * root / (m * m - 1.0)
            };
            assert!(
                (left - want_l).abs() < tol(want_l),
                "m={m} rho={rho} left: {left} vs {want_l}"
            );
            assert!(
                (right - want_r).abs() < tol(want_r),
                "m={m} rho={rho} right: {right} vs {want_r}"
            );
        }
    }
}

/// The separation minimum over the standard rho ladder is attained near
/// rho = M or rho = M^2/4 and scales like M/4; the 2D sweep must agree with
/// the closed-form axis distance there.
#[test]
fn separation_agrees_with_closed_form_minimum() {
    for m in [4.0f64, 16.0] {
        let star = |rho: f64| rho * m / (m - 1.0);
        let closed = |rho: f64| {
            let disc = (m * m - 4.0).sqrt();
            let jr = (1.0 + rho * rho).sqrt();
            let l = m * (rho * m - jr * disc) / 2.0;
            let r = m * (rho * m + jr * disc) / 2.0;
            (star(rho) - l).min(r - star(rho))
        };
        for rho in [1.0, m, m * m / 4.0] {
            let d = resonant_set_distance(m, rho, 1).unwrap();
            let want = closed(rho);
            assert!(
                (d - want).abs() < 1e-6 * (1.0 + want),
                "m={m} rho={rho}: {d} vs {want}"
            );
        }
    }
}

#[test]
fn separation_distance_positive_at_zero_output_frequency() {
    for m in [4.0, 32.0] {
        let d = resonant_set_distance(m, 0.0, 1).unwrap();
        let want = m * (m * m - 4.0f64).sqrt() / 2.0;
        assert!((d - want).abs() < 1e-6 * want, "m={m}: {d} vs {want}");
    }
}

#[test]
fn separation_slope_across_full_mass_ladder() {
    let rep = verify_separation(&[4.0, 8.0, 16.0, 32.0, 64.0, 128.0], 1).unwrap();
    assert!(
        rep.fit.slope >= 0.45,
        "separation slope {} below 0.45",
        rep.fit.slope
    );
}

#[test]
fn masses_below_four_are_rejected() {
    assert!(verify_separation(&[2.0, 8.0], 1).is_err());
}

/// Both partition infima must stay positive and within a factor of three of
/// each other across the mass ladder.
#[test]
fn lower_bound_infima_stable_across_masses() {
    let tree = SeedTree::new(300);
    let mut source = Vec::new();
    let mut gradient = Vec::new();
    for m in [4.0, 8.0, 16.0, 32.0, 64.0, 128.0] {
        let part = CutoffPartition::new(m).unwrap();
        let rep = verify_lower_bounds(&part, 1, 40_000, &tree).unwrap();
        assert!(rep.inf_source_bound > 0.0, "m={m} source inf zero");
        assert!(rep.inf_gradient_bound > 0.0, "m={m} gradient inf zero");
        source.push((m, rep.inf_source_bound));
        gradient.push((m, rep.inf_gradient_bound));
    }
    for (name, vals) in [("source", &source), ("gradient", &gradient)] {
        let lo = vals.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);
        let hi = vals.iter().map(|&(_, v)| v).fold(0.0f64, f64::max);
        assert!(
            hi / lo <= 3.0,
            "{name} infima spread {:.3} exceeds factor 3: {:?}",
            hi / lo,
            vals
        );
    }
}

/// Points deep inside both supports at once (the crossfade shoulder) carry
/// no assertion; record that both bound quantities are at least finite there.
#[test]
fn overlap_region_is_report_only() {
    let part = CutoffPartition::new(8.0).unwrap();
    let spec = part.phase;
    let rho = [1.0];
    let nu = [1.0 * 8.0 / 7.0 + 0.6];
    let s = part.chi_s(&rho, &nu);
    let t = part.chi_t(&rho, &nu);
    assert!(s > 0.01 && t > 0.01, "expected shoulder point: s={s} t={t}");
    let q_s = spec.eval(&rho, &nu).abs();
    let g: f64 = spec.grad_nu(&rho, &nu).iter().map(|x| x * x).sum::<f64>();
    assert!(q_s.is_finite() && g.is_finite());
}

/// In three dimensions the time-resonant surface dips toward the rectangle
/// perpendicular edge near rho ~ M^2 but must stay outside the support.
#[test]
fn three_dimensional_support_avoids_resonant_surface() {
    for m in [4.0f64, 8.0] {
        let part = CutoffPartition::new(m).unwrap();
        let spec = part.phase;
        for rho_mag in [m * m / 4.0, m * m, 4.0 * m * m] {
            let rho = [rho_mag, 0.0, 0.0];
            let star = rho_mag * m / (m - 1.0);
            let width = (1.0 + rho_mag * rho_mag / (m * m)).sqrt();
            // March the rectangle: wherever chi_S > 0.01 the phase must keep
            // a fixed sign (no zero crossing inside the support).
            for i in -20i32..=20 {
                for j in 0..=20 {
                    let nu = [
                        star + i as f64 / 20.0 * 0.6 * width,
                        j as f64 / 10.0,
                        0.0,
                    ];
                    if part.chi_s(&rho, &nu) > 0.01 {
                        let phi = spec.eval(&rho, &nu);
                        assert!(
                            phi < 0.0,
                            "phase sign flip inside chi_S support: m={m} rho={rho_mag} nu={nu:?} phi={phi}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn heavy_pair_phase_vanishes_on_its_own_resonant_set() {
    // Heavy output against two light inputs: at rho = 0 the phase
    // <rho>_M - <nu> - <rho - nu> crosses zero at |nu| = sqrt(M^2/4 - 1).
    let m = 8.0f64;
    let spec = PhaseSpec::heavy_pair(m);
    let nu_res = (m * m / 4.0 - 1.0).sqrt();
    let phi = spec.eval(&[0.0], &[nu_res]);
    assert!(phi.abs() < 1e-12, "phi = {phi}");
    let inside = spec.eval(&[0.0], &[0.5 * nu_res]);
    let outside = spec.eval(&[0.0], &[2.0 * nu_res]);
    assert!(inside > 0.0 && outside < 0.0);
}
