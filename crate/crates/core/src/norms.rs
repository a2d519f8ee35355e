//! Sobolev and weighted norms. H^s norms are evaluated spectrally with the
//! massive bracket <rho>_m = sqrt(|rho|^2 + m^2); W^{k,p} norms apply the
//! bracket to power k in Fourier space and take an L^p quadrature of the
//! result on the grid.

use crate::error::{Error, Result};
use crate::field::{C64, Field};
use crate::grid::bracket;

/// <D>_m^s f (any input space; result is Fourier-side).
pub fn bessel_pow(f: &Field, s: f64, m: f64) -> Field {
    let mut g = f.to_fourier();
    let dim = g.grid.dim;
    g.apply_multiplier(|rho| {
        let r2: f64 = rho[..dim].iter().map(|a| a * a).sum();
        C64::new(bracket(r2, m).powf(s), 0.0)
    })
    .expect("Fourier by construction");
    g
}

/// Sobolev norm sqrt( L^-d sum <rho>_m^{2s} |fhat|^2 ).
pub fn h_norm(f: &Field, s: f64, m: f64) -> f64 {
    let fh = f.to_fourier();
    let dim = fh.grid.dim;
    let inv_vol = fh.grid.len.powi(-(dim as i32));
    let mut acc = 0.0;
    for (flat, v) in fh.data.iter().enumerate() {
        let rho = fh.grid.freq_vec(flat);
        let r2: f64 = rho[..dim].iter().map(|a| a * a).sum();
        acc += bracket(r2, m).powf(2.0 * s) * v.norm_sqr();
    }
    (inv_vol * acc).sqrt()
}

/// L^p quadrature with cell weight (L/n)^d; p = +inf gives the sample max.
pub fn lp_norm(f: &Field, p: f64) -> f64 {
    let fp = f.to_physical();
    if p.is_infinite() {
        return fp.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let cell = fp.grid.cell();
    let acc: f64 = fp.data.iter().map(|v| v.norm().powf(p)).sum();
    (cell * acc).powf(1.0 / p)
}

/// W^{k,p} norm: || <D>_m^k f ||_{L^p}.
pub fn wkp_norm(f: &Field, k: f64, p: f64, m: f64) -> f64 {
    lp_norm(&bessel_pow(f, k, m), p)
}

/// Largest |x_c| (centered coordinate, sup over axes) carrying mass above
/// `rel` times the field's physical maximum. Zero fields have radius 0.
pub fn support_radius(f: &Field, rel: f64) -> f64 {
    let fp = f.to_physical();
    let peak = fp.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let cut = rel * peak;
    let mut radius: f64 = 0.0;
    for (flat, v) in fp.data.iter().enumerate() {
        if v.norm() > cut {
            let x = fp.grid.x_vec_centered(flat);
            for a in 0..fp.grid.dim {
                radius = radius.max(x[a].abs());
            }
        }
    }
    radius
}

/// Whether the field still lives in the central half of the box, the
/// precondition for the weighted norm to be meaningful on a torus.
pub fn support_in_central_half(f: &Field, rel: f64) -> bool {
    support_radius(f, rel) <= 0.25 * f.grid.len
}

/// Weighted norm sqrt( sum_a || x_a f ||_{H^s}^2 ) with centered x.
/// Errors when the support precondition fails (periodic wrap would corrupt
/// the weight) so callers can drop the monitor instead of logging noise.
pub fn weighted_h_norm(f: &Field, s: f64, m: f64, rel: f64) -> Result<f64> {
    if !support_in_central_half(f, rel) {
        return Err(Error::UnsupportedWeight(format!(
            "support radius {:.3} exceeds L/4 = {:.3}",
            support_radius(f, rel),
            0.25 * f.grid.len
        )));
    }
    let fp = f.to_physical();
    let mut acc = 0.0;
    for a in 0..fp.grid.dim {
        let mut xa = fp.clone();
        for (flat, v) in xa.data.iter_mut().enumerate() {
            *v *= fp.grid.x_vec_centered(flat)[a];
        }
        acc += h_norm(&xa, s, m).powi(2);
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::random_band_limited;
    use crate::grid::GridSpec;
    use std::f64::consts::PI;

    #[test]
    fn sine_l2_norm_matches_closed_form() {
        // || sin(2 pi x / L) ||_{L^2([0,L])} = sqrt(L/2).
        let grid = GridSpec::new(1, 128, 13.0).unwrap();
        let f = Field::from_fn_x(grid, |x| C64::new((2.0 * PI * x[0] / grid.len).sin(), 0.0));
        let expect = (grid.len / 2.0).sqrt();
        assert!((lp_norm(&f, 2.0) - expect).abs() < 1e-10);
        assert!((h_norm(&f, 0.0, 1.0) - expect).abs() < 1e-10);
    }

    #[test]
    fn h_norm_single_mode_closed_form() {
        // f = exp(i rho x): ||f||_{H^s}^2 = L^-1 <rho>^{2s} L^2 = L <rho>^{2s}.
        let grid = GridSpec::new(1, 64, 10.0).unwrap();
        let rho = grid.freq_1d(3);
        let f = Field::from_fn_x(grid, |x| C64::new(0.0, rho * x[0]).exp());
        for s in [0.0, 1.5, 4.0] {
            let expect = grid.len.sqrt() * bracket(rho * rho, 1.0).powf(s);
            let got = h_norm(&f, s, 1.0);
            assert!((got - expect).abs() < 1e-8 * expect, "s={s}: {got} vs {expect}");
        }
    }

    #[test]
    fn wkp_reduces_to_lp_at_zero_order_and_sup_at_infinity() {
        let grid = GridSpec::new(1, 64, 9.0).unwrap();
        let mut rng = crate::rng::SeedTree::new(5).stream("wkp", 0);
        let f = random_band_limited(grid, &mut rng, 8, true).to_physical();
        assert!((wkp_norm(&f, 0.0, 2.0, 1.0) - lp_norm(&f, 2.0)).abs() < 1e-10);
        let sup = f.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!((lp_norm(&f, f64::INFINITY) - sup).abs() < 1e-14);
    }

    #[test]
    fn weighted_norm_needs_central_support() {
        let grid = GridSpec::new(1, 256, 40.0).unwrap();
        let bump = |c: f64| {
            Field::from_fn_centered(grid, move |x| {
                C64::new((-(x[0] - c) * (x[0] - c)).exp(), 0.0)
            })
        };
        let centered = bump(0.0);
        let w = weighted_h_norm(&centered, 1.0, 1.0, 1e-10).unwrap();
        assert!(w.is_finite() && w > 0.0);
        // A bump parked at 0.4 L from center leaves the central half.
        let shifted = bump(0.4 * grid.len);
        assert!(weighted_h_norm(&shifted, 1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn weighted_norm_of_centered_gaussian_matches_quadrature() {
        // ||x exp(-x^2/2)||_{L^2(R)}^2 = sqrt(pi)/2 (s = 0 reduces to L^2).
        let grid = GridSpec::new(1, 512, 60.0).unwrap();
        let f = Field::from_fn_centered(grid, |x| C64::new((-0.5 * x[0] * x[0]).exp(), 0.0));
        let got = weighted_h_norm(&f, 0.0, 1.0, 1e-10).unwrap();
        let expect = (PI.sqrt() / 2.0).sqrt();
        assert!((got - expect).abs() < 1e-10, "{got} vs {expect}");
    }
}
