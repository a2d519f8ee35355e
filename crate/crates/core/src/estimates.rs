//! Numerical verification of the convolution-integral envelopes used by the
//! decay bootstrap.
//!
//! Two families are checked: the mass-independent integral
//! Int_1^t s^-alpha <t-s>^-beta ds and its mass-dependent cousin with
//! <(t-s)/M>^-beta. Each is integrated adaptively and compared against the
//! closed-form envelope for its (alpha, beta) regime. The mass-dependent
//! claim is recorded in two variants: with the literal prefactor
//! M^min(1-alpha, 0) and with unit prefactor. For alpha > 1 the literal
//! prefactor is too strong — the slice s in [1, 2] alone contributes on the
//! order of <t/M>^-beta with no power of M in front — so the asserted bound
//! uses the unit-prefactor form and the literal ratio is reported for
//! inspection.

use crate::error::{Error, Result};

/// <x> = sqrt(1 + x^2).
fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    if depth == 0 {
        return Err(Error::QuadratureFailure(format!(
            "adaptive Simpson recursion exhausted on [{a}, {b}]"
        )));
    }
    let m = 0.5 * (a + b);
    let left = simpson(f, a, m);
    let right = simpson(f, m, b);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol {
        return Ok(left + right + err / 15.0);
    }
    Ok(adaptive(f, a, m, left, 0.5 * tol, depth - 1)?
        + adaptive(f, m, b, right, 0.5 * tol, depth - 1)?)
}

/// Adaptive Simpson quadrature of a smooth integrand.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(b > a) {
        return Err(Error::QuadratureFailure(format!("empty interval [{a}, {b}]")));
    }
    // Split geometrically so the s^-alpha end is resolved before recursing.
    let mut total = 0.0;
    let mut lo = a;
    while lo < b {
        let hi = (lo * 2.0).min(b).max(lo + 1e-9);
        let whole = simpson(&f, lo, hi);
        total += adaptive(&f, lo, hi, whole, tol, 48)?;
        lo = hi;
    }
    Ok(total)
}

/// Closed-form envelope for Int_1^t s^-alpha <t-s>^-beta ds. Boundary
/// exponents alpha = 1 or beta = 1 carry logarithms and are rejected.
pub fn envelope_mass_independent(alpha: f64, beta: f64, t: f64) -> Result<f64> {
    if (alpha - 1.0).abs() < 1e-9 || (beta - 1.0).abs() < 1e-9 {
        return Err(Error::ValidationError(
            "envelope undefined at alpha = 1 or beta = 1 (logarithmic case)".into(),
        ));
    }
    // Three branches partition the plane away from the rejected boundaries;
    // ties alpha == beta > 1 close to the t^-alpha branch, where the two
    // candidate values coincide.
    Ok(if alpha < 1.0 && beta < 1.0 {
        t.powf(1.0 - alpha - beta)
    } else if beta >= alpha {
        t.powf(-alpha)
    } else {
        t.powf(-beta)
    })
}

/// Closed-form envelope for Int_1^t s^-alpha <(t-s)/M>^-beta ds, unit
/// prefactor.
pub fn envelope_mass_dependent(alpha: f64, beta: f64, m: f64, t: f64) -> Result<f64> {
    if (alpha - 1.0).abs() < 1e-9 || (beta - 1.0).abs() < 1e-9 {
        return Err(Error::ValidationError(
            "envelope undefined at alpha = 1 or beta = 1 (logarithmic case)".into(),
        ));
    }
    let tm = japanese(t / m);
    // The three branches partition the plane away from the rejected
    // boundaries: both small; alpha dominant (ties close here, the branch
    // values coincide); beta dominant.
    Ok(if alpha < 1.0 && beta < 1.0 {
        t.powf(1.0 - alpha) * tm.powf(-beta)
    } else if alpha >= beta {
        tm.powf(-beta)
    } else {
        (tm.powf(-beta)).max(tm.powf(-1.0) * t.powf(1.0 - alpha))
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct IntegralCase {
    pub alpha: f64,
    pub beta: f64,
    pub mass: Option<f64>,
    /// sup over t of integral / envelope with unit prefactor.
    pub sup_ratio_unit: f64,
    /// sup over t of integral / (M^min(1-alpha,0) * envelope); only differs
    /// from the unit ratio in the mass-dependent family.
    pub sup_ratio_literal: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct IntegralEstimateReport {
    pub cases: Vec<IntegralCase>,
    pub sup_ratio_unit: f64,
    pub sup_ratio_literal: f64,
}

/// Integrate both families over a grid of horizons and exponent pairs and
/// report the worst integral-to-envelope ratios. The unit-prefactor ratio is
/// the one a caller should bound; it stays O(1) across masses.
pub fn verify_integral_estimates(
    pairs: &[(f64, f64)],
    masses: &[f64],
    horizons: &[f64],
) -> Result<IntegralEstimateReport> {
    let mut cases = Vec::new();
    let mut sup_unit: f64 = 0.0;
    let mut sup_literal: f64 = 0.0;
    for &(alpha, beta) in pairs {
        let mut case_sup: f64 = 0.0;
        for &t in horizons {
            if t <= 2.0 {
                continue;
            }
            let val = integrate(
                |s| s.powf(-alpha) * japanese(t - s).powf(-beta),
                1.0,
                t,
                1e-10,
            )?;
            case_sup = case_sup.max(val / envelope_mass_independent(alpha, beta, t)?);
        }
        sup_unit = sup_unit.max(case_sup);
        sup_literal = sup_literal.max(case_sup);
        cases.push(IntegralCase {
            alpha,
            beta,
            mass: None,
            sup_ratio_unit: case_sup,
            sup_ratio_literal: case_sup,
        });
        for &m in masses {
            let mut unit: f64 = 0.0;
            let mut literal: f64 = 0.0;
            let prefactor = m.powf((1.0 - alpha).min(0.0));
            for &t in horizons {
                if t <= 2.0 {
                    continue;
                }
                let val = integrate(
                    |s| s.powf(-alpha) * japanese((t - s) / m).powf(-beta),
                    1.0,
                    t,
                    1e-10,
                )?;
                let env = envelope_mass_dependent(alpha, beta, m, t)?;
                unit = unit.max(val / env);
                literal = literal.max(val / (prefactor * env));
            }
            sup_unit = sup_unit.max(unit);
            sup_literal = sup_literal.max(literal);
            cases.push(IntegralCase {
                alpha,
                beta,
                mass: Some(m),
                sup_ratio_unit: unit,
                sup_ratio_literal: literal,
            });
        }
    }
    if cases.is_empty() {
        return Err(Error::ValidationError(
            "verify_integral_estimates needs exponent pairs and horizons".into(),
        ));
    }
    Ok(IntegralEstimateReport {
        cases,
        sup_ratio_unit: sup_unit,
        sup_ratio_literal: sup_literal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_matches_closed_forms() {
        let got = integrate(|s| s * s, 0.5, 4.0, 1e-12).unwrap();
        assert!((got - (64.0 - 0.125) / 3.0).abs() < 1e-9);
        let got = integrate(|s| (-s).exp(), 0.0, 30.0, 1e-12).unwrap();
        assert!((got - (1.0 - (-30.0f64).exp())).abs() < 1e-9);
    }

    #[test]
    fn envelopes_cover_all_regimes_within_constant_ten() {
        let pairs = [
            (0.3, 0.4),
            (0.5, 2.0),
            (2.0, 0.5),
            (1.5, 1.2),
            (1.2, 1.5),
            (2.0, 2.0),
        ];
        let report = verify_integral_estimates(
            &pairs,
            &[4.0, 16.0, 64.0],
            &[10.0, 30.0, 100.0, 300.0, 1000.0],
        )
        .unwrap();
        assert!(
            report.sup_ratio_unit <= 10.0,
            "unit-prefactor ratio {}",
            report.sup_ratio_unit
        );
        // Every regime must actually be exercised, not just bounded.
        assert!(report.cases.iter().all(|c| c.sup_ratio_unit > 0.0));
    }

    #[test]
    fn literal_prefactor_overshoots_for_steep_alpha() {
        // With alpha = 2 the M^{1-alpha} prefactor shrinks the claimed bound
        // below the s in [1,2] contribution, so the literal ratio blows up
        // with M while the unit ratio stays put.
        let report = verify_integral_estimates(
            &[(2.0, 2.0)],
            &[64.0],
            &[100.0, 300.0, 1000.0],
        )
        .unwrap();
        let case = report
            .cases
            .iter()
            .find(|c| c.mass == Some(64.0))
            .expect("mass case present");
        assert!(case.sup_ratio_unit <= 10.0);
        assert!(
            case.sup_ratio_literal > 5.0 * case.sup_ratio_unit,
            "literal {} vs unit {}",
            case.sup_ratio_literal,
            case.sup_ratio_unit
        );
    }

    #[test]
    fn tie_case_uses_the_shared_branch_value() {
        // alpha = beta = 2 > 1: both stated branches give t^-2 and the
        // integral obeys it with a modest constant.
        for &t in &[20.0, 200.0] {
            let val = integrate(|s| s.powf(-2.0) * japanese(t - s).powf(-2.0), 1.0, t, 1e-11)
                .unwrap();
            let env = envelope_mass_independent(2.0, 2.0, t).unwrap();
            let ratio = val / env;
            assert!(ratio <= 10.0 && ratio > 0.05, "ratio {ratio} at t = {t}");
        }
    }

    #[test]
    fn logarithmic_boundary_is_rejected() {
        assert!(envelope_mass_independent(1.0, 2.0, 10.0).is_err());
        assert!(envelope_mass_dependent(0.5, 1.0, 8.0, 10.0).is_err());
    }
}
