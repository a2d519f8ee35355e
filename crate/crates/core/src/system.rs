//! The coupled light/heavy scalar system in its three equivalent forms.
//!
//! With the d'Alembertian sign convention box = -d^2/dt^2 + Laplacian, the
//! three formulations are (heavy mass M, light mass 1):
//!
//!   original    (box - 1)u = u*v,
//!               (box - M^2)v = (1/2 - 1/M^2) u^2;
//!   v-modified  (box - 1)u = u*v - u^3/(2M^2),
//!               (box - M^2)v = (u^2 v - u^4/(2M^2) + du.du)/M^2;
//!   rescaled    (box - 1)u = u*v - u^3/2,
//!               (box - M^2)v = u^2 v - u^4/2 + du.du,
//!
//! where du.du = -(du/dt)^2 + |grad u|^2 is the Lorentz square of the
//! gradient. The maps between them are pointwise-exact on the grid:
//! v-modified shifts the heavy field by u^2/(2M^2), rescaling divides the
//! light field by M. The heavy source in the original form is the exact
//! pullback of the other two, so all three describe one trajectory.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{dealias, C64, Field, Space};
use crate::grid::GridSpec;
use crate::halfwave::half_wave_decompose;
use crate::norms::{h_norm, weighted_h_norm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    Original,
    VModified,
    Rescaled,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::Original => "original",
            Formulation::VModified => "v-modified",
            Formulation::Rescaled => "rescaled",
        })
    }
}

/// A Cauchy slice of the coupled system: the two fields, their velocities,
/// the heavy mass, the time, and which formulation the values are written in.
#[derive(Debug, Clone)]
pub struct UVState {
    pub u: Field,
    pub ut: Field,
    pub v: Field,
    pub vt: Field,
    pub mass: f64,
    pub time: f64,
    pub formulation: Formulation,
}

impl UVState {
    /// Validated constructor: one grid, physical space, real values, M >= 2.
    pub fn new(
        u: Field,
        ut: Field,
        v: Field,
        vt: Field,
        mass: f64,
        time: f64,
        formulation: Formulation,
    ) -> Result<Self> {
        u.grid.ensure_same(&ut.grid, "uv state")?;
        u.grid.ensure_same(&v.grid, "uv state")?;
        u.grid.ensure_same(&vt.grid, "uv state")?;
        if !(mass >= 2.0) {
            return Err(Error::ValidationError(format!(
                "heavy mass {mass} must be >= 2"
            )));
        }
        let s = UVState {
            u: u.into_space(Space::Physical),
            ut: ut.into_space(Space::Physical),
            v: v.into_space(Space::Physical),
            vt: vt.into_space(Space::Physical),
            mass,
            time,
            formulation,
        };
        let scale: f64 = s
            .fields()
            .iter()
            .map(|f| f.data.iter().map(|z| z.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let imag = s.max_imag();
        if imag > 1e-8 * (1.0 + scale) {
            return Err(Error::ValidationError(format!(
                "fields must be real-valued: max |Im| = {imag:.3e}"
            )));
        }
        Ok(s)
    }

    pub fn zero(grid: GridSpec, mass: f64, formulation: Formulation) -> Result<Self> {
        let z = Field::zeros(grid, Space::Physical);
        UVState::new(z.clone(), z.clone(), z.clone(), z, mass, 0.0, formulation)
    }

    pub fn grid(&self) -> GridSpec {
        self.u.grid
    }

    fn fields(&self) -> [&Field; 4] {
        [&self.u, &self.ut, &self.v, &self.vt]
    }

    /// Largest imaginary part over all four fields (physical samples).
    pub fn max_imag(&self) -> f64 {
        self.fields()
            .iter()
            .map(|f| f.max_imag_physical())
            .fold(0.0, f64::max)
    }

    /// Rewrite the same trajectory point in another formulation. The maps are
    /// pointwise field algebra, so a round trip is an identity up to rounding.
    pub fn change_variables(&self, target: Formulation) -> UVState {
        if self.formulation == target {
            return self.clone();
        }
        let mid = self.to_v_modified();
        let m = self.mass;
        match target {
            Formulation::VModified => mid,
            Formulation::Original => {
                // v-bar = v - u^2/(2M^2), with the matching velocity row.
                let mut v = mid.v.clone();
                let mut vt = mid.vt.clone();
                let c = 1.0 / (2.0 * m * m);
                for i in 0..v.data.len() {
                    let u = mid.u.data[i];
                    v.data[i] -= c * u * u;
                    vt.data[i] -= 2.0 * c * u * mid.ut.data[i];
                }
                UVState {
                    v,
                    vt,
                    formulation: Formulation::Original,
                    ..mid
                }
            }
            Formulation::Rescaled => {
                let mut u = mid.u.clone();
                let mut ut = mid.ut.clone();
                u.scale(1.0 / m);
                ut.scale(1.0 / m);
                UVState {
                    u,
                    ut,
                    formulation: Formulation::Rescaled,
                    ..mid
                }
            }
        }
    }

    fn to_v_modified(&self) -> UVState {
        let m = self.mass;
        match self.formulation {
            Formulation::VModified => self.clone(),
            Formulation::Original => {
                // v = v-bar + u^2/(2M^2).
                let mut v = self.v.clone();
                let mut vt = self.vt.clone();
                let c = 1.0 / (2.0 * m * m);
                for i in 0..v.data.len() {
                    let u = self.u.data[i];
                    v.data[i] += c * u * u;
                    vt.data[i] += 2.0 * c * u * self.ut.data[i];
                }
                UVState {
                    v,
                    vt,
                    formulation: Formulation::VModified,
                    ..self.clone()
                }
            }
            Formulation::Rescaled => {
                // The light field carries the only difference: u-bar = M u.
                let mut u = self.u.clone();
                let mut ut = self.ut.clone();
                u.scale(m);
                ut.scale(m);
                UVState {
                    u,
                    ut,
                    formulation: Formulation::VModified,
                    ..self.clone()
                }
            }
        }
    }
}

/// Spatial derivative along one axis as a Fourier multiplier i*rho_a.
pub fn derivative(f: &Field, axis: usize) -> Result<Field> {
    if axis >= f.grid.dim {
        return Err(Error::ValidationError(format!(
            "axis {axis} out of range for dim {}",
            f.grid.dim
        )));
    }
    let mut g = f.to_fourier();
    g.apply_multiplier(|rho| C64::new(0.0, rho[axis]))?;
    Ok(g)
}

/// Band-limit to the inner-third spectrum, returning a physical field.
fn band_limited(f: &Field) -> Field {
    let mut g = f.to_fourier();
    dealias(&g.grid, &mut g.data);
    g.to_physical()
}

/// Physical inputs for the forcing polynomials; `grad_u` is empty when the
/// formulation does not consume the light gradient.
pub(crate) struct ForcingInputs<'a> {
    pub u: &'a Field,
    pub ut: &'a Field,
    pub grad_u: &'a [Field],
    pub v: &'a Field,
}

/// Whether a formulation's heavy source reads the light-field derivatives.
pub(crate) fn needs_light_derivatives(f: Formulation) -> bool {
    !matches!(f, Formulation::Original)
}

/// Evaluate both nonlinear sources pointwise on physical fields. Inputs are
/// expected band-limited; the caller truncates and re-symmetrizes the result
/// spectra. One grid multiply per point keeps the quadratic aliasing exactly
/// removable by the 2/3 rule; cubic and quartic fold-back stays in the
/// spectral tail for the smooth states this lab runs.
pub(crate) fn forcing_pointwise(
    formulation: Formulation,
    mass: f64,
    inp: &ForcingInputs<'_>,
) -> (Field, Field) {
    let grid = inp.u.grid;
    let mut fl = Field::zeros(grid, Space::Physical);
    let mut fh = Field::zeros(grid, Space::Physical);
    let m2 = mass * mass;
    for i in 0..grid.points() {
        let u = inp.u.data[i];
        let v = inp.v.data[i];
        match formulation {
            Formulation::Original => {
                fl.data[i] = u * v;
                fh.data[i] = (0.5 - 1.0 / m2) * u * u;
            }
            Formulation::VModified => {
                let ut = inp.ut.data[i];
                let u2 = u * u;
                let mut dd = -ut * ut;
                for g in inp.grad_u {
                    dd += g.data[i] * g.data[i];
                }
                fl.data[i] = u * v - u2 * u / (2.0 * m2);
                fh.data[i] = (u2 * v - u2 * u2 / (2.0 * m2) + dd) / m2;
            }
            Formulation::Rescaled => {
                let ut = inp.ut.data[i];
                let u2 = u * u;
                let mut dd = -ut * ut;
                for g in inp.grad_u {
                    dd += g.data[i] * g.data[i];
                }
                fl.data[i] = u * v - 0.5 * u2 * u;
                fh.data[i] = u2 * v - 0.5 * u2 * u2 + dd;
            }
        }
    }
    (fl, fh)
}

/// The nonlinear sources (light, heavy) of the state's own formulation, as
/// dealiased physical fields: these are the right-hand sides with the linear
/// Klein-Gordon parts removed.
pub fn forcings(s: &UVState) -> Result<(Field, Field)> {
    let u = band_limited(&s.u);
    let ut = band_limited(&s.ut);
    let v = band_limited(&s.v);
    let grad_u: Vec<Field> = if needs_light_derivatives(s.formulation) {
        (0..s.grid().dim)
            .map(|a| Ok(derivative(&u, a)?.to_physical()))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let inp = ForcingInputs {
        u: &u,
        ut: &ut,
        grad_u: &grad_u,
        v: &v,
    };
    let (fl, fh) = forcing_pointwise(s.formulation, s.mass, &inp);
    let clean = |f: Field| -> Field {
        let mut g = f.to_fourier();
        dealias(&g.grid, &mut g.data);
        g.hermitian_symmetrize();
        g.to_physical()
    };
    Ok((clean(fl), clean(fh)))
}

/// One named term of a data-norm budget.
pub type NormTerm = (String, f64);

/// The weighted half-wave budget family, compared against E/M.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WeightedTerms {
    pub terms: Vec<NormTerm>,
    pub total: f64,
    pub pass: bool,
}

/// Both initial-data budgets evaluated term by term: the second-order-form
/// family (compared against E) and the weighted half-wave family (compared
/// against E/M). Totals are the plain sums of the stored term values. The
/// weighted family is `None` when the data is not centrally supported — its
/// x-weights are meaningless across the periodic seam — while the unweighted
/// family always evaluates.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DataNormReport {
    pub eom_terms: Vec<NormTerm>,
    pub eom_total: f64,
    pub eom_pass: bool,
    pub weighted: Option<WeightedTerms>,
    pub budget: f64,
}

/// Evaluate the initial-data budgets on a t = 0 slice. The second-order
/// family weighs the fields and velocities directly; the weighted family is
/// evaluated on the half waves u0 = ut + i<D>u, v0 = vt + i<D>_M v.
pub fn data_norms(s: &UVState, n_smooth: f64, k_smooth: f64, budget: f64) -> Result<DataNormReport> {
    let m = s.mass;
    let eom_terms: Vec<NormTerm> = vec![
        ("M|U0|_HN".into(), m * h_norm(&s.u, n_smooth, 1.0)),
        ("M|U1|_H(N-1)".into(), m * h_norm(&s.ut, n_smooth - 1.0, 1.0)),
        (
            "M^3|V0|_H(N-1)".into(),
            m.powi(3) * h_norm(&s.v, n_smooth - 1.0, 1.0),
        ),
        ("M^2|V0|_HN".into(), m * m * h_norm(&s.v, n_smooth, 1.0)),
        (
            "M^2|V1|_H(N-1)".into(),
            m * m * h_norm(&s.vt, n_smooth - 1.0, 1.0),
        ),
    ];
    let eom_total: f64 = eom_terms.iter().map(|t| t.1).sum();
    let (u0, _) = half_wave_decompose(&s.u, &s.ut, 1.0)?;
    let (v0, _) = half_wave_decompose(&s.v, &s.vt, m)?;
    let sw = k_smooth + 1.5;
    let xu = weighted_h_norm(&u0, sw, 1.0, 1e-10);
    let xv = weighted_h_norm(&v0, sw, 1.0, 1e-10);
    let weighted = match (xu, xv) {
        (Ok(xu), Ok(xv)) => {
            let terms: Vec<NormTerm> = vec![
                ("|u0|_HN".into(), h_norm(&u0, n_smooth, 1.0)),
                ("M|v0|_HN".into(), m * h_norm(&v0, n_smooth, 1.0)),
                ("|x u0|_H(k+3/2)".into(), xu),
                ("M|x v0|_H(k+3/2)".into(), m * xv),
            ];
            let total: f64 = terms.iter().map(|t| t.1).sum();
            Some(WeightedTerms {
                pass: total < budget / m,
                terms,
                total,
            })
        }
        (Err(Error::UnsupportedWeight(_)), _) | (_, Err(Error::UnsupportedWeight(_))) => None,
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    Ok(DataNormReport {
        eom_pass: eom_total < budget,
        eom_terms,
        eom_total,
        weighted,
        budget,
    })
}

/// Centered Gaussian Cauchy data: u(x) = amp * exp(-|x|^2/width^2) and the
/// same shape for the heavy field, both with zero velocity. Amplitude zero
/// gives a zero field.
pub fn gaussian_state(
    grid: GridSpec,
    mass: f64,
    light: (f64, f64),
    heavy: (f64, f64),
    formulation: Formulation,
) -> Result<UVState> {
    let bump = |(amp, width): (f64, f64)| -> Result<Field> {
        if amp == 0.0 {
            return Ok(Field::zeros(grid, Space::Physical));
        }
        if !(width > 0.0) {
            return Err(Error::ValidationError(format!(
                "gaussian width {width} must be positive"
            )));
        }
        Ok(Field::from_fn_centered(grid, |x| {
            let r2: f64 = x[..grid.dim].iter().map(|a| a * a).sum();
            C64::new(amp * (-r2 / (width * width)).exp(), 0.0)
        }))
    };
    let z = Field::zeros(grid, Space::Physical);
    UVState::new(
        bump(light)?,
        z.clone(),
        bump(heavy)?,
        z,
        mass,
        0.0,
        formulation,
    )
}

/// Rescale all four fields by one factor so the weighted data total lands at
/// `fraction` of its budget E/M; every term is 1-homogeneous, so one factor
/// suffices. A zero state is returned unchanged.
pub fn scale_to_weighted_budget(
    s: &UVState,
    n_smooth: f64,
    k_smooth: f64,
    budget: f64,
    fraction: f64,
) -> Result<UVState> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::ValidationError(format!(
            "budget fraction {fraction} must lie in (0, 1]"
        )));
    }
    let report = data_norms(s, n_smooth, k_smooth, budget)?;
    let weighted = report.weighted.ok_or_else(|| {
        Error::UnsupportedWeight("budget scaling needs centrally supported data".into())
    })?;
    if weighted.total == 0.0 {
        return Ok(s.clone());
    }
    let factor = fraction * (budget / s.mass) / weighted.total;
    let mut out = s.clone();
    out.u.scale(factor);
    out.ut.scale(factor);
    out.v.scale(factor);
    out.vt.scale(factor);
    Ok(out)
}
