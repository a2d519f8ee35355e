//! Time integration of the coupled system in profile space.
//!
//! Both fields are carried as the profiles of their upper half waves,
//! l = e^{-it<D>} u_+ and h = e^{-it<D>_M} v_+; the conjugate half waves are
//! recovered by reflection because the physical fields are real. All of the
//! stiffness (the heavy frequency M) lives in the linear rotation, which is
//! applied exactly as a Fourier multiplier at every Runge-Kutta stage time,
//! so the classical RK4 update only ever discretizes the nonlinear source.
//! The step size therefore controls nonlinear sampling accuracy, not
//! stability.

use crate::error::{Error, Result};
use crate::field::{dealias, C64, Field, Space};
use crate::grid::{bracket, GridSpec};
use crate::halfwave::{conj_reflect, free_flow, half_wave_decompose, half_wave_reconstruct};
use crate::norms::{h_norm, lp_norm, support_radius, weighted_h_norm, wkp_norm};
use crate::system::{forcing_pointwise, needs_light_derivatives, ForcingInputs, Formulation, UVState};

/// Profile snapshot of both fields. For real states the minus entries are
/// the reflection-conjugates of the plus entries; they are stored anyway so
/// a snapshot is self-contained. Fields are Fourier-side.
#[derive(Debug, Clone)]
pub struct ProfileSet {
    pub l_plus: Field,
    pub l_minus: Field,
    pub h_plus: Field,
    pub h_minus: Field,
    pub time: f64,
    pub masses: (f64, f64),
}

impl ProfileSet {
    /// Extract the profiles of a state's own fields (native formulation).
    pub fn from_state(s: &UVState) -> Result<ProfileSet> {
        let (l, h) = profiles_of(s)?;
        Ok(ProfileSet {
            l_minus: conj_reflect(&l),
            h_minus: conj_reflect(&h),
            l_plus: l,
            h_plus: h,
            time: s.time,
            masses: (1.0, s.mass),
        })
    }

    /// Rebuild the physical state this snapshot describes. The snapshot does
    /// not record which chart its source state was written in, so the caller
    /// passes the matching formulation tag; only the plus entries are
    /// consulted (the minus entries are redundant for real states).
    pub fn to_state(&self, formulation: Formulation) -> Result<UVState> {
        state_of(
            &self.l_plus,
            &self.h_plus,
            self.time,
            self.masses.1,
            formulation,
        )
    }
}

/// (l, h) profile pair of a state, Fourier-side, full spectrum.
fn profiles_of(s: &UVState) -> Result<(Field, Field)> {
    let (up, _) = half_wave_decompose(&s.u, &s.ut, 1.0)?;
    let (vp, _) = half_wave_decompose(&s.v, &s.vt, s.mass)?;
    Ok((
        free_flow(&up, 1.0, -s.time),
        free_flow(&vp, s.mass, -s.time),
    ))
}

/// Rebuild the physical state at time t from the (l, h) profile pair.
fn state_of(
    l: &Field,
    h: &Field,
    t: f64,
    mass: f64,
    formulation: Formulation,
) -> Result<UVState> {
    let up = free_flow(l, 1.0, t);
    let um = conj_reflect(&up);
    let (u, ut) = half_wave_reconstruct(&up, &um, 1.0)?;
    let vp = free_flow(h, mass, t);
    let vm = conj_reflect(&vp);
    let (v, vt) = half_wave_reconstruct(&vp, &vm, mass)?;
    Ok(UVState {
        u: u.to_physical(),
        ut: ut.to_physical(),
        v: v.to_physical(),
        vt: vt.to_physical(),
        mass,
        time: t,
        formulation,
    })
}

/// Real part of a complex physical field, as a real-valued field.
fn re_part(f: &Field) -> Field {
    let mut out = f.clone();
    for v in out.data.iter_mut() {
        *v = C64::new(v.re, 0.0);
    }
    out
}

/// Imaginary part of a complex physical field, as a real-valued field.
fn im_part(f: &Field) -> Field {
    let mut out = f.clone();
    for v in out.data.iter_mut() {
        *v = C64::new(v.im, 0.0);
    }
    out
}

/// The nonlinear profile velocities (dl/dt, dh/dt) at absolute time t.
/// Reconstruction happens on the inner-third band so every grid product is
/// formed from band-limited factors; the source spectra are truncated and
/// re-symmetrized before being rotated back to profile coordinates.
fn profile_rhs(
    formulation: Formulation,
    mass: f64,
    coupling: f64,
    t: f64,
    l: &Field,
    h: &Field,
) -> Result<(Field, Field)> {
    let grid = l.grid;
    if coupling == 0.0 {
        return Ok((
            Field::zeros(grid, Space::Fourier),
            Field::zeros(grid, Space::Fourier),
        ));
    }
    let mut up = free_flow(l, 1.0, t);
    dealias(&grid, &mut up.data);
    let mut vp = free_flow(h, mass, t);
    dealias(&grid, &mut vp.data);

    let ut = re_part(&up.to_physical());
    let mut wl = up;
    wl.apply_multiplier(|rho| {
        C64::new(1.0 / bracket(rho.iter().map(|r| r * r).sum(), 1.0), 0.0)
    })?;
    let u = im_part(&wl.to_physical());
    let grad_u: Vec<Field> = if needs_light_derivatives(formulation) {
        (0..grid.dim)
            .map(|axis| {
                let mut g = wl.clone();
                g.apply_multiplier(|rho| C64::new(0.0, rho[axis]))?;
                Ok(im_part(&g.to_physical()))
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let mut wv = vp;
    wv.apply_multiplier(|rho| {
        C64::new(1.0 / bracket(rho.iter().map(|r| r * r).sum(), mass), 0.0)
    })?;
    let v = im_part(&wv.to_physical());

    let inputs = ForcingInputs {
        u: &u,
        ut: &ut,
        grad_u: &grad_u,
        v: &v,
    };
    let (fl, fh) = forcing_pointwise(formulation, mass, &inputs);
    let rotate = |f: Field, m: f64| -> Field {
        let mut fh = f.to_fourier();
        dealias(&grid, &mut fh.data);
        fh.hermitian_symmetrize();
        let mut out = free_flow(&fh, m, -t);
        out.scale(-coupling);
        out
    };
    Ok((rotate(fl, 1.0), rotate(fh, mass)))
}

/// One classical RK4 update of the profile pair over [t, t + dt], with the
/// rotation phases evaluated at the absolute stage times.
fn rk4_step(
    formulation: Formulation,
    mass: f64,
    coupling: f64,
    t: f64,
    dt: f64,
    l: &mut Field,
    h: &mut Field,
) -> Result<()> {
    let stage = |lk: &Field, hk: &Field, c: f64, ts: f64| -> Result<(Field, Field)> {
        let mut ls = l.clone();
        ls.add_scaled(lk, c * dt)?;
        let mut hs = h.clone();
        hs.add_scaled(hk, c * dt)?;
        profile_rhs(formulation, mass, coupling, ts, &ls, &hs)
    };
    let (k1l, k1h) = profile_rhs(formulation, mass, coupling, t, l, h)?;
    let (k2l, k2h) = stage(&k1l, &k1h, 0.5, t + 0.5 * dt)?;
    let (k3l, k3h) = stage(&k2l, &k2h, 0.5, t + 0.5 * dt)?;
    let (k4l, k4h) = stage(&k3l, &k3h, 1.0, t + dt)?;
    let w = dt / 6.0;
    l.add_scaled(&k1l, w)?;
    l.add_scaled(&k2l, 2.0 * w)?;
    l.add_scaled(&k3l, 2.0 * w)?;
    l.add_scaled(&k4l, w)?;
    h.add_scaled(&k1h, w)?;
    h.add_scaled(&k2h, 2.0 * w)?;
    h.add_scaled(&k3h, 2.0 * w)?;
    h.add_scaled(&k4h, w)?;
    let finite = |f: &Field| f.data.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite(l) || !finite(h) {
        return Err(Error::StepRejected {
            t: t + dt,
            reason: "non-finite profile norm".into(),
        });
    }
    Ok(())
}

/// Relative threshold for the support radius fed into the causality budget.
/// Coarser than the weighted-norm support test on purpose: the dealias cutoff
/// leaves evolved fields ringing at ~1e-7 of their peak everywhere in the box,
/// so a tighter threshold would report every evolved state as box-filling.
pub const CAUSALITY_SUPPORT_REL: f64 = 1e-6;

/// Support radius of the whole solution vector: every component is measured
/// against one amplitude scale (the largest peak among the four fields), so a
/// weak component's truncation-ringing floor cannot masquerade as support.
pub fn state_support_radius(s: &UVState) -> f64 {
    let fields = [&s.u, &s.ut, &s.v, &s.vt];
    let global = fields
        .iter()
        .map(|f| lp_norm(f, f64::INFINITY))
        .fold(0.0, f64::max);
    if global == 0.0 {
        return 0.0;
    }
    fields
        .iter()
        .map(|f| {
            let peak = lp_norm(f, f64::INFINITY);
            if peak == 0.0 {
                0.0
            } else {
                support_radius(f, CAUSALITY_SUPPORT_REL * global / peak)
            }
        })
        .fold(0.0, f64::max)
}

/// Largest step that still samples the fastest retained oscillation: the
/// linear part is exact, so this bounds nonlinear sampling error only.
pub fn dt_ceiling(grid: &GridSpec, mass: f64) -> f64 {
    let corner = grid.dim as f64 * grid.freq_max() * grid.freq_max();
    0.5 / bracket(corner, mass)
}

/// Default step policy: the heavy-frequency ceiling capped by a tenth of the
/// grid spacing.
pub fn default_dt(grid: &GridSpec, mass: f64) -> f64 {
    dt_ceiling(grid, mass).min(0.1 * grid.dx())
}

/// One integrating-factor RK4 step of the rescaled system. States written in
/// the other formulations must be converted first.
pub fn step(s: &UVState, dt: f64) -> Result<UVState> {
    if s.formulation != Formulation::Rescaled {
        return Err(Error::ValidationError(format!(
            "step integrates the rescaled formulation; got {} (change_variables first)",
            s.formulation
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::ValidationError(format!(
            "step size {dt} must be positive"
        )));
    }
    let (mut l, mut h) = profiles_of(s)?;
    rk4_step(s.formulation, s.mass, 1.0, s.time, dt, &mut l, &mut h)?;
    state_of(&l, &h, s.time + dt, s.mass, s.formulation)
}

/// What to integrate and for how long. `horizon` is a signed duration from
/// the state's own time; a negative value runs the system backwards.
/// `coupling` scales the nonlinearity (0 gives the free flow, 1 the full
/// system). `dt` overrides the default policy but may not exceed the
/// sampling ceiling.
#[derive(Debug, Clone, Copy)]
pub struct EvolveSpec {
    pub horizon: f64,
    pub dt: Option<f64>,
    pub coupling: f64,
}

impl EvolveSpec {
    pub fn to(horizon: f64) -> Self {
        EvolveSpec {
            horizon,
            dt: None,
            coupling: 1.0,
        }
    }
}

/// Global-norm monitor parameters. The Lebesgue exponent is tied to `delta`
/// by 1/p = 1/6 - delta, and the time weights use the dimension-dependent
/// exponent d(1/2 - 1/p).
#[derive(Debug, Clone, Copy)]
pub struct MonitorConfig {
    pub n_smooth: f64,
    pub k_smooth: f64,
    pub delta: f64,
    pub sample_dt: f64,
    /// Keep every j-th sample's profiles (0 = the final snapshot only).
    pub profile_stride: usize,
    pub support_rel: f64,
}

impl Default for MonitorConfig {
    fn default() -> Self {
        MonitorConfig {
            n_smooth: 8.0,
            k_smooth: 5.0,
            delta: 1.0 / 14.0,
            sample_dt: 0.5,
            profile_stride: 0,
            support_rel: 1e-10,
        }
    }
}

impl MonitorConfig {
    pub fn lebesgue(&self) -> f64 {
        1.0 / (1.0 / 6.0 - self.delta)
    }

    pub fn kappa(&self, dim: usize) -> f64 {
        dim as f64 * (0.5 - 1.0 / self.lebesgue())
    }
}

/// One monitor sample. The dispersive components weigh the half waves by
/// <t>^kappa (light) and sqrt(M) <t/M>^kappa (heavy); the x-weighted profile
/// components are `None` once a profile's support leaves the central
/// half-box, where the periodic weight stops being meaningful.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct XNormSample {
    pub t: f64,
    pub z_light: f64,
    pub z_heavy: f64,
    pub s_light: Option<f64>,
    pub s_heavy: Option<f64>,
    pub n_light: f64,
    pub n_heavy: f64,
    pub x_total: f64,
}

/// Time series of monitor samples.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct XNormTrace {
    pub samples: Vec<XNormSample>,
}

impl XNormTrace {
    /// Largest combined norm over the run.
    pub fn sup_x(&self) -> f64 {
        self.samples.iter().map(|s| s.x_total).fold(0.0, f64::max)
    }
}

fn monitor_sample(
    l: &Field,
    h: &Field,
    t: f64,
    mass: f64,
    mon: &MonitorConfig,
) -> XNormSample {
    let dim = l.grid.dim;
    let p = mon.lebesgue();
    let kappa = mon.kappa(dim);
    let up = free_flow(l, 1.0, t);
    let vp = free_flow(h, mass, t);
    let z_light = bracket(t * t, 1.0).powf(kappa) * wkp_norm(&up, mon.k_smooth, p, 1.0);
    let z_heavy = mass.sqrt()
        * bracket((t / mass) * (t / mass), 1.0).powf(kappa)
        * wkp_norm(&vp, mon.k_smooth, p, 1.0);
    let sw = mon.k_smooth + 1.5;
    let s_light = weighted_h_norm(l, sw, 1.0, mon.support_rel).ok();
    let s_heavy = weighted_h_norm(h, sw, 1.0, mon.support_rel)
        .ok()
        .map(|x| mass.sqrt() * x);
    let n_light = h_norm(&up, mon.n_smooth, 1.0);
    let n_heavy = mass.sqrt() * h_norm(&vp, mon.n_smooth, 1.0);
    let x_total = z_light
        + z_heavy
        + s_light.unwrap_or(0.0)
        + s_heavy.unwrap_or(0.0)
        + n_light
        + n_heavy;
    XNormSample {
        t,
        z_light,
        z_heavy,
        s_light,
        s_heavy,
        n_light,
        n_heavy,
        x_total,
    }
}

/// Integrate the state's own formulation over the requested horizon,
/// sampling the global norms at the configured cadence and keeping profile
/// snapshots for scattering analysis. Returns the final state, the norm
/// trace, and the snapshots (oldest first, final time always included).
pub fn evolve(
    s: &UVState,
    spec: &EvolveSpec,
    mon: &MonitorConfig,
) -> Result<(UVState, XNormTrace, Vec<ProfileSet>)> {
    let grid = s.grid();
    if !spec.horizon.is_finite() || !spec.coupling.is_finite() {
        return Err(Error::ValidationError(
            "evolve horizon and coupling must be finite".into(),
        ));
    }
    if !(mon.delta > 0.0 && mon.delta < 1.0 / 6.0) {
        return Err(Error::ValidationError(format!(
            "delta {} must lie in (0, 1/6)",
            mon.delta
        )));
    }
    if !(mon.sample_dt > 0.0) {
        return Err(Error::ValidationError(format!(
            "sample cadence {} must be positive",
            mon.sample_dt
        )));
    }
    let ceiling = dt_ceiling(&grid, s.mass);
    let dt = match spec.dt {
        None => default_dt(&grid, s.mass),
        Some(dt) => {
            if !(dt > 0.0) || dt > ceiling * (1.0 + 1e-9) {
                return Err(Error::ValidationError(format!(
                    "dt {dt} outside (0, {ceiling:.3e}]: the heavy oscillation would be \
                     under-sampled"
                )));
            }
            dt
        }
    };
    if spec.coupling != 0.0 {
        grid.check_causality(state_support_radius(s), spec.horizon.abs())?;
    }

    let (mut l, mut h) = profiles_of(s)?;
    let t0 = s.time;
    let t_end = t0 + spec.horizon;
    let dir = if spec.horizon < 0.0 { -1.0 } else { 1.0 };

    // Sample instants: the cadence grid clipped to the horizon, then the end.
    let mut sample_times = Vec::new();
    let mut j = 1usize;
    loop {
        let t = t0 + dir * (j as f64) * mon.sample_dt;
        if (t - t0).abs() >= spec.horizon.abs() - 1e-12 * mon.sample_dt {
            break;
        }
        sample_times.push(t);
        j += 1;
    }
    sample_times.push(t_end);

    let mut trace = XNormTrace::default();
    let mut snapshots: Vec<ProfileSet> = Vec::new();
    let push_snapshot = |l: &Field, h: &Field, t: f64, snaps: &mut Vec<ProfileSet>| {
        snaps.push(ProfileSet {
            l_plus: l.clone(),
            l_minus: conj_reflect(l),
            h_plus: h.clone(),
            h_minus: conj_reflect(h),
            time: t,
            masses: (1.0, s.mass),
        });
    };
    trace.samples.push(monitor_sample(&l, &h, t0, s.mass, mon));
    if mon.profile_stride > 0 {
        push_snapshot(&l, &h, t0, &mut snapshots);
    }

    let mut t = t0;
    for (idx, &ts) in sample_times.iter().enumerate() {
        let span = ts - t;
        if span.abs() > 0.0 {
            let nsub = (span.abs() / dt).ceil().max(1.0) as usize;
            let hstep = span / nsub as f64;
            for _ in 0..nsub {
                rk4_step(s.formulation, s.mass, spec.coupling, t, hstep, &mut l, &mut h)?;
                t += hstep;
            }
        }
        t = ts;
        trace.samples.push(monitor_sample(&l, &h, t, s.mass, mon));
        let is_last = idx + 1 == sample_times.len();
        let keep = is_last
            || (mon.profile_stride > 0 && (idx + 1) % mon.profile_stride == 0);
        if keep {
            push_snapshot(&l, &h, t, &mut snapshots);
        }
    }

    let final_state = state_of(&l, &h, t_end, s.mass, s.formulation)?;
    Ok((final_state, trace, snapshots))
}
