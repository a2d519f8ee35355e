//! Half-wave variables and the free Klein-Gordon flow.
//!
//! A real scalar field with mass m splits into the complex pair
//! u_pm = (d/dt pm i<D>_m) U, where <D>_m is the Fourier multiplier
//! sqrt(|rho|^2 + m^2). Each half wave evolves by a first-order equation
//! whose linear part is the unitary group e^{pm i t <D>_m}; undoing that
//! rotation gives the profile, the natural variable for scattering.

use crate::error::Result;
use crate::field::{Field, Space, C64};
use crate::grid::bracket;

/// u_pm = ft pm i <D>_m f. Inputs in any space; outputs Fourier.
pub fn half_wave_decompose(f: &Field, ft: &Field, m: f64) -> Result<(Field, Field)> {
    f.grid.ensure_same(&ft.grid, "half_wave_decompose")?;
    debug_assert!(m > 0.0);
    let fh = f.to_fourier();
    let th = ft.to_fourier();
    let mut up = Field::zeros(f.grid, Space::Fourier);
    let mut um = up.clone();
    for flat in 0..f.grid.points() {
        let rho = f.grid.freq_vec(flat);
        let w = bracket(rho.iter().map(|r| r * r).sum(), m);
        let rot = C64::new(0.0, w) * fh.data[flat];
        up.data[flat] = th.data[flat] + rot;
        um.data[flat] = th.data[flat] - rot;
    }
    Ok((up, um))
}

/// Invert the half-wave split: f = (u_+ - u_-)/(2i<D>_m), ft = (u_+ + u_-)/2.
pub fn half_wave_reconstruct(up: &Field, um: &Field, m: f64) -> Result<(Field, Field)> {
    up.grid.ensure_same(&um.grid, "half_wave_reconstruct")?;
    debug_assert!(m > 0.0);
    let uph = up.to_fourier();
    let umh = um.to_fourier();
    let mut f = Field::zeros(up.grid, Space::Fourier);
    let mut ft = f.clone();
    for flat in 0..up.grid.points() {
        let rho = up.grid.freq_vec(flat);
        let w = bracket(rho.iter().map(|r| r * r).sum(), m);
        let diff = uph.data[flat] - umh.data[flat];
        f.data[flat] = diff / C64::new(0.0, 2.0 * w);
        ft.data[flat] = 0.5 * (uph.data[flat] + umh.data[flat]);
    }
    Ok((f, ft))
}

/// Fourier-side reflection-conjugation g(rho) = conj(f(-rho)). For data coming
/// from a real (f, ft) pair this maps u_+ onto u_-, so only one half wave ever
/// needs to be stored or evolved.
pub fn conj_reflect(f: &Field) -> Field {
    let fh = f.to_fourier();
    let grid = fh.grid;
    let n = grid.n;
    let mut out = Field::zeros(grid, Space::Fourier);
    for flat in 0..grid.points() {
        let c = grid.coords(flat);
        let mut cr = c;
        for a in 0..grid.dim {
            cr[a] = (n - c[a]) % n;
        }
        out.data[flat] = fh.data[grid.flat(&cr)].conj();
    }
    out
}

/// e^{i t <D>_m} f: the unitary half-wave group. Negative t runs it backwards.
/// Input in any space; output Fourier.
pub fn free_flow(f: &Field, m: f64, t: f64) -> Field {
    let mut out = f.to_fourier();
    out.apply_multiplier(|rho| {
        let w = bracket(rho.iter().map(|r| r * r).sum(), m);
        C64::new(0.0, w * t).exp()
    })
    .expect("fourier by construction");
    out
}

/// Exact free Klein-Gordon evolution of (U, dU/dt) by time t:
/// U(t) = cos(t<D>)U0 + sin(t<D>)/<D> U1, with the matching velocity row.
/// Outputs Fourier.
pub fn klein_gordon_free(f0: &Field, f1: &Field, m: f64, t: f64) -> Result<(Field, Field)> {
    f0.grid.ensure_same(&f1.grid, "klein_gordon_free")?;
    debug_assert!(m > 0.0);
    let a = f0.to_fourier();
    let b = f1.to_fourier();
    let mut f = Field::zeros(f0.grid, Space::Fourier);
    let mut ft = f.clone();
    for flat in 0..f0.grid.points() {
        let rho = f0.grid.freq_vec(flat);
        let w = bracket(rho.iter().map(|r| r * r).sum(), m);
        let (s, c) = (t * w).sin_cos();
        f.data[flat] = c * a.data[flat] + s / w * b.data[flat];
        ft.data[flat] = -w * s * a.data[flat] + c * b.data[flat];
    }
    Ok((f, ft))
}
