//! Complex scalar fields on the periodic box and the discrete Fourier
//! transform pair used throughout:
//!
//!   fhat(rho) = (L/n)^d * sum_j f(x_j) exp(-i rho . x_j)
//!   f(x_j)    = L^-d    * sum_rho fhat(rho) exp(+i rho . x_j)
//!
//! so a single mode exp(i (2 pi / L) x) transforms to the value L at its
//! lattice point, matching the continuum integral normalization.

use crate::error::{Error, Result};
use crate::grid::{GridSpec, MAX_DIM};
use num_complex::Complex;
use rand::Rng;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::sync::Arc;

pub type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Physical,
    Fourier,
}

#[derive(Debug, Clone)]
pub struct Field {
    pub grid: GridSpec,
    pub space: Space,
    pub data: Vec<C64>,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if forward {
            p.plan_fft_forward(n)
        } else {
            p.plan_fft_inverse(n)
        }
    })
}

/// Unnormalized DFT along one axis of a row-major d-cube, in place.
fn dft_axis(grid: &GridSpec, data: &mut [C64], axis: usize, forward: bool) {
    let n = grid.n;
    let stride = n.pow((grid.dim - 1 - axis) as u32);
    let plan = plan(n, forward);
    let mut scratch = vec![C64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    if stride == 1 {
        for chunk in data.chunks_exact_mut(n) {
            plan.process_with_scratch(chunk, &mut scratch);
        }
        return;
    }
    let block = n * stride;
    let mut line = vec![C64::new(0.0, 0.0); n];
    for outer in (0..data.len()).step_by(block) {
        for inner in 0..stride {
            let base = outer + inner;
            for k in 0..n {
                line[k] = data[base + k * stride];
            }
            plan.process_with_scratch(&mut line, &mut scratch);
            for k in 0..n {
                data[base + k * stride] = line[k];
            }
        }
    }
}

/// In-place forward transform of raw storage (physical -> Fourier).
pub fn dft_forward(grid: &GridSpec, data: &mut [C64]) {
    for axis in 0..grid.dim {
        dft_axis(grid, data, axis, true);
    }
    let scale = grid.cell();
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// In-place inverse transform of raw storage (Fourier -> physical).
pub fn dft_inverse(grid: &GridSpec, data: &mut [C64]) {
    for axis in 0..grid.dim {
        dft_axis(grid, data, axis, false);
    }
    let scale = grid.len.powi(-(grid.dim as i32));
    for v in data.iter_mut() {
        *v *= scale;
    }
}

impl Field {
    pub fn zeros(grid: GridSpec, space: Space) -> Self {
        Field {
            grid,
            space,
            data: vec![C64::new(0.0, 0.0); grid.points()],
        }
    }

    /// Build from a function of the raw coordinate x in [0, L)^d.
    pub fn from_fn_x(grid: GridSpec, f: impl Fn(&[f64; MAX_DIM]) -> C64) -> Self {
        let mut out = Field::zeros(grid, Space::Physical);
        for (flat, v) in out.data.iter_mut().enumerate() {
            let c = grid.coords(flat);
            let mut x = [0.0; MAX_DIM];
            for a in 0..grid.dim {
                x[a] = grid.x_1d(c[a]);
            }
            *v = f(&x);
        }
        out
    }

    /// Build from a function of the centered coordinate x in [-L/2, L/2)^d.
    pub fn from_fn_centered(grid: GridSpec, f: impl Fn(&[f64; MAX_DIM]) -> C64) -> Self {
        Field::from_fn_x(grid, |x| {
            let mut xc = *x;
            for a in 0..grid.dim {
                xc[a] -= 0.5 * grid.len;
            }
            f(&xc)
        })
    }

    pub fn to_fourier(&self) -> Field {
        match self.space {
            Space::Fourier => self.clone(),
            Space::Physical => {
                let mut out = self.clone();
                dft_forward(&self.grid, &mut out.data);
                out.space = Space::Fourier;
                out
            }
        }
    }

    pub fn to_physical(&self) -> Field {
        match self.space {
            Space::Physical => self.clone(),
            Space::Fourier => {
                let mut out = self.clone();
                dft_inverse(&self.grid, &mut out.data);
                out.space = Space::Physical;
                out
            }
        }
    }

    pub fn into_space(&self, space: Space) -> Field {
        match space {
            Space::Physical => self.to_physical(),
            Space::Fourier => self.to_fourier(),
        }
    }

    /// Apply a frequency multiplier in place; field must be in Fourier space.
    pub fn apply_multiplier(&mut self, m: impl Fn(&[f64; MAX_DIM]) -> C64) -> Result<()> {
        if self.space != Space::Fourier {
            return Err(Error::GridMismatch(
                "multiplier application requires Fourier space".into(),
            ));
        }
        let grid = self.grid;
        for (flat, v) in self.data.iter_mut().enumerate() {
            *v *= m(&grid.freq_vec(flat));
        }
        Ok(())
    }

    /// Fourier coefficient at a signed mode vector (test/diagnostic accessor).
    pub fn mode(&self, modes: &[i64]) -> C64 {
        assert_eq!(self.space, Space::Fourier);
        let n = self.grid.n as i64;
        let mut c = [0usize; MAX_DIM];
        for (a, &m) in modes.iter().enumerate().take(self.grid.dim) {
            let k = if m < 0 { m + n } else { m };
            assert!((0..n).contains(&k), "mode out of range");
            c[a] = k as usize;
        }
        self.data[self.grid.flat(&c)]
    }

    pub fn scale(&mut self, a: f64) {
        for v in self.data.iter_mut() {
            *v *= a;
        }
    }

    /// self += a * other (same grid and space).
    pub fn add_scaled(&mut self, other: &Field, a: f64) -> Result<()> {
        self.grid.ensure_same(&other.grid, "add_scaled")?;
        if self.space != other.space {
            return Err(Error::GridMismatch("add_scaled: space mismatch".into()));
        }
        for (v, w) in self.data.iter_mut().zip(&other.data) {
            *v += a * w;
        }
        Ok(())
    }

    /// Largest |Im f| over physical samples; drift monitor for real fields.
    pub fn max_imag_physical(&self) -> f64 {
        let p = self.to_physical();
        p.data.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Project onto real-valued fields: fhat(rho) <- (fhat(rho) + conj(fhat(-rho)))/2.
    pub fn hermitian_symmetrize(&mut self) {
        assert_eq!(self.space, Space::Fourier);
        let grid = self.grid;
        let n = grid.n;
        for flat in 0..grid.points() {
            let c = grid.coords(flat);
            let mut cr = [0usize; MAX_DIM];
            for a in 0..grid.dim {
                cr[a] = (n - c[a]) % n;
            }
            let rflat = grid.flat(&cr);
            if rflat < flat {
                continue;
            }
            let a = self.data[flat];
            let b = self.data[rflat];
            let sym = 0.5 * (a + b.conj());
            self.data[flat] = sym;
            self.data[rflat] = sym.conj();
        }
    }
}

/// Keep-mask for the 2/3 dealiasing rule: true where |mode| < n/3 on every
/// axis. Quadratic products of kept modes then alias onto discarded modes
/// only; cubic/quartic terms are formed from masked factors as well.
pub fn dealias_keep(grid: &GridSpec, flat: usize) -> bool {
    let c = grid.coords(flat);
    let cutoff = grid.n as i64 / 3;
    for a in 0..grid.dim {
        if grid.signed_mode(c[a]).abs() >= cutoff {
            return false;
        }
    }
    true
}

/// Zero all modes outside the 2/3 mask, in place (Fourier storage).
pub fn dealias(grid: &GridSpec, data: &mut [C64]) {
    for (flat, v) in data.iter_mut().enumerate() {
        if !dealias_keep(grid, flat) {
            *v = C64::new(0.0, 0.0);
        }
    }
}

/// Pointwise product of two real-valued fields with full 2/3 dealiasing:
/// both factors are truncated to the inner-third spectrum before the grid
/// multiply, and the product spectrum is truncated and re-symmetrized, so
/// quadratic aliasing never re-enters the retained band. Returns a physical
/// field.
pub fn dealiased_product(a: &Field, b: &Field) -> Result<Field> {
    a.grid.ensure_same(&b.grid, "dealiased_product")?;
    let mut fa = a.to_fourier();
    dealias(&fa.grid, &mut fa.data);
    let mut fb = b.to_fourier();
    dealias(&fb.grid, &mut fb.data);
    let pa = fa.to_physical();
    let pb = fb.to_physical();
    let mut prod = Field::zeros(a.grid, Space::Physical);
    for ((v, x), y) in prod.data.iter_mut().zip(&pa.data).zip(&pb.data) {
        *v = x * y;
    }
    let mut out = prod.to_fourier();
    dealias(&out.grid, &mut out.data);
    out.hermitian_symmetrize();
    Ok(out.to_physical())
}

/// Random Fourier-side field supported on |mode| <= max_mode per axis, with
/// Hermitian symmetry when `real` is set; coefficients ~ unit normal.
pub fn random_band_limited(
    grid: GridSpec,
    rng: &mut impl Rng,
    max_mode: i64,
    real: bool,
) -> Field {
    let mut f = Field::zeros(grid, Space::Fourier);
    for flat in 0..grid.points() {
        let c = grid.coords(flat);
        let mut keep = true;
        for a in 0..grid.dim {
            if grid.signed_mode(c[a]).abs() > max_mode {
                keep = false;
            }
        }
        if keep {
            // Box-Muller from two uniforms keeps the dependency surface small.
            let (u1, u2): (f64, f64) = (rng.gen_range(1e-12..1.0), rng.gen_range(0.0..1.0));
            let r = (-2.0 * u1.ln()).sqrt();
            let th = 2.0 * std::f64::consts::PI * u2;
            f.data[flat] = C64::new(r * th.cos(), r * th.sin());
        }
    }
    if real {
        f.hermitian_symmetrize();
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn single_mode_transforms_to_box_length() {
        // f(x) = exp(i 2 pi x / L) has fhat = L at rho = 2 pi / L, 0 elsewhere.
        let grid = GridSpec::new(1, 64, 7.5).unwrap();
        let k1 = 2.0 * std::f64::consts::PI / grid.len;
        let f = Field::from_fn_x(grid, |x| C64::new(0.0, k1 * x[0]).exp());
        let fh = f.to_fourier();
        assert!(close(fh.mode(&[1]), C64::new(grid.len, 0.0), 1e-9 * grid.len));
        assert!(fh.mode(&[0]).norm() < 1e-10);
        assert!(fh.mode(&[2]).norm() < 1e-10);
        assert!(fh.mode(&[-1]).norm() < 1e-10);
    }

    #[test]
    fn round_trip_identity_3d() {
        let grid = GridSpec::new(3, 8, 3.0).unwrap();
        let mut rng = crate::rng::SeedTree::new(11).stream("round-trip", 0);
        let f = random_band_limited(grid, &mut rng, 3, false);
        let back = f.to_physical().to_fourier();
        let err: f64 = f
            .data
            .iter()
            .zip(&back.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "round trip error {err}");
    }

    #[test]
    fn hermitian_fields_are_real() {
        let grid = GridSpec::new(2, 16, 5.0).unwrap();
        let mut rng = crate::rng::SeedTree::new(3).stream("herm", 0);
        let f = random_band_limited(grid, &mut rng, 5, true);
        assert!(f.max_imag_physical() < 1e-12);
    }

    #[test]
    fn dealias_mask_kills_top_third() {
        let grid = GridSpec::new(1, 12_usize.next_power_of_two(), 1.0).unwrap(); // n = 16
        let mut f = Field::zeros(grid, Space::Fourier);
        for v in f.data.iter_mut() {
            *v = C64::new(1.0, 0.0);
        }
        dealias(&grid, &mut f.data);
        for flat in 0..grid.points() {
            let m = grid.signed_mode(grid.coords(flat)[0]).abs();
            let kept = f.data[flat].norm() > 0.0;
            assert_eq!(kept, m < 16 / 3, "mode {m}");
        }
    }
}
