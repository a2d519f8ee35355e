//! Periodic box discretization: uniform grid on [0, L)^d with the dual
//! frequency lattice {2*pi*k/L : k = -n/2 .. n/2-1} per axis.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const MAX_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Spatial dimension, 1..=3.
    pub dim: usize,
    /// Points per axis (power of two).
    pub n: usize,
    /// Box side length L.
    pub len: f64,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, len: f64) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::ValidationError(format!("dim must be 1..=3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::ValidationError(format!(
                "n must be a power of two >= 8, got {n}"
            )));
        }
        if !(len.is_finite() && len > 0.0) {
            return Err(Error::ValidationError(format!("box length must be positive, got {len}")));
        }
        Ok(GridSpec { dim, n, len })
    }

    /// Total number of grid points n^dim.
    pub fn points(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    /// Grid spacing L/n.
    pub fn dx(&self) -> f64 {
        self.len / self.n as f64
    }

    /// Cell volume (L/n)^dim, the quadrature weight.
    pub fn cell(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Signed integer mode for storage index k along one axis.
    #[inline]
    pub fn signed_mode(&self, k: usize) -> i64 {
        let n = self.n as i64;
        let k = k as i64;
        if k < n / 2 { k } else { k - n }
    }

    /// Frequency value for storage index k along one axis.
    #[inline]
    pub fn freq_1d(&self, k: usize) -> f64 {
        2.0 * PI * self.signed_mode(k) as f64 / self.len
    }

    /// Largest resolved |frequency| (Nyquist).
    pub fn freq_max(&self) -> f64 {
        PI * self.n as f64 / self.len
    }

    /// Physical coordinate of index j along one axis, in [0, L).
    #[inline]
    pub fn x_1d(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    /// Centered coordinate in [-L/2, L/2); weighted norms and localized data
    /// generators measure distance from the box center.
    #[inline]
    pub fn x_centered_1d(&self, j: usize) -> f64 {
        self.x_1d(j) - 0.5 * self.len
    }

    /// Decompose a flat row-major index into per-axis indices.
    #[inline]
    pub fn coords(&self, flat: usize) -> [usize; MAX_DIM] {
        let mut c = [0usize; MAX_DIM];
        let mut rem = flat;
        for axis in (0..self.dim).rev() {
            c[axis] = rem % self.n;
            rem /= self.n;
        }
        c
    }

    /// Flat row-major index from per-axis indices.
    #[inline]
    pub fn flat(&self, c: &[usize; MAX_DIM]) -> usize {
        let mut f = 0usize;
        for axis in 0..self.dim {
            f = f * self.n + c[axis];
        }
        f
    }

    /// Frequency vector at a flat index (unused trailing components zero).
    #[inline]
    pub fn freq_vec(&self, flat: usize) -> [f64; MAX_DIM] {
        let c = self.coords(flat);
        let mut v = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            v[axis] = self.freq_1d(c[axis]);
        }
        v
    }

    /// Centered coordinate vector at a flat index.
    #[inline]
    pub fn x_vec_centered(&self, flat: usize) -> [f64; MAX_DIM] {
        let c = self.coords(flat);
        let mut v = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            v[axis] = self.x_centered_1d(c[axis]);
        }
        v
    }

    /// Finite-speed-of-propagation budget: data supported in |x| <= R evolved
    /// to time T must satisfy L >= 2*(R + T) so nothing wraps around.
    pub fn check_causality(&self, support: f64, horizon: f64) -> Result<()> {
        let need = 2.0 * (support + horizon);
        if self.len < need {
            return Err(Error::CausalityBudgetExceeded {
                len: self.len,
                need,
                support,
                horizon,
            });
        }
        Ok(())
    }

    pub fn ensure_same(&self, other: &GridSpec, what: &str) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "{what}: {:?} vs {:?}",
                self, other
            )));
        }
        Ok(())
    }
}

/// Japanese bracket with mass m: sqrt(|a|^2 + m^2).
#[inline]
pub fn bracket(a2: f64, m: f64) -> f64 {
    (a2 + m * m).sqrt()
}
