//! Truncated time-Taylor jets of spatial fields.
//!
//! A `JetField` stores the snapshot (F, dF/dt, ..., d^J F/dt^J) of a
//! space-time function at a fixed time, each entry a real field on a common
//! grid. The algebra below (Leibniz products, spatial derivatives, time
//! shifts, the wave operator) is what turns an equation of motion into a jet
//! closure: all time derivatives of a solution become polynomial expressions
//! in the lowest-order data.

use crate::error::{Error, Result};
use crate::field::{dealias, dealiased_product, Field, Space, C64};
use crate::grid::GridSpec;

#[derive(Debug, Clone)]
pub struct JetField {
    grid: GridSpec,
    /// entries[k] = k-th time derivative at the snapshot time, physical space.
    entries: Vec<Field>,
}

/// Binomial coefficient as f64; exact for the jet depths used here.
fn binomial(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

impl JetField {
    pub fn new(entries: Vec<Field>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::ValidationError("jet needs at least one entry".into()))?;
        let grid = first.grid;
        for e in &entries {
            grid.ensure_same(&e.grid, "jet entries")?;
        }
        let entries = entries.iter().map(|e| e.to_physical()).collect();
        Ok(JetField { grid, entries })
    }

    pub fn zeros(grid: GridSpec, order: usize) -> Self {
        JetField {
            grid,
            entries: (0..=order)
                .map(|_| Field::zeros(grid, Space::Physical))
                .collect(),
        }
    }

    /// Spatially constant jet; handy for closed-form cross-checks.
    pub fn constant(grid: GridSpec, values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ValidationError("jet needs at least one entry".into()));
        }
        let entries = values
            .iter()
            .map(|&v| {
                let mut f = Field::zeros(grid, Space::Physical);
                for d in f.data.iter_mut() {
                    *d = C64::new(v, 0.0);
                }
                f
            })
            .collect();
        Ok(JetField { grid, entries })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// Highest retained time derivative.
    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    /// Number of stored entries (order + 1).
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, k: usize) -> &Field {
        &self.entries[k]
    }

    pub fn entries(&self) -> &[Field] {
        &self.entries
    }

    pub fn require_depth(&self, need: usize, what: &str) -> Result<()> {
        if self.depth() < need {
            return Err(Error::InsufficientJetDepth {
                have: self.depth(),
                need,
                what: what.into(),
            });
        }
        Ok(())
    }

    pub fn truncated(&self, order: usize) -> Result<JetField> {
        self.require_depth(order + 1, "truncate")?;
        Ok(JetField {
            grid: self.grid,
            entries: self.entries[..=order].to_vec(),
        })
    }

    /// Replace entry k (converted to physical space).
    pub fn set_entry(&mut self, k: usize, f: &Field) -> Result<()> {
        self.grid.ensure_same(&f.grid, "jet set_entry")?;
        self.entries[k] = f.to_physical();
        Ok(())
    }

    /// Append one more derivative at the top of the jet.
    pub fn push_entry(&mut self, f: &Field) -> Result<()> {
        self.grid.ensure_same(&f.grid, "jet push_entry")?;
        self.entries.push(f.to_physical());
        Ok(())
    }

    pub fn scale(&self, c: f64) -> JetField {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            e.scale(c);
        }
        out
    }

    /// self + c * other, truncated to the shorter of the two jets.
    pub fn add_scaled(&self, other: &JetField, c: f64) -> Result<JetField> {
        self.grid.ensure_same(&other.grid, "jet add")?;
        let order = self.order().min(other.order());
        let mut entries = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut e = self.entries[k].clone();
            e.add_scaled(&other.entries[k], c)?;
            entries.push(e);
        }
        Ok(JetField {
            grid: self.grid,
            entries,
        })
    }

    /// Leibniz product, truncated to the shorter jet. Every pointwise product
    /// is formed from inner-third band-limited factors and the accumulated
    /// entry is re-truncated and re-symmetrized, matching the dealiasing used
    /// by the integrator.
    pub fn multiply(&self, other: &JetField) -> Result<JetField> {
        self.grid.ensure_same(&other.grid, "jet multiply")?;
        let order = self.order().min(other.order());
        let band = |f: &Field| -> Field {
            let mut g = f.to_fourier();
            dealias(&g.grid, &mut g.data);
            g.to_physical()
        };
        let a: Vec<Field> = self.entries.iter().take(order + 1).map(band).collect();
        let b: Vec<Field> = other.entries.iter().take(order + 1).map(band).collect();
        let mut entries = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = Field::zeros(self.grid, Space::Physical);
            for j in 0..=k {
                let c = binomial(k, j);
                for ((v, x), y) in acc.data.iter_mut().zip(&a[j].data).zip(&b[k - j].data) {
                    *v += c * x * y;
                }
            }
            let mut f = acc.to_fourier();
            dealias(&f.grid, &mut f.data);
            f.hermitian_symmetrize();
            entries.push(f.to_physical());
        }
        Ok(JetField {
            grid: self.grid,
            entries,
        })
    }

    /// Entrywise spatial derivative along one axis.
    pub fn dx(&self, axis: usize) -> Result<JetField> {
        if axis >= self.grid.dim {
            return Err(Error::ValidationError(format!(
                "axis {axis} out of range for dim {}",
                self.grid.dim
            )));
        }
        let mut entries = Vec::with_capacity(self.depth());
        for e in &self.entries {
            let mut f = e.to_fourier();
            f.apply_multiplier(|rho| C64::new(0.0, rho[axis]))?;
            entries.push(f.to_physical());
        }
        Ok(JetField {
            grid: self.grid,
            entries,
        })
    }

    /// Entrywise Laplacian.
    pub fn laplacian(&self) -> JetField {
        let mut entries = Vec::with_capacity(self.depth());
        for e in &self.entries {
            let mut f = e.to_fourier();
            f.apply_multiplier(|rho| {
                let r2: f64 = rho.iter().map(|r| r * r).sum();
                C64::new(-r2, 0.0)
            })
            .expect("fourier by construction");
            entries.push(f.to_physical());
        }
        JetField {
            grid: self.grid,
            entries,
        }
    }

    /// Shift by `count` time derivatives, dropping the lowest entries.
    pub fn dt(&self, count: usize) -> Result<JetField> {
        self.require_depth(count + 1, "time derivative")?;
        Ok(JetField {
            grid: self.grid,
            entries: self.entries[count..].to_vec(),
        })
    }

    /// Wave operator -d^2/dt^2 + Laplacian, costing two entries of depth.
    pub fn dalembert(&self) -> Result<JetField> {
        self.require_depth(3, "wave operator")?;
        let shifted = self.dt(2)?;
        let lap = self.truncated(self.order() - 2)?.laplacian();
        shifted.scale(-1.0).add_scaled(&lap, 1.0)
    }

    /// Taylor-polynomial evaluation at time offset t from the snapshot.
    pub fn eval(&self, t: f64) -> Field {
        let mut out = Field::zeros(self.grid, Space::Physical);
        let mut w = 1.0; // t^k / k!
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                w *= t / k as f64;
            }
            out.add_scaled(e, w).expect("same grid by construction");
        }
        out
    }

    /// Product of two entry fields outside the jet structure, with the same
    /// dealiasing discipline as `multiply`.
    pub fn product_field(a: &Field, b: &Field) -> Result<Field> {
        dealiased_product(a, b)
    }
}
