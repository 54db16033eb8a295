//! Lanczos short-time propagation `exp(-i H dt) |psi>`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hamiltonian::CompiledHamiltonian;
use super::state::{StateVector, NORM_TOL};
use super::tridiag::symmetric_tridiagonal_eigen;
use crate::error::{Error, Result};
use crate::numeric::{deterministic_csum, deterministic_sum};

/// Time step, Krylov dimension and convergence tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagatorConfig {
    pub dt: f64,
    /// Initial Krylov dimension.
    pub krylov_dim: usize,
    /// Largest dimension the adaptive extension may reach.
    pub max_krylov_dim: usize,
    /// Bound on the Lanczos residual estimate and on the norm drift.
    pub tolerance: f64,
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        PropagatorConfig { dt: 0.0025, krylov_dim: 12, max_krylov_dim: 30, tolerance: 1e-10 }
    }
}

impl PropagatorConfig {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::input(format!("dt must be positive, got {}", self.dt)));
        }
        if self.krylov_dim < 2 || self.krylov_dim > dim {
            return Err(Error::input(format!(
                "Krylov dimension must lie in 2..={dim}, got {}",
                self.krylov_dim
            )));
        }
        if self.max_krylov_dim < self.krylov_dim {
            return Err(Error::input("Krylov cap below the initial dimension"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::input("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Diagnostics of one propagation step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub krylov_dim: usize,
    pub residual: f64,
    /// `| ||psi(t+dt)|| - 1 |` before any renormalization.
    pub norm_drift: f64,
    pub renormalized: bool,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    deterministic_csum(a.len(), |i| a[i].conj() * b[i])
}

fn norm(a: &[Complex64]) -> f64 {
    deterministic_sum(a.len(), |i| a[i].norm_sqr()).sqrt()
}

fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    y.par_iter_mut().zip(x.par_iter()).for_each(|(yi, xi)| *yi -= a * xi);
}

/// First column of `exp(-i T dt)` for the tridiagonal `T`.
fn exp_first_column(alpha: &[f64], beta: &[f64], dt: f64) -> Result<Vec<Complex64>> {
    let (vals, vecs) = symmetric_tridiagonal_eigen(alpha, beta)?;
    let m = alpha.len();
    let phases: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(1.0, -vals[k] * dt) * vecs[0][k])
        .collect();
    Ok((0..m)
        .map(|r| (0..m).map(|k| phases[k] * vecs[r][k]).sum())
        .collect())
}

/// One step `psi -> exp(-i H dt) psi`.
///
/// Builds a Lanczos basis with full reorthogonalization, starting at
/// `cfg.krylov_dim` vectors and extending up to `cfg.max_krylov_dim` until
/// the residual estimate `beta_m |[exp(-i T dt)]_{m,1}|` drops below
/// `cfg.tolerance`.
pub fn krylov_step(h: &CompiledHamiltonian, psi: &StateVector, cfg: &PropagatorConfig) -> Result<(StateVector, StepInfo)> {
    if psi.n_sites() != h.n_sites() {
        return Err(Error::input(format!(
            "state has {} sites, Hamiltonian {}",
            psi.n_sites(),
            h.n_sites()
        )));
    }
    let dim = h.dim();
    cfg.validate(dim)?;
    let cap = cfg.max_krylov_dim.min(dim);
    let start_norm = psi.norm();
    if (start_norm - 1.0).abs() > NORM_TOL {
        return Err(Error::input(format!("Krylov step needs a normalized state, norm = {start_norm}")));
    }

    let zero = Complex64::new(0.0, 0.0);
    let mut basis: Vec<Vec<Complex64>> = vec![psi.amplitudes().to_vec()];
    let mut alpha: Vec<f64> = Vec::with_capacity(cap);
    let mut beta: Vec<f64> = Vec::with_capacity(cap);
    let mut w = vec![zero; dim];
    let mut coeffs: Vec<Complex64>;
    let mut residual;

    loop {
        let k = basis.len() - 1;
        h.apply_into(&basis[k], &mut w);
        let a = dot(&basis[k], &w).re;
        alpha.push(a);
        // Two passes of classical Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(&mut w, c, v);
            }
        }
        let b = norm(&w);
        let m = alpha.len();
        coeffs = exp_first_column(&alpha, &beta, cfg.dt)?;
        // Invariant subspace: the small exponential is exact.
        let breakdown = b <= 1e-14 * (1.0 + a.abs());
        residual = if breakdown { 0.0 } else { b * coeffs[m - 1].norm() };
        if breakdown || (m >= cfg.krylov_dim && residual < cfg.tolerance) {
            break;
        }
        if m >= cap {
            return Err(Error::Convergence { residual, dim: m, context: None });
        }
        beta.push(b);
        let inv = 1.0 / b;
        basis.push(w.par_iter().map(|x| x * inv).collect());
    }

    let m = alpha.len();
    let mut out = vec![zero; dim];
    out.par_iter_mut().enumerate().for_each(|(i, o)| {
        let mut acc = zero;
        for (v, c) in basis.iter().zip(&coeffs) {
            acc += v[i] * c;
        }
        *o = acc;
    });
    let drift = (norm(&out) - 1.0).abs();
    let mut next = StateVector::from_raw(psi.n_sites(), out)?;
    let renormalized = drift > cfg.tolerance;
    if renormalized {
        next = next.normalized()?;
    }
    Ok((next, StepInfo { krylov_dim: m, residual, norm_drift: drift, renormalized }))
}

/// Repeated Krylov steps under a fixed Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator {
    h: CompiledHamiltonian,
    cfg: PropagatorConfig,
}

impl Propagator {
    pub fn new(h: CompiledHamiltonian, cfg: PropagatorConfig) -> Result<Self> {
        cfg.validate(h.dim())?;
        Ok(Propagator { h, cfg })
    }

    pub fn config(&self) -> &PropagatorConfig {
        &self.cfg
    }

    pub fn hamiltonian(&self) -> &CompiledHamiltonian {
        &self.h
    }

    pub fn step(&self, psi: &StateVector) -> Result<(StateVector, StepInfo)> {
        krylov_step(&self.h, psi, &self.cfg)
    }

    /// Applies `n_steps` steps; convergence errors carry the failing time.
    pub fn evolve(&self, psi: &StateVector, n_steps: usize) -> Result<StateVector> {
        let mut cur = psi.clone();
        for s in 0..n_steps {
            cur = self
                .step(&cur)
                .map_err(|e| e.with_context(format!("t = {}", (s + 1) as f64 * self.cfg.dt)))?
                .0;
        }
        Ok(cur)
    }
}
