//! Independent reference values in a truncated harmonic-oscillator basis.
//!
//! Nothing here touches the hypervirial recurrences: the Hamiltonian is built
//! from ladder-operator matrix elements and either diagonalized (Rayleigh–Ritz)
//! or expanded by the matrix form of Rayleigh–Schrödinger theory.
//!
//! With the cubic term on, the potential is unbounded below and there are no
//! true bound states. Truncated-basis eigenvalues are then resonance-plateau
//! estimates, not variational bounds; they are reliable for small λ only.

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::series::EnergySeries;

/// First basis size tried by [`converged_energy`].
pub const PLATEAU_START_BASIS: usize = 32;

/// Largest basis size tried by [`converged_energy`].
pub const PLATEAU_MAX_BASIS: usize = 512;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Symmetric matrix stored by its upper bands: `bands[d][i] = A[i][i+d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSymmetricMatrix {
    dim: usize,
    bands: Vec<Vec<f64>>,
}

impl BandedSymmetricMatrix {
    pub fn zeros(dim: usize, bandwidth: usize) -> Self {
        let bands = (0..=bandwidth).map(|d| vec![0.0; dim.saturating_sub(d)]).collect();
        BandedSymmetricMatrix { dim, bands }
    }

    pub fn diagonal(values: Vec<f64>) -> Self {
        BandedSymmetricMatrix { dim: values.len(), bands: vec![values] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.bands.get(hi - lo).and_then(|band| band.get(lo)).copied().unwrap_or(0.0)
    }

    fn set(&mut self, i: usize, j: usize, value: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.bands[hi - lo][lo] = value;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j)).collect()).collect()
    }

    /// `self · other` for commuting arguments (powers of one matrix), whose
    /// product is again symmetric. Sums run over the truncated index range.
    fn commuting_product(&self, other: &Self) -> Self {
        let (wa, wb) = (self.bandwidth(), other.bandwidth());
        let width = (wa + wb).min(self.dim.saturating_sub(1));
        let mut out = Self::zeros(self.dim, width);
        for i in 0..self.dim {
            for j in i..(i + width + 1).min(self.dim) {
                let k_lo = i.saturating_sub(wa).max(j.saturating_sub(wb));
                let k_hi = (i + wa).min(j + wb).min(self.dim - 1);
                let value = (k_lo..=k_hi).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, value);
            }
        }
        out
    }

    pub fn power(&self, exponent: u32) -> Self {
        match exponent {
            0 => Self::diagonal(vec![1.0; self.dim]),
            _ => (1..exponent).fold(self.clone(), |acc, _| acc.commuting_product(self)),
        }
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, other: &Self, factor: f64) -> Self {
        let width = self.bandwidth().max(other.bandwidth());
        let mut out = Self::zeros(self.dim, width);
        for (d, band) in out.bands.iter_mut().enumerate() {
            for (i, slot) in band.iter_mut().enumerate() {
                *slot = self.get(i, i + d) + factor * other.get(i, i + d);
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let w = self.bandwidth();
        (0..self.dim)
            .map(|i| {
                let lo = i.saturating_sub(w);
                let hi = (i + w).min(self.dim - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }
}

/// Eigenvalues near the bottom of a truncated-basis spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub basis_size: usize,
    pub state: usize,
    /// Lowest `state + 1` eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// `|E_n(B) − E_n(B/2)|`.
    pub plateau_delta: f64,
    pub converged: bool,
}

impl SpectralResult {
    pub fn energy(&self) -> f64 {
        self.eigenvalues[self.state]
    }
}

/// `x = (a + a†)/√(2ω)`: `X[i][i+1] = √((i+1)/(2ω))`.
pub fn position_matrix(dim: usize, omega: f64) -> Result<BandedSymmetricMatrix> {
    if dim < 2 {
        return Err(Error::Domain(format!("position matrix needs at least 2 basis states, got {dim}")));
    }
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let mut x = BandedSymmetricMatrix::zeros(dim, 1);
    for i in 0..dim - 1 {
        x.set(i, i + 1, ((i + 1) as f64 / (2.0 * omega)).sqrt());
    }
    Ok(x)
}

/// `H = diag((i+½)ω) + ½λX² + c·λ²X³` with the powers of `X` formed by
/// products of the truncated position matrix.
pub fn hamiltonian_matrix(spec: &ModelSpec, lambda: f64, dim: usize) -> Result<BandedSymmetricMatrix> {
    if dim < 8 {
        return Err(Error::Domain(format!("Hamiltonian basis must have at least 8 states, got {dim}")));
    }
    let omega = spec.omega.to_f64();
    let x = position_matrix(dim, omega)?;
    let h0 = BandedSymmetricMatrix::diagonal((0..dim).map(|i| (i as f64 + 0.5) * omega).collect());
    let h = h0.add_scaled(&x.power(2), 0.5 * lambda);
    Ok(if spec.cubic { h.add_scaled(&x.power(3), lambda * lambda) } else { h })
}

/// The `count` smallest eigenvalues, ascending.
pub fn lowest_eigenvalues(h: &BandedSymmetricMatrix, count: usize) -> Result<Vec<f64>> {
    if count > h.dim() {
        return Err(Error::Domain(format!("asked for {count} eigenvalues of a {0}x{0} matrix", h.dim())));
    }
    let mut values = jacobi_eigenvalues(h.to_dense())?;
    values.truncate(count);
    Ok(values)
}

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    let norm = a.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();

    for sweep in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n).map(|p| (p + 1..n).map(|q| a[p][q] * a[p][q]).sum::<f64>()).sum();
        if off.sqrt() <= f64::EPSILON * norm {
            let mut values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
            values.sort_by(f64::total_cmp);
            return Ok(values);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p][p], a[q][q]);
                // negligible next to both diagonal entries: drop it
                let g = 100.0 * apq.abs();
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[p][q] = 0.0;
                    a[q][p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let (akp, akq) = (a[k][p], a[k][q]);
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[k][p] = new_kp;
                    a[p][k] = new_kp;
                    a[k][q] = new_kq;
                    a[q][k] = new_kq;
                }
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    Err(Error::SolverNonConvergence(MAX_JACOBI_SWEEPS))
}

/// Eigenvalue `n` of the truncated Hamiltonian, doubling the basis from 32
/// until successive sizes agree within `tol` or the basis would pass 512.
pub fn converged_energy(spec: &ModelSpec, lambda: f64, n: usize, tol: f64) -> Result<SpectralResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if n >= PLATEAU_START_BASIS {
        return Err(Error::Domain(format!("state {n} does not fit the starting basis of {PLATEAU_START_BASIS}")));
    }
    let solve = |dim| lowest_eigenvalues(&hamiltonian_matrix(spec, lambda, dim)?, n + 1);
    let mut basis = PLATEAU_START_BASIS;
    let mut previous = solve(basis)?;
    loop {
        let next = basis * 2;
        let current = solve(next)?;
        let delta = (current[n] - previous[n]).abs();
        if delta < tol || next * 2 > PLATEAU_MAX_BASIS {
            return Ok(SpectralResult {
                basis_size: next,
                state: n,
                eigenvalues: current,
                plateau_delta: delta,
                converged: delta < tol,
            });
        }
        basis = next;
        previous = current;
    }
}

/// Smallest basis [`rspt_coefficients`] accepts for state `n` to order `max_order`.
pub fn rspt_min_basis(n: usize, max_order: usize) -> usize {
    n + 3 * max_order + 10
}

/// Rayleigh–Schrödinger coefficients `E⁽⁰⁾..E⁽ᴷ⁾` by matrix recursion for
/// `H = H₀ + λW₁ + λ²W₂` (`W₁ = ½X²`, `W₂ = c·X³`) with intermediate
/// normalization `⟨n|ψ⁽ᵏ⁾⟩ = δ_{k0}`.
pub fn rspt_coefficients(spec: &ModelSpec, max_order: usize, dim: usize) -> Result<EnergySeries<f64>> {
    let n = spec.n;
    let required = rspt_min_basis(n, max_order);
    if dim < required {
        return Err(Error::Domain(format!(
            "RSPT to order {max_order} for n = {n} needs a basis of {required}, got {dim}"
        )));
    }
    let omega = spec.omega.to_f64();
    let x = position_matrix(dim, omega)?;
    let w1 = BandedSymmetricMatrix::zeros(dim, 0).add_scaled(&x.power(2), 0.5);
    let w2 = BandedSymmetricMatrix::zeros(dim, 0).add_scaled(&x.power(3), spec.cubic_factor() as f64);

    let mut psi: Vec<Vec<f64>> = vec![(0..dim).map(|i| if i == n { 1.0 } else { 0.0 }).collect()];
    let mut energies = vec![omega * (n as f64 + 0.5)];
    let zero = vec![0.0; dim];
    for k in 1..=max_order {
        let w1_psi = w1.mul_vec(&psi[k - 1]);
        let w2_psi = if k >= 2 { w2.mul_vec(&psi[k - 2]) } else { zero.clone() };
        let energy = w1_psi[n] + w2_psi[n];
        energies.push(energy);
        let next: Vec<f64> = (0..dim)
            .map(|i| {
                if i == n {
                    return 0.0;
                }
                let mixed: f64 = (1..=k).map(|j| energies[j] * psi[k - j][i]).sum();
                (mixed - w1_psi[i] - w2_psi[i]) / ((i as f64 - n as f64) * omega)
            })
            .collect();
        psi.push(next);
    }
    EnergySeries::new(energies, ModelSpec { max_order, ..spec.clone() })
}
