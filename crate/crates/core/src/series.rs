//! Rayleigh–Schrödinger coefficients from the hypervirial hierarchy.
//!
//! For `V = ½(ω² + λ)x² + c·λ²x³` the hypervirial theorem gives, for every
//! moment index `M ≥ 0`,
//!
//! ```text
//! E⟨x^M⟩ = (ω² + λ)·(M+2)/(2(M+1))·⟨x^{M+2}⟩ + c·λ²·(2M+5)/(2(M+1))·⟨x^{M+3}⟩
//!          − ⅛·M(M−1)·⟨x^{M−2}⟩
//! ```
//!
//! and Hellmann–Feynman gives `dE/dλ = ½⟨x²⟩ + 2cλ⟨x³⟩`. Expanding
//! `E = Σ E⁽ᵏ⁾λᵏ` and `⟨x^N⟩ = Σ A_N⁽ᵏ⁾λᵏ` and matching powers of λ turns
//! both into recurrences. Solving the moment relation for its highest index
//! lets the table grow upward in `N` from the normalization `A_0⁽ᵏ⁾ = δ_{k0}`.
//! Odd moments are seeded by the force balance `⟨V'⟩ = 0`:
//!
//! ```text
//! ω²A_1⁽ᵏ⁾ + A_1⁽ᵏ⁻¹⁾ + 3c·A_2⁽ᵏ⁻²⁾ = 0
//! ```
//!
//! Indices below zero denote absent terms and contribute zero.

use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::model::{ModelSpec, Omega};
use crate::scalar::{powi, sum, Scalar, SeriesScalar};

/// Triangular table of moment coefficients `A_N⁽ᵏ⁾`.
///
/// Order `k` holds moments `0..=n_max(k)` with `n_max(k) = top − k`.
/// Entries are appended in hierarchical order and never modified.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable<S> {
    rows: Vec<Vec<S>>,
    top: usize,
}

impl<S: Scalar> CoefficientTable<S> {
    /// Empty table whose extent at order `k` is `top − k`.
    pub fn new(top: usize) -> Self {
        CoefficientTable { rows: Vec::new(), top }
    }

    /// Extent used for an energy series through order `max_order`.
    ///
    /// The only dependency that raises the moment index is `A_{N+1}` two
    /// orders down, so a slope-one bound suffices; `+3` covers the offsets
    /// of `A_3` in the energy step and `A_{N+1}` in the moment step.
    pub fn for_series(max_order: usize) -> Self {
        Self::new(max_order + 3)
    }

    pub fn n_max(&self, order: usize) -> usize {
        self.top.saturating_sub(order)
    }

    /// Number of orders with at least one stored entry.
    pub fn orders(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, order: usize) -> &[S] {
        self.rows.get(order).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn get(&self, moment: usize, order: usize) -> Option<&S> {
        self.rows.get(order)?.get(moment)
    }

    /// All stored `(N, k, A_N⁽ᵏ⁾)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.rows.iter().enumerate().flat_map(|(k, row)| row.iter().enumerate().map(move |(n, v)| (n, k, v)))
    }

    /// `A_N⁽ᵏ⁾` with negative indices read as zero.
    fn at(&self, moment: i64, order: i64) -> Result<S> {
        if moment < 0 || order < 0 {
            return Ok(S::zero());
        }
        let (moment, order) = (moment as usize, order as usize);
        self.get(moment, order).cloned().ok_or(Error::Sequencing { moment, order })
    }

    fn store(&mut self, moment: usize, order: usize, value: S) -> Result<()> {
        if order == self.rows.len() && moment == 0 {
            self.rows.push(Vec::new());
        }
        if moment > self.n_max(order) {
            return Err(Error::Domain(format!(
                "A_{moment}^({order}) lies outside the table extent {}",
                self.n_max(order)
            )));
        }
        let row = self.rows.get_mut(order).ok_or(Error::Sequencing { moment: 0, order })?;
        if row.len() != moment {
            // Hierarchical order violated: either a predecessor is missing or
            // the entry already exists.
            return Err(Error::Sequencing { moment: row.len(), order });
        }
        row.push(value);
        Ok(())
    }
}

/// Energy coefficients `E⁽⁰⁾..E⁽ᴷ⁾` and the model that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries<S> {
    coefficients: Vec<S>,
    spec: ModelSpec,
}

impl<S: Scalar> EnergySeries<S> {
    pub fn new(coefficients: Vec<S>, spec: ModelSpec) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Domain("an energy series needs at least E^(0)".into()));
        }
        Ok(EnergySeries { coefficients, spec })
    }

    pub fn coefficients(&self) -> &[S] {
        &self.coefficients
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// Highest stored order `K`.
    pub fn max_order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coefficients.iter().map(Scalar::to_f64).collect()
    }
}

impl<S: SeriesScalar> EnergySeries<S> {
    /// Coefficients as reduced `(numerator, denominator)` pairs.
    pub fn exact_pairs(&self) -> Option<Vec<(BigInt, BigInt)>> {
        self.coefficients.iter().map(|c| c.to_exact().map(|r| (r.numer().clone(), r.denom().clone()))).collect()
    }
}

/// `ω(n + ½)`.
pub fn unperturbed_energy<S: SeriesScalar>(n: usize, omega: &Omega) -> S {
    let half_odd = BigRational::new(BigInt::from(2 * n + 1), BigInt::from(2));
    S::from_rational(&(omega.exact() * half_odd))
}

fn omega_squared<S: SeriesScalar>(spec: &ModelSpec) -> S {
    let omega: S = spec.omega.to_scalar();
    omega.clone() * omega
}

fn check_mode<S: SeriesScalar>(spec: &ModelSpec) -> Result<()> {
    if spec.arithmetic_mode != S::MODE {
        return Err(Error::ModeMismatch { requested: spec.arithmetic_mode.name(), actual: S::MODE.name() });
    }
    Ok(())
}

/// Order-zero moments `A_N⁽⁰⁾` for `0 ≤ N ≤ n_max`, stepping upward:
/// `A_{N+2} = 2(N+1)/((N+2)ω²)·[E⁽⁰⁾A_N + ⅛N(N−1)A_{N−2}]`.
pub fn harmonic_moment_table<S: SeriesScalar>(spec: &ModelSpec, n_max: usize) -> Result<CoefficientTable<S>> {
    spec.validate()?;
    let energy: S = unperturbed_energy(spec.n, &spec.omega);
    let omega_sq: S = omega_squared(spec);
    let mut table = CoefficientTable::new(n_max);
    table.store(0, 0, S::one())?;
    for moment in 1..=n_max {
        let value = if moment % 2 == 1 {
            S::zero()
        } else {
            let m = (moment - 2) as i64;
            let bracket = energy.clone() * table.at(m, 0)? + S::from_ratio(m * (m - 1), 8) * table.at(m - 2, 0)?;
            S::from_ratio(2 * (m + 1), m + 2) / omega_sq.clone() * bracket
        };
        table.store(moment, 0, value)?;
    }
    Ok(table)
}

/// `A_1⁽ᵏ⁾ = −[A_1⁽ᵏ⁻¹⁾ + 3c·A_2⁽ᵏ⁻²⁾]/ω²`, stored into `table`.
pub fn seed_odd_moment<S: SeriesScalar>(order: usize, table: &mut CoefficientTable<S>, spec: &ModelSpec) -> Result<S> {
    let k = order as i64;
    let value = -(table.at(1, k - 1)? + S::from_ratio(3 * spec.cubic_factor(), 1) * table.at(2, k - 2)?)
        / omega_squared::<S>(spec);
    table.at(0, k)?;
    table.store(1, order, value.clone())?;
    Ok(value)
}

/// `E⁽ᵏ⁾ = [½A_2⁽ᵏ⁻¹⁾ + 2c·A_3⁽ᵏ⁻²⁾]/k` for `k ≥ 1`.
pub fn energy_coefficient<S: SeriesScalar>(order: usize, table: &CoefficientTable<S>, spec: &ModelSpec) -> Result<S> {
    if order == 0 {
        return Err(Error::Domain("E^(0) is the unperturbed energy, not a Hellmann-Feynman step".into()));
    }
    let k = order as i64;
    let quadratic = S::from_ratio(1, 2) * table.at(2, k - 1)?;
    let cubic = S::from_ratio(2 * spec.cubic_factor(), 1) * table.at(3, k - 2)?;
    Ok((quadratic + cubic) / S::from_ratio(k, 1))
}

/// `A_N⁽ᵏ⁾` for `N ≥ 2`, from the order-`k` moment relation at `M = N − 2`
/// solved for its highest unknown, stored into `table`.
///
/// `energies` must hold at least `E⁽⁰⁾..E⁽ᵏ⁾`.
pub fn moment_coefficient<S: SeriesScalar>(
    moment: usize,
    order: usize,
    table: &mut CoefficientTable<S>,
    energies: &[S],
    spec: &ModelSpec,
) -> Result<S> {
    if moment < 2 {
        return Err(Error::Domain(format!("moment_coefficient needs N >= 2, got {moment}")));
    }
    if energies.len() <= order {
        return Err(Error::Domain(format!("energies through order {order} required, have {}", energies.len())));
    }
    let (n, k, m) = (moment as i64, order as i64, moment as i64 - 2);
    let mut coupled = Vec::with_capacity(order + 1);
    for (j, e) in energies[..=order].iter().enumerate() {
        coupled.push(e.clone() * table.at(m, k - j as i64)?);
    }
    let bracket = sum(coupled) + S::from_ratio(m * (m - 1), 8) * table.at(m - 2, k)?
        - S::from_ratio(m + 2, 2 * (m + 1)) * table.at(n, k - 1)?
        - S::from_ratio(spec.cubic_factor() * (2 * m + 5), 2 * (m + 1)) * table.at(n + 1, k - 2)?;
    let value = S::from_ratio(2 * (m + 1), m + 2) / omega_squared::<S>(spec) * bracket;
    table.store(moment, order, value.clone())?;
    Ok(value)
}

/// Energy series through `spec.max_order` and the moment table behind it.
///
/// Per order `k`: `E⁽ᵏ⁾` first, then `A_0⁽ᵏ⁾ = δ_{k0}`, `A_1⁽ᵏ⁾`, and
/// `A_N⁽ᵏ⁾` for `N = 2..=n_max(k)`.
pub fn compute_series<S: SeriesScalar>(spec: &ModelSpec) -> Result<(EnergySeries<S>, CoefficientTable<S>)> {
    spec.validate()?;
    check_mode::<S>(spec)?;
    let max_order = spec.max_order;
    let mut table = CoefficientTable::for_series(max_order);
    let mut energies = Vec::with_capacity(max_order + 1);
    for order in 0..=max_order {
        let energy =
            if order == 0 { unperturbed_energy(spec.n, &spec.omega) } else { energy_coefficient(order, &table, spec)? };
        energies.push(energy);
        table.store(0, order, if order == 0 { S::one() } else { S::zero() })?;
        seed_odd_moment(order, &mut table, spec)?;
        for moment in 2..=table.n_max(order) {
            moment_coefficient(moment, order, &mut table, &energies, spec)?;
        }
    }
    Ok((EnergySeries::new(energies, spec.clone())?, table))
}

/// Left minus right side of the order-`k` moment relation at index `M`.
///
/// Written out independently of [`moment_coefficient`]; zero for every
/// `M ≤ n_max(k) − 3` in a correctly built table.
pub fn hypervirial_residual<S: SeriesScalar>(
    table: &CoefficientTable<S>,
    energies: &[S],
    index: usize,
    order: usize,
    spec: &ModelSpec,
) -> Result<S> {
    let (m, k) = (index as i64, order as i64);
    let mut lhs = S::zero();
    for j in 0..=order {
        lhs = lhs + energies[j].clone() * table.at(m, k - j as i64)?;
    }
    let half_ratio = S::from_ratio(m + 2, 2 * (m + 1));
    let rhs = half_ratio.clone() * omega_squared::<S>(spec) * table.at(m + 2, k)?
        + half_ratio * table.at(m + 2, k - 1)?
        + S::from_ratio(spec.cubic_factor() * (2 * m + 5), 2 * (m + 1)) * table.at(m + 3, k - 2)?
        - S::from_ratio(m * (m - 1), 8) * table.at(m - 2, k)?;
    Ok(lhs - rhs)
}

/// Residuals at every `(M, k)` the table fully determines.
pub fn all_residuals<S: SeriesScalar>(
    table: &CoefficientTable<S>,
    series: &EnergySeries<S>,
) -> Result<Vec<((usize, usize), S)>> {
    let mut out = Vec::new();
    for order in 0..=series.max_order() {
        let Some(last) = table.n_max(order).checked_sub(3) else { continue };
        for index in 0..=last {
            let r = hypervirial_residual(table, series.coefficients(), index, order, series.spec())?;
            out.push(((index, order), r));
        }
    }
    Ok(out)
}

/// `Σ_{k≤m} E⁽ᵏ⁾λᵏ` in double precision.
pub fn partial_sum<S: Scalar>(series: &EnergySeries<S>, lambda: f64, order: usize) -> Result<f64> {
    if order > series.max_order() {
        return Err(Error::Domain(format!(
            "partial sum to order {order} requested from a series of order {}",
            series.max_order()
        )));
    }
    Ok(series.coefficients()[..=order].iter().rev().fold(0.0, |acc, c| acc * lambda + c.to_f64()))
}

/// `|E⁽ᵏ⁾ / E⁽ᵏ⁻¹⁾|` for `k = 1..=K`; unbounded growth signals a divergent
/// series. Infinite where the previous coefficient vanishes.
pub fn growth_ratios<S: Scalar>(series: &EnergySeries<S>) -> Vec<f64> {
    series.coefficients().windows(2).map(|w| (w[1].to_f64() / w[0].to_f64()).abs()).collect()
}

/// A closed fourth-order energy formula, kept for discrepancy reporting only.
/// Its λ³ and λ⁴ brackets disagree with the recurrences.
pub fn eq13_reference(n: usize, omega: f64, lambda: f64) -> f64 {
    let n = n as f64;
    let h = n + 0.5;
    let sq = 4.0 * n * n + 4.0 * n + 1.0;
    omega * h + lambda / (2.0 * omega) * h
        - lambda.powi(2) / (8.0 * omega.powi(3)) * h
        - lambda.powi(3) / omega.powi(4) * (5.0 / (96.0 * omega) * (2.0 * n + 1.0) + 2.0 / 3.0 * sq)
        + lambda.powi(4) / (4.0 * omega.powi(4))
            * (25.0 / (96.0 * omega.powi(3)) * h
                + 23.0 / (12.0 * omega.powi(2)) * sq
                + 3.5 * (2.0 * n * n + 2.0 * n + 1.0))
}

/// `ωᵖ` as a scalar, for closed forms in tests and oracles.
pub fn omega_power<S: SeriesScalar>(omega: &Omega, exp: i32) -> S {
    let w: S = omega.to_scalar();
    let p = powi(&w, exp.unsigned_abs());
    if exp < 0 {
        S::one() / p
    } else {
        p
    }
}
