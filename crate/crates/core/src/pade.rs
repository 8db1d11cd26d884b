//! `[N,M]` Padé approximants `E⁽⁰⁾·(1 + Σpᵢλⁱ)/(1 + Σqⱼλʲ)` with numerator
//! degree `M` and denominator degree `N`, matching the series through λ^{N+M}.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Samples used by the sign-change scan in [`real_poles_in`].
pub const POLE_SCAN_SAMPLES: usize = 10_000;

/// Absolute width at which pole bisection stops.
pub const POLE_BISECTION_TOLERANCE: f64 = 1e-12;

/// Default `|Q(λ)|` below which an evaluation is treated as pole-contaminated.
pub const DEFAULT_POLE_THRESHOLD: f64 = 1e-3;

/// Degrees of an approximant, written `[N,M]` (denominator first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PadeOrder {
    pub denominator: usize,
    pub numerator: usize,
}

impl PadeOrder {
    pub fn new(denominator: usize, numerator: usize) -> Self {
        PadeOrder { denominator, numerator }
    }

    /// Highest series order the approximant reproduces.
    pub fn matched_order(&self) -> usize {
        self.denominator + self.numerator
    }
}

impl fmt::Display for PadeOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.denominator, self.numerator)
    }
}

/// Parses `N:M`.
impl FromStr for PadeOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("Padé order must look like N:M, got {s:?}"));
        let (n, m) = s.trim().split_once(':').ok_or_else(bad)?;
        Ok(PadeOrder::new(n.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant<S> {
    pub leading: S,
    /// `p_1..p_M`.
    pub numerator: Vec<S>,
    /// `q_1..q_N`; the constant term is 1.
    pub denominator: Vec<S>,
    pub order: PadeOrder,
}

impl<S: Scalar> PadeApproximant<S> {
    /// Numerator coefficients `1, p_1, .., p_M` in double precision.
    pub fn numerator_f64(&self) -> Vec<f64> {
        std::iter::once(1.0).chain(self.numerator.iter().map(Scalar::to_f64)).collect()
    }

    /// Denominator coefficients `1, q_1, .., q_N` in double precision.
    pub fn denominator_f64(&self) -> Vec<f64> {
        std::iter::once(1.0).chain(self.denominator.iter().map(Scalar::to_f64)).collect()
    }

    pub fn denominator_at(&self, lambda: f64) -> f64 {
        horner(&self.denominator_f64(), lambda)
    }
}

/// Value of an approximant and `|Q(λ)|` at the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadeValue {
    pub value: f64,
    pub denominator_magnitude: f64,
}

impl PadeValue {
    pub fn is_pole_contaminated(&self, threshold: f64) -> bool {
        self.denominator_magnitude < threshold
    }
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Builds the `[N,M]` approximant from `E⁽⁰⁾..E⁽ᴺ⁺ᴹ⁾`.
///
/// With `e_k = E⁽ᵏ⁾/E⁽⁰⁾` the denominator solves
/// `Σ_{j=0}^{N} q_j e_{k−j} = 0` for `k = M+1..M+N` (`q_0 = 1`), and then
/// `p_i = Σ_{j≤min(i,N)} q_j e_{i−j}`. A rank-deficient but consistent system
/// takes its free `q_j` as zero; an inconsistent one has no approximant with
/// unit constant denominator and is reported as defective.
pub fn build_pade<S: Scalar>(series: &[S], order: PadeOrder) -> Result<PadeApproximant<S>> {
    let PadeOrder { denominator: n, numerator: m } = order;
    if series.len() < n + m + 1 {
        return Err(Error::Domain(format!("{order} needs {} series coefficients, have {}", n + m + 1, series.len())));
    }
    let leading = series[0].clone();
    if leading.is_zero() {
        return Err(Error::Domain("Padé normalization needs a non-zero E^(0)".into()));
    }
    let e: Vec<S> = series[..=n + m].iter().map(|c| c.clone() / leading.clone()).collect();
    let e_at = |k: i64| if k < 0 { S::zero() } else { e[k as usize].clone() };

    let matrix: Vec<Vec<S>> =
        (0..n).map(|row| (1..=n).map(|j| e_at((m + 1 + row) as i64 - j as i64)).collect()).collect();
    let rhs: Vec<S> = (0..n).map(|row| -e_at((m + 1 + row) as i64)).collect();
    let q = solve_full_pivot(matrix, rhs).ok_or(Error::DefectiveApproximant { denominator: n, numerator: m })?;

    let q_at = |j: usize| if j == 0 { S::one() } else { q[j - 1].clone() };
    let numerator =
        (1..=m).map(|i| (0..=i.min(n)).fold(S::zero(), |acc, j| acc + q_at(j) * e_at((i - j) as i64))).collect();
    Ok(PadeApproximant { leading, numerator, denominator: q, order })
}

/// Solves `a·x = b` by Gaussian elimination with full pivoting.
///
/// Returns `None` when the system is inconsistent. Free variables of a
/// consistent rank-deficient system are set to zero.
fn solve_full_pivot<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    let scale = a.iter().flatten().chain(b.iter()).map(Scalar::magnitude).fold(0.0, f64::max);
    let mut columns: Vec<usize> = (0..n).collect();
    let mut rank = n;

    for step in 0..n {
        let mut pivot: Option<(usize, usize, f64)> = None;
        for (r, row) in a.iter().enumerate().skip(step) {
            for (c, v) in row.iter().enumerate().skip(step) {
                if v.negligible(scale) {
                    continue;
                }
                let mag = v.magnitude();
                if pivot.is_none_or(|(_, _, best)| mag > best) {
                    pivot = Some((r, c, mag));
                }
            }
        }
        let Some((pr, pc, _)) = pivot else {
            rank = step;
            break;
        };
        a.swap(step, pr);
        b.swap(step, pr);
        if pc != step {
            for row in a.iter_mut() {
                row.swap(step, pc);
            }
            columns.swap(step, pc);
        }
        for r in step + 1..n {
            if a[r][step].is_zero() {
                continue;
            }
            let factor = a[r][step].clone() / a[step][step].clone();
            for c in step..n {
                let delta = factor.clone() * a[step][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
            let delta = factor * b[step].clone();
            b[r] = b[r].clone() - delta;
        }
    }

    if b[rank..].iter().any(|v| !v.negligible(scale)) {
        return None;
    }

    let mut permuted = vec![S::zero(); n];
    for r in (0..rank).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..rank {
            acc = acc - a[r][c].clone() * permuted[c].clone();
        }
        permuted[r] = acc / a[r][r].clone();
    }
    let mut x = vec![S::zero(); n];
    for (slot, &col) in columns.iter().enumerate() {
        x[col] = permuted[slot].clone();
    }
    Some(x)
}

/// Evaluates the approximant at `lambda` in double precision.
pub fn evaluate_pade<S: Scalar>(approx: &PadeApproximant<S>, lambda: f64) -> Result<PadeValue> {
    let denominator = approx.denominator_at(lambda);
    if denominator == 0.0 {
        return Err(Error::PoleAtEvaluationPoint(lambda));
    }
    let numerator = horner(&approx.numerator_f64(), lambda);
    Ok(PadeValue { value: approx.leading.to_f64() * numerator / denominator, denominator_magnitude: denominator.abs() })
}

/// `Σ_j q_j E⁽ᵏ⁻ʲ⁾ − E⁽⁰⁾p_k` for `k = 0..=N+M` (with `p_0 = 1`, `p_k = 0`
/// past `M`): the order-by-order Taylor mismatch of `Q·E − E⁽⁰⁾P`.
pub fn taylor_residuals<S: Scalar>(approx: &PadeApproximant<S>, series: &[S]) -> Result<Vec<S>> {
    let matched = approx.order.matched_order();
    if series.len() < matched + 1 {
        return Err(Error::Domain(format!(
            "{} residuals need {} series coefficients, have {}",
            approx.order,
            matched + 1,
            series.len()
        )));
    }
    let q_at = |j: usize| if j == 0 { S::one() } else { approx.denominator[j - 1].clone() };
    let p_at = |i: usize| match i {
        0 => S::one(),
        i if i <= approx.numerator.len() => approx.numerator[i - 1].clone(),
        _ => S::zero(),
    };
    Ok((0..=matched)
        .map(|k| {
            let lhs =
                (0..=k.min(approx.denominator.len())).fold(S::zero(), |acc, j| acc + q_at(j) * series[k - j].clone());
            lhs - approx.leading.clone() * p_at(k)
        })
        .collect())
}

/// Real roots of the denominator in `[lo, hi]`, ascending.
///
/// Dense sign-change scan refined by bisection; a root of even multiplicity
/// that never changes sign is only found if it lands on a sample point.
pub fn real_poles_in<S: Scalar>(approx: &PadeApproximant<S>, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::Domain(format!("pole scan needs lo < hi, got [{lo}, {hi}]")));
    }
    let q = approx.denominator_f64();
    let step = (hi - lo) / POLE_SCAN_SAMPLES as f64;
    let at = |i: usize| if i == POLE_SCAN_SAMPLES { hi } else { lo + step * i as f64 };

    let mut roots = Vec::new();
    let mut prev_x = lo;
    let mut prev_q = horner(&q, lo);
    if prev_q == 0.0 {
        roots.push(lo);
    }
    for i in 1..=POLE_SCAN_SAMPLES {
        let x = at(i);
        let qx = horner(&q, x);
        if qx == 0.0 {
            roots.push(x);
        } else if prev_q != 0.0 && (prev_q < 0.0) != (qx < 0.0) {
            roots.push(bisect(&q, prev_x, x, prev_q));
        }
        prev_x = x;
        prev_q = qx;
    }
    Ok(roots)
}

fn bisect(poly: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > POLE_BISECTION_TOLERANCE {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = horner(poly, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Smallest `|Q(λ)|` on the scan grid of `[lo, hi]`, with its location.
pub fn denominator_minimum<S: Scalar>(approx: &PadeApproximant<S>, lo: f64, hi: f64) -> (f64, f64) {
    let q = approx.denominator_f64();
    let step = (hi - lo) / POLE_SCAN_SAMPLES as f64;
    (0..=POLE_SCAN_SAMPLES)
        .map(|i| {
            let x = lo + step * i as f64;
            (x, horner(&q, x).abs())
        })
        .fold((lo, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}
