use std::fmt;
use std::thread;

use crate::error::{Error, Result};
use crate::model::{ArithmeticMode, ModelSpec};
use crate::oracle::{converged_energy, rspt_coefficients, rspt_min_basis};
use crate::pade::{build_pade, evaluate_pade, PadeApproximant, PadeOrder};
use crate::scalar::{Extended, Rational, Scalar, SeriesScalar};
use crate::series::{compute_series, eq13_reference, partial_sum, EnergySeries};

use super::config::{OracleMode, SweepConfig};

/// Plateau tolerance for the variational oracle.
pub const ORACLE_PLATEAU_TOLERANCE: f64 = 1e-10;

/// Smallest basis used by the RSPT oracle.
pub const RSPT_ORACLE_BASIS: usize = 80;

/// Order of the `E[4]` column.
pub const TRUNCATED_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellFlag {
    Ok,
    Defective,
    PoleContaminated,
}

impl CellFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            CellFlag::Ok => "ok",
            CellFlag::Defective => "defective",
            CellFlag::PoleContaminated => "pole-contaminated",
        }
    }
}

impl fmt::Display for CellFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PadeCell {
    pub order: PadeOrder,
    pub value: Option<f64>,
    pub denominator_magnitude: Option<f64>,
    pub flag: CellFlag,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCell {
    pub value: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub lambda: f64,
    /// Partial sum through `min(4, K)`.
    pub partial_sum_4: f64,
    pub pade: Vec<PadeCell>,
    pub eq13: f64,
    pub oracle: Option<OracleCell>,
    /// RSPT partial sum when the oracle mode is `both`.
    pub rspt_sum: Option<f64>,
    /// Largest gap among `E[4]`, the Padé values and the oracle values.
    pub max_discrepancy: f64,
}

impl ResultRow {
    pub fn is_anomalous(&self) -> bool {
        self.pade.iter().any(|cell| cell.flag != CellFlag::Ok)
    }

    pub fn pade_cell(&self, order: PadeOrder) -> Option<&PadeCell> {
        self.pade.iter().find(|cell| cell.order == order)
    }
}

fn spec_for<S: SeriesScalar>(config: &SweepConfig, n: usize) -> ModelSpec {
    ModelSpec { omega: config.omega.clone(), n, cubic: config.cubic, max_order: config.order, arithmetic_mode: S::MODE }
}

/// Energy series for every configured state, exact arithmetic.
pub fn exact_series(config: &SweepConfig) -> Result<Vec<EnergySeries<Rational>>> {
    config
        .states
        .iter()
        .map(|&n| compute_series::<Rational>(&spec_for::<Rational>(config, n)).map(|(series, _)| series))
        .collect()
}

/// Rows ordered by `(n, λ)` in configuration order. Padé defects, poles and
/// unconverged oracles are recorded in their cells, never raised.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ResultRow>> {
    config.validate().map_err(|e| Error::Domain(e.to_string()))?;
    let per_state: Vec<Result<Vec<ResultRow>>> = thread::scope(|scope| {
        let handles: Vec<_> = config
            .states
            .iter()
            .map(|&n| {
                scope.spawn(move || match config.precision {
                    ArithmeticMode::ExactRational => state_rows::<Rational>(config, n),
                    ArithmeticMode::ExtendedFloat => state_rows::<Extended>(config, n),
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let mut rows = Vec::new();
    for state in per_state {
        rows.extend(state?);
    }
    Ok(rows)
}

/// Evaluates one Padé cell and assigns its flag.
pub fn classify_cell<S: Scalar>(
    order: PadeOrder,
    built: &Result<PadeApproximant<S>>,
    lambda: f64,
    pole_threshold: f64,
) -> PadeCell {
    let Ok(approx) = built else {
        return PadeCell { order, value: None, denominator_magnitude: None, flag: CellFlag::Defective };
    };
    match evaluate_pade(approx, lambda) {
        Ok(v) => PadeCell {
            order,
            value: Some(v.value),
            denominator_magnitude: Some(v.denominator_magnitude),
            flag: if v.is_pole_contaminated(pole_threshold) { CellFlag::PoleContaminated } else { CellFlag::Ok },
        },
        Err(_) => PadeCell { order, value: None, denominator_magnitude: Some(0.0), flag: CellFlag::PoleContaminated },
    }
}

fn state_rows<S: SeriesScalar>(config: &SweepConfig, n: usize) -> Result<Vec<ResultRow>> {
    let spec = spec_for::<S>(config, n);
    let (series, _) = compute_series::<S>(&spec)?;
    let approximants: Vec<_> =
        config.pade_orders.iter().map(|&order| (order, build_pade(series.coefficients(), order))).collect();
    let rspt = match config.oracle {
        OracleMode::Rspt | OracleMode::Both => {
            let basis = rspt_min_basis(n, config.order).max(RSPT_ORACLE_BASIS);
            Some(rspt_coefficients(&spec, config.order, basis)?)
        }
        _ => None,
    };

    let mut rows = Vec::with_capacity(config.lambdas.len());
    for &lambda in &config.lambdas {
        let partial = partial_sum(&series, lambda, TRUNCATED_ORDER.min(series.max_order()))?;
        let pade = approximants
            .iter()
            .map(|(order, built)| classify_cell(*order, built, lambda, config.pole_threshold))
            .collect::<Vec<_>>();

        let rspt_sum = match &rspt {
            Some(r) => Some(partial_sum(r, lambda, config.order)?),
            None => None,
        };
        let variational = || match converged_energy(&spec, lambda, n, ORACLE_PLATEAU_TOLERANCE) {
            Ok(result) => OracleCell { value: result.energy(), converged: result.converged },
            Err(_) => OracleCell { value: f64::NAN, converged: false },
        };
        let (oracle, extra_rspt) = match config.oracle {
            OracleMode::Off => (None, None),
            OracleMode::Variational => (Some(variational()), None),
            OracleMode::Rspt => (rspt_sum.map(|value| OracleCell { value, converged: true }), None),
            OracleMode::Both => (Some(variational()), rspt_sum),
        };

        let values = std::iter::once(partial)
            .chain(pade.iter().filter_map(|c| c.value))
            .chain(oracle.map(|o| o.value))
            .chain(extra_rspt)
            .filter(|v| v.is_finite());
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));

        rows.push(ResultRow {
            n,
            lambda,
            partial_sum_4: partial,
            pade,
            eq13: eq13_reference(n, config.omega.to_f64(), lambda),
            oracle,
            rspt_sum: extra_rspt,
            max_discrepancy: hi - lo,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::config::parse_config;

    #[test]
    fn trivial_cell_is_unperturbed() {
        let config = parse_config("states = 0\nlambdas = 0\noracle = both").unwrap();
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.partial_sum_4, 0.5);
        assert!(row.pade.iter().all(|c| c.value == Some(0.5) && c.flag == CellFlag::Ok));
        assert_eq!(row.eq13, 0.5);
        assert_eq!(row.oracle.unwrap().value, 0.5);
        assert_eq!(row.rspt_sum, Some(0.5));
        assert_eq!(row.max_discrepancy, 0.0);
    }

    #[test]
    fn rows_follow_state_then_lambda_order() {
        let config = parse_config("states = 2, 0\nlambdas = 0.01, 0.005\noracle = off").unwrap();
        let rows = run_sweep(&config).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.n, r.lambda)).collect();
        assert_eq!(keys, vec![(2, 0.01), (2, 0.005), (0, 0.01), (0, 0.005)]);
        assert!(rows.iter().all(|r| r.oracle.is_none()));
    }

    #[test]
    fn cell_flags() {
        let q = |a, b| <Rational as Scalar>::from_ratio(a, b);
        let order = PadeOrder::new(1, 1);
        let defective = build_pade(&[q(1, 1), q(0, 1), q(1, 1)], order);
        assert_eq!(classify_cell(order, &defective, 0.1, 1e-3).flag, CellFlag::Defective);

        // 1/(1 − 2λ): pole at ½
        let geometric: Vec<Rational> = (0..3).map(|k| q(1 << k, 1)).collect();
        let built = build_pade(&geometric, PadeOrder::new(1, 0));
        assert_eq!(classify_cell(PadeOrder::new(1, 0), &built, 0.5, 1e-3).flag, CellFlag::PoleContaminated);
        assert_eq!(classify_cell(PadeOrder::new(1, 0), &built, 0.4999, 1e-3).flag, CellFlag::PoleContaminated);
        let ok = classify_cell(PadeOrder::new(1, 0), &built, 0.25, 1e-3);
        assert_eq!((ok.flag, ok.value), (CellFlag::Ok, Some(2.0)));
    }

    #[test]
    fn short_order_uses_available_terms() {
        let config = parse_config("states = 1\nlambdas = 0.1\npade = 1:1\norder = 2\noracle = off").unwrap();
        let row = &run_sweep(&config).unwrap()[0];
        assert!((row.partial_sum_4 - (1.5 + 0.075 - 0.1875 * 0.01)).abs() < 1e-15);
    }

    #[test]
    fn float_precision_matches_rational() {
        let exact = parse_config("states = 0, 3\noracle = off").unwrap();
        let float = SweepConfig { precision: ArithmeticMode::ExtendedFloat, ..exact.clone() };
        let a = run_sweep(&exact).unwrap();
        let b = run_sweep(&float).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.partial_sum_4 - y.partial_sum_4).abs() < 1e-14);
            for (p, q) in x.pade.iter().zip(&y.pade) {
                assert!((p.value.unwrap() - q.value.unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn n5_large_lambda_cell_is_regular() {
        // [3,4] for n = 5 has no real pole near λ = 0.1.
        let config = parse_config("states = 5\nlambdas = 0.1\noracle = variational").unwrap();
        let row = &run_sweep(&config).unwrap()[0];
        let cell = row.pade_cell(PadeOrder::new(3, 4)).unwrap();
        assert_eq!(cell.flag, CellFlag::Ok);
        assert!(cell.denominator_magnitude.unwrap() > 1.0);
        assert!((cell.value.unwrap() - row.oracle.unwrap().value).abs() < 1e-4);
    }
}
