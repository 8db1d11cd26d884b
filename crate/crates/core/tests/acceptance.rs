//! Acceptance suite. One line per criterion; exits non-zero if any fails.
//!
//! Run with `cargo test -p hvpade --test acceptance`.

#![allow(clippy::approx_constant)]

use std::process::ExitCode;
use std::time::Instant;

use hvpade::oracle::{converged_energy, rspt_coefficients};
use hvpade::report::{parse_config, run_sweep, CellFlag};
use hvpade::series::all_residuals;
use hvpade::{
    build_pade, compute_series, evaluate_pade, partial_sum, taylor_residuals, ModelSpec, PadeOrder, Rational, Scalar,
};
use num::{BigInt, BigRational, Zero};

const LAMBDAS: [f64; 4] = [0.005, 0.01, 0.05, 0.1];

/// Published `(E[4], E[3,3], E[3,4])` for n = 0..5 at each λ of [`LAMBDAS`].
const PUBLISHED: [[[f64; 3]; 4]; 6] = [
    [
        [0.501248, 0.501248, 0.501248],
        [0.502493, 0.502493, 0.502493],
        [0.512252, 0.512252, 0.512249],
        [0.523620, 0.523634, 0.523590],
    ],
    [
        [1.503740, 1.503740, 1.503740],
        [1.507480, 1.507480, 1.507480],
        [1.536260, 1.536260, 1.536240],
        [1.566970, 1.567010, 1.566660],
    ],
    [
        [2.506240, 2.506240, 2.506240],
        [2.512450, 2.512450, 2.512450],
        [2.559610, 2.559610, 2.559530],
        [2.605020, 2.605080, 2.604100],
    ],
    [
        [3.508730, 3.508730, 3.508730],
        [3.517420, 3.517420, 3.517420],
        [3.582290, 3.582290, 3.582120],
        [3.637780, 3.637800, 3.635920],
    ],
    [
        [4.511230, 4.511230, 4.511230],
        [4.522390, 4.522390, 4.522390],
        [4.604310, 4.604310, 4.604000],
        [4.665230, 4.665130, 4.662200],
    ],
    [
        [5.513720, 5.513720, 5.513720],
        [5.527350, 5.527350, 5.525180],
        [5.625660, 5.625670, 5.378930],
        [5.687380, 5.687040, 4.284910],
    ],
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Recomputed `(E[4], E[3,3], E[3,4])` for the unit model at K = 8.
fn recomputed(n: usize, lambda: f64) -> [f64; 3] {
    let (series, _) = compute_series::<Rational>(&ModelSpec::unit(n, 8)).unwrap();
    let pade = |d, m| evaluate_pade(&build_pade(series.coefficients(), PadeOrder::new(d, m)).unwrap(), lambda).unwrap();
    [partial_sum(&series, lambda, 4).unwrap(), pade(3, 3).value, pade(3, 4).value]
}

fn lambda_index(lambda: f64) -> usize {
    LAMBDAS.iter().position(|&l| l == lambda).unwrap()
}

fn small_lambda_tables() -> Outcome {
    let mut worst = (0.0_f64, 0, 0.0);
    for n in 0..=4 {
        for lambda in [0.005, 0.01] {
            let ours = recomputed(n, lambda);
            let printed = PUBLISHED[n][lambda_index(lambda)];
            for (a, b) in ours.iter().zip(printed) {
                let gap = (a - b).abs();
                if gap > worst.0 {
                    worst = (gap, n, lambda);
                }
            }
        }
    }
    let msg = format!("max |computed - printed| = {:.2e} at n={}, λ={}", worst.0, worst.1, worst.2);
    if worst.0 <= 5e-6 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn large_lambda_discrepancy() -> Outcome {
    let mut failures = Vec::new();
    let mut worst_printed = 0.0_f64;
    let mut worst_oracle = 0.0_f64;
    let mut oracle_sides_with_series = true;
    for n in 0..=3 {
        let spec = ModelSpec::unit(n, 8);
        for lambda in [0.05, 0.1] {
            let ours = recomputed(n, lambda);
            let printed = PUBLISHED[n][lambda_index(lambda)];
            let oracle = converged_energy(&spec, lambda, n, 1e-10).unwrap().energy();
            let tolerance = if lambda <= 0.05 { 1e-4 } else { 1e-3 };
            for (col, (a, b)) in ours.iter().zip(printed).enumerate() {
                let printed_gap = (a - b).abs();
                let oracle_gap = (a - oracle).abs();
                worst_printed = worst_printed.max(printed_gap);
                worst_oracle = worst_oracle.max(oracle_gap);
                if printed_gap > 1e-3 {
                    failures.push(format!("n={n} λ={lambda} col {col}: printed gap {printed_gap:.2e}"));
                }
                if oracle_gap > tolerance {
                    failures.push(format!("n={n} λ={lambda} col {col}: oracle gap {oracle_gap:.2e}"));
                }
                if (b - oracle).abs() < oracle_gap {
                    oracle_sides_with_series = false;
                }
            }
        }
    }
    if worst_printed <= 1e-4 {
        failures.push("printed large-λ cells reproduced tighter than 1e-4".into());
    }
    if !oracle_sides_with_series {
        failures.push("oracle is closer to the printed values".into());
    }
    let msg = format!(
        "max printed gap {worst_printed:.2e} (tol 1e-3), max oracle gap {worst_oracle:.2e}, oracle sides with series: \
         {oracle_sides_with_series}"
    );
    if failures.is_empty() {
        Ok(msg)
    } else {
        let printed = failures.iter().filter(|f| f.contains("printed gap")).count();
        Err(format!(
            "{msg}; {printed} printed-gap and {} other failures, first: {}",
            failures.len() - printed,
            failures[0]
        ))
    }
}

fn half_binomial(k: usize) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    (0..k).fold(BigRational::from_integer(1.into()), |acc, i| {
        acc * (&half - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1))
    })
}

fn quadratic_channel() -> Outcome {
    for n in 0..=5 {
        let spec = ModelSpec::unit(n, 10).with_cubic(false);
        let (series, _) = compute_series::<Rational>(&spec).map_err(|e| e.to_string())?;
        let level = BigRational::new(BigInt::from(2 * n + 1), 2.into());
        for (k, e) in series.coefficients().iter().enumerate() {
            let expected = &level * half_binomial(k);
            if e.to_string() != expected.to_string() {
                return Err(format!("n={n} k={k}: {e} != {expected}"));
            }
        }
    }
    Ok("66 coefficients string-equal".into())
}

fn oracle_triangle() -> Outcome {
    let mut worst_rel = 0.0_f64;
    let mut worst_sum = 0.0_f64;
    for n in 0..=5 {
        let spec = ModelSpec::unit(n, 8);
        let (series, _) = compute_series::<Rational>(&spec).map_err(|e| e.to_string())?;
        let rspt = rspt_coefficients(&spec, 7, 80).map_err(|e| e.to_string())?;
        for k in 0..=7 {
            let exact = series.coefficients()[k].to_f64();
            let rel = (rspt.coefficients()[k] - exact).abs() / exact.abs().max(1e-300);
            worst_rel = worst_rel.max(rel);
        }
        let variational = converged_energy(&spec, 0.01, n, 1e-12).map_err(|e| e.to_string())?;
        let sum = partial_sum(&series, 0.01, 8).map_err(|e| e.to_string())?;
        worst_sum = worst_sum.max((variational.energy() - sum).abs());
    }
    let msg =
        format!("RSPT max relative gap {worst_rel:.2e} (tol 1e-10), spectral vs K=8 sum {worst_sum:.2e} (tol 1e-7)");
    if worst_rel <= 1e-10 && worst_sum <= 1e-7 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn residual_suite() -> Outcome {
    let mut count = 0;
    for n in 0..=5 {
        let (series, table) = compute_series::<Rational>(&ModelSpec::unit(n, 8)).map_err(|e| e.to_string())?;
        for ((m, k), r) in all_residuals(&table, &series).map_err(|e| e.to_string())? {
            if !Zero::is_zero(&r) {
                return Err(format!("n={n} M={m} k={k}: residual {r}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} residuals identically zero"))
}

fn pade_contract() -> Outcome {
    for n in 0..=5 {
        let (series, _) = compute_series::<Rational>(&ModelSpec::unit(n, 8)).map_err(|e| e.to_string())?;
        let coefficients = series.coefficients();
        for order in [PadeOrder::new(3, 3), PadeOrder::new(3, 4)] {
            let approx = build_pade(coefficients, order).map_err(|e| e.to_string())?;
            let residuals = taylor_residuals(&approx, coefficients).map_err(|e| e.to_string())?;
            if residuals.iter().any(|r| !Zero::is_zero(r)) {
                return Err(format!("n={n} {order}: non-zero Taylor residual"));
            }
        }
        for m in 0..=8 {
            let approx = build_pade(coefficients, PadeOrder::new(0, m)).map_err(|e| e.to_string())?;
            for lambda in LAMBDAS {
                let value = evaluate_pade(&approx, lambda).map_err(|e| e.to_string())?.value;
                let sum = partial_sum(&series, lambda, m).map_err(|e| e.to_string())?;
                if (value - sum).abs() > 1e-14 * sum.abs() {
                    return Err(format!("n={n} [0,{m}] at λ={lambda}: {value} vs {sum}"));
                }
            }
        }
    }
    let geometric = vec![<Rational as Scalar>::one(); 9];
    let approx = build_pade(&geometric, PadeOrder::new(1, 0)).map_err(|e| e.to_string())?;
    let one = <Rational as Scalar>::one();
    if approx.leading != one || approx.denominator != vec![-one] || !approx.numerator.is_empty() {
        return Err(format!("geometric series gave {:?}", approx));
    }
    Ok("[3,3]/[3,4] residuals zero, [0,M] = partial sums, 1/(1-λ) recovered".into())
}

fn anomaly_detection() -> Outcome {
    let rows = run_sweep(&parse_config("").map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let row = rows.iter().find(|r| r.n == 5 && r.lambda == 0.1).ok_or("no (5, 0.1) row")?;
    let cell = row.pade_cell(PadeOrder::new(3, 4)).ok_or("no [3,4] cell")?;
    let exit_code = if rows.iter().any(|r| r.is_anomalous()) { 2 } else { 0 };
    let msg = format!(
        "(n=5, λ=0.1) E[3,4] = {:?}, |Q| = {:?}, flag {}, sweep exit code {exit_code}",
        cell.value, cell.denominator_magnitude, cell.flag
    );
    if cell.flag != CellFlag::Ok && exit_code == 2 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("small-lambda table reproduction", small_lambda_tables),
        ("large-lambda discrepancy", large_lambda_discrepancy),
        ("exact quadratic channel", quadratic_channel),
        ("oracle triangle", oracle_triangle),
        ("residual suite", residual_suite),
        ("pade contract", pade_contract),
        ("anomaly detection", anomaly_detection),
    ];
    let mut failed = 0;
    for (index, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{elapsed:.2}s]", index + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{elapsed:.2}s]", index + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
