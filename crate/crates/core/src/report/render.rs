use std::fmt::Write;

use crate::series::EnergySeries;
use crate::Rational;

use super::config::OutputFormat;
use super::sweep::{CellFlag, ResultRow};

pub fn render(rows: &[ResultRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => render_table(rows),
        OutputFormat::Csv => render_csv(rows),
    }
}

/// CSV header for rows carrying the given Padé orders.
pub fn csv_header(rows: &[ResultRow]) -> String {
    let orders: Vec<_> = rows.first().map(|r| r.pade.iter().map(|c| c.order).collect()).unwrap_or_default();
    let mut fields = vec!["n".to_string(), "lambda".into(), "E4".into()];
    fields.extend(orders.iter().map(|o| format!("E_{}_{}", o.denominator, o.numerator)));
    fields.extend(orders.iter().map(|o| format!("flag_{}_{}", o.denominator, o.numerator)));
    fields.extend(["eq13", "oracle", "oracle_converged", "max_disc"].map(String::from));
    fields.join(",")
}

/// 17 significant digits, enough to round-trip any `f64`.
fn full(value: f64) -> String {
    format!("{value:.16e}")
}

fn render_csv(rows: &[ResultRow]) -> String {
    let mut out = csv_header(rows);
    out.push('\n');
    for row in rows {
        let mut fields = vec![row.n.to_string(), full(row.lambda), full(row.partial_sum_4)];
        fields.extend(row.pade.iter().map(|c| c.value.map(full).unwrap_or_default()));
        fields.extend(row.pade.iter().map(|c| c.flag.as_str().to_string()));
        fields.push(full(row.eq13));
        match row.oracle {
            Some(o) => {
                fields.push(full(o.value));
                fields.push(o.converged.to_string());
            }
            None => fields.extend([String::new(), String::new()]),
        }
        fields.push(full(row.max_discrepancy));
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

const VALUE_WIDTH: usize = 12;

/// Six decimals; `*` marks a pole-contaminated value.
fn table_cell(value: Option<f64>, flag: CellFlag) -> String {
    match (value, flag) {
        (_, CellFlag::Defective) => "defective".into(),
        (None, _) => "pole".into(),
        (Some(v), CellFlag::PoleContaminated) => format!("{v:.6}*"),
        (Some(v), CellFlag::Ok) => format!("{v:.6}"),
    }
}

fn render_table(rows: &[ResultRow]) -> String {
    let orders: Vec<_> = rows.first().map(|r| r.pade.iter().map(|c| c.order).collect()).unwrap_or_default();
    let with_rspt = rows.iter().any(|r| r.rspt_sum.is_some());

    let mut header =
        vec![format!("{:>3}", "n"), format!("{:>8}", "lambda"), format!("{:>w$}", "E[4]", w = VALUE_WIDTH)];
    header.extend(orders.iter().map(|o| format!("{:>w$}", format!("E{o}"), w = VALUE_WIDTH)));
    header.push(format!("{:>w$}", "eq13", w = VALUE_WIDTH));
    header.push(format!("{:>w$}", "oracle", w = VALUE_WIDTH));
    if with_rspt {
        header.push(format!("{:>w$}", "rspt", w = VALUE_WIDTH));
    }
    header.push(format!("{:>10}", "max_disc"));
    let header = header.join(" ");

    let mut out = String::new();
    let _ = writeln!(out, "{header}");
    let _ = writeln!(out, "{}", "-".repeat(header.len()));
    let mut markers = false;
    for row in rows {
        let mut cells = vec![
            format!("{:>3}", row.n),
            format!("{:>8}", row.lambda),
            format!("{:>w$}", format!("{:.6}", row.partial_sum_4), w = VALUE_WIDTH),
        ];
        for cell in &row.pade {
            markers |= cell.flag != CellFlag::Ok;
            cells.push(format!("{:>w$}", table_cell(cell.value, cell.flag), w = VALUE_WIDTH));
        }
        cells.push(format!("{:>w$}", format!("{:.6}", row.eq13), w = VALUE_WIDTH));
        let oracle = match row.oracle {
            None => "-".to_string(),
            Some(o) if o.converged => format!("{:.6}", o.value),
            Some(o) => {
                markers = true;
                format!("{:.6}?", o.value)
            }
        };
        cells.push(format!("{oracle:>w$}", w = VALUE_WIDTH));
        if with_rspt {
            let rspt = row.rspt_sum.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
            cells.push(format!("{rspt:>w$}", w = VALUE_WIDTH));
        }
        cells.push(format!("{:>10.1e}", row.max_discrepancy));
        let _ = writeln!(out, "{}", cells.join(" "));
    }
    if markers {
        let _ = writeln!(out, "# * pole-contaminated Padé value, ? oracle plateau not reached");
    }
    out
}

/// Exact coefficients as `n,k,numerator,denominator` lines.
pub fn series_csv(series: &[EnergySeries<Rational>]) -> String {
    let mut out = String::from("n,k,numerator,denominator\n");
    for s in series {
        for (k, c) in s.coefficients().iter().enumerate() {
            let _ = writeln!(out, "{},{},{},{}", s.spec().n, k, c.numer(), c.denom());
        }
    }
    out
}
