//! Table writers. Every command emits either CSV (default) or JSON with
//! the same field names; reals are printed with 17 significant digits so
//! round-tripping through text is lossless.

use std::io::Write;
use std::path::Path;

use cavity_walk::{CorrelationReport, Propagator, SweepRow, TwoPhotonState};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::OutputFormat;
use crate::Failure;

/// `f64` → text without rounding error on the way back in.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn runtime(err: std::io::Error, target: &str) -> Failure {
    Failure::Runtime(format!("writing {target}: {err}"))
}

/// Writes `text` to `--out` or stdout.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| runtime(e, &path.display().to_string()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes()).map_err(|e| runtime(e, "stdout"))
        }
    }
}

fn csv_table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut text = String::from(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row);
        text.push('\n');
    }
    text
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON serialization cannot fail");
    text.push('\n');
    text
}

/// One `j,l,re,im` row per propagator entry, row-major.
pub fn propagator_table(format: OutputFormat, propagator: &Propagator) -> String {
    let n = propagator.matrix().nrows();
    let entries = (1..=n).flat_map(|j| (1..=n).map(move |l| (j, l)));
    match format {
        OutputFormat::Csv => csv_table(
            "j,l,re,im",
            entries.map(|(j, l)| {
                let g = propagator.entry(j, l).expect("indices come from the matrix shape");
                format!("{j},{l},{},{}", fmt_real(g.re), fmt_real(g.im))
            }),
        ),
        OutputFormat::Json => json_text(&Value::Array(
            entries
                .map(|(j, l)| {
                    let g = propagator.entry(j, l).expect("indices come from the matrix shape");
                    json!({"j": j, "l": l, "re": g.re, "im": g.im})
                })
                .collect(),
        )),
    }
}

/// One `m,n,re,im` row per basis amplitude, lexicographic in (m, n).
pub fn state_table(format: OutputFormat, state: &TwoPhotonState) -> String {
    let pairs: Vec<((usize, usize), Complex64)> = state
        .basis()
        .pairs()
        .map(|(m, n)| {
            let c = state.amplitude(m, n).expect("basis pairs are in range");
            ((m, n), c)
        })
        .collect();
    match format {
        OutputFormat::Csv => csv_table(
            "m,n,re,im",
            pairs
                .iter()
                .map(|((m, n), c)| format!("{m},{n},{},{}", fmt_real(c.re), fmt_real(c.im))),
        ),
        OutputFormat::Json => json_text(&Value::Array(
            pairs
                .iter()
                .map(|((m, n), c)| json!({"m": m, "n": n, "re": c.re, "im": c.im}))
                .collect(),
        )),
    }
}

/// `m,n,Q,P` rows (upper triangle) plus the delocalization scalar: a
/// trailing `# S=…` comment in CSV, a top-level key in JSON.
pub fn correlation_table(format: OutputFormat, report: &CorrelationReport) -> String {
    let n = report.joint().nrows();
    let pairs: Vec<((usize, usize), f64, f64)> = (1..=n)
        .flat_map(|m| (m..=n).map(move |p| (m, p)))
        .map(|(m, p)| {
            let q = report.joint()[(m - 1, p - 1)];
            let value = report.normalized()[(m - 1, p - 1)];
            ((m, p), q, value)
        })
        .collect();
    match format {
        OutputFormat::Csv => {
            let mut text = csv_table(
                "m,n,Q,P",
                pairs
                    .iter()
                    .map(|((m, n), q, p)| format!("{m},{n},{},{}", fmt_real(*q), fmt_real(*p))),
            );
            text.push_str(&format!("# S={}\n", fmt_real(report.s_value())));
            text
        }
        OutputFormat::Json => json_text(&json!({
            "rows": pairs
                .iter()
                .map(|((m, n), q, p)| json!({"m": m, "n": n, "Q": q, "P": p}))
                .collect::<Vec<_>>(),
            "S": report.s_value(),
        })),
    }
}

fn sweep_csv_row(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        row.n_cavities,
        row.r,
        row.s,
        fmt_real(row.theta),
        fmt_real(row.phi),
        fmt_real(row.s_max),
        fmt_real(row.t_at_max),
        fmt_real(row.negativity),
    )
}

fn sweep_json_row(row: &SweepRow) -> Value {
    json!({
        "N": row.n_cavities,
        "r": row.r,
        "s": row.s,
        "theta": row.theta,
        "phi": row.phi,
        "s_max": row.s_max,
        "t_at_max": row.t_at_max,
        "negativity": row.negativity,
    })
}

/// The shared sweep schema: `N,r,s,theta,phi,s_max,t_at_max,negativity`.
pub fn sweep_table(format: OutputFormat, rows: &[SweepRow]) -> String {
    match format {
        OutputFormat::Csv => csv_table(
            "N,r,s,theta,phi,s_max,t_at_max,negativity",
            rows.iter().map(sweep_csv_row),
        ),
        OutputFormat::Json => {
            json_text(&Value::Array(rows.iter().map(sweep_json_row).collect()))
        }
    }
}

/// Single-row table for the negativity of a (θ, φ) superposition.
pub fn negativity_table(format: OutputFormat, theta: f64, phi: f64, negativity: f64) -> String {
    match format {
        OutputFormat::Csv => csv_table(
            "theta,phi,negativity",
            [format!("{},{},{}", fmt_real(theta), fmt_real(phi), fmt_real(negativity))],
        ),
        OutputFormat::Json => {
            json_text(&json!({"theta": theta, "phi": phi, "negativity": negativity}))
        }
    }
}
