//! Norm series CSV, report JSON and plot-data CSV.

use std::fmt::Write as _;
use std::path::Path;

use vortbound::bounds::{verify_with, BoundReport, ReportDocument, VerifyOptions};
use vortbound::diagnostics::{NormSample, NormSeries};

use crate::error::{io_err, HarnessError, Result};

pub const TIMESERIES_HEADER: &str = "t,l2,l2eps,l4,sup,grad_l2,grad_3eps,grad2_l2,stretch,wdiss";
pub const PLOTDATA_HEADER: &str = "bound,t,ln_actual,ln_bound";
/// Plot-data entry for an overflowed bound.
pub const INF_SENTINEL: &str = "INF";
/// Plot-data entry for the logarithm of zero.
pub const NEG_INF_SENTINEL: &str = "-INF";

/// 17 significant digits, enough to round-trip any double.
fn number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn timeseries_csv(series: &NormSeries) -> String {
    let mut out = String::with_capacity(64 * (series.len() + 1));
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for s in series.samples() {
        let row: Vec<String> = s.to_row().iter().map(|&v| number(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_timeseries(series: &NormSeries, path: &Path) -> Result<()> {
    std::fs::write(path, timeseries_csv(series)).map_err(io_err(path))
}

pub fn parse_timeseries(text: &str, path: &Path) -> Result<NormSeries> {
    let err = |line: usize, msg: String| HarnessError::Csv {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == TIMESERIES_HEADER => {}
        other => {
            return Err(err(
                1,
                format!("expected header `{TIMESERIES_HEADER}`, found {other:?}"),
            ))
        }
    }
    let mut series = NormSeries::default();
    for (k, line) in lines.enumerate() {
        let lineno = k + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != NormSample::COLUMNS.len() {
            return Err(err(
                lineno,
                format!("expected {} columns, found {}", NormSample::COLUMNS.len(), fields.len()),
            ));
        }
        let mut row = [0.0; 10];
        for (slot, f) in row.iter_mut().zip(&fields) {
            *slot = f
                .trim()
                .parse()
                .map_err(|e| err(lineno, format!("`{f}`: {e}")))?;
        }
        series
            .push(NormSample::from_row(row))
            .map_err(|e| err(lineno, e.to_string()))?;
    }
    Ok(series)
}

pub fn read_timeseries(path: &Path) -> Result<NormSeries> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    parse_timeseries(&text, path)
}

pub fn report_json(reports: &[BoundReport]) -> String {
    serde_json::to_string(&ReportDocument::from_reports(reports))
        .expect("report records contain only serializable values")
}

pub fn emit_report(reports: &[BoundReport], path: &Path) -> Result<()> {
    std::fs::write(path, report_json(reports)).map_err(io_err(path))
}

pub fn read_report(path: &Path) -> Result<ReportDocument> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn ln_entry(ln: f64, overflow: bool) -> String {
    if overflow || ln == f64::INFINITY {
        INF_SENTINEL.into()
    } else if ln == f64::NEG_INFINITY {
        NEG_INF_SENTINEL.into()
    } else {
        number(ln)
    }
}

/// Rows `bound,t,ln_actual,ln_bound` for every bound at every recorded time
/// in `(t1, t2]`, each evaluated on the interval `[t1, t]`. The last row of
/// each bound is the verification of the whole interval.
pub fn plotdata_csv(
    series: &NormSeries,
    opts: &VerifyOptions,
    t1: f64,
    t2: f64,
) -> Result<String> {
    let mut times: Vec<f64> = series
        .samples()
        .iter()
        .map(|s| s.t)
        .filter(|&t| t > t1 && t < t2)
        .collect();
    if t2 > t1 {
        times.push(t2);
    }
    let mut per_time = Vec::with_capacity(times.len());
    for &t in &times {
        per_time.push(verify_with(series, opts, t1, t)?);
    }
    let mut out = String::new();
    out.push_str(PLOTDATA_HEADER);
    out.push('\n');
    let kinds = per_time.first().map(|r| r.len()).unwrap_or(0);
    for b in 0..kinds {
        for (t, reports) in times.iter().zip(&per_time) {
            let r = &reports[b];
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.name(),
                number(*t),
                ln_entry(r.actual.ln(), false),
                ln_entry(r.bound.ln(), r.bound.is_overflow())
            );
        }
    }
    Ok(out)
}

pub fn emit_plotdata(
    series: &NormSeries,
    opts: &VerifyOptions,
    t1: f64,
    t2: f64,
    path: &Path,
) -> Result<()> {
    let text = plotdata_csv(series, opts, t1, t2)?;
    std::fs::write(path, text).map_err(io_err(path))
}

/// Human-readable table of a report document.
pub fn format_report(doc: &ReportDocument) -> String {
    use vortbound::bounds::BoundKind;

    let show = |v: Option<f64>, overflow: bool| match (v, overflow) {
        (_, true) => "overflow".to_string(),
        (Some(v), _) => format!("{v:.6e}"),
        (None, _) => "-inf".to_string(),
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>14} {:>14} {:>14}  ok",
        "bound", "ln(bound)", "ln(actual)", "log margin"
    );
    let mut notes = Vec::new();
    for r in &doc.reports {
        let margin = match r.log_margin {
            Some(m) => format!("{m:.6e}"),
            None if r.overflow || r.ln_actual.is_none() => "inf".into(),
            None => "-inf".into(),
        };
        let _ = writeln!(
            out,
            "{:<24} {:>14} {:>14} {:>14}  {}",
            r.name,
            show(r.ln_bound, r.overflow),
            show(r.ln_actual, false),
            margin,
            if r.satisfied { "yes" } else { "NO" }
        );
        if let Some(note) = BoundKind::from_name(&r.name).and_then(|k| k.note()) {
            notes.push(format!("{}: {note}", r.name));
        }
    }
    let satisfied = doc.reports.iter().filter(|r| r.satisfied).count();
    let _ = writeln!(out, "{satisfied}/{} satisfied", doc.reports.len());
    if let Some(first) = doc.reports.first() {
        let i = &first.inputs;
        let _ = writeln!(
            out,
            "interval [{}, {}], nu = {}, eps = {}, alpha = {}, N = {:.6e} ({} convention), C = {:.6e}",
            i.t1,
            i.t2,
            i.nu,
            i.eps,
            i.alpha,
            i.n,
            i.n_convention.as_str(),
            i.c
        );
    }
    for n in notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(t: f64, v: f64) -> NormSample {
        NormSample::from_row([t, v, v, v, v, v, v, v, -v, v])
    }

    #[test]
    fn empty_and_single_sample_files() {
        let empty = NormSeries::default();
        assert_eq!(timeseries_csv(&empty), format!("{TIMESERIES_HEADER}\n"));
        let one = NormSeries::new(vec![sample(0.0, 1.5)]).unwrap();
        let text = timeseries_csv(&one);
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let s = NormSeries::new(vec![
            sample(0.0, std::f64::consts::PI),
            sample(0.1, 1.0 / 3.0),
            sample(0.30000000000000004, 1e-300),
        ])
        .unwrap();
        let back = parse_timeseries(&timeseries_csv(&s), Path::new("mem")).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_malformed_csv() {
        let p = Path::new("mem");
        assert!(parse_timeseries("t,l2\n", p).is_err());
        let bad = format!("{TIMESERIES_HEADER}\n0,1,2\n");
        assert!(parse_timeseries(&bad, p).is_err());
        let reversed = format!(
            "{TIMESERIES_HEADER}\n1,0,0,0,0,0,0,0,0,0\n0,0,0,0,0,0,0,0,0,0\n"
        );
        assert!(parse_timeseries(&reversed, p).is_err());
    }

    #[test]
    fn empty_report_document() {
        assert_eq!(report_json(&[]), r#"{"version":1,"reports":[]}"#);
    }

    #[test]
    fn plotdata_sentinels_and_order() {
        let s = NormSeries::new(vec![
            NormSample::zero(0.0),
            NormSample::zero(0.5),
            NormSample::zero(1.0),
        ])
        .unwrap();
        let text = plotdata_csv(&s, &VerifyOptions::new(1.0, 0.01), 0.0, 1.0).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(PLOTDATA_HEADER));
        let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 16);
        assert!(rows.iter().all(|r| r[2] == NEG_INF_SENTINEL));
        // the lp_sup growth bound with a zero initial norm is exactly zero
        assert!(rows.iter().any(|r| r[3] == NEG_INF_SENTINEL));
        assert!(rows.iter().any(|r| r[3] == INF_SENTINEL));
        for pair in rows.windows(2).filter(|w| w[0][0] == w[1][0]) {
            let (a, b): (f64, f64) = (pair[0][1].parse().unwrap(), pair[1][1].parse().unwrap());
            assert!(b > a);
        }
    }
}
