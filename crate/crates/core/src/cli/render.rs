use std::fmt::Write as _;

use super::{Format, ItemResult, ResultEnvelope};
use crate::error::{Error, Result};
use crate::period::PeriodResult;

const COLUMNS: [&str; 7] = [
    "family",
    "L",
    "N",
    "verdict",
    "T",
    "certificate_kind",
    "certificate_detail",
];

fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Internal(format!("json: {e}")))
}

fn row(r: &PeriodResult) -> [String; 7] {
    [
        r.spec.family().to_string(),
        r.spec.states().to_string(),
        r.spec.vertices().to_string(),
        r.verdict_name().to_string(),
        r.period().map(|t| t.to_string()).unwrap_or_default(),
        r.certificate_kind().to_string(),
        r.certificate_detail(),
    ]
}

/// Renders period results with the fixed column order
/// `family, L, N, verdict, T, certificate_kind, certificate_detail`.
///
/// CSV carries a header line; text is a space-aligned table; JSON is an array of results.
pub fn render_table(results: &[PeriodResult], format: Format) -> Result<String> {
    if results.is_empty() {
        return Err(Error::Precondition("nothing to render".into()));
    }
    match format {
        Format::Json => Ok(to_json(results)?),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Internal(format!("csv: {e}"));
            w.write_record(COLUMNS).map_err(csv_err)?;
            for r in results {
                w.write_record(row(r)).map_err(csv_err)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Internal(format!("csv: {e}")))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
        }
        Format::Text => {
            let rows: Vec<[String; 7]> = results.iter().map(row).collect();
            let mut widths = COLUMNS.map(str::len);
            for r in &rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let mut out = String::new();
            let mut line = |cells: &[&str]| {
                let parts: Vec<String> = cells
                    .iter()
                    .zip(widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                out.push_str(parts.join("  ").trim_end());
                out.push('\n');
            };
            line(&COLUMNS);
            for r in &rows {
                line(&r.each_ref().map(String::as_str));
            }
            Ok(out)
        }
    }
}

pub(super) fn render(envelope: &ResultEnvelope, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(envelope)?),
        Format::Csv | Format::Text if only_periods(envelope) => {
            let periods: Vec<PeriodResult> = envelope
                .results
                .iter()
                .filter_map(|r| match r {
                    ItemResult::Period(p) => Some(p.clone()),
                    _ => None,
                })
                .collect();
            render_table(&periods, format)
        }
        Format::Csv => Err(Error::Precondition("csv needs period results".into())),
        Format::Text => {
            let mut out: String = envelope.results.iter().map(text).collect();
            let checks: Vec<bool> = envelope
                .results
                .iter()
                .filter_map(|r| match r {
                    ItemResult::Check(c) => Some(c.passed),
                    _ => None,
                })
                .collect();
            if !checks.is_empty() {
                let passed = checks.iter().filter(|&&p| p).count();
                let _ = writeln!(out, "{passed}/{} checks passed", checks.len());
            }
            Ok(out)
        }
    }
}

fn only_periods(envelope: &ResultEnvelope) -> bool {
    envelope
        .results
        .iter()
        .all(|r| matches!(r, ItemResult::Period(_)))
}

fn text(item: &ItemResult) -> String {
    let mut out = String::new();
    match item {
        ItemResult::Operator {
            spec,
            dimension,
            matrix,
        } => {
            let _ = writeln!(out, "U for {spec}, {dimension} x {dimension}");
            let rows: Vec<Vec<String>> = matrix
                .to_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect();
            let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
            for r in rows {
                let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
        }
        ItemResult::Charpoly(b) => {
            let _ = writeln!(out, "f_N(x) for {}", b.spec);
            for (k, s) in b.sectors.iter().enumerate() {
                let _ = writeln!(out, "  k={k}: {s}");
            }
            let _ = writeln!(out, "  product: {}", b.product);
            let _ = writeln!(out, "  direct determinant check: {}", yes_no(b.direct_checked));
        }
        ItemResult::Sector {
            spec,
            sector,
            charpoly,
        } => {
            let _ = writeln!(out, "f_{{N,{sector}}}(x) for {spec}: {charpoly}");
            let _ = writeln!(out, "  z = exp(2 pi i / {})", spec.vertices());
        }
        ItemResult::Period(p) => {
            let _ = writeln!(
                out,
                "{}: {} {}",
                p.spec,
                p.verdict_name(),
                p.period().map(|t| format!("T={t}")).unwrap_or_default()
            );
        }
        ItemResult::Zeta {
            spec,
            zeta,
            direct_checked,
            kurokawa,
        } => {
            let _ = writeln!(out, "zeta(u) for {spec} = {}", zeta.display_with("u"));
            if let Some(k) = kurokawa {
                let _ = writeln!(out, "  Kurokawa form in u: {}", k.to_string().replace('x', "u"));
            }
            let _ = writeln!(out, "  direct determinant check: {}", yes_no(*direct_checked));
        }
        ItemResult::AbsZeta {
            spec,
            form,
            admissible,
            rendered,
            ..
        } => {
            let _ = writeln!(out, "absolute zeta data for {spec}");
            let _ = writeln!(out, "f(x) = {form}");
            match rendered {
                Some(r) => {
                    let _ = writeln!(out, "{r}");
                }
                None if !admissible => {
                    let _ = writeln!(out, "form needs at least one numerator and one denominator factor");
                }
                None => {}
            }
        }
        ItemResult::Mellin {
            w,
            s,
            tol,
            mellin,
            series,
            difference,
            passed,
            ..
        } => {
            let _ = writeln!(out, "Z_f(w={w}, s={s}) with tol {tol:e}");
            let _ = writeln!(out, "  Mellin integral: {mellin:.12e}");
            let _ = writeln!(out, "  subset series:   {series:.12e}");
            let _ = writeln!(
                out,
                "  |difference| = {difference:e}: {}",
                if *passed { "PASS" } else { "FAIL" }
            );
        }
        ItemResult::Check(c) => {
            let _ = writeln!(
                out,
                "{} {} ({} cases): {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.cases,
                c.detail
            );
        }
    }
    out
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "done"
    } else {
        "skipped (L * N > 60)"
    }
}
