//! CSV tables and pgfplots fragments from a report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::experiment::ExperimentReport;
use crate::CliError;

/// Significant digits of every number written into plot artifacts.
pub const SIG_DIGITS: usize = 6;

/// Formats `v` with `digits` significant digits in positional notation.
pub fn format_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".to_string() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    let text = format!("{v:.decimals$}");
    // rounding may carry into a new leading digit (0.0099999999 -> 0.0100000)
    let rounded: f64 = text.parse().expect("formatted float parses");
    if decimals > 0 && rounded.abs().log10().floor() as i32 > magnitude {
        let decimals = decimals - 1;
        return format!("{v:.decimals$}");
    }
    text
}

fn pattern(x: usize, n: usize) -> String {
    format!("{x:0n$b}")
}

/// `pattern,theoretical,measured` rows on the relabelled axis.
pub fn csv_table(report: &ExperimentReport) -> String {
    let n = report.n();
    let avg = &report.relabeled_average;
    let mut out = String::from("pattern,theoretical,measured\n");
    for (x, (t, m)) in avg.theoretical.iter().zip(&avg.measured).enumerate() {
        writeln!(out, "{},{},{}", pattern(x, n), format_sig(*t, SIG_DIGITS), format_sig(*m, SIG_DIGITS)).unwrap();
    }
    out
}

/// A self-contained `tikzpicture` holding one pgfplots `axis` with the
/// theoretical and measured bar series.
pub fn pgfplots_fragment(report: &ExperimentReport) -> String {
    let n = report.n();
    let avg = &report.relabeled_average;
    let coords: Vec<String> = (0..avg.theoretical.len()).map(|x| pattern(x, n)).collect();
    let series = |values: &[f64]| -> String {
        let points: Vec<String> =
            coords.iter().zip(values).map(|(c, v)| format!("({c},{})", format_sig(*v, SIG_DIGITS))).collect();
        points.join(" ")
    };
    let m = &report.metrics;
    let mut out = String::new();
    writeln!(out, "% {} n={} oracles={}", report.config.family, n, report.oracles.len()).unwrap();
    writeln!(
        out,
        "% p_t={} p_succ={} R={}",
        format_sig(m.p_t, SIG_DIGITS),
        format_sig(m.p_succ, SIG_DIGITS),
        format_sig(m.r, SIG_DIGITS)
    )
    .unwrap();
    out.push_str("\\begin{tikzpicture}\n");
    out.push_str("\\begin{axis}[\n");
    out.push_str("  ybar,\n  bar width=4pt,\n  ymin=0,\n  enlarge x limits=0.05,\n");
    writeln!(out, "  symbolic x coords={{{}}},", coords.join(",")).unwrap();
    out.push_str("  xtick=data,\n  x tick label style={rotate=90, font=\\tiny},\n");
    out.push_str("  xlabel={pattern $x\\oplus x_0$},\n  ylabel={probability},\n");
    out.push_str("  legend style={at={(0.97,0.97)}, anchor=north east},\n]\n");
    writeln!(out, "\\addplot coordinates {{{}}};", series(&avg.theoretical)).unwrap();
    writeln!(out, "\\addplot coordinates {{{}}};", series(&avg.measured)).unwrap();
    out.push_str("\\legend{theoretical, measured}\n");
    out.push_str("\\end{axis}\n\\end{tikzpicture}\n");
    out
}

/// Reads `report_path` and writes `plot_<family>_n<n>.csv` and `.tex` into
/// `out_dir`. Returns the two paths.
pub fn write_plot(report_path: &Path, out_dir: &Path) -> Result<(PathBuf, PathBuf), CliError> {
    let text = std::fs::read_to_string(report_path).map_err(|e| CliError::io(report_path, e))?;
    let report = ExperimentReport::from_json(&text)
        .map_err(|e| CliError::BadInput { path: report_path.display().to_string(), message: e.to_string() })?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let stem = format!("plot_{}", report.config.label());
    let csv = out_dir.join(format!("{stem}.csv"));
    let tex = out_dir.join(format!("{stem}.tex"));
    std::fs::write(&csv, csv_table(&report)).map_err(|e| CliError::io(&csv, e))?;
    std::fs::write(&tex, pgfplots_fragment(&report)).map_err(|e| CliError::io(&tex, e))?;
    Ok((csv, tex))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.78125, 6), "0.781250");
        assert_eq!(format_sig(0.0041, 6), "0.00410000");
        assert_eq!(format_sig(1.0, 6), "1.00000");
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(123456.7, 6), "123457");
        assert_eq!(format_sig(0.9999996, 6), "1.00000");
        assert_eq!(format_sig(-0.25, 6), "-0.250000");
        assert_eq!(format_sig(0.009_999_999_6, 6), "0.0100000");
    }
}
