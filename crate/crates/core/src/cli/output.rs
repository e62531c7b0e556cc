//! CSV and JSON artifacts, each written to a temporary file and renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::config::{ExperimentConfig, Format};
use super::scan::ScanReport;

pub const CSV_NAME: &str = "scan.csv";
pub const JSON_NAME: &str = "summary.json";

/// Scientific notation with `digits` significant digits; `inf`, `-inf` and `nan` spelled out.
pub fn format_number(x: f64, digits: usize) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{:.*e}", digits.saturating_sub(1), x)
    }
}

/// Header `d,trace_norm,log_trace_norm,mutual_info[,appnorm_a_b…]`, then one line per row.
pub fn render_csv(report: &ScanReport, config: &ExperimentConfig) -> String {
    let mut names: Vec<String> = ["d", "trace_norm", "log_trace_norm", "mutual_info"].map(String::from).to_vec();
    names.extend(config.run.appendix_exponents.iter().map(|&p| ExperimentConfig::appendix_column(p)));
    let columns: Vec<Vec<f64>> = names.iter().map(|n| report.column(n, config).expect("known column")).collect();
    let digits = config.output.precision;
    let mut out = names.join(",");
    out.push('\n');
    for i in 0..report.rows.len() {
        let line: Vec<String> = columns.iter().map(|c| format_number(c[i], digits)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(report: &ScanReport, config: &ExperimentConfig) -> String {
    let per_point: Vec<_> = report.rows.iter().map(|r| json!({ "d": r.d, "seconds": r.seconds })).collect();
    let doc = json!({
        "config_echo": config,
        "M": report.effective_mass,
        "predicted_rate": report.predicted_rate,
        "fitted": report.fitted,
        "timings": {
            "setup_seconds": report.timings.setup_seconds,
            "total_seconds": report.timings.total_seconds,
            "per_point": per_point,
        },
    });
    serde_json::to_string_pretty(&doc).expect("summary serializes") + "\n"
}

fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp =
        dir.join(format!(".{}.{}.tmp", path.file_name().and_then(|n| n.to_str()).unwrap_or("out"), std::process::id()));
    let result = (|| {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// Writes the configured formats into `dir`, returning the paths created.
pub fn write_outputs(report: &ScanReport, config: &ExperimentConfig, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for format in &config.output.formats {
        let (name, body) = match format {
            Format::Csv => (CSV_NAME, render_csv(report, config)),
            Format::Json => (JSON_NAME, render_json(report, config)),
        };
        let path = dir.join(name);
        write_atomic(&path, &body)?;
        written.push(path);
    }
    Ok(written)
}
