//! Runs the decay scan in `examples/configs/decay_scan.toml` and prints the fitted rates.
//!
//! `cargo run --release --example decay_scan [config] [out-dir]`

use std::path::PathBuf;

use dirac_entanglement::cli::config::ExperimentConfig;
use dirac_entanglement::cli::output::write_outputs;
use dirac_entanglement::cli::scan::{run_scan, FitEntry};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/decay_scan.toml"));
    let config = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{e}"));
    let report = run_scan(&config).unwrap_or_else(|e| panic!("{e}"));

    println!("M = {}, predicted rate M/2 = {}", report.effective_mass, report.predicted_rate);
    println!("{:>6} {:>14} {:>14}", "d", "trace_norm", "mutual_info");
    for row in &report.rows {
        println!(
            "{:>6} {:>14.6e} {:>14.6e}",
            row.d,
            row.trace_norm.unwrap_or(f64::NAN),
            row.mutual_info.unwrap_or(f64::NAN)
        );
    }
    for (name, fit) in &report.fitted {
        match fit {
            FitEntry::Fitted { slope, r2, relative_deviation, .. } => {
                println!("{name}: slope {slope:.4}, r2 {r2:.5}, rate / (M/2) - 1 = {relative_deviation:+.3}")
            }
            FitEntry::Failed { error } => println!("{name}: {error}"),
        }
    }
    if let Some(dir) = args.next() {
        for p in write_outputs(&report, &config, dir.as_ref()).expect("outputs written") {
            println!("wrote {}", p.display());
        }
    }
}
