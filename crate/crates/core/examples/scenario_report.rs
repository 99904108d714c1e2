//! Runs a bundled measurement scenario end to end and writes the report
//! and the 100 GHz ON pattern as CSV.
//!
//! cargo run --release --example scenario_report -- [config] [out_dir]

use std::path::PathBuf;

use ris_sim::cli::run::{scenario_pattern, PatternState};
use ris_sim::cli::{export, parse_config, run_scenario};

fn main() -> ris_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/scenario1.toml").into());
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("ris_scenario"));

    let s = parse_config(&std::fs::read_to_string(&path)?)?;
    let report = run_scenario(&s)?;
    println!("config sha256 {}", report.provenance.config_digest);
    println!("freq  enhancement  predicted  peak(theta,phi)  directivity");
    for r in &report.records {
        println!(
            "{:5.1}  {:>11}  {:>9}  ({:4.1},{:6.1})   {:.2} dBi",
            r.freq_ghz,
            r.enhancement.to_string(),
            r.predicted_db.map(|p| format!("{p:.2}")).unwrap_or_else(|| "-".into()),
            r.peak.theta_deg,
            r.peak.phi_deg,
            r.directivity_dbi
        );
    }
    let above: Vec<f64> = report.records.iter().filter_map(|r| r.predicted_db).collect();
    if !above.is_empty() {
        println!(
            "mean predicted enhancement where the switch table applies: {:.2} dB",
            above.iter().sum::<f64>() / above.len() as f64
        );
    }

    let pattern = scenario_pattern(&s, 100.0, PatternState::On)?;
    for p in export(&report, Some(&pattern), &out)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
