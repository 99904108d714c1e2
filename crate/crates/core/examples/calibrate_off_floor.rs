//! Solves for the structural OFF-state floor that reproduces a target
//! ON/OFF enhancement, then re-runs the scenario with the rounded value.
//!
//! cargo run --release --example calibrate_off_floor -- [config] [target_db]

use ris_sim::cli::{calibrate_structural_floor, parse_config, run_scenario};

fn main() -> ris_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/specular_100ghz.toml").into());
    let target: f64 = args.next().map(|s| s.parse().expect("target in dB")).unwrap_or(17.9);

    let mut s = parse_config(&std::fs::read_to_string(&path)?)?;
    s.model.structural_floor = 0.0;
    s.frequencies_ghz = vec![100.0];
    let floor = calibrate_structural_floor(&s, 100.0, target)?;
    println!("leakage amplitude      {:.6}", s.model.leakage_amplitude());
    println!("calibrated floor       {floor:.6}");

    s.model.structural_floor = (floor * 100.0).round() / 100.0;
    let rec = &run_scenario(&s)?.records[0];
    println!(
        "floor {:.2} -> enhancement {} dB at 100 GHz (selection {:?})",
        s.model.structural_floor,
        rec.enhancement,
        rec.choice.0.iter().map(|c| c.as_str()).collect::<Vec<_>>()
    );
    Ok(())
}
