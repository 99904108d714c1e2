//! Switch insertion loss, per-path routing loss, loss-corrected
//! enhancement, bond-wire parasitics and the far-field distance check.
//!
//! cargo run --example link_budget

use ris_sim::budget::{
    bondwire_inductance, bondwire_reactance, far_field_check, far_field_distance, predict_enhancement,
    switch_insertion_loss, total_path_loss, BondWire, PathLossBudget,
};

fn main() -> ris_sim::Result<()> {
    let b = PathLossBudget::default();
    println!("{}: {} paths in chain", b.switch.name, b.n_paths_in_chain);
    for f in [100.0, 102.0, 104.0, 106.0, 108.0, 110.0] {
        println!(
            "  {f:5.1} GHz  IL {:.2} dB  path loss {:5.2} dB  17.9 dB ideal -> {:5.2} dB",
            switch_insertion_loss(&b.switch, f)?,
            total_path_loss(&b, f)?,
            predict_enhancement(17.9, &b, f)?
        );
    }
    if let Err(e) = switch_insertion_loss(&b.switch, 95.0) {
        println!("  95 GHz: {e}");
    }

    let w = BondWire::prototype();
    println!(
        "bond wire {:.3} mm long, {} in parallel: {:.4} nH, {:.2} ohm at 100 GHz",
        w.length_mm,
        w.parallel_count,
        bondwire_inductance(&w)?,
        bondwire_reactance(&w, 100.0)?
    );

    let d = 4.0 * 1.71;
    println!(
        "4x4 subarray D = {d:.2} mm: far field from {:.1} mm, 60 mm ok = {}",
        far_field_distance(d, 100.0)?,
        far_field_check(d, 100.0, 60.0)?
    );
    Ok(())
}
