//! Bias power of the SP3T bank, unit-cell versus subarray control on a
//! 20x20 aperture, and the measured supply reading.
//!
//! cargo run --example power_scaling

use ris_sim::budget::{compare_power, dc_power, scaling_report, SwitchModel};

fn main() -> ris_sim::Result<()> {
    let sw = SwitchModel::masw_011029();
    let one = dc_power(&sw, 1);
    println!(
        "one {}: {} isolated throws x {:.0} mA x {} V = {:.3} W",
        sw.name,
        sw.n_throws - 1,
        sw.i_per_isolation_path * 1e3,
        sw.v_bias,
        one.total_w
    );

    let r = scaling_report(20, 20, 4, 4, &sw)?;
    println!("20x20 array, {} elements", r.n_elements);
    println!(
        "  per cell:     {:4} switches  {:6.2} W",
        r.n_switches_per_cell, r.power_per_cell_w
    );
    println!(
        "  per pair:     {:4} switches  {:6.2} W",
        r.n_switches_per_combined, r.power_per_combined_w
    );
    println!(
        "  per 4x4 tile: {:4} switches  {:6.2} W",
        r.n_switches_subarray, r.power_subarray_w
    );

    let c = compare_power(&sw, 6, 5.0, 0.033)?;
    println!(
        "prototype (6 switches): measured {:.3} W, bias model {:.3} W, unexplained {:+.3} W",
        c.measured_w, c.ideal_w, c.delta_w
    );
    Ok(())
}
