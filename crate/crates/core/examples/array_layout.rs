//! Element lattice, subarray partitioning and the measurement-fixture angle
//! convention.
//!
//! cargo run --example array_layout

use ris_sim::geometry::{build_layout, map_mount_angles, partition_subarrays, wavelength_mm, MOUNT_CONVENTION};

fn main() -> ris_sim::Result<()> {
    let layout = build_layout(12, 8, 1.71)?;
    let (ax, ay) = layout.aperture_mm();
    println!("{} elements, aperture {ax:.2} x {ay:.2} mm", layout.len());
    println!(
        "pitch = {:.3} lambda at 100 GHz",
        layout.period_mm() / wavelength_mm(100.0)
    );

    let part = partition_subarrays(&layout, 4, 4)?;
    println!("{} subarrays of {}x{}", part.len(), part.sub_rows(), part.sub_cols());
    for (g, members) in part.groups().iter().enumerate() {
        let (x0, y0) = layout.positions()[members[0]];
        println!(
            "  subarray {g}: first element {} at ({x0:+.3}, {y0:+.3}) mm",
            members[0]
        );
    }

    if let Err(e) = partition_subarrays(&layout, 4, 3) {
        println!("4x3 tiling rejected: {e}");
    }

    println!("{MOUNT_CONVENTION}");
    for (tm, pm) in [(120.0, 0.0), (90.0, 0.0), (90.0, 30.0)] {
        let d = map_mount_angles(tm, pm)?;
        println!("  mount ({tm}, {pm}) -> theta {} phi {}", d.theta_deg, d.phi_deg);
    }
    Ok(())
}
