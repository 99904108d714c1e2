//! Hemisphere pattern synthesis, peak search, directivity and a plane cut
//! for a broadside 4x4 subarray, plus the direct-sum / lattice agreement.
//!
//! cargo run --release --example far_field_pattern

use ris_sim::field::{
    directivity, element_weights, half_power_beamwidth_deg, lattice_field, peak_direction, scattered_field,
    synthesize_pattern, ElementFactor, Illumination, StateVector,
};
use ris_sim::geometry::{build_layout, Direction};
use ris_sim::unitcell::{CellState, UnitCellModel};

fn main() -> ris_sim::Result<()> {
    let layout = build_layout(4, 4, 1.71)?;
    let model = UnitCellModel::default();
    let ef = ElementFactor::default();
    let ill = Illumination::uniform(&layout, Direction::boresight(), 100.0)?;
    let states = StateVector::uniform(layout.len(), CellState::State0);

    let p = synthesize_pattern(&layout, &model, &states, &ill, ef, 0.5)?;
    let peak = peak_direction(&p)?;
    println!("grid {} x {} nodes", p.grid.n_theta(), p.grid.n_phi());
    println!("peak at theta {} phi {}", peak.theta_deg, peak.phi_deg);
    println!("directivity {:.2} dBi (q = {})", directivity(&p, peak)?, ef.q);
    println!(
        "ideal HPBW {:.1} deg",
        half_power_beamwidth_deg(layout.aperture_mm().0, 100.0, 0.0)
    );

    let cut = p.plane_cut(0.0);
    let max = p.max_magnitude();
    for (a, m) in cut.iter().step_by(20) {
        println!("  {a:+6.1} deg  {:7.2} dB", 20.0 * (m / max).log10());
    }

    let obs = Direction::new(20.0, 45.0)?;
    let direct = scattered_field(&layout, &model, &states, &ill, ef, obs)?;
    let w = element_weights(&layout, &model, &states, &ill)?;
    let fast = lattice_field(&layout, &w, &ill, ef, obs);
    println!(
        "direct vs lattice at (20, 45): {:.3e} relative",
        (direct - fast).norm() / direct.norm()
    );
    Ok(())
}
