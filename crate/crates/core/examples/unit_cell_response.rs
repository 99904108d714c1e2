//! Two-state cross-polarized reflection across the band, with the isolated
//! (OFF) state and the band flags.
//!
//! cargo run --example unit_cell_response

use ris_sim::unitcell::{in_band, reflection_coefficient, CellState, UnitCellModel};

fn main() -> ris_sim::Result<()> {
    let model = UnitCellModel {
        structural_floor: 0.67,
        ..UnitCellModel::default()
    };
    println!(" f/GHz  |G0| dB  phase0  phase1  |Giso|  xpol copol");
    for f in [86.0, 90.0, 95.0, 100.0, 105.0, 110.0, 114.0] {
        let g0 = reflection_coefficient(&model, CellState::State0, f)?;
        let g1 = reflection_coefficient(&model, CellState::State1, f)?;
        let gi = reflection_coefficient(&model, CellState::Isolated, f)?;
        let b = in_band(&model, f);
        println!(
            "{f:6.1}  {:6.2}  {:6.1}  {:6.1}  {:.3}   {}    {}",
            20.0 * g0.norm().log10(),
            g0.arg().to_degrees(),
            g1.arg().to_degrees(),
            gi.norm(),
            u8::from(b.xpol_ok),
            u8::from(b.copol_suppressed)
        );
    }

    let skewed = UnitCellModel {
        phase_imbalance_deg: 2.0,
        ..UnitCellModel::default()
    };
    let d = (reflection_coefficient(&skewed, CellState::State1, 100.0)?
        / reflection_coefficient(&skewed, CellState::State0, 100.0)?)
    .arg()
    .to_degrees();
    println!("with 2 deg imbalance the state difference is {:.1} deg", d.abs());
    Ok(())
}
