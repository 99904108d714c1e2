//! Exhaustive versus greedy subarray beam selection toward several
//! observation directions.
//!
//! cargo run --release --example subarray_search

use ris_sim::codebook::{build_subarray_codebook, select_states_exhaustive, select_states_greedy, BeamLabel};
use ris_sim::field::{ElementFactor, Illumination};
use ris_sim::geometry::{build_layout, partition_subarrays, Direction};
use ris_sim::unitcell::UnitCellModel;

fn labels(c: &ris_sim::codebook::SubarrayStateChoice) -> String {
    c.0.iter().map(|b| b.as_str()).collect::<Vec<_>>().join(",")
}

fn main() -> ris_sim::Result<()> {
    let layout = build_layout(12, 8, 1.71)?;
    let part = partition_subarrays(&layout, 4, 4)?;
    let inc = Direction::new(30.0, 0.0)?;
    let cb = build_subarray_codebook(&part, 100.0, inc)?;
    let model = UnitCellModel::default();
    let ill = Illumination::uniform(&layout, inc, 100.0)?;
    let ef = ElementFactor::default();

    let mut targets = vec![
        Direction::boresight(),
        Direction::new(15.0, 90.0)?,
        Direction::new(20.0, 45.0)?,
    ];
    targets.extend(BeamLabel::ALL.map(|b| b.direction(cb.beam_plane_phi_deg())));
    for obs in targets {
        let ex = select_states_exhaustive(&cb, &model, &ill, ef, obs)?;
        let gr = select_states_greedy(&cb, &model, &ill, ef, obs)?;
        println!(
            "obs ({:5.1}, {:6.1}): exhaustive |E| {:7.3} [{}]  greedy |E| {:7.3} [{}]",
            obs.theta_deg,
            obs.phi_deg,
            ex.field_magnitude,
            labels(&ex.choice),
            gr.field_magnitude,
            labels(&gr.choice)
        );
    }
    Ok(())
}
