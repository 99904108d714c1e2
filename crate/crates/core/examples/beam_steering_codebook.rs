//! Phase-gradient design, 1-bit quantization and the three SP3T beam
//! templates of each subarray; prints where each full-array beam peaks.
//!
//! cargo run --release --example beam_steering_codebook

use ris_sim::codebook::{
    build_subarray_codebook, design_phase_profile, quantize_1bit, BeamChoice, BeamLabel, SubarrayStateChoice,
    DEFAULT_BEAM_PLANE_PHI_DEG,
};
use ris_sim::field::{directivity, peak_direction, synthesize_pattern, ElementFactor, Illumination};
use ris_sim::geometry::{build_layout, partition_subarrays, Direction};
use ris_sim::unitcell::UnitCellModel;

fn main() -> ris_sim::Result<()> {
    let layout = build_layout(12, 8, 1.71)?;
    let part = partition_subarrays(&layout, 4, 4)?;
    let inc = Direction::new(30.0, 0.0)?;
    let f = 100.0;

    let refl = BeamLabel::Plus30.direction(DEFAULT_BEAM_PLANE_PHI_DEG);
    let profile = design_phase_profile(&layout, inc, refl, f);
    let q = quantize_1bit(&profile, 64)?;
    let n = profile.phases.len() as f64;
    println!(
        "PLUS_30 profile: offset {:.3} rad, coherent sum {:.2} of {n} ({:.2} dB quantization loss)",
        q.offset_rad,
        q.coherent_sum,
        20.0 * (n / q.coherent_sum).log10()
    );

    let cb = build_subarray_codebook(&part, f, inc)?;
    println!("{} templates over {} subarrays", cb.template_count(), cb.subarrays());
    let row: String = cb
        .template(0, BeamLabel::Plus30)
        .iter()
        .map(|s| s.label())
        .collect::<Vec<_>>()
        .join(" ");
    println!("subarray 0 PLUS_30: {row}");

    let model = UnitCellModel::default();
    let ill = Illumination::uniform(&layout, inc, f)?;
    for b in BeamLabel::ALL {
        let states = cb.expand(&SubarrayStateChoice::uniform(cb.subarrays(), BeamChoice::Beam(b)))?;
        let p = synthesize_pattern(&layout, &model, &states, &ill, ElementFactor::default(), 0.5)?;
        let pk = peak_direction(&p)?;
        println!(
            "{:>8}: target {:+} deg in plane phi={}, peak theta {} phi {}, {:.2} dBi",
            b.as_str(),
            b.angle_deg(),
            cb.beam_plane_phi_deg(),
            pk.theta_deg,
            pk.phi_deg,
            directivity(&p, pk)?
        );
    }
    Ok(())
}
