//! SP3T driver outputs per selected path, and validation and expansion of
//! a time-modulated subarray schedule.
//!
//! cargo run --example switch_schedule

use ris_sim::codebook::{build_subarray_codebook, BeamChoice, BeamLabel, SubarrayStateChoice};
use ris_sim::control::{
    schedule_to_state_vectors, set_state, validate_schedule, DriverConfig, Pad, PathSelect, Sp3tController,
    StateSchedule,
};
use ris_sim::geometry::{build_layout, partition_subarrays, Direction};

fn main() -> ris_sim::Result<()> {
    let drv = DriverConfig::default();
    println!(
        "driver rails VCC {} V, VEE {} V, {} ohm bias resistors",
        drv.v_cc, drv.v_ee, drv.bias_resistor_ohm
    );
    for p in [
        PathSelect::Path1,
        PathSelect::Path2,
        PathSelect::Path3,
        PathSelect::AllIsolated,
    ] {
        let s = set_state(p);
        let pads: Vec<String> = Pad::ALL
            .iter()
            .map(|&pad| format!("{pad:?}={:?}", s.bias_on(pad)))
            .collect();
        println!(
            "{p:?} ({}): {}  {:.0} mA",
            p.to_choice(),
            pads.join(" "),
            s.forward_current_a() * 1e3
        );
    }

    let mut ctl = Sp3tController::new(Default::default());
    for p in [
        PathSelect::Path2,
        PathSelect::Path2,
        PathSelect::Path3,
        PathSelect::Path1,
    ] {
        ctl.select(p);
    }
    println!("controller made {} transitions", ctl.transitions());

    let layout = build_layout(12, 8, 1.71)?;
    let part = partition_subarrays(&layout, 4, 4)?;
    let cb = build_subarray_codebook(&part, 100.0, Direction::new(30.0, 0.0)?)?;
    let beam = |b| SubarrayStateChoice::uniform(part.len(), BeamChoice::Beam(b));
    let sched = StateSchedule::from_choices(vec![
        (0.0, beam(BeamLabel::Zero)),
        (5e-9, beam(BeamLabel::Plus30)),
        (10e-9, SubarrayStateChoice::uniform(part.len(), BeamChoice::IsolatedAll)),
        (11e-9, beam(BeamLabel::Zero)),
    ]);
    let rep = validate_schedule(&sched, 2e-9)?;
    println!(
        "schedule feasible = {}, min dwell {:?} s, modulation rate {:?} Hz, violations {:?}",
        rep.feasible, rep.min_dwell_s, rep.modulation_rate_hz, rep.violations
    );
    for (t, v) in schedule_to_state_vectors(&sched, &cb, &part)? {
        println!("  t = {t:e} s  state vector {}", v.digest());
    }
    Ok(())
}
