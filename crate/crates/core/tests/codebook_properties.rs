use std::f64::consts::PI;

use proptest::prelude::*;

use ris_sim::codebook::{
    build_subarray_codebook, quantize_1bit, select_states_exhaustive, select_states_greedy, BeamChoice, BeamLabel,
    PhaseProfile, SubarrayStateChoice,
};
use ris_sim::field::{scattered_field, ElementFactor, Illumination};
use ris_sim::geometry::{build_layout, partition_subarrays, Direction};
use ris_sim::unitcell::UnitCellModel;

fn profile(phases: Vec<f64>) -> PhaseProfile {
    PhaseProfile {
        phases,
        design_freq_ghz: 100.0,
        design_incidence: Direction::boresight(),
        design_reflection: Direction::boresight(),
    }
}

fn direction(max_theta: f64) -> impl Strategy<Value = Direction> {
    (0.0f64..max_theta, -180.0f64..180.0).prop_map(|(t, p)| Direction::new(t, p).unwrap())
}

fn beam() -> impl Strategy<Value = BeamChoice> {
    prop_oneof![
        Just(BeamChoice::Beam(BeamLabel::Minus30)),
        Just(BeamChoice::Beam(BeamLabel::Zero)),
        Just(BeamChoice::Beam(BeamLabel::Plus30)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn residuals_within_quarter_turn(phases in prop::collection::vec(-PI..PI, 1..128), r in 1usize..65) {
        let p = profile(phases);
        let q = quantize_1bit(&p, r).unwrap();
        prop_assert!(q.residuals(&p).iter().all(|&x| x <= PI / 2.0 + 1e-12));
        prop_assert!(q.coherent_sum <= p.phases.len() as f64 + 1e-9);
    }

    #[test]
    fn nested_offset_refinement_never_hurts(phases in prop::collection::vec(-PI..PI, 1..128), r in 1usize..33) {
        let p = profile(phases);
        let coarse = quantize_1bit(&p, r).unwrap().coherent_sum;
        let fine = quantize_1bit(&p, 2 * r).unwrap().coherent_sum;
        prop_assert!(fine >= coarse * (1.0 - 1e-12));
    }

    #[test]
    fn flipped_expansion_negates_field(
        choice in prop::collection::vec(beam(), 6),
        inc in direction(60.0),
        obs in direction(90.0),
    ) {
        let l = build_layout(12, 8, 1.71).unwrap();
        let part = partition_subarrays(&l, 4, 4).unwrap();
        let cb = build_subarray_codebook(&part, 100.0, inc).unwrap();
        let s = cb.expand(&SubarrayStateChoice(choice)).unwrap();
        let ill = Illumination::uniform(&l, inc, 100.0).unwrap();
        let m = UnitCellModel::default();
        let ef = ElementFactor::default();
        let e = scattered_field(&l, &m, &s, &ill, ef, obs).unwrap();
        let ef_ = scattered_field(&l, &m, &s.flipped(), &ill, ef, obs).unwrap();
        prop_assert!((e + ef_).norm() <= 1e-9 * e.norm().max(1.0));
        prop_assert!((e.norm() - ef_.norm()).abs() <= 1e-9 * e.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exhaustive_dominates_greedy(
        sr in 2usize..=4,
        sc in 2usize..=4,
        pitch in 1.2f64..2.2,
        f in 95.0f64..105.0,
        inc in direction(60.0),
        obs in direction(60.0),
        floor in 0.0f64..0.8,
    ) {
        let l = build_layout(2 * sr, 3 * sc, pitch).unwrap();
        let part = partition_subarrays(&l, sr, sc).unwrap();
        let cb = build_subarray_codebook(&part, f, inc).unwrap();
        let ill = Illumination::uniform(&l, inc, f).unwrap();
        let m = UnitCellModel { structural_floor: floor, ..UnitCellModel::default() };
        let ef = ElementFactor::default();
        let ex = select_states_exhaustive(&cb, &m, &ill, ef, obs).unwrap();
        let gr = select_states_greedy(&cb, &m, &ill, ef, obs).unwrap();
        prop_assert!(ex.field_magnitude >= gr.field_magnitude * (1.0 - 1e-12));
        let direct = scattered_field(&l, &m, &cb.expand(&ex.choice).unwrap(), &ill, ef, obs).unwrap().norm();
        prop_assert!((direct - ex.field_magnitude).abs() <= 1e-9 * direct.max(1.0));
    }

    #[test]
    fn single_subarray_searches_agree(
        sr in 1usize..=5,
        sc in 1usize..=5,
        f in 95.0f64..105.0,
        inc in direction(60.0),
        obs in direction(60.0),
    ) {
        let l = build_layout(sr, sc, 1.71).unwrap();
        let part = partition_subarrays(&l, sr, sc).unwrap();
        let cb = build_subarray_codebook(&part, f, inc).unwrap();
        let ill = Illumination::uniform(&l, inc, f).unwrap();
        let m = UnitCellModel::default();
        let ef = ElementFactor::default();
        let ex = select_states_exhaustive(&cb, &m, &ill, ef, obs).unwrap();
        let gr = select_states_greedy(&cb, &m, &ill, ef, obs).unwrap();
        prop_assert_eq!(ex.choice, gr.choice);
    }
}
