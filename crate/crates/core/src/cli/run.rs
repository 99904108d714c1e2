//! Scenario orchestration: codebook, state search, ON/OFF fields, pattern
//! metrics and budget prediction per swept frequency.

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{Scenario, SearchMethod};
use crate::budget::predict_enhancement;
use crate::codebook::{
    build_subarray_codebook_in_plane, select_states_exhaustive, select_states_greedy, BeamChoice, SubarrayCodebook,
    SubarrayStateChoice,
};
use crate::error::{Error, Result};
use crate::field::{
    directivity, field_ratio_db, peak_direction, scattered_field, steering_kernel, synthesize_pattern, Enhancement,
    FarFieldPattern, Illumination, StateVector,
};
use crate::geometry::Direction;
use crate::unitcell::{in_band, BandStatus, UnitCellModel};

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRecord {
    pub freq_ghz: f64,
    pub on_field: Complex64,
    pub off_field: Complex64,
    pub enhancement: Enhancement,
    /// Loss-corrected enhancement; `None` when the budget is disabled or
    /// cannot be evaluated at this frequency (see `notes`).
    pub predicted_db: Option<f64>,
    pub peak: Direction,
    /// Directivity of the ON pattern at its peak, dBi.
    pub directivity_dbi: f64,
    pub choice: SubarrayStateChoice,
    pub band: BandStatus,
    pub notes: Vec<String>,
}

/// Settings every report carries, including defaulted ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub config_digest: String,
    pub angle_convention: String,
    pub element_q: f64,
    pub off_floor: f64,
    pub isolation_db: f64,
    pub grid_step_deg: f64,
    pub search: SearchMethod,
    pub off_model: String,
    pub defaults: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub records: Vec<FrequencyRecord>,
    pub provenance: Provenance,
}

/// Which state vector a pattern is synthesized for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternState {
    /// The searched ON selection.
    On,
    /// Every throw isolated.
    Off,
    /// The same beam on every subarray.
    Uniform(BeamChoice),
}

/// Codebook, selection and ON/OFF state vectors at one frequency.
#[derive(Debug, Clone)]
pub struct OperatingPoint {
    pub codebook: SubarrayCodebook,
    pub choice: SubarrayStateChoice,
    pub on: StateVector,
    pub off: StateVector,
    pub illumination: Illumination,
}

pub fn operating_point(s: &Scenario, freq_ghz: f64) -> Result<OperatingPoint> {
    let ill = Illumination::uniform(&s.layout, s.incidence, freq_ghz)?;
    let codebook = build_subarray_codebook_in_plane(
        &s.partition,
        s.design_freq_ghz.unwrap_or(freq_ghz),
        s.incidence,
        s.beam_plane_phi_deg,
    )?;
    let sel = match s.search {
        SearchMethod::Exhaustive => {
            select_states_exhaustive(&codebook, &s.model, &ill, s.element_factor, s.observation)?
        }
        SearchMethod::Greedy => select_states_greedy(&codebook, &s.model, &ill, s.element_factor, s.observation)?,
    };
    let on = codebook.expand(&sel.choice)?;
    let off = codebook.expand(&SubarrayStateChoice::uniform(
        codebook.subarrays(),
        BeamChoice::IsolatedAll,
    ))?;
    Ok(OperatingPoint {
        codebook,
        choice: sel.choice,
        on,
        off,
        illumination: ill,
    })
}

pub fn scenario_pattern(s: &Scenario, freq_ghz: f64, which: PatternState) -> Result<FarFieldPattern> {
    let op = operating_point(s, freq_ghz)?;
    let states = match which {
        PatternState::On => op.on,
        PatternState::Off => op.off,
        PatternState::Uniform(c) => op
            .codebook
            .expand(&SubarrayStateChoice::uniform(op.codebook.subarrays(), c))?,
    };
    synthesize_pattern(
        &s.layout,
        &s.model,
        &states,
        &op.illumination,
        s.element_factor,
        s.grid_step_deg,
    )
}

fn evaluate_frequency(s: &Scenario, freq_ghz: f64) -> Result<FrequencyRecord> {
    let op = operating_point(s, freq_ghz)?;
    let ill = &op.illumination;
    let on_field = scattered_field(&s.layout, &s.model, &op.on, ill, s.element_factor, s.observation)?;
    let off_field = scattered_field(&s.layout, &s.model, &op.off, ill, s.element_factor, s.observation)?;
    let enhancement = field_ratio_db(on_field, off_field);

    let pattern = synthesize_pattern(&s.layout, &s.model, &op.on, ill, s.element_factor, s.grid_step_deg)?;
    let peak = peak_direction(&pattern)?;
    let directivity_dbi = directivity(&pattern, peak)?;

    let mut notes = Vec::new();
    let band = in_band(&s.model, freq_ghz);
    if !band.xpol_ok {
        notes.push(format!("{freq_ghz} GHz is outside the cross-pol band"));
    }
    if !band.copol_suppressed {
        notes.push(format!("{freq_ghz} GHz is outside the co-pol suppression band"));
    }
    let predicted_db = match (&s.budget, enhancement) {
        (None, _) => None,
        (Some(_), Enhancement::FloorLimited) => {
            notes.push(format!("{freq_ghz} GHz: enhancement is floor-limited, budget omitted"));
            None
        }
        (Some(b), Enhancement::Db(db)) => match predict_enhancement(db, b, freq_ghz) {
            Ok(p) => Some(p),
            Err(e @ Error::ExtrapolationRefused { .. }) => {
                notes.push(format!("budget omitted: {e}"));
                None
            }
            Err(e) => return Err(e),
        },
    };

    Ok(FrequencyRecord {
        freq_ghz,
        on_field,
        off_field,
        enhancement,
        predicted_db,
        peak,
        directivity_dbi,
        choice: op.choice,
        band,
        notes,
    })
}

/// Runs every swept frequency; records come back in sweep order.
pub fn run_scenario(s: &Scenario) -> Result<RunReport> {
    let records = s
        .frequencies_ghz
        .par_iter()
        .map(|&f| evaluate_frequency(s, f))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunReport {
        records,
        provenance: provenance(s),
    })
}

pub fn provenance(s: &Scenario) -> Provenance {
    Provenance {
        config_digest: s.config_digest.clone(),
        angle_convention: s.angle_convention().to_string(),
        element_q: s.element_factor.q,
        off_floor: s.model.structural_floor,
        isolation_db: s.model.isolation_db,
        grid_step_deg: s.grid_step_deg,
        search: s.search,
        off_model: "isolated cell = (switch leakage + structural floor) in phase with STATE_0".into(),
        defaults: s.defaults.clone(),
    }
}

/// Structural OFF floor that makes the scenario's enhancement at `freq_ghz`
/// equal `target_db`. The ON selection does not involve isolated cells, and
/// the OFF field is linear in the isolated amplitude, so the floor follows in
/// closed form.
pub fn calibrate_structural_floor(s: &Scenario, freq_ghz: f64, target_db: f64) -> Result<f64> {
    let op = operating_point(s, freq_ghz)?;
    let on = scattered_field(
        &s.layout,
        &s.model,
        &op.on,
        &op.illumination,
        s.element_factor,
        s.observation,
    )?
    .norm();
    let kernel: Complex64 = steering_kernel(&s.layout, &op.illumination, s.element_factor, s.observation)
        .iter()
        .zip(&op.illumination.taper)
        .map(|(k, w)| k * w)
        .sum();
    if !(kernel.norm() > 0.0) {
        return Err(Error::DegeneratePattern(
            "OFF aperture sum vanishes at the observation direction; any floor gives infinite enhancement".into(),
        ));
    }
    let isolated = on / (kernel.norm() * 10f64.powf(target_db / 20.0));
    let floor = isolated - s.model.leakage_amplitude();
    if floor < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{target_db} dB is out of reach: switch leakage alone limits enhancement to {:.2} dB",
            20.0 * (on / (kernel.norm() * s.model.leakage_amplitude())).log10()
        )));
    }
    let calibrated = UnitCellModel {
        structural_floor: floor,
        ..s.model.clone()
    };
    calibrated.validate()?;
    Ok(floor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_config;

    const FIG11: &str = r#"
[layout]
rows = 12
cols = 8
period_mm = 1.71
[partition]
sub_rows = 4
sub_cols = 4
[geometry]
incidence = [30.0, 0.0]
reflection = [0.0, 0.0]
[sweep]
frequencies_ghz = [100.0]
[field]
grid_step_deg = 2.0
"#;

    #[test]
    fn one_record_per_frequency_with_provenance() {
        let s = parse_config(&FIG11.replace("frequencies_ghz = [100.0]", "frequencies_ghz = [98.0, 100.0, 102.0]"))
            .unwrap();
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.records.len(), 3);
        assert_eq!(
            r.records.iter().map(|x| x.freq_ghz).collect::<Vec<_>>(),
            vec![98.0, 100.0, 102.0]
        );
        assert_eq!(r.provenance.config_digest, s.config_digest);
        assert_eq!(r.provenance.element_q, 0.5);
    }

    #[test]
    fn calibration_hits_target() {
        let s = parse_config(FIG11).unwrap();
        let floor = calibrate_structural_floor(&s, 100.0, 17.9).unwrap();
        assert!(floor > 0.0 && floor < 1.0);
        let mut c = s.clone();
        c.model.structural_floor = floor;
        let rec = &run_scenario(&c).unwrap().records[0];
        assert!((rec.enhancement.db().unwrap() - 17.9).abs() < 1e-9);
    }

    #[test]
    fn unreachable_target_reports_leakage_limit() {
        let s = parse_config(FIG11).unwrap();
        assert!(calibrate_structural_floor(&s, 100.0, 80.0).is_err());
    }

    #[test]
    fn budget_outside_table_is_noted() {
        let s = parse_config(&format!(
            "{}[budget]\n",
            FIG11.replace("frequencies_ghz = [100.0]", "frequencies_ghz = [95.0, 100.0]")
        ))
        .unwrap();
        let r = run_scenario(&s).unwrap();
        assert_eq!(r.records[0].predicted_db, None);
        assert!(r.records[0].notes.iter().any(|n| n.contains("budget omitted")));
        let ideal = r.records[1].enhancement.db().unwrap();
        assert!((r.records[1].predicted_db.unwrap() - (ideal - 11.8)).abs() < 1e-9);
    }

    #[test]
    fn off_pattern_is_weaker_than_on() {
        let s = parse_config(FIG11).unwrap();
        let on = scenario_pattern(&s, 100.0, PatternState::On).unwrap();
        let off = scenario_pattern(&s, 100.0, PatternState::Off).unwrap();
        assert!(on.sample(Direction::boresight()).norm() > off.sample(Direction::boresight()).norm());
    }
}
