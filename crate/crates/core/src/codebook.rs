//! Steering profiles, 1-bit quantization and SP3T subarray codebooks.
//!
//! Every subarray hangs off one SP3T switch whose three throws select a
//! fixed beam template (-30°, 0° or +30° in the beam plane). Templates are
//! cut from full-array 1-bit profiles designed in global coordinates, so
//! subarrays that pick the same beam add coherently.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{element_weights, steering_kernel, ElementFactor, Illumination, StateVector};
use crate::geometry::{direction_to_unit_vector, wavenumber, ArrayLayout, Direction, SubarrayPartition};
use crate::unitcell::{CellState, UnitCellModel};

/// Offset samples over `[0, π)` used when quantizing codebook templates.
pub const DEFAULT_REFERENCE_OFFSETS: usize = 64;

/// Azimuth of the plane holding the -30/0/+30 beams, degrees.
pub const DEFAULT_BEAM_PLANE_PHI_DEG: f64 = 90.0;

/// Largest configuration space the exhaustive search will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

/// Relative margin under which two searched field magnitudes count as tied.
const TIE_RTOL: f64 = 1e-12;

/// Wraps an angle into `[-π, π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let w = (x + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Continuous per-element reflection phase for one steering task.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    pub phases: Vec<f64>,
    pub design_freq_ghz: f64,
    pub design_incidence: Direction,
    pub design_reflection: Direction,
}

/// Phase-gradient profile `wrap(-k r·(u_inc + u_refl))` that makes the
/// scattered contributions add in phase toward `refl`.
pub fn design_phase_profile(layout: &ArrayLayout, inc: Direction, refl: Direction, freq_ghz: f64) -> PhaseProfile {
    let k = wavenumber(freq_ghz);
    let ui = direction_to_unit_vector(inc);
    let ur = direction_to_unit_vector(refl);
    let (sx, sy) = (ui[0] + ur[0], ui[1] + ur[1]);
    let phases = layout
        .positions()
        .iter()
        .map(|&(x, y)| wrap_phase(-k * (x * sx + y * sy)))
        .collect();
    PhaseProfile {
        phases,
        design_freq_ghz: freq_ghz,
        design_incidence: inc,
        design_reflection: refl,
    }
}

/// Outcome of [`quantize_1bit`].
#[derive(Debug, Clone, PartialEq)]
pub struct Quantized {
    pub states: StateVector,
    /// Global reference phase ρ of the two-level alphabet `{ρ, ρ + π}`.
    pub offset_rad: f64,
    /// `|Σ exp(j(φ - ρ - sπ))|` for the returned assignment.
    pub coherent_sum: f64,
}

impl Quantized {
    /// Per-element `|wrap(φ - ρ - sπ)|`.
    pub fn residuals(&self, profile: &PhaseProfile) -> Vec<f64> {
        profile
            .phases
            .iter()
            .zip(self.states.states())
            .map(|(&phi, s)| wrap_phase(phi - self.offset_rad - level(*s)).abs())
            .collect()
    }
}

fn level(s: CellState) -> f64 {
    match s {
        CellState::State1 => PI,
        _ => 0.0,
    }
}

/// Maps a continuous profile onto the two current-reversal states, scanning
/// `reference_offsets` global offsets uniformly over `[0, π)` and keeping the
/// one with the largest coherent sum (first offset wins ties).
pub fn quantize_1bit(profile: &PhaseProfile, reference_offsets: usize) -> Result<Quantized> {
    quantize_phases(&profile.phases, reference_offsets)
}

fn quantize_phases(phases: &[f64], reference_offsets: usize) -> Result<Quantized> {
    if reference_offsets == 0 {
        return Err(Error::InvalidArgument("reference_offsets must be at least 1".into()));
    }
    let mut best: Option<Quantized> = None;
    for r in 0..reference_offsets {
        let rho = PI * r as f64 / reference_offsets as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        let states: Vec<CellState> = phases
            .iter()
            .map(|&phi| {
                let d0 = wrap_phase(phi - rho);
                let d1 = wrap_phase(phi - rho - PI);
                if d0.abs() <= d1.abs() {
                    sum += Complex64::from_polar(1.0, d0);
                    CellState::State0
                } else {
                    sum += Complex64::from_polar(1.0, d1);
                    CellState::State1
                }
            })
            .collect();
        let coherent = sum.norm();
        if best.as_ref().is_none_or(|b| coherent > b.coherent_sum * (1.0 + 1e-12)) {
            best = Some(Quantized {
                states: StateVector(states),
                offset_rad: rho,
                coherent_sum: coherent,
            });
        }
    }
    Ok(best.expect("at least one offset scanned"))
}

/// The three SP3T beam throws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BeamLabel {
    Minus30,
    Zero,
    Plus30,
}

impl BeamLabel {
    pub const ALL: [BeamLabel; 3] = [BeamLabel::Minus30, BeamLabel::Zero, BeamLabel::Plus30];

    /// Signed steering angle inside the beam plane, degrees.
    pub fn angle_deg(self) -> f64 {
        match self {
            BeamLabel::Minus30 => -30.0,
            BeamLabel::Zero => 0.0,
            BeamLabel::Plus30 => 30.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BeamLabel::Minus30 => "MINUS_30",
            BeamLabel::Zero => "ZERO",
            BeamLabel::Plus30 => "PLUS_30",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        BeamLabel::ALL.into_iter().find(|b| b.as_str() == s)
    }

    /// Design direction of this beam in the plane of azimuth `plane_phi_deg`.
    pub fn direction(self, plane_phi_deg: f64) -> Direction {
        Direction::in_plane(self.angle_deg(), plane_phi_deg).expect("±30° is inside the hemisphere")
    }
}

/// Per-subarray switch selection: one of the beams, or every throw isolated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BeamChoice {
    Beam(BeamLabel),
    IsolatedAll,
}

impl BeamChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            BeamChoice::Beam(b) => b.as_str(),
            BeamChoice::IsolatedAll => "ISOLATED_ALL",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s == "ISOLATED_ALL" {
            Some(BeamChoice::IsolatedAll)
        } else {
            BeamLabel::parse(s).map(BeamChoice::Beam)
        }
    }
}

impl std::fmt::Display for BeamChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One entry per subarray.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubarrayStateChoice(pub Vec<BeamChoice>);

impl SubarrayStateChoice {
    pub fn uniform(subarrays: usize, choice: BeamChoice) -> Self {
        SubarrayStateChoice(vec![choice; subarrays])
    }
}

/// Per-subarray 1-bit templates for the three SP3T beams.
#[derive(Debug, Clone, PartialEq)]
pub struct SubarrayCodebook {
    partition: SubarrayPartition,
    /// `templates[g][beam]` holds the states of group `g`'s elements, in the
    /// order of `partition.groups()[g]`.
    templates: Vec<[Vec<CellState>; 3]>,
    design_freq_ghz: f64,
    design_incidence: Direction,
    beam_plane_phi_deg: f64,
    offsets_rad: [f64; 3],
}

impl SubarrayCodebook {
    pub fn partition(&self) -> &SubarrayPartition {
        &self.partition
    }

    pub fn subarrays(&self) -> usize {
        self.templates.len()
    }

    pub fn template(&self, group: usize, beam: BeamLabel) -> &[CellState] {
        &self.templates[group][beam.index()]
    }

    pub fn design_freq_ghz(&self) -> f64 {
        self.design_freq_ghz
    }

    pub fn design_incidence(&self) -> Direction {
        self.design_incidence
    }

    pub fn beam_plane_phi_deg(&self) -> f64 {
        self.beam_plane_phi_deg
    }

    /// Quantization offset chosen for each beam's full-array profile.
    pub fn offset_rad(&self, beam: BeamLabel) -> f64 {
        self.offsets_rad[beam.index()]
    }

    pub fn template_count(&self) -> usize {
        self.templates.len() * 3
    }

    /// Full per-element state vector for a subarray selection.
    pub fn expand(&self, choice: &SubarrayStateChoice) -> Result<StateVector> {
        if choice.0.len() != self.subarrays() {
            return Err(Error::Shape(format!(
                "choice lists {} subarrays, codebook has {}",
                choice.0.len(),
                self.subarrays()
            )));
        }
        let mut states = vec![CellState::Isolated; self.partition.layout().len()];
        for (g, c) in choice.0.iter().enumerate() {
            if let BeamChoice::Beam(b) = c {
                for (&e, &s) in self.partition.groups()[g].iter().zip(self.template(g, *b)) {
                    states[e] = s;
                }
            }
        }
        Ok(StateVector(states))
    }
}

/// Codebook with beams in the default beam plane.
pub fn build_subarray_codebook(
    partition: &SubarrayPartition,
    freq_ghz: f64,
    design_incidence: Direction,
) -> Result<SubarrayCodebook> {
    build_subarray_codebook_in_plane(partition, freq_ghz, design_incidence, DEFAULT_BEAM_PLANE_PHI_DEG)
}

/// Designs the -30/0/+30 templates in the plane of azimuth `beam_plane_phi_deg`.
///
/// Each beam is quantized once over the whole aperture with a single global
/// offset and then split by subarray; positions stay global.
pub fn build_subarray_codebook_in_plane(
    partition: &SubarrayPartition,
    freq_ghz: f64,
    design_incidence: Direction,
    beam_plane_phi_deg: f64,
) -> Result<SubarrayCodebook> {
    if !(freq_ghz > 0.0 && freq_ghz.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "design frequency must be positive, got {freq_ghz} GHz"
        )));
    }
    let layout = partition.layout();
    let mut templates: Vec<[Vec<CellState>; 3]> = vec![Default::default(); partition.len()];
    let mut offsets_rad = [0.0; 3];
    for beam in BeamLabel::ALL {
        let refl = beam.direction(beam_plane_phi_deg);
        let profile = design_phase_profile(layout, design_incidence, refl, freq_ghz);
        let q = quantize_1bit(&profile, DEFAULT_REFERENCE_OFFSETS)?;
        offsets_rad[beam.index()] = q.offset_rad;
        for (g, members) in partition.groups().iter().enumerate() {
            templates[g][beam.index()] = members.iter().map(|&e| q.states.0[e]).collect();
        }
    }
    Ok(SubarrayCodebook {
        partition: partition.clone(),
        templates,
        design_freq_ghz: freq_ghz,
        design_incidence,
        beam_plane_phi_deg,
        offsets_rad,
    })
}

/// Search result: the selection and the `|E|` it achieves at the observation
/// direction.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub choice: SubarrayStateChoice,
    pub field_magnitude: f64,
}

/// Complex field contributed by each subarray under each beam template at
/// one observation direction. The scattered field of a full selection is the
/// sum of the chosen contributions.
fn subarray_contributions(
    codebook: &SubarrayCodebook,
    model: &UnitCellModel,
    ill: &Illumination,
    ef: ElementFactor,
    obs: Direction,
) -> Result<Vec<[Complex64; 3]>> {
    let layout = codebook.partition.layout();
    let kernel = steering_kernel(layout, ill, ef, obs);
    let mut out = Vec::with_capacity(codebook.subarrays());
    let per_beam: Vec<Vec<Complex64>> = BeamLabel::ALL
        .iter()
        .map(|&b| {
            let states = codebook.expand(&SubarrayStateChoice::uniform(codebook.subarrays(), BeamChoice::Beam(b)))?;
            element_weights(layout, model, &states, ill)
        })
        .collect::<Result<_>>()?;
    for members in codebook.partition.groups() {
        let mut c = [Complex64::new(0.0, 0.0); 3];
        for (b, weights) in per_beam.iter().enumerate() {
            c[b] = members.iter().map(|&e| weights[e] * kernel[e]).sum();
        }
        out.push(c);
    }
    Ok(out)
}

fn beats(candidate: f64, best: f64) -> bool {
    candidate > best + TIE_RTOL * best.abs()
}

/// Enumerates all `3^N` beam assignments and returns the one maximizing
/// `|E(obs)|`; ties go to the lexicographically smallest assignment.
pub fn select_states_exhaustive(
    codebook: &SubarrayCodebook,
    model: &UnitCellModel,
    ill: &Illumination,
    ef: ElementFactor,
    obs: Direction,
) -> Result<Selection> {
    let n = codebook.subarrays();
    let space = 3u64
        .checked_pow(n as u32)
        .filter(|&s| s <= EXHAUSTIVE_LIMIT)
        .ok_or(Error::TooLarge {
            subarrays: n,
            limit: EXHAUSTIVE_LIMIT,
        })?;
    let contrib = subarray_contributions(codebook, model, ill, ef, obs)?;
    let mut digits = vec![0usize; n];
    let mut best_mag = -1.0;
    let mut best = digits.clone();
    for _ in 0..space {
        let e: Complex64 = digits.iter().zip(&contrib).map(|(&d, c)| c[d]).sum();
        let mag = e.norm();
        if beats(mag, best_mag) {
            best_mag = mag;
            best.copy_from_slice(&digits);
        }
        // odometer, last subarray fastest so the scan is lexicographic
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < 3 {
                break;
            }
            *d = 0;
        }
    }
    Ok(Selection {
        choice: SubarrayStateChoice(best.into_iter().map(|d| BeamChoice::Beam(BeamLabel::ALL[d])).collect()),
        field_magnitude: best_mag,
    })
}

/// Picks, independently for each subarray, the template whose contribution
/// is best phase-aligned with the ideal continuous profile toward `obs`,
/// i.e. the largest `|Σ_e w_e Γ_e exp(j k r_e·(u_inc + u_obs))|`.
pub fn select_states_greedy(
    codebook: &SubarrayCodebook,
    model: &UnitCellModel,
    ill: &Illumination,
    ef: ElementFactor,
    obs: Direction,
) -> Result<Selection> {
    let contrib = subarray_contributions(codebook, model, ill, ef, obs)?;
    let mut total = Complex64::new(0.0, 0.0);
    let choice = contrib
        .iter()
        .map(|c| {
            let mut pick = 0;
            for b in 1..3 {
                if beats(c[b].norm(), c[pick].norm()) {
                    pick = b;
                }
            }
            total += c[pick];
            BeamChoice::Beam(BeamLabel::ALL[pick])
        })
        .collect();
    Ok(Selection {
        choice: SubarrayStateChoice(choice),
        field_magnitude: total.norm(),
    })
}
