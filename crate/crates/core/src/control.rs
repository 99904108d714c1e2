//! SP3T switch driver state machine and time-modulated state schedules.
//!
//! The driver holds every unselected throw in isolation with ~10 mA of
//! forward bias and activates the selected throw with a reverse bias. Pads
//! B2, B3 and B4 drive paths 1, 2 and 3 by default.

use crate::codebook::{BeamChoice, BeamLabel, SubarrayCodebook, SubarrayStateChoice};
use crate::error::{Error, Result};
use crate::field::StateVector;
use crate::geometry::SubarrayPartition;

/// Forward current of one isolated throw, A.
pub const FORWARD_BIAS_CURRENT_A: f64 = 0.010;

/// Supply rails and passives of the bias driver. Recorded as metadata; the
/// driver's analog dynamics are not simulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriverConfig {
    pub v_cc: f64,
    pub v_opt: f64,
    pub v_ee: f64,
    pub bias_resistor_ohm: f64,
    pub coupling_capacitor_f: f64,
    pub decoupling_capacitor_f: f64,
}

impl DriverConfig {
    /// MADR-009190 driver as populated on the control board.
    pub fn madr_009190() -> Self {
        DriverConfig {
            v_cc: 5.0,
            v_opt: 5.0,
            v_ee: -5.0,
            bias_resistor_ohm: 320.0,
            coupling_capacitor_f: 470e-12,
            decoupling_capacitor_f: 0.1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v_cc > 0.0 && self.v_ee < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "driver rails need VCC > 0 > VEE, got VCC={} VEE={}",
                self.v_cc, self.v_ee
            )));
        }
        Ok(())
    }
}

impl Default for DriverConfig {
    fn default() -> Self {
        DriverConfig::madr_009190()
    }
}

/// Which throw of the SP3T is routed through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathSelect {
    Path1,
    Path2,
    Path3,
    AllIsolated,
}

impl PathSelect {
    pub const PATHS: [PathSelect; 3] = [PathSelect::Path1, PathSelect::Path2, PathSelect::Path3];

    /// Throw wired to each beam: -30° on path 1, 0° on path 2, +30° on path 3.
    pub fn from_choice(c: BeamChoice) -> Self {
        match c {
            BeamChoice::Beam(BeamLabel::Minus30) => PathSelect::Path1,
            BeamChoice::Beam(BeamLabel::Zero) => PathSelect::Path2,
            BeamChoice::Beam(BeamLabel::Plus30) => PathSelect::Path3,
            BeamChoice::IsolatedAll => PathSelect::AllIsolated,
        }
    }

    pub fn to_choice(self) -> BeamChoice {
        match self {
            PathSelect::Path1 => BeamChoice::Beam(BeamLabel::Minus30),
            PathSelect::Path2 => BeamChoice::Beam(BeamLabel::Zero),
            PathSelect::Path3 => BeamChoice::Beam(BeamLabel::Plus30),
            PathSelect::AllIsolated => BeamChoice::IsolatedAll,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pad {
    B2,
    B3,
    B4,
}

impl Pad {
    pub const ALL: [Pad; 3] = [Pad::B2, Pad::B3, Pad::B4];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PadBias {
    Forward10mA,
    ReverseBias,
}

/// Bijection from bias pads to switch throws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PadMapping {
    /// `paths[i]` is the throw driven by `Pad::ALL[i]`.
    paths: [PathSelect; 3],
}

impl PadMapping {
    pub fn new(b2: PathSelect, b3: PathSelect, b4: PathSelect) -> Result<Self> {
        let paths = [b2, b3, b4];
        let mut sorted = paths;
        sorted.sort();
        if sorted != PathSelect::PATHS {
            return Err(Error::InvalidArgument(format!(
                "pad mapping {paths:?} is not a bijection onto the three paths"
            )));
        }
        Ok(PadMapping { paths })
    }

    pub fn path_of(&self, pad: Pad) -> PathSelect {
        self.paths[pad as usize]
    }
}

impl Default for PadMapping {
    fn default() -> Self {
        PadMapping {
            paths: PathSelect::PATHS,
        }
    }
}

/// Driver outputs for one switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwitchState {
    pub selected: PathSelect,
    /// Indexed like [`Pad::ALL`].
    pub bias: [PadBias; 3],
}

impl SwitchState {
    pub fn bias_on(&self, pad: Pad) -> PadBias {
        self.bias[pad as usize]
    }

    pub fn bias_outputs(&self) -> Vec<(Pad, PadBias)> {
        Pad::ALL.iter().map(|&p| (p, self.bias_on(p))).collect()
    }

    pub fn forward_pads(&self) -> usize {
        self.bias.iter().filter(|b| **b == PadBias::Forward10mA).count()
    }

    /// Total forward bias current drawn by this switch, A.
    pub fn forward_current_a(&self) -> f64 {
        self.forward_pads() as f64 * FORWARD_BIAS_CURRENT_A
    }
}

/// Bias pattern for `target` under the default pad mapping.
pub fn set_state(target: PathSelect) -> SwitchState {
    set_state_with(&PadMapping::default(), target)
}

pub fn set_state_with(mapping: &PadMapping, target: PathSelect) -> SwitchState {
    let mut bias = [PadBias::Forward10mA; 3];
    for pad in Pad::ALL {
        if mapping.path_of(pad) == target {
            bias[pad as usize] = PadBias::ReverseBias;
        }
    }
    SwitchState { selected: target, bias }
}

/// Single-owner controller for one SP3T, counting transitions.
#[derive(Debug, Clone)]
pub struct Sp3tController {
    mapping: PadMapping,
    state: SwitchState,
    transitions: usize,
}

impl Sp3tController {
    /// Starts with every throw isolated.
    pub fn new(mapping: PadMapping) -> Self {
        Sp3tController {
            mapping,
            state: set_state_with(&mapping, PathSelect::AllIsolated),
            transitions: 0,
        }
    }

    pub fn select(&mut self, target: PathSelect) -> SwitchState {
        if target != self.state.selected {
            self.transitions += 1;
        }
        self.state = set_state_with(&self.mapping, target);
        self.state
    }

    pub fn state(&self) -> SwitchState {
        self.state
    }

    pub fn transitions(&self) -> usize {
        self.transitions
    }
}

/// One step of a time-modulated schedule: per-switch (per-subarray) states.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleEntry {
    pub time_s: f64,
    pub switches: Vec<SwitchState>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StateSchedule {
    pub entries: Vec<ScheduleEntry>,
}

impl StateSchedule {
    /// Builds a schedule from per-subarray beam choices.
    pub fn from_choices(steps: Vec<(f64, SubarrayStateChoice)>) -> Self {
        StateSchedule {
            entries: steps
                .into_iter()
                .map(|(t, c)| ScheduleEntry {
                    time_s: t,
                    switches: c.0.into_iter().map(|b| set_state(PathSelect::from_choice(b))).collect(),
                })
                .collect(),
        }
    }
}

/// Timing feasibility of a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleReport {
    pub feasible: bool,
    /// Shortest gap between consecutive entries; `None` for a single entry.
    pub min_dwell_s: Option<f64>,
    /// `1 / min_dwell`, Hz.
    pub modulation_rate_hz: Option<f64>,
    /// `(index of later entry, gap)` for every gap below the switching time.
    pub violations: Vec<(usize, f64)>,
}

pub fn validate_schedule(s: &StateSchedule, switching_time_s: f64) -> Result<ScheduleReport> {
    let first = s
        .entries
        .first()
        .ok_or_else(|| Error::InvalidArgument("schedule is empty".into()))?;
    if first.time_s != 0.0 {
        return Err(Error::Ordering(format!(
            "first entry must be at t = 0, found {} s",
            first.time_s
        )));
    }
    let mut min_dwell: Option<f64> = None;
    let mut violations = Vec::new();
    for (i, w) in s.entries.windows(2).enumerate() {
        let gap = w[1].time_s - w[0].time_s;
        if !(gap > 0.0) {
            return Err(Error::Ordering(format!(
                "entry {} at {} s does not follow entry {} at {} s",
                i + 1,
                w[1].time_s,
                i,
                w[0].time_s
            )));
        }
        if gap < switching_time_s {
            violations.push((i + 1, gap));
        }
        min_dwell = Some(min_dwell.map_or(gap, |m| m.min(gap)));
    }
    Ok(ScheduleReport {
        feasible: violations.is_empty(),
        min_dwell_s: min_dwell,
        modulation_rate_hz: min_dwell.map(|d| 1.0 / d),
        violations,
    })
}

/// Expands every schedule entry into a per-element state vector.
pub fn schedule_to_state_vectors(
    s: &StateSchedule,
    codebook: &SubarrayCodebook,
    partition: &SubarrayPartition,
) -> Result<Vec<(f64, StateVector)>> {
    if codebook.partition() != partition {
        return Err(Error::Resolution("codebook was built for a different partition".into()));
    }
    s.entries
        .iter()
        .map(|e| {
            if e.switches.len() != partition.len() {
                return Err(Error::Resolution(format!(
                    "entry at {} s drives {} switches, partition has {} subarrays",
                    e.time_s,
                    e.switches.len(),
                    partition.len()
                )));
            }
            let choice = SubarrayStateChoice(e.switches.iter().map(|sw| sw.selected.to_choice()).collect());
            Ok((e.time_s, codebook.expand(&choice)?))
        })
        .collect()
}
