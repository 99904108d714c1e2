//! Two-state reflection model of the current-reversal unit cell.
//!
//! Only the cross-polarized reflection is modelled. Selecting the mirrored
//! feed path flips the surface current, so STATE_1 is the exact negation of
//! STATE_0 unless a phase imbalance is configured. The ISOLATED state leaks at
//! the switch isolation level plus an optional structural-scattering floor.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Per-element switch condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellState {
    State0,
    State1,
    Isolated,
}

impl CellState {
    /// STATE_0 <-> STATE_1; ISOLATED is unchanged.
    pub fn flipped(self) -> Self {
        match self {
            CellState::State0 => CellState::State1,
            CellState::State1 => CellState::State0,
            CellState::Isolated => CellState::Isolated,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CellState::State0 => "STATE_0",
            CellState::State1 => "STATE_1",
            CellState::Isolated => "ISOLATED",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "STATE_0" | "0" => Some(CellState::State0),
            "STATE_1" | "1" => Some(CellState::State1),
            "ISOLATED" => Some(CellState::Isolated),
            _ => None,
        }
    }
}

/// Frequency-dependent reflection of the cross-polarizing unit cell.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitCellModel {
    /// Band where the cross-pol magnitude stays at or above -2 dB.
    pub xpol_band_ghz: (f64, f64),
    /// Band where the co-pol reflection is suppressed below -10 dB.
    pub copol_band_ghz: (f64, f64),
    /// Piecewise-linear cross-pol magnitude `(freq_ghz, dB)`, sorted by
    /// frequency and held flat beyond the end points.
    pub magnitude_breakpoints: Vec<(f64, f64)>,
    /// Deviation of the STATE_1 / STATE_0 phase difference from 180°.
    pub phase_imbalance_deg: f64,
    /// Common reflection phase shared by all states.
    pub base_phase_deg: f64,
    /// Switch isolation as a positive dB figure; `inf` removes leakage.
    pub isolation_db: f64,
    /// Additive OFF-state scattering amplitude (linear, same phase as STATE_0).
    pub structural_floor: f64,
}

pub const DEFAULT_XPOL_BAND_GHZ: (f64, f64) = (90.9, 109.6);
pub const DEFAULT_COPOL_BAND_GHZ: (f64, f64) = (92.2, 104.7);
pub const DEFAULT_ISOLATION_DB: f64 = 26.0;
/// In-band magnitude of the default curve.
pub const DEFAULT_INBAND_MAG_DB: f64 = -1.0;

impl Default for UnitCellModel {
    fn default() -> Self {
        let (lo, hi) = DEFAULT_XPOL_BAND_GHZ;
        UnitCellModel {
            xpol_band_ghz: DEFAULT_XPOL_BAND_GHZ,
            copol_band_ghz: DEFAULT_COPOL_BAND_GHZ,
            magnitude_breakpoints: default_breakpoints(lo, hi),
            phase_imbalance_deg: 0.0,
            base_phase_deg: 0.0,
            isolation_db: DEFAULT_ISOLATION_DB,
            structural_floor: 0.0,
        }
    }
}

/// Flat -1 dB across `[lo, hi]`, rolling off linearly to -10 dB 5 GHz outside.
pub fn default_breakpoints(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    vec![
        (lo - 5.0, -10.0),
        (lo, DEFAULT_INBAND_MAG_DB),
        (hi, DEFAULT_INBAND_MAG_DB),
        (hi + 5.0, -10.0),
    ]
}

/// Result of [`in_band`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandStatus {
    pub xpol_ok: bool,
    pub copol_suppressed: bool,
}

impl UnitCellModel {
    pub fn validate(&self) -> Result<()> {
        let bp = &self.magnitude_breakpoints;
        if bp.is_empty() {
            return Err(Error::InvalidArgument(
                "magnitude curve needs at least one breakpoint".into(),
            ));
        }
        if bp.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidArgument(
                "magnitude breakpoints must be strictly increasing in frequency".into(),
            ));
        }
        if bp.iter().any(|&(f, db)| !f.is_finite() || !db.is_finite() || db > 0.0) {
            return Err(Error::InvalidArgument(
                "magnitude curve must be finite and at most 0 dB (passive)".into(),
            ));
        }
        for (name, (lo, hi)) in [("xpol", self.xpol_band_ghz), ("copol", self.copol_band_ghz)] {
            if !(lo > 0.0 && hi > lo) {
                return Err(Error::InvalidArgument(format!(
                    "{name} band ({lo}, {hi}) GHz is not a valid interval"
                )));
            }
        }
        if !(self.phase_imbalance_deg >= 0.0 && self.phase_imbalance_deg.is_finite()) {
            return Err(Error::InvalidArgument(
                "phase imbalance must be a finite non-negative angle".into(),
            ));
        }
        if !(self.isolation_db >= 0.0) {
            return Err(Error::InvalidArgument(
                "isolation must be a non-negative dB figure".into(),
            ));
        }
        if !(self.structural_floor >= 0.0) || self.leakage_amplitude() + self.structural_floor > 1.0 {
            return Err(Error::InvalidArgument(
                "structural floor must be non-negative and keep the OFF state passive".into(),
            ));
        }
        Ok(())
    }

    /// Cross-pol magnitude in dB at `freq_ghz`.
    pub fn xpol_mag_db(&self, freq_ghz: f64) -> f64 {
        let bp = &self.magnitude_breakpoints;
        if freq_ghz <= bp[0].0 {
            return bp[0].1;
        }
        for w in bp.windows(2) {
            let ((f0, m0), (f1, m1)) = (w[0], w[1]);
            if freq_ghz <= f1 {
                return m0 + (m1 - m0) * (freq_ghz - f0) / (f1 - f0);
            }
        }
        bp[bp.len() - 1].1
    }

    /// Linear leakage amplitude through an isolated switch.
    pub fn leakage_amplitude(&self) -> f64 {
        10f64.powf(-self.isolation_db / 20.0)
    }
}

/// Complex cross-polarized reflection coefficient of one cell.
pub fn reflection_coefficient(model: &UnitCellModel, state: CellState, freq_ghz: f64) -> Result<Complex64> {
    if !(freq_ghz > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "frequency must be positive, got {freq_ghz} GHz"
        )));
    }
    let base = model.base_phase_deg.to_radians();
    Ok(match state {
        CellState::State0 => state0(model, freq_ghz, base),
        CellState::State1 => {
            let g0 = state0(model, freq_ghz, base);
            if model.phase_imbalance_deg == 0.0 {
                -g0
            } else {
                -g0 * Complex64::from_polar(1.0, model.phase_imbalance_deg.to_radians())
            }
        }
        CellState::Isolated => Complex64::from_polar(model.leakage_amplitude() + model.structural_floor, base),
    })
}

fn state0(model: &UnitCellModel, freq_ghz: f64, base: f64) -> Complex64 {
    let mag = 10f64.powf(model.xpol_mag_db(freq_ghz) / 20.0);
    Complex64::from_polar(mag, base)
}

/// Reports whether `freq_ghz` lies inside the cross-pol and co-pol bands.
pub fn in_band(model: &UnitCellModel, freq_ghz: f64) -> BandStatus {
    let inside = |(lo, hi): (f64, f64)| freq_ghz >= lo && freq_ghz <= hi;
    BandStatus {
        xpol_ok: inside(model.xpol_band_ghz),
        copol_suppressed: inside(model.copol_band_ghz),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn nominal_half_turn() {
        let m = UnitCellModel::default();
        let g0 = reflection_coefficient(&m, CellState::State0, 100.0).unwrap();
        let g1 = reflection_coefficient(&m, CellState::State1, 100.0).unwrap();
        assert_eq!(g1, -g0);
        let diff = (g1 / g0).arg().to_degrees().abs();
        assert_abs_diff_eq!(diff, 180.0, epsilon = 1e-12);
    }

    #[test]
    fn inband_magnitude_above_minus_two_db() {
        let m = UnitCellModel::default();
        let g0 = reflection_coefficient(&m, CellState::State0, 100.0).unwrap();
        assert!(g0.norm() >= 10f64.powf(-2.0 / 20.0));
    }

    #[test]
    fn isolated_leaks_at_isolation_level() {
        let m = UnitCellModel::default();
        let g = reflection_coefficient(&m, CellState::Isolated, 100.0).unwrap();
        assert_abs_diff_eq!(g.norm(), 0.0501187, epsilon = 1e-6);
        assert_abs_diff_eq!(g.arg(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_nonpositive_frequency() {
        let m = UnitCellModel::default();
        assert!(reflection_coefficient(&m, CellState::State0, 0.0).is_err());
        assert!(reflection_coefficient(&m, CellState::State0, -3.0).is_err());
    }

    #[test]
    fn band_flags() {
        let m = UnitCellModel::default();
        let s = |f| {
            let b = in_band(&m, f);
            (b.xpol_ok, b.copol_suppressed)
        };
        assert_eq!(s(100.0), (true, true));
        assert_eq!(s(85.0), (false, false));
        assert_eq!(s(106.0), (true, false));
    }

    #[test]
    fn default_curve_rolloff() {
        let m = UnitCellModel::default();
        assert_abs_diff_eq!(m.xpol_mag_db(100.0), -1.0);
        assert_abs_diff_eq!(m.xpol_mag_db(85.9), -10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(m.xpol_mag_db(60.0), -10.0);
        assert_abs_diff_eq!(m.xpol_mag_db(114.6), -10.0, epsilon = 1e-12);
        // halfway down the upper skirt
        assert_abs_diff_eq!(m.xpol_mag_db(112.1), -5.5, epsilon = 1e-12);
    }

    #[test]
    fn validation_rejects_active_curve() {
        let m = UnitCellModel {
            magnitude_breakpoints: vec![(90.0, 0.5), (110.0, -1.0)],
            ..Default::default()
        };
        assert!(m.validate().is_err());
        let m = UnitCellModel {
            structural_floor: 0.99,
            ..Default::default()
        };
        assert!(m.validate().is_err());
        assert!(UnitCellModel::default().validate().is_ok());
    }

    #[test]
    fn infinite_isolation_removes_leakage() {
        let m = UnitCellModel {
            isolation_db: f64::INFINITY,
            ..UnitCellModel::default()
        };
        let g = reflection_coefficient(&m, CellState::Isolated, 100.0).unwrap();
        assert_eq!(g.norm(), 0.0);
    }

    proptest! {
        #[test]
        fn antisymmetry_and_passivity(f in 1.0f64..300.0) {
            let m = UnitCellModel::default();
            let g0 = reflection_coefficient(&m, CellState::State0, f).unwrap();
            let g1 = reflection_coefficient(&m, CellState::State1, f).unwrap();
            let gi = reflection_coefficient(&m, CellState::Isolated, f).unwrap();
            prop_assert_eq!(g1, -g0);
            for g in [g0, g1, gi] {
                prop_assert!(g.norm() <= 1.0);
            }
        }

        #[test]
        fn leakage_below_active_states_in_band(f in 90.9f64..=109.6) {
            let m = UnitCellModel::default();
            let g0 = reflection_coefficient(&m, CellState::State0, f).unwrap();
            let gi = reflection_coefficient(&m, CellState::Isolated, f).unwrap();
            prop_assert!(gi.norm() < g0.norm());
        }

        #[test]
        fn imbalance_is_bounded(f in 80.0f64..120.0, delta in 0.0f64..5.0) {
            let m = UnitCellModel { phase_imbalance_deg: delta, ..UnitCellModel::default() };
            let g0 = reflection_coefficient(&m, CellState::State0, f).unwrap();
            let g1 = reflection_coefficient(&m, CellState::State1, f).unwrap();
            let d = (g1 / g0).arg().to_degrees().abs();
            prop_assert!((d - 180.0).abs() <= delta + 1e-9);
        }
    }
}
