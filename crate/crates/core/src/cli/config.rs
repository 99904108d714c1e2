//! Scenario configuration: TOML text validated into a [`Scenario`].
//!
//! ```toml
//! [layout]                 # required
//! rows = 12
//! cols = 8
//! period_mm = 1.71
//!
//! [partition]              # required
//! sub_rows = 4
//! sub_cols = 4
//!
//! [geometry]               # required, one incidence and one reflection key
//! incidence_mount = [120.0, 0.0]   # or incidence = [theta, phi] (boresight frame)
//! reflection_mount = [90.0, 0.0]   # or reflection = [theta, phi]
//!
//! [sweep]                  # required: start/stop/step or an explicit list
//! start_ghz = 86.0
//! stop_ghz = 106.0
//! step_ghz = 1.0
//! # frequencies_ghz = [100.0]
//!
//! [unitcell]               # optional overrides
//! xpol_band_ghz = [90.9, 109.6]
//! copol_band_ghz = [92.2, 104.7]
//! magnitude_breakpoints = [[85.9, -10.0], [90.9, -1.0]]
//! phase_imbalance_deg = 0.0
//! base_phase_deg = 0.0
//! isolation_db = 26.0
//! structural_floor = 0.0
//!
//! [budget]                 # optional; disabled when absent
//! enabled = true
//! n_paths = 2
//! extra_interconnect_db = 2.5
//! il_table = [[100.0, 3.4], [110.0, 8.1]]
//!
//! [field]                  # optional
//! element_q = 0.5
//! grid_step_deg = 0.5
//!
//! [search]                 # optional
//! method = "exhaustive"    # or "greedy"
//!
//! [codebook]               # optional
//! design_freq_ghz = 100.0  # omitted: redesigned at every swept frequency
//! beam_plane_phi_deg = 90.0
//! ```

use serde::Deserialize;

use crate::budget::{InterconnectLoss, PathLossBudget, SwitchModel, DEFAULT_EXTRA_INTERCONNECT_DB};
use crate::codebook::DEFAULT_BEAM_PLANE_PHI_DEG;
use crate::error::{Error, Result};
use crate::field::{hex_prefix, ElementFactor, HemisphereGrid, DEFAULT_ELEMENT_Q, DEFAULT_GRID_STEP_DEG};
use crate::geometry::{
    build_layout, map_mount_angles, partition_subarrays, ArrayLayout, Direction, SubarrayPartition, MOUNT_CONVENTION,
};
use crate::unitcell::{default_breakpoints, UnitCellModel};

pub const REQUIRED_SECTIONS: [&str; 4] = ["layout", "partition", "geometry", "sweep"];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    layout: RawLayout,
    partition: RawPartition,
    geometry: RawGeometry,
    sweep: RawSweep,
    unitcell: Option<RawUnitCell>,
    budget: Option<RawBudget>,
    field: Option<RawField>,
    search: Option<RawSearch>,
    codebook: Option<RawCodebook>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayout {
    rows: usize,
    cols: usize,
    period_mm: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPartition {
    sub_rows: usize,
    sub_cols: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    incidence_mount: Option<[f64; 2]>,
    reflection_mount: Option<[f64; 2]>,
    incidence: Option<[f64; 2]>,
    reflection: Option<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    start_ghz: Option<f64>,
    stop_ghz: Option<f64>,
    step_ghz: Option<f64>,
    frequencies_ghz: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUnitCell {
    xpol_band_ghz: Option<[f64; 2]>,
    copol_band_ghz: Option<[f64; 2]>,
    magnitude_breakpoints: Option<Vec<[f64; 2]>>,
    phase_imbalance_deg: Option<f64>,
    base_phase_deg: Option<f64>,
    isolation_db: Option<f64>,
    structural_floor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBudget {
    enabled: Option<bool>,
    n_paths: Option<usize>,
    extra_interconnect_db: Option<f64>,
    il_table: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    element_q: Option<f64>,
    grid_step_deg: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSearch {
    method: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCodebook {
    design_freq_ghz: Option<f64>,
    beam_plane_phi_deg: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Greedy,
    Exhaustive,
}

impl SearchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMethod::Greedy => "greedy",
            SearchMethod::Exhaustive => "exhaustive",
        }
    }
}

/// How the incidence and reflection angles were given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleFrame {
    Mount,
    Boresight,
}

/// Fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub layout: ArrayLayout,
    pub partition: SubarrayPartition,
    pub model: UnitCellModel,
    pub incidence: Direction,
    pub observation: Direction,
    pub angle_frame: AngleFrame,
    pub frequencies_ghz: Vec<f64>,
    pub budget: Option<PathLossBudget>,
    pub element_factor: ElementFactor,
    pub grid_step_deg: f64,
    pub search: SearchMethod,
    /// `None` rebuilds the codebook at each swept frequency.
    pub design_freq_ghz: Option<f64>,
    pub beam_plane_phi_deg: f64,
    /// SHA-256 of the config text, hex.
    pub config_digest: String,
    /// `key = value` for every setting that fell back to its default.
    pub defaults: Vec<(String, String)>,
}

impl Scenario {
    pub fn angle_convention(&self) -> &'static str {
        match self.angle_frame {
            AngleFrame::Mount => MOUNT_CONVENTION,
            AngleFrame::Boresight => "angles given in the boresight frame (theta from surface normal, phi from +x)",
        }
    }
}

fn ctx(key: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{key}: {msg}"))
}

struct Defaults(Vec<(String, String)>);

impl Defaults {
    fn take<T: std::fmt::Debug>(&mut self, key: &str, v: Option<T>, default: T) -> T {
        v.unwrap_or_else(|| {
            self.0.push((key.to_string(), format!("{default:?}")));
            default
        })
    }
}

fn pairs(v: &[[f64; 2]]) -> Vec<(f64, f64)> {
    v.iter().map(|p| (p[0], p[1])).collect()
}

pub fn parse_config(text: &str) -> Result<Scenario> {
    let table: toml::Table = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let missing: Vec<&str> = REQUIRED_SECTIONS
        .iter()
        .copied()
        .filter(|k| !table.contains_key(*k))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Parse(format!("missing required keys: {}", missing.join(", "))));
    }
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut d = Defaults(Vec::new());

    let layout = build_layout(raw.layout.rows, raw.layout.cols, raw.layout.period_mm).map_err(|e| ctx("layout", e))?;
    let partition = partition_subarrays(&layout, raw.partition.sub_rows, raw.partition.sub_cols)
        .map_err(|e| ctx("partition", e))?;

    let g = raw.geometry;
    let (incidence, observation, angle_frame) = match (g.incidence_mount, g.reflection_mount, g.incidence, g.reflection)
    {
        (Some(i), Some(r), None, None) => (
            map_mount_angles(i[0], i[1]).map_err(|e| ctx("geometry.incidence_mount", e))?,
            map_mount_angles(r[0], r[1]).map_err(|e| ctx("geometry.reflection_mount", e))?,
            AngleFrame::Mount,
        ),
        (None, None, Some(i), Some(r)) => (
            Direction::new(i[0], i[1]).map_err(|e| ctx("geometry.incidence", e))?,
            Direction::new(r[0], r[1]).map_err(|e| ctx("geometry.reflection", e))?,
            AngleFrame::Boresight,
        ),
        _ => {
            return Err(ctx(
                "geometry",
                "give either incidence_mount + reflection_mount or incidence + reflection",
            ))
        }
    };

    let frequencies_ghz = sweep_frequencies(&raw.sweep)?;

    let uc = raw.unitcell.unwrap_or(RawUnitCell {
        xpol_band_ghz: None,
        copol_band_ghz: None,
        magnitude_breakpoints: None,
        phase_imbalance_deg: None,
        base_phase_deg: None,
        isolation_db: None,
        structural_floor: None,
    });
    let base = UnitCellModel::default();
    let xpol = d.take(
        "unitcell.xpol_band_ghz",
        uc.xpol_band_ghz.map(|b| (b[0], b[1])),
        base.xpol_band_ghz,
    );
    let model = UnitCellModel {
        xpol_band_ghz: xpol,
        copol_band_ghz: d.take(
            "unitcell.copol_band_ghz",
            uc.copol_band_ghz.map(|b| (b[0], b[1])),
            base.copol_band_ghz,
        ),
        magnitude_breakpoints: d.take(
            "unitcell.magnitude_breakpoints",
            uc.magnitude_breakpoints.as_deref().map(pairs),
            default_breakpoints(xpol.0, xpol.1),
        ),
        phase_imbalance_deg: d.take(
            "unitcell.phase_imbalance_deg",
            uc.phase_imbalance_deg,
            base.phase_imbalance_deg,
        ),
        base_phase_deg: d.take("unitcell.base_phase_deg", uc.base_phase_deg, base.base_phase_deg),
        isolation_db: d.take("unitcell.isolation_db", uc.isolation_db, base.isolation_db),
        structural_floor: d.take("unitcell.structural_floor", uc.structural_floor, base.structural_floor),
    };
    model.validate().map_err(|e| ctx("unitcell", e))?;

    let budget = match raw.budget {
        None => {
            d.0.push(("budget.enabled".into(), "false".into()));
            None
        }
        Some(b) => {
            if d.take("budget.enabled", b.enabled, true) {
                let dflt = PathLossBudget::default();
                let switch = SwitchModel {
                    il_table: d.take(
                        "budget.il_table",
                        b.il_table.as_deref().map(pairs),
                        dflt.switch.il_table.clone(),
                    ),
                    ..dflt.switch
                };
                let budget = PathLossBudget {
                    switch,
                    extra_interconnect: InterconnectLoss::flat(d.take(
                        "budget.extra_interconnect_db",
                        b.extra_interconnect_db,
                        DEFAULT_EXTRA_INTERCONNECT_DB,
                    )),
                    n_paths_in_chain: d.take("budget.n_paths", b.n_paths, dflt.n_paths_in_chain),
                };
                budget.validate().map_err(|e| ctx("budget", e))?;
                Some(budget)
            } else {
                None
            }
        }
    };

    let f = raw.field.unwrap_or(RawField {
        element_q: None,
        grid_step_deg: None,
    });
    let element_factor = ElementFactor::new(d.take("field.element_q", f.element_q, DEFAULT_ELEMENT_Q))
        .map_err(|e| ctx("field.element_q", e))?;
    let grid_step_deg = d.take("field.grid_step_deg", f.grid_step_deg, DEFAULT_GRID_STEP_DEG);
    HemisphereGrid::new(grid_step_deg).map_err(|e| ctx("field.grid_step_deg", e))?;

    let method = d.take(
        "search.method",
        raw.search.and_then(|s| s.method),
        SearchMethod::Exhaustive.as_str().to_string(),
    );
    let search = match method.as_str() {
        "greedy" => SearchMethod::Greedy,
        "exhaustive" => SearchMethod::Exhaustive,
        other => {
            return Err(ctx(
                "search.method",
                format!("expected \"greedy\" or \"exhaustive\", got {other:?}"),
            ))
        }
    };

    let cb = raw.codebook.unwrap_or(RawCodebook {
        design_freq_ghz: None,
        beam_plane_phi_deg: None,
    });
    let design_freq_ghz = match cb.design_freq_ghz {
        Some(f) if f > 0.0 && f.is_finite() => Some(f),
        Some(f) => return Err(ctx("codebook.design_freq_ghz", format!("must be positive, got {f}"))),
        None => {
            d.0.push(("codebook.design_freq_ghz".into(), "each swept frequency".into()));
            None
        }
    };
    let beam_plane_phi_deg = d.take(
        "codebook.beam_plane_phi_deg",
        cb.beam_plane_phi_deg,
        DEFAULT_BEAM_PLANE_PHI_DEG,
    );
    if !beam_plane_phi_deg.is_finite() {
        return Err(ctx("codebook.beam_plane_phi_deg", "must be finite"));
    }

    Ok(Scenario {
        layout,
        partition,
        model,
        incidence,
        observation,
        angle_frame,
        frequencies_ghz,
        budget,
        element_factor,
        grid_step_deg,
        search,
        design_freq_ghz,
        beam_plane_phi_deg,
        config_digest: config_digest(text),
        defaults: d.0,
    })
}

/// SHA-256 of the config text, lower-case hex.
pub fn config_digest(text: &str) -> String {
    use sha2::{Digest, Sha256};
    let h = Sha256::digest(text.as_bytes());
    hex_prefix(&h, 2 * h.len())
}

fn sweep_frequencies(s: &RawSweep) -> Result<Vec<f64>> {
    let freqs = match (s.start_ghz, s.stop_ghz, s.step_ghz, &s.frequencies_ghz) {
        (Some(start), Some(stop), Some(step), None) => {
            if !(step > 0.0 && start > 0.0 && stop >= start && stop.is_finite()) {
                return Err(ctx(
                    "sweep",
                    format!("need 0 < start <= stop and step > 0, got {start}..{stop} step {step}"),
                ));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| round_ghz(start + i as f64 * step)).collect()
        }
        (None, None, None, Some(list)) => list.clone(),
        _ => {
            return Err(ctx(
                "sweep",
                "give either start_ghz + stop_ghz + step_ghz or frequencies_ghz",
            ))
        }
    };
    if freqs.is_empty() {
        return Err(ctx("sweep", "frequency list is empty"));
    }
    if let Some(f) = freqs.iter().find(|f| !(**f > 0.0 && f.is_finite())) {
        return Err(ctx("sweep", format!("frequency {f} GHz must be positive")));
    }
    Ok(freqs)
}

/// Snaps sweep points to 1 kHz so accumulated step error does not leak into
/// reports.
fn round_ghz(f: f64) -> f64 {
    (f * 1e6).round() / 1e6
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[layout]
rows = 12
cols = 8
period_mm = 1.71
[partition]
sub_rows = 4
sub_cols = 4
[geometry]
incidence_mount = [120.0, 0.0]
reflection_mount = [90.0, 0.0]
[sweep]
start_ghz = 86.0
stop_ghz = 106.0
step_ghz = 1.0
"#;

    #[test]
    fn minimal_config_fills_defaults() {
        let s = parse_config(MINIMAL).unwrap();
        assert_eq!(s.layout.len(), 96);
        assert_eq!(s.partition.len(), 6);
        assert_eq!(s.frequencies_ghz.len(), 21);
        assert_eq!(s.frequencies_ghz[0], 86.0);
        assert_eq!(s.frequencies_ghz[20], 106.0);
        assert_eq!(s.incidence, Direction::new(30.0, 0.0).unwrap());
        assert_eq!(s.observation, Direction::boresight());
        assert_eq!(s.search, SearchMethod::Exhaustive);
        assert!(s.budget.is_none());
        assert_eq!(s.element_factor.q, DEFAULT_ELEMENT_Q);
        assert!(s.defaults.iter().any(|(k, _)| k == "field.element_q"));
        assert!(s.defaults.iter().any(|(k, _)| k == "unitcell.structural_floor"));
        assert_eq!(s.config_digest.len(), 64);
    }

    #[test]
    fn empty_config_lists_required_keys() {
        let msg = parse_config("").unwrap_err().to_string();
        for k in REQUIRED_SECTIONS {
            assert!(msg.contains(k), "{msg}");
        }
    }

    #[test]
    fn unknown_key_rejected_with_context() {
        let text = MINIMAL.replace("period_mm = 1.71", "period_mm = 1.71\npitch = 2.0");
        let msg = parse_config(&text).unwrap_err().to_string();
        assert!(msg.contains("pitch"), "{msg}");
        assert!(msg.contains("line"), "{msg}");
    }

    #[test]
    fn indivisible_partition_rejected() {
        let text = MINIMAL.replace("sub_cols = 4", "sub_cols = 3");
        let msg = parse_config(&text).unwrap_err().to_string();
        assert!(msg.starts_with("parse error: partition"), "{msg}");
    }

    #[test]
    fn mixed_angle_frames_rejected() {
        let text = MINIMAL.replace("reflection_mount = [90.0, 0.0]", "reflection = [0.0, 0.0]");
        assert!(parse_config(&text).is_err());
    }

    #[test]
    fn explicit_list_and_budget() {
        let text = MINIMAL.replace(
            "start_ghz = 86.0\nstop_ghz = 106.0\nstep_ghz = 1.0",
            "frequencies_ghz = [100.0, 105.0]\n[budget]\nn_paths = 1\n[search]\nmethod = \"greedy\"",
        );
        let s = parse_config(&text).unwrap();
        assert_eq!(s.frequencies_ghz, vec![100.0, 105.0]);
        let b = s.budget.unwrap();
        assert_eq!(b.n_paths_in_chain, 1);
        assert_eq!(b.switch.il_table, vec![(100.0, 3.4), (110.0, 8.1)]);
        assert_eq!(s.search, SearchMethod::Greedy);
    }

    #[test]
    fn bad_values_rejected() {
        assert!(parse_config(&MINIMAL.replace("step_ghz = 1.0", "step_ghz = 0.0")).is_err());
        assert!(parse_config(&MINIMAL.replace("rows = 12", "rows = 0")).is_err());
        assert!(parse_config(&format!("{MINIMAL}[search]\nmethod = \"annealing\"\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}[field]\nelement_q = -1.0\n")).is_err());
        assert!(parse_config(&format!("{MINIMAL}[unitcell]\nisolation_db = -3.0\n")).is_err());
    }

    #[test]
    fn fractional_sweep_is_clean() {
        let text = MINIMAL
            .replace("step_ghz = 1.0", "step_ghz = 0.1")
            .replace("stop_ghz = 106.0", "stop_ghz = 87.0");
        let s = parse_config(&text).unwrap();
        assert_eq!(s.frequencies_ghz.len(), 11);
        assert_eq!(s.frequencies_ghz[3], 86.3);
        assert_eq!(*s.frequencies_ghz.last().unwrap(), 87.0);
    }

    #[test]
    fn digest_tracks_text() {
        assert_eq!(config_digest(MINIMAL), config_digest(MINIMAL));
        assert_ne!(config_digest(MINIMAL), config_digest(&format!("{MINIMAL}\n")));
    }
}
