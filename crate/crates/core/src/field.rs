//! Plane-wave illumination and far-field scattered-pattern synthesis.
//!
//! The scattered field toward `u_obs` under a plane wave arriving from
//! `u_inc` is
//!
//! ```text
//! E = F(θ_inc) F(θ_obs) Σ_e w_e Γ_e exp(j k r_e · (u_inc + u_obs))
//! ```
//!
//! with element factor `F(θ) = cos^q θ`. Only the front hemisphere is
//! sampled; the ground plane suppresses back radiation.

use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{direction_to_unit_vector, normalize_phi, wavenumber, ArrayLayout, Direction};
use crate::unitcell::{reflection_coefficient, CellState, UnitCellModel};

/// Default exponent of the `cos^q` element factor (cosθ power pattern).
pub const DEFAULT_ELEMENT_Q: f64 = 0.5;

/// Default angular sampling of synthesized patterns, degrees.
pub const DEFAULT_GRID_STEP_DEG: f64 = 0.5;

/// `cos^q θ` element factor applied on both the incident and scattered side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementFactor {
    pub q: f64,
}

impl Default for ElementFactor {
    fn default() -> Self {
        ElementFactor { q: DEFAULT_ELEMENT_Q }
    }
}

impl ElementFactor {
    pub fn new(q: f64) -> Result<Self> {
        if !(q >= 0.0 && q.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "element factor exponent must be >= 0, got {q}"
            )));
        }
        Ok(ElementFactor { q })
    }

    pub fn at(&self, theta_deg: f64) -> f64 {
        if self.q == 0.0 {
            return 1.0;
        }
        theta_deg.to_radians().cos().max(0.0).powf(self.q)
    }
}

/// Plane wave hitting the surface, with an optional per-element amplitude
/// taper describing a non-uniform horn footprint.
#[derive(Debug, Clone, PartialEq)]
pub struct Illumination {
    pub incidence: Direction,
    pub freq_ghz: f64,
    pub taper: Vec<f64>,
}

impl Illumination {
    pub fn uniform(layout: &ArrayLayout, incidence: Direction, freq_ghz: f64) -> Result<Self> {
        Self::tapered(layout, incidence, freq_ghz, vec![1.0; layout.len()])
    }

    pub fn tapered(layout: &ArrayLayout, incidence: Direction, freq_ghz: f64, taper: Vec<f64>) -> Result<Self> {
        if !(freq_ghz > 0.0 && freq_ghz.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "frequency must be positive, got {freq_ghz} GHz"
            )));
        }
        if taper.len() != layout.len() {
            return Err(Error::Shape(format!(
                "taper has {} weights for {} elements",
                taper.len(),
                layout.len()
            )));
        }
        if taper.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument(
                "taper weights must be finite and non-negative".into(),
            ));
        }
        Ok(Illumination {
            incidence,
            freq_ghz,
            taper,
        })
    }

    /// Same wave with every weight scaled by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Illumination {
            taper: self.taper.iter().map(|w| w * c).collect(),
            ..self.clone()
        }
    }
}

/// Per-element switch states in layout order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateVector(pub Vec<CellState>);

impl StateVector {
    pub fn uniform(len: usize, state: CellState) -> Self {
        StateVector(vec![state; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn states(&self) -> &[CellState] {
        &self.0
    }

    /// Complements STATE_0/STATE_1 on every element.
    pub fn flipped(&self) -> Self {
        StateVector(self.0.iter().map(|s| s.flipped()).collect())
    }

    /// Short hex digest identifying the vector in pattern metadata.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for s in &self.0 {
            h.update([match s {
                CellState::State0 => b'0',
                CellState::State1 => b'1',
                CellState::Isolated => b'x',
            }]);
        }
        hex_prefix(&h.finalize(), 16)
    }
}

pub(crate) fn hex_prefix(bytes: &[u8], chars: usize) -> String {
    use std::fmt::Write;
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        let _ = write!(s, "{b:02x}");
    }
    s.truncate(chars);
    s
}

/// Plane-wave phase `k r·u_inc` at every element, radians.
pub fn incident_phase(layout: &ArrayLayout, ill: &Illumination) -> Vec<f64> {
    let k = wavenumber(ill.freq_ghz);
    let u = direction_to_unit_vector(ill.incidence);
    layout
        .positions()
        .iter()
        .map(|&(x, y)| k * (x * u[0] + y * u[1]))
        .collect()
}

/// `w_e Γ_e` for every element.
pub fn element_weights(
    layout: &ArrayLayout,
    model: &UnitCellModel,
    states: &StateVector,
    ill: &Illumination,
) -> Result<Vec<Complex64>> {
    if states.len() != layout.len() {
        return Err(Error::Shape(format!(
            "state vector has {} entries for {} elements",
            states.len(),
            layout.len()
        )));
    }
    if ill.taper.len() != layout.len() {
        return Err(Error::Shape(format!(
            "taper has {} weights for {} elements",
            ill.taper.len(),
            layout.len()
        )));
    }
    let gamma = [
        reflection_coefficient(model, CellState::State0, ill.freq_ghz)?,
        reflection_coefficient(model, CellState::State1, ill.freq_ghz)?,
        reflection_coefficient(model, CellState::Isolated, ill.freq_ghz)?,
    ];
    Ok(states
        .states()
        .iter()
        .zip(&ill.taper)
        .map(|(s, w)| {
            let g = match s {
                CellState::State0 => gamma[0],
                CellState::State1 => gamma[1],
                CellState::Isolated => gamma[2],
            };
            g * *w
        })
        .collect())
}

/// Per-element steering kernel `F_i F_o exp(j k r·(u_inc + u_obs))` for one
/// observation direction. The scattered field is `Σ_e weight_e kernel_e`,
/// which lets searches reuse the kernel across many state vectors.
pub fn steering_kernel(layout: &ArrayLayout, ill: &Illumination, ef: ElementFactor, obs: Direction) -> Vec<Complex64> {
    let k = wavenumber(ill.freq_ghz);
    let ui = direction_to_unit_vector(ill.incidence);
    let uo = direction_to_unit_vector(obs);
    let (sx, sy) = (ui[0] + uo[0], ui[1] + uo[1]);
    let amp = ef.at(ill.incidence.theta_deg) * ef.at(obs.theta_deg);
    layout
        .positions()
        .iter()
        .map(|&(x, y)| Complex64::from_polar(amp, k * (x * sx + y * sy)))
        .collect()
}

/// Scattered far field toward `obs` by direct summation over elements.
pub fn scattered_field(
    layout: &ArrayLayout,
    model: &UnitCellModel,
    states: &StateVector,
    ill: &Illumination,
    ef: ElementFactor,
    obs: Direction,
) -> Result<Complex64> {
    let weights = element_weights(layout, model, states, ill)?;
    let kernel = steering_kernel(layout, ill, ef, obs);
    Ok(weights.iter().zip(&kernel).map(|(w, k)| w * k).sum())
}

/// Scattered field evaluated through the separable lattice structure: the
/// sum factors into a row phase progression applied to per-row column sums,
/// a 2-D DFT-like evaluation that costs `rows + cols` exponentials per
/// direction instead of `rows * cols`.
pub fn lattice_field(
    layout: &ArrayLayout,
    weights: &[Complex64],
    ill: &Illumination,
    ef: ElementFactor,
    obs: Direction,
) -> Complex64 {
    let k = wavenumber(ill.freq_ghz);
    let ui = direction_to_unit_vector(ill.incidence);
    let uo = direction_to_unit_vector(obs);
    let amp = ef.at(ill.incidence.theta_deg) * ef.at(obs.theta_deg);
    if amp == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    lattice_sum(layout, weights, k * (ui[0] + uo[0]), k * (ui[1] + uo[1])) * amp
}

fn lattice_sum(layout: &ArrayLayout, weights: &[Complex64], kx: f64, ky: f64) -> Complex64 {
    let cols = layout.cols();
    let col_phasor: Vec<Complex64> = (0..cols)
        .map(|n| Complex64::from_polar(1.0, ky * layout.y_of_col(n)))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for m in 0..layout.rows() {
        let row = &weights[m * cols..(m + 1) * cols];
        let inner: Complex64 = row.iter().zip(&col_phasor).map(|(w, p)| w * p).sum();
        total += inner * Complex64::from_polar(1.0, kx * layout.x_of_row(m));
    }
    total
}

/// Uniform `(theta, phi)` sampling of the front hemisphere:
/// `theta = 0, step, ..., 90` and `phi = -180, -180 + step, ..., 180 - step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HemisphereGrid {
    step_deg: f64,
    n_theta: usize,
    n_phi: usize,
}

impl HemisphereGrid {
    pub fn new(step_deg: f64) -> Result<Self> {
        if !(step_deg > 0.0 && step_deg <= 90.0) {
            return Err(Error::InvalidArgument(format!(
                "grid step must lie in (0, 90], got {step_deg}°"
            )));
        }
        let count = 90.0 / step_deg;
        let n = count.round();
        if (count - n).abs() > 1e-9 * count.max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "grid step {step_deg}° does not divide 90° evenly"
            )));
        }
        let n = n as usize;
        Ok(HemisphereGrid {
            step_deg,
            n_theta: n + 1,
            n_phi: 4 * n,
        })
    }

    pub fn step_deg(&self) -> f64 {
        self.step_deg
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta(&self, i: usize) -> f64 {
        i as f64 * self.step_deg
    }

    pub fn phi(&self, j: usize) -> f64 {
        -180.0 + j as f64 * self.step_deg
    }

    pub fn node(&self, i: usize, j: usize) -> Direction {
        Direction {
            theta_deg: self.theta(i),
            phi_deg: self.phi(j),
        }
    }

    /// Grid indices of the node nearest to `d`.
    pub fn nearest(&self, d: Direction) -> (usize, usize) {
        let i = ((d.theta_deg / self.step_deg).round() as usize).min(self.n_theta - 1);
        let j = (((normalize_phi(d.phi_deg) + 180.0) / self.step_deg).round() as usize) % self.n_phi;
        (i, j)
    }

    /// Solid-angle weight of the cell centred on theta row `i`, per unit
    /// azimuth width: `∫ sinθ dθ` over the cell clipped to `[0, 90°]`.
    fn theta_weight(&self, i: usize) -> f64 {
        let half = self.step_deg / 2.0;
        let lo = (self.theta(i) - half).max(0.0).to_radians();
        let hi = (self.theta(i) + half).min(90.0).to_radians();
        lo.cos() - hi.cos()
    }
}

/// Complex scattered field sampled on a [`HemisphereGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldPattern {
    pub grid: HemisphereGrid,
    /// Row-major over theta, then phi.
    pub field: Vec<Complex64>,
    pub freq_ghz: f64,
    pub incidence: Direction,
    pub state_digest: String,
    pub element_q: f64,
}

impl FarFieldPattern {
    /// Pattern from raw samples, mostly for synthetic checks.
    pub fn from_samples(
        grid: HemisphereGrid,
        field: Vec<Complex64>,
        freq_ghz: f64,
        incidence: Direction,
    ) -> Result<Self> {
        if field.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} samples for a grid of {}",
                field.len(),
                grid.len()
            )));
        }
        Ok(FarFieldPattern {
            grid,
            field,
            freq_ghz,
            incidence,
            state_digest: String::new(),
            element_q: 0.0,
        })
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.field[i * self.grid.n_phi() + j]
    }

    /// Field at the grid node nearest to `d`.
    pub fn sample(&self, d: Direction) -> Complex64 {
        let (i, j) = self.grid.nearest(d);
        self.at(i, j)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.field.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// `|E|` along the great-circle cut in the plane of azimuth
    /// `plane_phi_deg`, as `(signed angle, |E|)` from -90° to +90°. The
    /// azimuth must be a grid azimuth.
    pub fn plane_cut(&self, plane_phi_deg: f64) -> Vec<(f64, f64)> {
        let (_, jp) = self.grid.nearest(Direction {
            theta_deg: 0.0,
            phi_deg: plane_phi_deg,
        });
        let (_, jm) = self.grid.nearest(Direction {
            theta_deg: 0.0,
            phi_deg: plane_phi_deg + 180.0,
        });
        let mut cut = Vec::with_capacity(2 * self.grid.n_theta() - 1);
        for i in (1..self.grid.n_theta()).rev() {
            cut.push((-self.grid.theta(i), self.at(i, jm).norm()));
        }
        for i in 0..self.grid.n_theta() {
            cut.push((self.grid.theta(i), self.at(i, jp).norm()));
        }
        cut
    }
}

/// Evaluates the scattered field on the full hemisphere grid.
pub fn synthesize_pattern(
    layout: &ArrayLayout,
    model: &UnitCellModel,
    states: &StateVector,
    ill: &Illumination,
    ef: ElementFactor,
    grid_step_deg: f64,
) -> Result<FarFieldPattern> {
    let grid = HemisphereGrid::new(grid_step_deg)?;
    let weights = element_weights(layout, model, states, ill)?;
    let field: Vec<Complex64> = (0..grid.n_theta())
        .into_par_iter()
        .flat_map_iter(|i| {
            let weights = &weights;
            (0..grid.n_phi()).map(move |j| lattice_field(layout, weights, ill, ef, grid.node(i, j)))
        })
        .collect();
    Ok(FarFieldPattern {
        grid,
        field,
        freq_ghz: ill.freq_ghz,
        incidence: ill.incidence,
        state_digest: states.digest(),
        element_q: ef.q,
    })
}

/// Grid node of maximum `|E|`; ties go to the smallest theta, then the
/// smallest phi.
pub fn peak_direction(p: &FarFieldPattern) -> Result<Direction> {
    let mut best = 0.0;
    let mut at = None;
    for i in 0..p.grid.n_theta() {
        for j in 0..p.grid.n_phi() {
            let m = p.at(i, j).norm();
            if m > best {
                best = m;
                at = Some((i, j));
            }
        }
    }
    at.map(|(i, j)| p.grid.node(i, j))
        .ok_or_else(|| Error::DegeneratePattern("pattern is identically zero".into()))
}

/// Total scattered power `∬ |E|² sinθ dθ dφ` over the front hemisphere.
pub fn radiated_power(p: &FarFieldPattern) -> f64 {
    let dphi = p.grid.step_deg().to_radians();
    (0..p.grid.n_theta())
        .map(|i| {
            let ring: f64 = (0..p.grid.n_phi()).map(|j| p.at(i, j).norm_sqr()).sum();
            ring * p.grid.theta_weight(i) * dphi
        })
        .sum()
}

/// Directivity toward `at` (nearest grid node) in dBi, relative to the
/// isotropic average over the full sphere.
pub fn directivity(p: &FarFieldPattern, at: Direction) -> Result<f64> {
    let total = radiated_power(p);
    if !(total > 0.0) {
        return Err(Error::DegeneratePattern("zero total radiated power".into()));
    }
    let u = p.sample(at).norm_sqr();
    Ok(10.0 * (4.0 * std::f64::consts::PI * u / total).log10())
}

/// ON/OFF field ratio; `FloorLimited` when the OFF field vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Enhancement {
    Db(f64),
    FloorLimited,
}

impl Enhancement {
    pub fn db(&self) -> Option<f64> {
        match self {
            Enhancement::Db(v) => Some(*v),
            Enhancement::FloorLimited => None,
        }
    }
}

impl std::fmt::Display for Enhancement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Enhancement::Db(v) => write!(f, "{v:.6}"),
            Enhancement::FloorLimited => f.write_str("floor-limited"),
        }
    }
}

/// `20 log10(|on| / |off|)`.
pub fn field_ratio_db(on: Complex64, off: Complex64) -> Enhancement {
    let off = off.norm();
    if off == 0.0 {
        Enhancement::FloorLimited
    } else {
        Enhancement::Db(20.0 * (on.norm() / off).log10())
    }
}

pub fn gain_enhancement(p_on: &FarFieldPattern, p_off: &FarFieldPattern, at: Direction) -> Result<Enhancement> {
    if p_on.grid != p_off.grid || p_on.freq_ghz != p_off.freq_ghz {
        return Err(Error::Shape(
            "ON and OFF patterns use different grids or frequencies".into(),
        ));
    }
    Ok(field_ratio_db(p_on.sample(at), p_off.sample(at)))
}

/// Linear extent of the aperture along the in-plane azimuth `phi_deg`, mm.
pub fn aperture_length_along(layout: &ArrayLayout, phi_deg: f64) -> f64 {
    let (lx, ly) = layout.aperture_mm();
    let (s, c) = phi_deg.to_radians().sin_cos();
    lx * c.abs() + ly * s.abs()
}

/// Uniform-aperture half-power beamwidth `0.886 λ / (L cos θ)`, degrees.
pub fn half_power_beamwidth_deg(length_mm: f64, freq_ghz: f64, theta_deg: f64) -> f64 {
    let lambda = crate::geometry::wavelength_mm(freq_ghz);
    let proj = length_mm * theta_deg.to_radians().cos();
    (0.886 * lambda / proj).to_degrees()
}
