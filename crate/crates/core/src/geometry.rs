//! Planar element lattice, subarray partitioning and angle conventions.
//!
//! Lengths are millimetres, frequencies GHz and angles degrees at every public
//! interface. Directions are boresight-relative: `theta` is measured from the
//! surface normal (+z) and `phi` is the azimuth in the array plane. Element
//! `(m, n)` sits at `x = (m - (rows-1)/2) * a`, `y = (n - (cols-1)/2) * a` and
//! is stored at flat index `m * cols + n`.

use crate::error::{Axis, Error, Result};

/// Speed of light in mm/ns, so that `c / f[GHz]` is a wavelength in mm.
pub const SPEED_OF_LIGHT_MM_GHZ: f64 = 299.792_458;

/// Free-space wavelength in millimetres.
pub fn wavelength_mm(freq_ghz: f64) -> f64 {
    SPEED_OF_LIGHT_MM_GHZ / freq_ghz
}

/// Free-space wavenumber in rad/mm.
pub fn wavenumber(freq_ghz: f64) -> f64 {
    2.0 * std::f64::consts::PI / wavelength_mm(freq_ghz)
}

/// Note attached to reports whenever mount-frame angles were converted.
pub const MOUNT_CONVENTION: &str =
    "mount frame (boresight at theta_mount=90) mapped to boresight frame: theta = |theta_mount - 90|, phi unchanged";

/// Rectangular, centroid-centred element lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayLayout {
    rows: usize,
    cols: usize,
    period_mm: f64,
    positions: Vec<(f64, f64)>,
}

impl ArrayLayout {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn period_mm(&self) -> f64 {
        self.period_mm
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Element positions `(x, y)` in mm, in flat element order.
    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols + col
    }

    /// Lattice coordinate of element `row` along x.
    pub fn x_of_row(&self, row: usize) -> f64 {
        (row as f64 - (self.rows as f64 - 1.0) / 2.0) * self.period_mm
    }

    /// Lattice coordinate of element `col` along y.
    pub fn y_of_col(&self, col: usize) -> f64 {
        (col as f64 - (self.cols as f64 - 1.0) / 2.0) * self.period_mm
    }

    /// Physical side lengths `(rows * a, cols * a)` of the aperture.
    pub fn aperture_mm(&self) -> (f64, f64) {
        (self.rows as f64 * self.period_mm, self.cols as f64 * self.period_mm)
    }
}

/// Builds a `rows x cols` lattice with pitch `period_mm`.
pub fn build_layout(rows: usize, cols: usize, period_mm: f64) -> Result<ArrayLayout> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!(
            "layout dimensions must be at least 1, got {rows}x{cols}"
        )));
    }
    if !(period_mm > 0.0 && period_mm.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "period must be positive and finite, got {period_mm} mm"
        )));
    }
    let mut layout = ArrayLayout {
        rows,
        cols,
        period_mm,
        positions: Vec::with_capacity(rows * cols),
    };
    for m in 0..rows {
        let x = layout.x_of_row(m);
        for n in 0..cols {
            let y = layout.y_of_col(n);
            layout.positions.push((x, y));
        }
    }
    Ok(layout)
}

/// Grouping of the lattice into equal rectangular subarrays, each driven by
/// one switch. Groups are numbered row-major over the subarray grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SubarrayPartition {
    layout: ArrayLayout,
    sub_rows: usize,
    sub_cols: usize,
    groups: Vec<Vec<usize>>,
}

impl SubarrayPartition {
    pub fn layout(&self) -> &ArrayLayout {
        &self.layout
    }

    pub fn sub_rows(&self) -> usize {
        self.sub_rows
    }

    pub fn sub_cols(&self) -> usize {
        self.sub_cols
    }

    /// Element indices of every subarray.
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Subarray owning each element, in element order.
    pub fn group_of_elements(&self) -> Vec<usize> {
        let mut owner = vec![0; self.layout.len()];
        for (g, members) in self.groups.iter().enumerate() {
            for &e in members {
                owner[e] = g;
            }
        }
        owner
    }
}

pub fn partition_subarrays(layout: &ArrayLayout, sub_rows: usize, sub_cols: usize) -> Result<SubarrayPartition> {
    if sub_rows == 0 || !layout.rows.is_multiple_of(sub_rows) {
        return Err(Error::Partition {
            axis: Axis::Rows,
            size: layout.rows,
            sub: sub_rows,
        });
    }
    if sub_cols == 0 || !layout.cols.is_multiple_of(sub_cols) {
        return Err(Error::Partition {
            axis: Axis::Cols,
            size: layout.cols,
            sub: sub_cols,
        });
    }
    let blocks_r = layout.rows / sub_rows;
    let blocks_c = layout.cols / sub_cols;
    let mut groups = Vec::with_capacity(blocks_r * blocks_c);
    for br in 0..blocks_r {
        for bc in 0..blocks_c {
            let mut members = Vec::with_capacity(sub_rows * sub_cols);
            for m in br * sub_rows..(br + 1) * sub_rows {
                for n in bc * sub_cols..(bc + 1) * sub_cols {
                    members.push(layout.index(m, n));
                }
            }
            groups.push(members);
        }
    }
    Ok(SubarrayPartition {
        layout: layout.clone(),
        sub_rows,
        sub_cols,
        groups,
    })
}

/// Boresight-relative direction in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub theta_deg: f64,
    pub phi_deg: f64,
}

impl Direction {
    /// Validated direction in the front hemisphere; `phi` is folded into
    /// `[-180, 180)`.
    pub fn new(theta_deg: f64, phi_deg: f64) -> Result<Self> {
        if !(0.0..=90.0).contains(&theta_deg) || !phi_deg.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "direction (theta {theta_deg}°, phi {phi_deg}°) is outside the front hemisphere"
            )));
        }
        Ok(Direction {
            theta_deg,
            phi_deg: normalize_phi(phi_deg),
        })
    }

    pub const fn boresight() -> Self {
        Direction {
            theta_deg: 0.0,
            phi_deg: 0.0,
        }
    }

    /// Direction at a signed angle inside the plane of azimuth `plane_phi_deg`;
    /// negative angles land on the `plane_phi + 180` half-plane.
    pub fn in_plane(angle_deg: f64, plane_phi_deg: f64) -> Result<Self> {
        if angle_deg >= 0.0 {
            Direction::new(angle_deg, plane_phi_deg)
        } else {
            Direction::new(-angle_deg, plane_phi_deg + 180.0)
        }
    }
}

/// Folds an azimuth into `[-180, 180)`.
pub fn normalize_phi(phi_deg: f64) -> f64 {
    let p = (phi_deg + 180.0).rem_euclid(360.0) - 180.0;
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if p >= 180.0 {
        p - 360.0
    } else {
        p
    }
}

/// `(sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn direction_to_unit_vector(d: Direction) -> [f64; 3] {
    let (st, ct) = d.theta_deg.to_radians().sin_cos();
    let (sp, cp) = d.phi_deg.to_radians().sin_cos();
    [st * cp, st * sp, ct]
}

/// Converts angles from the vertically mounted measurement fixture, whose
/// boresight sits at `theta_mount = 90`, into a boresight-relative direction.
pub fn map_mount_angles(theta_mount: f64, phi_mount: f64) -> Result<Direction> {
    let theta = (theta_mount - 90.0).abs();
    if !theta.is_finite() || theta > 90.0 || !phi_mount.is_finite() {
        return Err(Error::OutOfHemisphere { theta_mount, phi_mount });
    }
    Direction::new(theta, phi_mount)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn prototype_array_extent() {
        let l = build_layout(12, 8, 1.71).unwrap();
        assert_eq!(l.len(), 96);
        let xs: Vec<f64> = l.positions().iter().map(|p| p.0).collect();
        let span = xs.iter().cloned().fold(f64::MIN, f64::max) - xs.iter().cloned().fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(span, 18.81, epsilon = 1e-12);
    }

    #[test]
    fn single_element_at_origin() {
        let l = build_layout(1, 1, 1.71).unwrap();
        assert_eq!(l.positions(), &[(0.0, 0.0)]);
    }

    #[test]
    fn corner_of_4x4() {
        let l = build_layout(4, 4, 1.71).unwrap();
        let (x, y) = l.positions()[0];
        assert_abs_diff_eq!(x, -2.565, epsilon = 1e-12);
        assert_abs_diff_eq!(y, -2.565, epsilon = 1e-12);
    }

    #[test]
    fn layout_rejects_bad_args() {
        assert!(matches!(build_layout(0, 8, 1.71), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_layout(12, 0, 1.71), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_layout(12, 8, 0.0), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_layout(12, 8, -1.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn six_subarrays() {
        let l = build_layout(12, 8, 1.71).unwrap();
        let p = partition_subarrays(&l, 4, 4).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.groups().iter().all(|g| g.len() == 16));
        let whole = partition_subarrays(&l, 12, 8).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole.groups()[0].len(), 96);
    }

    #[test]
    fn partition_names_offending_axis() {
        let l = build_layout(12, 8, 1.71).unwrap();
        match partition_subarrays(&l, 5, 4) {
            Err(Error::Partition { axis, .. }) => assert_eq!(axis, Axis::Rows),
            other => panic!("expected partition error, got {other:?}"),
        }
        match partition_subarrays(&l, 4, 3) {
            Err(Error::Partition { axis, .. }) => assert_eq!(axis, Axis::Cols),
            other => panic!("expected partition error, got {other:?}"),
        }
    }

    #[test]
    fn groups_are_contiguous_rectangles() {
        let l = build_layout(12, 8, 1.71).unwrap();
        let p = partition_subarrays(&l, 4, 4).unwrap();
        for g in p.groups() {
            let rows: Vec<usize> = g.iter().map(|e| e / 8).collect();
            let cols: Vec<usize> = g.iter().map(|e| e % 8).collect();
            let (r0, r1) = (*rows.iter().min().unwrap(), *rows.iter().max().unwrap());
            let (c0, c1) = (*cols.iter().min().unwrap(), *cols.iter().max().unwrap());
            assert_eq!((r1 - r0 + 1) * (c1 - c0 + 1), g.len());
            assert_eq!(r1 - r0 + 1, 4);
        }
    }

    #[test]
    fn unit_vectors() {
        let v = direction_to_unit_vector(Direction::new(0.0, 0.0).unwrap());
        assert_abs_diff_eq!(v[2], 1.0, epsilon = 1e-15);
        let v = direction_to_unit_vector(Direction::new(30.0, 0.0).unwrap());
        assert_abs_diff_eq!(v[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(v[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[2], 0.8660254037844386, epsilon = 1e-12);
        let v = direction_to_unit_vector(Direction::new(90.0, 90.0).unwrap());
        assert_abs_diff_eq!(v[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn mount_mapping() {
        assert_eq!(
            map_mount_angles(120.0, 0.0).unwrap(),
            Direction::new(30.0, 0.0).unwrap()
        );
        assert_eq!(map_mount_angles(90.0, 0.0).unwrap(), Direction::new(0.0, 0.0).unwrap());
        let d = map_mount_angles(90.0, 30.0).unwrap();
        assert_eq!((d.theta_deg, d.phi_deg), (0.0, 30.0));
        assert!(matches!(
            map_mount_angles(200.0, 0.0),
            Err(Error::OutOfHemisphere { .. })
        ));
    }

    #[test]
    fn in_plane_signs() {
        let d = Direction::in_plane(-30.0, 90.0).unwrap();
        assert_eq!((d.theta_deg, d.phi_deg), (30.0, -90.0));
        let d = Direction::in_plane(30.0, 0.0).unwrap();
        assert_eq!((d.theta_deg, d.phi_deg), (30.0, 0.0));
        assert_eq!(normalize_phi(180.0), -180.0);
        assert_eq!(normalize_phi(-180.0), -180.0);
    }

    fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn lattice_mirror_symmetry(rows in 1usize..16, cols in 1usize..16, a in 0.1f64..5.0) {
            let l = build_layout(rows, cols, a).unwrap();
            let orig = sorted(l.positions().to_vec());
            let mx = sorted(l.positions().iter().map(|&(x, y)| (-x, y)).collect());
            let my = sorted(l.positions().iter().map(|&(x, y)| (x, -y)).collect());
            prop_assert_eq!(&orig, &mx);
            prop_assert_eq!(&orig, &my);
            let (sx, sy) = l.positions().iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
            prop_assert!((sx / l.len() as f64).abs() < 1e-12);
            prop_assert!((sy / l.len() as f64).abs() < 1e-12);
        }

        #[test]
        fn partition_is_exact_cover(br in 1usize..5, bc in 1usize..5, sr in 1usize..5, sc in 1usize..5) {
            let l = build_layout(br * sr, bc * sc, 1.71).unwrap();
            let p = partition_subarrays(&l, sr, sc).unwrap();
            prop_assert_eq!(p.len(), br * bc);
            let mut seen = vec![0u8; l.len()];
            for g in p.groups() {
                for &e in g { seen[e] += 1; }
            }
            prop_assert!(seen.iter().all(|&c| c == 1));
        }

        #[test]
        fn unit_norm(theta in 0.0f64..=90.0, phi in -180.0f64..180.0) {
            let v = direction_to_unit_vector(Direction::new(theta, phi).unwrap());
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            prop_assert!((n - 1.0).abs() < 1e-12);
        }

        #[test]
        fn mount_boresight_any_phi(phi in -180.0f64..180.0) {
            prop_assert_eq!(map_mount_angles(90.0, phi).unwrap().theta_deg, 0.0);
        }
    }
}
