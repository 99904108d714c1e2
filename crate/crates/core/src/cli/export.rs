//! CSV and text emission plus CSV ingestion. Every CSV starts with
//! `#`-prefixed metadata lines followed by a single header row; floats use
//! fixed precision so identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::run::RunReport;
use crate::codebook::{BeamChoice, BeamLabel, SubarrayCodebook, SubarrayStateChoice};
use crate::control::{set_state, PathSelect, ScheduleEntry, StateSchedule};
use crate::error::{Error, Result};
use crate::field::FarFieldPattern;

/// Pattern magnitudes below this many dB under the peak are clamped.
pub const PATTERN_FLOOR_DB: f64 = -300.0;

/// Fixed-precision float without a negative zero.
pub fn fmt_f(x: f64, prec: usize) -> String {
    let s = format!("{x:.prec$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn opt_f(x: Option<f64>, prec: usize) -> String {
    x.map(|v| fmt_f(v, prec)).unwrap_or_default()
}

fn meta_block(lines: &[(String, String)]) -> String {
    let mut s = String::new();
    for (k, v) in lines {
        let _ = writeln!(s, "# {k}: {v}");
    }
    s
}

pub fn report_metadata(report: &RunReport) -> Vec<(String, String)> {
    let p = &report.provenance;
    let mut m = vec![
        (
            "generator".to_string(),
            format!("ris-sim {}", env!("CARGO_PKG_VERSION")),
        ),
        ("config_sha256".into(), p.config_digest.clone()),
        ("angle_convention".into(), p.angle_convention.clone()),
        ("element_q".into(), p.element_q.to_string()),
        ("off_model".into(), p.off_model.clone()),
        ("off_structural_floor".into(), p.off_floor.to_string()),
        ("switch_isolation_db".into(), p.isolation_db.to_string()),
        ("grid_step_deg".into(), p.grid_step_deg.to_string()),
        ("search".into(), p.search.as_str().to_string()),
    ];
    for (k, v) in &p.defaults {
        m.push((format!("default {k}"), v.clone()));
    }
    for r in &report.records {
        for n in &r.notes {
            m.push(("note".into(), n.clone()));
        }
    }
    m
}

/// Columns: freq_ghz, enhancement_db, predicted_db, peak_theta, peak_phi,
/// directivity_dbi. Floor-limited enhancements are written as
/// `floor-limited`; unavailable predictions are left empty.
pub fn write_report_csv<W: Write>(report: &RunReport, mut w: W) -> Result<()> {
    let mut s = meta_block(&report_metadata(report));
    s.push_str("freq_ghz,enhancement_db,predicted_db,peak_theta,peak_phi,directivity_dbi\n");
    for r in &report.records {
        let enh = match r.enhancement.db() {
            Some(db) => fmt_f(db, 6),
            None => r.enhancement.to_string(),
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.freq_ghz,
            enh,
            opt_f(r.predicted_db, 6),
            fmt_f(r.peak.theta_deg, 3),
            fmt_f(r.peak.phi_deg, 3),
            fmt_f(r.directivity_dbi, 6)
        );
    }
    w.write_all(s.as_bytes())?;
    Ok(())
}

/// Columns: theta_deg, phi_deg, re, im, mag_db (normalized to the pattern
/// peak), one row per grid node, theta-major.
pub fn write_pattern_csv<W: Write>(p: &FarFieldPattern, extra_meta: &[(String, String)], mut w: W) -> Result<()> {
    let peak = p.max_magnitude();
    if !(peak > 0.0) {
        return Err(Error::DegeneratePattern("cannot normalize an all-zero pattern".into()));
    }
    let mut meta = vec![
        ("freq_ghz".to_string(), p.freq_ghz.to_string()),
        (
            "incidence_deg".into(),
            format!("theta {} phi {}", p.incidence.theta_deg, p.incidence.phi_deg),
        ),
        ("state_digest".into(), p.state_digest.clone()),
        ("element_q".into(), p.element_q.to_string()),
        ("grid_step_deg".into(), p.grid.step_deg().to_string()),
        ("peak_abs".into(), format!("{peak:.9e}")),
        ("mag_db_floor".into(), PATTERN_FLOOR_DB.to_string()),
    ];
    meta.extend_from_slice(extra_meta);
    let mut s = meta_block(&meta);
    s.push_str("theta_deg,phi_deg,re,im,mag_db\n");
    for i in 0..p.grid.n_theta() {
        for j in 0..p.grid.n_phi() {
            let e = p.at(i, j);
            let db = (20.0 * (e.norm() / peak).log10()).max(PATTERN_FLOOR_DB);
            let _ = writeln!(
                s,
                "{},{},{:.9e},{:.9e},{}",
                p.grid.theta(i),
                p.grid.phi(j),
                e.re,
                e.im,
                fmt_f(db, 6)
            );
        }
    }
    w.write_all(s.as_bytes())?;
    Ok(())
}

/// Columns: subarray_index, beam_label, element_index, state.
pub fn write_codebook_csv<W: Write>(cb: &SubarrayCodebook, mut w: W) -> Result<()> {
    let meta = vec![
        ("design_freq_ghz".to_string(), cb.design_freq_ghz().to_string()),
        (
            "design_incidence_deg".into(),
            format!(
                "theta {} phi {}",
                cb.design_incidence().theta_deg,
                cb.design_incidence().phi_deg
            ),
        ),
        ("beam_plane_phi_deg".into(), cb.beam_plane_phi_deg().to_string()),
        ("subarrays".into(), cb.subarrays().to_string()),
        ("templates".into(), cb.template_count().to_string()),
    ];
    let mut s = meta_block(&meta);
    for b in BeamLabel::ALL {
        let _ = writeln!(s, "# offset_rad {}: {}", b.as_str(), fmt_f(cb.offset_rad(b), 9));
    }
    s.push_str("subarray_index,beam_label,element_index,state\n");
    for g in 0..cb.subarrays() {
        for b in BeamLabel::ALL {
            for (&e, st) in cb.partition().groups()[g].iter().zip(cb.template(g, b)) {
                let _ = writeln!(s, "{g},{},{e},{}", b.as_str(), st.label());
            }
        }
    }
    w.write_all(s.as_bytes())?;
    Ok(())
}

/// Columns: subarray_index, beam_label.
pub fn write_choice_csv<W: Write>(choice: &SubarrayStateChoice, meta: &[(String, String)], mut w: W) -> Result<()> {
    let mut s = meta_block(meta);
    s.push_str("subarray_index,beam_label\n");
    for (g, c) in choice.0.iter().enumerate() {
        let _ = writeln!(s, "{g},{c}");
    }
    w.write_all(s.as_bytes())?;
    Ok(())
}

/// (subarray_index, choice, source line) of one schedule row.
type ScheduleRowRef = (usize, BeamChoice, u64);

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn parse_choice(label: &str, line: u64) -> Result<BeamChoice> {
    BeamChoice::parse(label).ok_or_else(|| Error::Resolution(format!("line {line}: unknown beam label {label:?}")))
}

#[derive(Deserialize)]
struct ChoiceRow {
    subarray_index: usize,
    beam_label: String,
}

pub fn read_choice_csv(text: &str) -> Result<SubarrayStateChoice> {
    let mut rows = Vec::new();
    for rec in reader(text).deserialize::<ChoiceRow>() {
        rows.push(rec.map_err(csv_err)?);
    }
    let mut out = vec![None; rows.len()];
    for (i, r) in rows.iter().enumerate() {
        let line = i as u64 + 2;
        let slot = out
            .get_mut(r.subarray_index)
            .ok_or_else(|| Error::Resolution(format!("line {line}: subarray {} out of range", r.subarray_index)))?;
        if slot.is_some() {
            return Err(Error::Resolution(format!(
                "line {line}: subarray {} listed twice",
                r.subarray_index
            )));
        }
        *slot = Some(parse_choice(&r.beam_label, line)?);
    }
    Ok(SubarrayStateChoice(
        out.into_iter().map(|c| c.expect("every slot filled")).collect(),
    ))
}

#[derive(Deserialize)]
struct ScheduleRow {
    time_s: f64,
    subarray_index: usize,
    beam_label: String,
}

/// Reads `time_s, subarray_index, beam_label` rows. Rows sharing a
/// timestamp form one entry, which must name every subarray `0..N` exactly
/// once; entries keep file order so ordering faults surface in validation.
pub fn read_schedule_csv(text: &str) -> Result<StateSchedule> {
    let mut groups: Vec<(f64, Vec<ScheduleRowRef>)> = Vec::new();
    for (i, rec) in reader(text).deserialize::<ScheduleRow>().enumerate() {
        let r = rec.map_err(csv_err)?;
        let line = i as u64 + 2;
        let c = parse_choice(&r.beam_label, line)?;
        match groups.iter_mut().find(|(t, _)| *t == r.time_s) {
            Some((_, v)) => v.push((r.subarray_index, c, line)),
            None => groups.push((r.time_s, vec![(r.subarray_index, c, line)])),
        }
    }
    let mut entries = Vec::with_capacity(groups.len());
    let mut width = None;
    for (t, rows) in groups {
        let mut slots = vec![None; rows.len()];
        for (g, c, line) in rows {
            match slots.get_mut(g) {
                Some(slot @ None) => *slot = Some(c),
                Some(Some(_)) => {
                    return Err(Error::Resolution(format!(
                        "line {line}: subarray {g} repeated at t = {t} s"
                    )))
                }
                None => {
                    return Err(Error::Resolution(format!(
                        "line {line}: subarray {g} at t = {t} s leaves lower subarrays unassigned"
                    )))
                }
            }
        }
        if *width.get_or_insert(slots.len()) != slots.len() {
            return Err(Error::Resolution(format!(
                "entry at t = {t} s lists {} subarrays, earlier entries list {}",
                slots.len(),
                width.unwrap_or(0)
            )));
        }
        entries.push(ScheduleEntry {
            time_s: t,
            switches: slots
                .into_iter()
                .map(|c| set_state(PathSelect::from_choice(c.expect("slots filled"))))
                .collect(),
        });
    }
    if entries.is_empty() {
        return Err(Error::Parse("schedule has no rows".into()));
    }
    Ok(StateSchedule { entries })
}

/// Normalized echo of a schedule: one row per (entry, subarray) in order.
pub fn write_schedule_csv<W: Write>(s: &StateSchedule, meta: &[(String, String)], mut w: W) -> Result<()> {
    let mut out = meta_block(meta);
    out.push_str("time_s,subarray_index,beam_label\n");
    for e in &s.entries {
        for (g, sw) in e.switches.iter().enumerate() {
            let _ = writeln!(out, "{:e},{g},{}", e.time_s, sw.selected.to_choice());
        }
    }
    w.write_all(out.as_bytes())?;
    Ok(())
}

#[derive(Deserialize)]
struct IlRow {
    freq_ghz: f64,
    il_db: f64,
}

/// Reads an insertion-loss table with columns `freq_ghz, il_db`.
pub fn read_il_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    reader(text)
        .deserialize::<IlRow>()
        .map(|r| r.map(|r| (r.freq_ghz, r.il_db)).map_err(csv_err))
        .collect()
}

/// Writes the report CSV and, when given, the pattern CSV into `dir`.
pub fn export(report: &RunReport, pattern: Option<&FarFieldPattern>, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let path = dir.join("report.csv");
    let mut buf = Vec::new();
    write_report_csv(report, &mut buf)?;
    fs::write(&path, buf)?;
    written.push(path);
    if let Some(p) = pattern {
        let path = dir.join(format!("pattern_{}ghz.csv", p.freq_ghz));
        let mut buf = Vec::new();
        let meta = vec![("config_sha256".to_string(), report.provenance.config_digest.clone())];
        write_pattern_csv(p, &meta, &mut buf)?;
        fs::write(&path, buf)?;
        written.push(path);
    }
    Ok(written)
}
