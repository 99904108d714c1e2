//! Subcommand bodies. Each takes parsed arguments and writes its report to
//! `out`; the `ris` binary only maps command-line flags onto these.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::config::{parse_config, Scenario};
use super::export::{
    export, fmt_f, read_il_csv, read_schedule_csv, write_choice_csv, write_codebook_csv, write_pattern_csv,
    write_report_csv, write_schedule_csv,
};
use super::run::{operating_point, provenance, run_scenario, scenario_pattern, PatternState};
use crate::budget::{
    bondwire_inductance, bondwire_reactance, compare_power, dc_power, far_field_check, far_field_distance,
    scaling_report, switch_insertion_loss, BondWire, InterconnectLoss, PathLossBudget, SwitchModel,
    DEFAULT_EXTRA_INTERCONNECT_DB,
};
use crate::control::{schedule_to_state_vectors, validate_schedule};
use crate::error::{Error, Result};

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

fn first_freq(s: &Scenario, freq: Option<f64>) -> f64 {
    freq.unwrap_or(s.frequencies_ghz[0])
}

/// `scenario`: report CSV to `out`, or report (and optional pattern) files
/// into `out_dir`.
pub fn scenario(config: &Path, out_dir: Option<&Path>, pattern_freq: Option<f64>, out: &mut dyn Write) -> Result<()> {
    let s = load_scenario(config)?;
    let report = run_scenario(&s)?;
    match out_dir {
        Some(dir) => {
            let pattern = pattern_freq
                .map(|f| scenario_pattern(&s, f, PatternState::On))
                .transpose()?;
            for p in export(&report, pattern.as_ref(), dir)? {
                writeln!(out, "{}", p.display())?;
            }
        }
        None => write_report_csv(&report, out)?,
    }
    Ok(())
}

/// `pattern`: full-hemisphere pattern CSV for one state at one frequency.
pub fn pattern(
    config: &Path,
    freq: Option<f64>,
    which: PatternState,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let s = load_scenario(config)?;
    let f = first_freq(&s, freq);
    let p = scenario_pattern(&s, f, which)?;
    let label = match which {
        PatternState::On => "ON".to_string(),
        PatternState::Off => "OFF".to_string(),
        PatternState::Uniform(c) => format!("uniform {c}"),
    };
    let meta = vec![
        ("config_sha256".to_string(), s.config_digest.clone()),
        ("state".into(), label),
        ("angle_convention".into(), s.angle_convention().to_string()),
    ];
    match output {
        Some(path) => {
            let mut buf = Vec::new();
            write_pattern_csv(&p, &meta, &mut buf)?;
            std::fs::write(path, buf)?;
            writeln!(out, "{}", path.display())?;
        }
        None => write_pattern_csv(&p, &meta, out)?,
    }
    Ok(())
}

/// `codebook`: templates CSV, or with `select` the searched choice CSV.
pub fn codebook(config: &Path, freq: Option<f64>, select: bool, out: &mut dyn Write) -> Result<()> {
    let s = load_scenario(config)?;
    let f = first_freq(&s, freq);
    let op = operating_point(&s, f)?;
    if select {
        let meta = vec![
            ("config_sha256".to_string(), s.config_digest.clone()),
            ("freq_ghz".into(), f.to_string()),
            ("search".into(), s.search.as_str().to_string()),
            (
                "observation_deg".into(),
                format!("theta {} phi {}", s.observation.theta_deg, s.observation.phi_deg),
            ),
        ];
        write_choice_csv(&op.choice, &meta, out)
    } else {
        write_codebook_csv(&op.codebook, out)
    }
}

#[derive(Debug, Clone)]
pub struct BudgetArgs {
    pub il_csv: Option<PathBuf>,
    pub ideal_db: f64,
    pub n_paths: usize,
    pub extra_interconnect_db: f64,
    pub freqs_ghz: Vec<f64>,
    pub aperture_mm: f64,
    pub distance_mm: f64,
    pub text: bool,
}

impl Default for BudgetArgs {
    fn default() -> Self {
        BudgetArgs {
            il_csv: None,
            ideal_db: 17.9,
            n_paths: 2,
            extra_interconnect_db: DEFAULT_EXTRA_INTERCONNECT_DB,
            freqs_ghz: vec![100.0, 102.0, 104.0, 106.0, 108.0, 110.0],
            aperture_mm: 6.84,
            distance_mm: 60.0,
            text: false,
        }
    }
}

/// `budget`: per-frequency loss table and predicted enhancement.
pub fn budget(args: &BudgetArgs, out: &mut dyn Write) -> Result<()> {
    let mut switch = SwitchModel::masw_011029();
    if let Some(p) = &args.il_csv {
        switch.il_table = read_il_csv(&std::fs::read_to_string(p)?)?;
    }
    let b = PathLossBudget {
        switch,
        extra_interconnect: InterconnectLoss::flat(args.extra_interconnect_db),
        n_paths_in_chain: args.n_paths,
    };
    b.validate()?;
    let rows: Vec<(f64, Option<(f64, f64)>)> = args
        .freqs_ghz
        .iter()
        .map(|&f| match switch_insertion_loss(&b.switch, f) {
            Ok(il) => Ok((
                f,
                Some((il, b.n_paths_in_chain as f64 * (il + b.extra_interconnect.at(f)))),
            )),
            Err(Error::ExtrapolationRefused { .. }) => Ok((f, None)),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let mut s = String::new();
    if args.text {
        let _ = writeln!(s, "switch: {} ({} paths in chain)", b.switch.name, b.n_paths_in_chain);
        let _ = writeln!(s, "lossless enhancement: {} dB", args.ideal_db);
        for (f, r) in &rows {
            match r {
                Some((il, loss)) => {
                    let _ = writeln!(
                        s,
                        "{f:>7} GHz  switch IL {il:.2} dB  path loss {loss:.2} dB  predicted {:.2} dB",
                        args.ideal_db - loss
                    );
                }
                None => {
                    let _ = writeln!(s, "{f:>7} GHz  outside the insertion-loss table, no prediction");
                }
            }
        }
        let w = BondWire::prototype();
        let _ = writeln!(
            s,
            "bond wire: {:.4} nH ({} in parallel), {:.2} ohm at 100 GHz",
            bondwire_inductance(&w)?,
            w.parallel_count,
            bondwire_reactance(&w, 100.0)?
        );
        let dff = far_field_distance(args.aperture_mm, 100.0)?;
        let ok = far_field_check(args.aperture_mm, 100.0, args.distance_mm)?;
        let _ = writeln!(
            s,
            "far field: D = {} mm -> 2D^2/lambda = {dff:.2} mm at 100 GHz; {} mm is {}",
            args.aperture_mm,
            args.distance_mm,
            if ok { "in the far field" } else { "NOT in the far field" }
        );
    } else {
        let _ = writeln!(s, "# switch: {}", b.switch.name);
        let _ = writeln!(s, "# n_paths: {}", b.n_paths_in_chain);
        let _ = writeln!(s, "# ideal_db: {}", args.ideal_db);
        s.push_str("freq_ghz,switch_il_db,interconnect_db,path_loss_db,predicted_db\n");
        for (f, r) in &rows {
            match r {
                Some((il, loss)) => {
                    let _ = writeln!(
                        s,
                        "{f},{},{},{},{}",
                        fmt_f(*il, 6),
                        fmt_f(b.extra_interconnect.at(*f), 6),
                        fmt_f(*loss, 6),
                        fmt_f(args.ideal_db - loss, 6)
                    );
                }
                None => {
                    let _ = writeln!(s, "{f},,,,");
                }
            }
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct PowerArgs {
    /// Layout and partition taken from this scenario.
    pub config: Option<PathBuf>,
    pub switches: Option<usize>,
    pub measured_v: Option<f64>,
    pub measured_i: Option<f64>,
}

/// `power`: DC bias power, optionally against a measured supply reading.
pub fn power(args: &PowerArgs, out: &mut dyn Write) -> Result<()> {
    let sw = SwitchModel::masw_011029();
    let mut s = String::new();
    let n = match (&args.config, args.switches) {
        (Some(path), None) => {
            let sc = load_scenario(path)?;
            let l = &sc.layout;
            let r = scaling_report(
                l.rows(),
                l.cols(),
                sc.partition.sub_rows(),
                sc.partition.sub_cols(),
                &sw,
            )?;
            let _ = writeln!(s, "array: {}x{} = {} elements", l.rows(), l.cols(), r.n_elements);
            let _ = writeln!(
                s,
                "one switch per cell:          {:>5} switches  {:.3} W",
                r.n_switches_per_cell, r.power_per_cell_w
            );
            let _ = writeln!(
                s,
                "one switch per combined pair: {:>5} switches  {:.3} W",
                r.n_switches_per_combined, r.power_per_combined_w
            );
            let _ = writeln!(
                s,
                "one switch per {}x{} subarray: {:>5} switches  {:.3} W",
                sc.partition.sub_rows(),
                sc.partition.sub_cols(),
                r.n_switches_subarray,
                r.power_subarray_w
            );
            r.n_switches_subarray
        }
        (None, Some(n)) => n,
        (None, None) => 1,
        (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument(
                "give either a config or a switch count, not both".into(),
            ));
        }
    };
    let p = dc_power(&sw, n);
    let _ = writeln!(
        s,
        "{}: {} switches x {:.1} mA x {} V = {:.3} W",
        sw.name,
        n,
        p.per_switch_current_a * 1e3,
        sw.v_bias,
        p.total_w
    );
    match (args.measured_v, args.measured_i) {
        (Some(v), Some(i)) => {
            let c = compare_power(&sw, n, v, i)?;
            let _ = writeln!(
                s,
                "measured: {v} V x {i} A = {:.3} W (model {:.3} W, difference {:+.3} W)",
                c.measured_w, c.ideal_w, c.delta_w
            );
        }
        (None, None) => {}
        _ => {
            return Err(Error::InvalidArgument(
                "measured power needs both voltage and current".into(),
            ))
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(())
}

/// `schedule-check`: timing report plus the normalized schedule. Returns
/// whether the schedule is feasible.
pub fn schedule_check(
    schedule: &Path,
    switching_time_s: Option<f64>,
    expand_with: Option<&Path>,
    out: &mut dyn Write,
) -> Result<bool> {
    let sched = read_schedule_csv(&std::fs::read_to_string(schedule)?)?;
    let t_sw = switching_time_s.unwrap_or(SwitchModel::masw_011029().switching_time_s);
    let rep = validate_schedule(&sched, t_sw)?;
    let mut meta = vec![
        ("switching_time_s".to_string(), format!("{t_sw:e}")),
        ("entries".into(), sched.entries.len().to_string()),
        ("feasible".into(), rep.feasible.to_string()),
        (
            "min_dwell_s".into(),
            rep.min_dwell_s
                .map(|d| format!("{d:e}"))
                .unwrap_or_else(|| "n/a".into()),
        ),
        (
            "modulation_rate_hz".into(),
            rep.modulation_rate_hz
                .map(|r| format!("{r:e}"))
                .unwrap_or_else(|| "n/a".into()),
        ),
    ];
    for (i, gap) in &rep.violations {
        meta.push(("violation".into(), format!("entry {i} follows after {gap:e} s")));
    }
    if let Some(cfg) = expand_with {
        let sc = load_scenario(cfg)?;
        let op = operating_point(&sc, sc.frequencies_ghz[0])?;
        for (t, v) in schedule_to_state_vectors(&sched, &op.codebook, &sc.partition)? {
            meta.push(("state_vector".into(), format!("t = {t:e} s digest {}", v.digest())));
        }
        meta.push(("config_sha256".into(), provenance(&sc).config_digest));
    }
    write_schedule_csv(&sched, &meta, out)?;
    Ok(rep.feasible)
}
