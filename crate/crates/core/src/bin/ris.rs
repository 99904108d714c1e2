use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ris_sim::cli::commands::{self, BudgetArgs, PowerArgs};
use ris_sim::cli::run::PatternState;
use ris_sim::codebook::{BeamChoice, BeamLabel};

/// Subarray-partitioned 1-bit RIS simulator.
#[derive(Parser)]
#[command(name = "ris", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    On,
    Off,
    Minus30,
    Zero,
    Plus30,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep a scenario and emit the per-frequency report CSV.
    Scenario {
        config: PathBuf,
        /// Write report.csv (and a pattern CSV) here instead of stdout.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also export the ON pattern at this frequency (needs --out-dir).
        #[arg(long, requires = "out_dir")]
        pattern_freq: Option<f64>,
    },
    /// Full-hemisphere pattern CSV for one state.
    Pattern {
        config: PathBuf,
        /// Frequency in GHz; defaults to the first swept frequency.
        #[arg(long)]
        freq: Option<f64>,
        #[arg(long, value_enum, default_value = "on")]
        state: StateArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Codebook templates CSV, or the searched subarray choice.
    Codebook {
        config: PathBuf,
        #[arg(long)]
        freq: Option<f64>,
        /// Emit the selected (subarray_index, beam_label) assignment.
        #[arg(long)]
        select: bool,
    },
    /// Path-loss budget and predicted enhancement.
    Budget {
        /// Switch insertion-loss table (freq_ghz, il_db).
        #[arg(long)]
        il_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 17.9)]
        ideal_db: f64,
        #[arg(long, default_value_t = 2)]
        n_paths: usize,
        #[arg(long, default_value_t = 2.5)]
        extra_db: f64,
        /// Comma-separated frequencies in GHz.
        #[arg(long, value_delimiter = ',', default_values_t = [100.0, 102.0, 104.0, 106.0, 108.0, 110.0])]
        freqs: Vec<f64>,
        #[arg(long, default_value_t = 6.84)]
        aperture_mm: f64,
        #[arg(long, default_value_t = 60.0)]
        distance_mm: f64,
        /// Human-readable summary instead of CSV.
        #[arg(long)]
        text: bool,
    },
    /// DC bias power, from a switch count or a scenario's partition.
    Power {
        #[arg(long, conflicts_with = "switches")]
        config: Option<PathBuf>,
        #[arg(long)]
        switches: Option<usize>,
        #[arg(long, requires = "measured_i")]
        measured_v: Option<f64>,
        #[arg(long, requires = "measured_v")]
        measured_i: Option<f64>,
    },
    /// Validate a (time_s, subarray_index, beam_label) schedule CSV.
    ScheduleCheck {
        schedule: PathBuf,
        #[arg(long)]
        switching_time: Option<f64>,
        /// Expand every entry through this scenario's codebook.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn state(s: StateArg) -> PatternState {
    match s {
        StateArg::On => PatternState::On,
        StateArg::Off => PatternState::Off,
        StateArg::Minus30 => PatternState::Uniform(BeamChoice::Beam(BeamLabel::Minus30)),
        StateArg::Zero => PatternState::Uniform(BeamChoice::Beam(BeamLabel::Zero)),
        StateArg::Plus30 => PatternState::Uniform(BeamChoice::Beam(BeamLabel::Plus30)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let res = match cli.cmd {
        Cmd::Scenario {
            config,
            out_dir,
            pattern_freq,
        } => commands::scenario(&config, out_dir.as_deref(), pattern_freq, &mut out).map(|_| true),
        Cmd::Pattern {
            config,
            freq,
            state: s,
            output,
        } => commands::pattern(&config, freq, state(s), output.as_deref(), &mut out).map(|_| true),
        Cmd::Codebook { config, freq, select } => commands::codebook(&config, freq, select, &mut out).map(|_| true),
        Cmd::Budget {
            il_csv,
            ideal_db,
            n_paths,
            extra_db,
            freqs,
            aperture_mm,
            distance_mm,
            text,
        } => commands::budget(
            &BudgetArgs {
                il_csv,
                ideal_db,
                n_paths,
                extra_interconnect_db: extra_db,
                freqs_ghz: freqs,
                aperture_mm,
                distance_mm,
                text,
            },
            &mut out,
        )
        .map(|_| true),
        Cmd::Power {
            config,
            switches,
            measured_v,
            measured_i,
        } => commands::power(
            &PowerArgs {
                config,
                switches,
                measured_v,
                measured_i,
            },
            &mut out,
        )
        .map(|_| true),
        Cmd::ScheduleCheck {
            schedule,
            switching_time,
            config,
        } => commands::schedule_check(&schedule, switching_time, config.as_deref(), &mut out),
    };
    let _ = out.flush();
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
