mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mtjsim::netlist::parse_value;
use mtjsim::{DesignStyle, GateKind};

/// Transient simulator for hybrid MTJ/CMOS adiabatic logic.
#[derive(Debug, Parser)]
#[command(name = "mtjsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a netlist file and write the recorded signals as CSV.
    Run {
        file: PathBuf,
        /// Override the `.tran` timestep.
        #[arg(long, value_parser = positive)]
        dt: Option<f64>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a gate, check its truth table and audit its energy.
    Gate {
        #[arg(long, value_parser = kind)]
        kind: GateKind,
        #[arg(long, value_parser = style)]
        style: DesignStyle,
        #[command(flatten)]
        bench: BenchArgs,
        /// Input patterns to apply, e.g. `010,111`; every combination when omitted.
        #[arg(long, value_delimiter = ',')]
        patterns: Option<Vec<String>>,
        /// Write the waveform CSV here.
        #[arg(long)]
        waves: Option<PathBuf>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Export the generated netlist here.
        #[arg(long)]
        netlist: Option<PathBuf>,
    },
    /// Compare adiabatic and baseline energy per operation.
    Compare {
        /// Gate kinds to compare; all three when omitted.
        #[arg(long, value_parser = kind, value_delimiter = ',')]
        kind: Vec<GateKind>,
        #[command(flatten)]
        bench: BenchArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Energy per operation over a list of phase durations.
    Sweep {
        #[arg(long, value_parser = kind)]
        kind: GateKind,
        #[arg(long = "tphase-list", value_parser = positive, value_delimiter = ',', required = true)]
        tphase_list: Vec<f64>,
        #[arg(long, value_parser = style, default_value = "adiabatic")]
        style: DesignStyle,
        #[command(flatten)]
        bench: BenchArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Operating-point overrides shared by the gate-level commands. Values
/// accept engineering suffixes (`10n`, `1f`).
#[derive(Debug, Args, Clone, Default)]
struct BenchArgs {
    #[arg(long, value_parser = positive)]
    vdd: Option<f64>,
    #[arg(long, value_parser = positive)]
    tphase: Option<f64>,
    #[arg(long, value_parser = positive)]
    cload: Option<f64>,
    #[arg(long, value_parser = positive)]
    dt: Option<f64>,
}

fn positive(s: &str) -> Result<f64, String> {
    match parse_value(s) {
        Some(v) if v > 0.0 => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn kind(s: &str) -> Result<GateKind, String> {
    s.parse()
}

fn style(s: &str) -> Result<DesignStyle, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { file, dt, out } => commands::run(&file, dt, out.as_deref()),
        Command::Gate {
            kind,
            style,
            bench,
            patterns,
            waves,
            report,
            netlist,
        } => commands::gate(commands::GateOptions {
            kind,
            style,
            bench: bench.into(),
            patterns,
            waves,
            report,
            netlist,
        }),
        Command::Compare { kind, bench, report } => {
            let kinds = if kind.is_empty() { GateKind::ALL.to_vec() } else { kind };
            commands::compare(&kinds, &bench.into(), report.as_deref())
        }
        Command::Sweep {
            kind,
            tphase_list,
            style,
            bench,
            report,
        } => commands::sweep(kind, style, &tphase_list, &bench.into(), report.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}

impl From<BenchArgs> for commands::Overrides {
    fn from(b: BenchArgs) -> Self {
        commands::Overrides {
            vdd: b.vdd,
            t_phase: b.tphase,
            c_load: b.cload,
            dt: b.dt,
        }
    }
}
