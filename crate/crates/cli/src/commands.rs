use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use mtjsim::circuits::{CircuitError, GateRun};
use mtjsim::{
    build_gate, compare_designs, parse_netlist, serialize_netlist, transient_run, verify_truth_table, DesignStyle,
    EngineError, GateKind, TestbenchSpec, TransientConfig,
};

use crate::output::{self, CompareReport, GateReport, SweepPoint, SweepReport};

/// Failure classes, each mapped to its own process exit code.
#[derive(Debug)]
pub enum CliError {
    Io { path: PathBuf, source: io::Error },
    Usage(String),
    Parse(String),
    Convergence(String),
    Logic(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Convergence(_) => 4,
            CliError::Logic(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Usage(m) | CliError::Parse(m) | CliError::Convergence(m) | CliError::Logic(m) => f.write_str(m),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::MissingTran | EngineError::InvalidConfig(_) => CliError::Usage(e.to_string()),
            EngineError::InvalidNetlist(_) => CliError::Parse(e.to_string()),
            _ => CliError::Convergence(e.to_string()),
        }
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::Simulation { .. } => CliError::Convergence(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub vdd: Option<f64>,
    pub t_phase: Option<f64>,
    pub c_load: Option<f64>,
    pub dt: Option<f64>,
}

impl Overrides {
    fn apply(&self, mut tb: TestbenchSpec) -> TestbenchSpec {
        tb.vdd = self.vdd.unwrap_or(tb.vdd);
        tb.t_phase = self.t_phase.unwrap_or(tb.t_phase);
        tb.c_load = self.c_load.unwrap_or(tb.c_load);
        tb.dt = self.dt.unwrap_or(tb.dt);
        tb
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("reports contain only plain data");
    write_file(path, &(text + "\n"))
}

pub fn run(file: &Path, dt: Option<f64>, out: Option<&Path>) -> Result<(), CliError> {
    let text = fs::read_to_string(file).map_err(|source| CliError::Io {
        path: file.to_path_buf(),
        source,
    })?;
    let netlist = parse_netlist(&text).map_err(|e| CliError::Parse(format!("{}: {e}", file.display())))?;
    let mut cfg = TransientConfig::from_netlist(&netlist)?;
    if let Some(dt) = dt {
        cfg.dt = dt;
    }
    let result = transient_run(&netlist, &cfg)?;
    let csv = output::waveform_csv(&result, &netlist);
    match out {
        Some(path) => write_file(path, &csv),
        None => io::stdout()
            .lock()
            .write_all(csv.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

pub struct GateOptions {
    pub kind: GateKind,
    pub style: DesignStyle,
    pub bench: Overrides,
    pub patterns: Option<Vec<String>>,
    pub waves: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub netlist: Option<PathBuf>,
}

fn parse_patterns(kind: GateKind, list: &[String]) -> Result<Vec<Vec<bool>>, CliError> {
    list.iter()
        .map(|p| {
            let bits: Option<Vec<bool>> = p
                .trim()
                .chars()
                .map(|c| match c {
                    '0' => Some(false),
                    '1' => Some(true),
                    _ => None,
                })
                .collect();
            match bits {
                Some(b) if b.len() == kind.arity() => Ok(b),
                _ => Err(CliError::Usage(format!(
                    "pattern `{p}` is not {} binary digits ({})",
                    kind.arity(),
                    kind.input_names().join(", ")
                ))),
            }
        })
        .collect()
}

fn testbench(kind: GateKind, bench: &Overrides, patterns: Option<&[String]>) -> Result<TestbenchSpec, CliError> {
    let mut tb = bench.apply(TestbenchSpec::exhaustive(kind));
    if let Some(list) = patterns {
        let mut p = parse_patterns(kind, list)?;
        if p.is_empty() {
            return Err(CliError::Usage("--patterns needs at least one pattern".into()));
        }
        // The first cycle only settles the circuit; it is not checked.
        p.insert(0, p[0].clone());
        tb.patterns = p;
    }
    Ok(tb)
}

fn verdict_lines(run: &GateRun) -> Vec<String> {
    run.verdicts
        .iter()
        .map(|v| {
            let bits: String = v.pattern.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let rails: Vec<String> = v
                .readings
                .iter()
                // Avoid printing solver-level negatives as "-0.000".
                .map(|r| format!("{}={:.3}", r.node, if r.volts.abs() < 5e-4 { 0.0 } else { r.volts }))
                .collect();
            format!(
                "  cycle {:>2}  in={bits}  {}  {}",
                v.cycle,
                rails.join(" "),
                if v.pass { "ok" } else { "FAIL" }
            )
        })
        .collect()
}

pub fn gate(opts: GateOptions) -> Result<(), CliError> {
    let tb = testbench(opts.kind, &opts.bench, opts.patterns.as_deref())?;
    if let Some(path) = &opts.netlist {
        let template = build_gate(opts.kind, opts.style, &tb)?;
        write_file(path, &serialize_netlist(&template.netlist))?;
    }
    let (run, result) = verify_truth_table(opts.kind, opts.style, &tb)?;
    if let Some(path) = &opts.waves {
        write_file(path, &output::waveform_csv(&result, &run.template.netlist))?;
    }
    if let Some(path) = &opts.report {
        write_json(path, &GateReport::new(&run))?;
    }

    println!("{} {} at t_phase = {:e} s", opts.kind, opts.style, tb.t_phase);
    for line in verdict_lines(&run) {
        println!("{line}");
    }
    println!(
        "  {}/{} patterns pass; logic {:.4e} J/op, write {:.4e} J/op, residual {:.2e}",
        run.pass_count(),
        run.verdicts.len(),
        run.per_op.logic_j_per_op,
        run.per_op.write_j_per_op,
        run.energy.relative_residual()
    );
    if run.passed() {
        Ok(())
    } else {
        Err(CliError::Logic(format!(
            "{} of {} patterns failed",
            run.verdicts.len() - run.pass_count(),
            run.verdicts.len()
        )))
    }
}

/// Ratios quoted for the original designs, kept for reference only.
pub fn reference_ratio(kind: GateKind) -> f64 {
    match kind {
        GateKind::AndNand => 6.0,
        GateKind::XorXnor => 13.0,
        GateKind::FullAdder => 7.0,
    }
}

pub fn compare(kinds: &[GateKind], bench: &Overrides, report: Option<&Path>) -> Result<(), CliError> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    println!(
        "{:<10} {:>14} {:>14} {:>8} {:>10}",
        "gate", "adiabatic J/op", "baseline J/op", "ratio", "reference"
    );
    for &kind in kinds {
        let tb = testbench(kind, bench, None)?;
        let (adiabatic, _) = verify_truth_table(kind, DesignStyle::AdiabaticMtj, &tb)?;
        let (baseline, _) = verify_truth_table(kind, DesignStyle::BaselineMtj, &tb)?;
        for run in [&adiabatic, &baseline] {
            if !run.passed() {
                failures.push(format!("{kind} {}", run.template.style));
            }
        }
        let row = compare_designs(
            kind.as_str(),
            adiabatic.per_op.logic_j_per_op,
            baseline.per_op.logic_j_per_op,
        )
        .map_err(|e| CliError::Logic(e.to_string()))?;
        println!(
            "{:<10} {:>14.4e} {:>14.4e} {:>8.2} {:>10}",
            row.gate,
            row.adiabatic_j_per_op,
            row.baseline_j_per_op,
            row.ratio,
            format!("{}x", reference_ratio(kind))
        );
        rows.push(output::CompareEntry::new(row, &adiabatic, &baseline, reference_ratio(kind)));
    }
    if let Some(path) = report {
        write_json(path, &CompareReport { rows })?;
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Logic(format!("truth table failed for {}", failures.join(", "))))
    }
}

pub fn sweep(
    kind: GateKind,
    style: DesignStyle,
    t_phases: &[f64],
    bench: &Overrides,
    report: Option<&Path>,
) -> Result<(), CliError> {
    if t_phases.len() < 2 {
        return Err(CliError::Usage("a sweep needs at least two t_phase values".into()));
    }
    let mut points = Vec::new();
    println!("{kind} {style}");
    println!("{:>12} {:>14} {:>14} {:>8}", "t_phase s", "logic J/op", "write J/op", "pass");
    for &t_phase in t_phases {
        let overrides = Overrides {
            t_phase: Some(t_phase),
            ..bench.clone()
        };
        let tb = testbench(kind, &overrides, None)?;
        let (run, _) = verify_truth_table(kind, style, &tb)?;
        println!(
            "{:>12.3e} {:>14.4e} {:>14.4e} {:>8}",
            t_phase,
            run.per_op.logic_j_per_op,
            run.per_op.write_j_per_op,
            format!("{}/{}", run.pass_count(), run.verdicts.len())
        );
        points.push(SweepPoint::new(t_phase, &run));
    }
    let summary = SweepReport::new(kind, style, points);
    println!("  {}", summary.summary);
    if let Some(path) = report {
        write_json(path, &summary)?;
    }
    if summary.trend_holds {
        Ok(())
    } else {
        Err(CliError::Logic(summary.summary.clone()))
    }
}
