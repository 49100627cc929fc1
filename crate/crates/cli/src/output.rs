use std::fmt::Write;

use mtjsim::circuits::{CycleVerdict, GateRun, OperationEnergy};
use mtjsim::netlist::Probe;
use mtjsim::{ComparisonRow, DesignStyle, EnergyReport, GateKind, Netlist, TransientResult};
use serde::Serialize;

/// Relative slack allowed when checking that adiabatic energy does not grow
/// with slower clocks.
pub const SWEEP_NOISE: f64 = 0.05;
/// Band around the mean within which baseline energy counts as flat.
pub const BASELINE_BAND: f64 = 0.10;

fn default_probes(result: &TransientResult) -> Vec<Probe> {
    let nodes = result.node_names.iter().map(|n| Probe::Voltage(n.clone()));
    let sources = result.vsource_names.iter().map(|s| Probe::Current(s.clone()));
    nodes.chain(sources).collect()
}

/// CSV with a `time` column followed by the netlist's `.record` probes (all
/// node voltages and source currents when there are none). Numbers use the
/// shortest exact scientific form, so equal runs give equal bytes.
pub fn waveform_csv(result: &TransientResult, netlist: &Netlist) -> String {
    let probes = if netlist.directives.record.is_empty() {
        default_probes(result)
    } else {
        netlist.directives.record.clone()
    };
    let zeros = vec![0.0; result.len()];
    let columns: Vec<&[f64]> = probes
        .iter()
        .map(|p| match p {
            Probe::Voltage(n) => result.voltage(n).unwrap_or(&zeros),
            Probe::Current(s) => result.source_current(s).unwrap_or(&zeros),
        })
        .collect();

    let mut out = String::from("time");
    for p in &probes {
        out.push(',');
        out.push_str(&p.label());
    }
    out.push('\n');
    for (k, t) in result.times.iter().enumerate() {
        let _ = write!(out, "{t:e}");
        for c in &columns {
            let _ = write!(out, ",{:e}", c[k]);
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
pub struct GateReport<'a> {
    pub kind: GateKind,
    pub style: DesignStyle,
    pub vdd: f64,
    pub t_phase: f64,
    pub c_load: f64,
    pub dt: f64,
    pub passed: bool,
    pub verdicts: &'a [CycleVerdict],
    pub energy_per_op: OperationEnergy,
    pub energy: &'a EnergyReport,
    pub relative_residual: f64,
}

impl<'a> GateReport<'a> {
    pub fn new(run: &'a GateRun) -> Self {
        let tb = &run.template.testbench;
        GateReport {
            kind: run.template.kind,
            style: run.template.style,
            vdd: tb.vdd,
            t_phase: tb.t_phase,
            c_load: tb.c_load,
            dt: tb.dt,
            passed: run.passed(),
            verdicts: &run.verdicts,
            energy_per_op: run.per_op,
            energy: &run.energy,
            relative_residual: run.energy.relative_residual(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CompareEntry {
    #[serde(flatten)]
    pub row: ComparisonRow,
    pub adiabatic: OperationEnergy,
    pub baseline: OperationEnergy,
    pub adiabatic_passed: bool,
    pub baseline_passed: bool,
    /// Ratio reported for the original designs.
    pub reference_ratio: f64,
}

impl CompareEntry {
    pub fn new(row: ComparisonRow, adiabatic: &GateRun, baseline: &GateRun, reference_ratio: f64) -> Self {
        CompareEntry {
            row,
            adiabatic: adiabatic.per_op,
            baseline: baseline.per_op,
            adiabatic_passed: adiabatic.passed(),
            baseline_passed: baseline.passed(),
            reference_ratio,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub rows: Vec<CompareEntry>,
}

#[derive(Debug, Serialize)]
pub struct SweepPoint {
    pub t_phase: f64,
    pub energy_per_op: OperationEnergy,
    pub passed: usize,
    pub patterns: usize,
}

impl SweepPoint {
    pub fn new(t_phase: f64, run: &GateRun) -> Self {
        SweepPoint {
            t_phase,
            energy_per_op: run.per_op,
            passed: run.pass_count(),
            patterns: run.verdicts.len(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub kind: GateKind,
    pub style: DesignStyle,
    pub points: Vec<SweepPoint>,
    /// Adiabatic: energy never rises by more than the noise slack as the
    /// phase lengthens. Baseline: every point within the band of the mean.
    pub trend_holds: bool,
    pub summary: String,
}

impl SweepReport {
    pub fn new(kind: GateKind, style: DesignStyle, points: Vec<SweepPoint>) -> Self {
        let mut order: Vec<(f64, f64)> = points
            .iter()
            .map(|p| (p.t_phase, p.energy_per_op.logic_j_per_op))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (trend_holds, summary) = match style {
            DesignStyle::AdiabaticMtj => {
                let worst = order
                    .windows(2)
                    .map(|w| w[1].1 / w[0].1 - 1.0)
                    .fold(f64::NEG_INFINITY, f64::max);
                let ok = worst <= SWEEP_NOISE;
                let verdict = if ok { "non-increasing" } else { "NOT non-increasing" };
                (
                    ok,
                    format!("energy/op {verdict} in t_phase (largest step-up {:+.2}%)", 100.0 * worst),
                )
            }
            DesignStyle::BaselineMtj => {
                let mean = order.iter().map(|p| p.1).sum::<f64>() / order.len() as f64;
                let spread = order
                    .iter()
                    .map(|p| (p.1 / mean - 1.0).abs())
                    .fold(0.0, f64::max);
                let ok = spread <= BASELINE_BAND;
                let verdict = if ok { "flat" } else { "NOT flat" };
                (
                    ok,
                    format!("energy/op {verdict} in t_phase (largest deviation {:.2}% from mean)", 100.0 * spread),
                )
            }
        };
        SweepReport {
            kind,
            style,
            points,
            trend_holds,
            summary,
        }
    }
}
