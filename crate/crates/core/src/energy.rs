//! Energy bookkeeping over transient traces.
//!
//! Sources are split into energy supplied to the circuit and energy
//! recovered from it. Resistors, MTJs and MOSFET channels dissipate;
//! capacitors (including MOSFET gate capacitance) store. The balance
//! residual compares the net supply against dissipation plus storage.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::TransientResult;
use crate::netlist::{ElementKind, Netlist};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("window [{start:e}, {end:e}] s does not match recorded points")]
    WindowOutsideTrace { start: f64, end: f64 },
    #[error("trace and netlist disagree: {0}")]
    Mismatch(String),
    #[error("window spans {cycles} clock periods, expected a whole number of at least 1")]
    NonIntegerCycles { cycles: f64 },
    #[error("adiabatic energy per operation is not positive ({0:e} J)")]
    DegenerateComparison(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementRole {
    Source,
    Resistive,
    Storage,
    Transistor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementEnergy {
    pub name: String,
    pub role: ElementRole,
    /// Energy delivered into the circuit by a source.
    pub supplied: f64,
    /// Energy pushed back into a source.
    pub recovered: f64,
    pub dissipated: f64,
    pub stored_delta: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyTotals {
    pub supplied: f64,
    pub recovered: f64,
    pub dissipated: f64,
    pub stored_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub window: (f64, f64),
    pub elements: Vec<ElementEnergy>,
    pub totals: EnergyTotals,
    /// `supplied - recovered - dissipated - stored_delta`.
    pub energy_balance_residual: f64,
}

impl EnergyReport {
    pub fn element(&self, name: &str) -> Option<&ElementEnergy> {
        self.elements.iter().find(|e| e.name.eq_ignore_ascii_case(name))
    }

    /// Net energy drawn from the sources selected by `keep`.
    pub fn net_supplied_by(&self, keep: impl Fn(&ElementEnergy) -> bool) -> f64 {
        self.elements
            .iter()
            .filter(|e| e.role == ElementRole::Source && keep(e))
            .map(|e| e.supplied - e.recovered)
            .sum()
    }

    pub fn net_supplied(&self) -> f64 {
        self.totals.supplied - self.totals.recovered
    }

    /// Residual relative to the gross supplied energy.
    pub fn relative_residual(&self) -> f64 {
        if self.totals.supplied == 0.0 {
            0.0
        } else {
            self.energy_balance_residual.abs() / self.totals.supplied
        }
    }
}

/// Trapezoidal integral of `p` split into its positive and negative parts.
/// A segment that changes sign is cut at the linear zero crossing.
pub fn split_integral(times: &[f64], p: &[f64]) -> (f64, f64) {
    let (mut pos, mut neg) = (0.0, 0.0);
    for k in 1..times.len() {
        let h = times[k] - times[k - 1];
        let (a, b) = (p[k - 1], p[k]);
        if a >= 0.0 && b >= 0.0 {
            pos += 0.5 * h * (a + b);
        } else if a <= 0.0 && b <= 0.0 {
            neg -= 0.5 * h * (a + b);
        } else {
            let tz = h * a.abs() / (a.abs() + b.abs());
            let (first, second) = (0.5 * tz * a, 0.5 * (h - tz) * b);
            if a > 0.0 {
                pos += first;
                neg -= second;
            } else {
                neg -= first;
                pos += second;
            }
        }
    }
    (pos, neg)
}

fn trapezoid(times: &[f64], p: &[f64]) -> f64 {
    (1..times.len())
        .map(|k| 0.5 * (times[k] - times[k - 1]) * (p[k] + p[k - 1]))
        .sum()
}

fn locate(result: &TransientResult, t: f64) -> Option<usize> {
    let span = result.times.last().copied().unwrap_or(0.0).abs();
    result.index_at(t, 1e-18 + 1e-9 * span)
}

/// Integrates every element's power over `window`, whose ends must be
/// recorded time points.
pub fn integrate_energy(
    result: &TransientResult,
    netlist: &Netlist,
    window: (f64, f64),
) -> Result<EnergyReport, EnergyError> {
    let outside = || EnergyError::WindowOutsideTrace {
        start: window.0,
        end: window.1,
    };
    if !(window.1 >= window.0) {
        return Err(outside());
    }
    let i0 = locate(result, window.0).ok_or_else(outside)?;
    let i1 = locate(result, window.1).ok_or_else(outside)?;
    if result.element_names.len() != netlist.elements.len() {
        return Err(EnergyError::Mismatch(format!(
            "{} traced elements, {} in netlist",
            result.element_names.len(),
            netlist.elements.len()
        )));
    }
    let times = &result.times[i0..=i1];
    let v = |node: &str, k: usize| -> f64 {
        result.voltage(node).map_or(0.0, |tr| tr[k])
    };
    let half_cv2 = |c: f64, a: &str, b: &str| {
        let (vs, ve) = (v(a, i0) - v(b, i0), v(a, i1) - v(b, i1));
        0.5 * c * (ve * ve - vs * vs)
    };

    let mut elements = Vec::with_capacity(netlist.elements.len());
    let mut totals = EnergyTotals::default();
    for (k, e) in netlist.elements.iter().enumerate() {
        if !result.element_names[k].eq_ignore_ascii_case(&e.name) {
            return Err(EnergyError::Mismatch(format!(
                "trace element {} is `{}`, netlist has `{}`",
                k, result.element_names[k], e.name
            )));
        }
        let power = &result.element_power_trace[k][i0..=i1];
        let heat = &result.element_dissipation_trace[k][i0..=i1];
        let mut entry = ElementEnergy {
            name: e.name.clone(),
            role: ElementRole::Resistive,
            supplied: 0.0,
            recovered: 0.0,
            dissipated: 0.0,
            stored_delta: 0.0,
        };
        match &e.kind {
            ElementKind::VSource { .. } | ElementKind::ISource { .. } => {
                let (absorbed, delivered) = split_integral(times, power);
                entry.role = ElementRole::Source;
                entry.supplied = delivered;
                entry.recovered = absorbed;
            }
            ElementKind::Resistor { .. } | ElementKind::Mtj { .. } => {
                entry.dissipated = trapezoid(times, heat);
            }
            ElementKind::Capacitor { n1, n2, farads, .. } => {
                entry.role = ElementRole::Storage;
                entry.stored_delta = half_cv2(*farads, n1, n2);
            }
            ElementKind::Mosfet { g, s, params, .. } => {
                entry.role = ElementRole::Transistor;
                entry.dissipated = trapezoid(times, heat);
                entry.stored_delta = half_cv2(params.cg, g, s);
            }
        }
        totals.supplied += entry.supplied;
        totals.recovered += entry.recovered;
        totals.dissipated += entry.dissipated;
        totals.stored_delta += entry.stored_delta;
        elements.push(entry);
    }
    Ok(EnergyReport {
        window: (result.times[i0], result.times[i1]),
        elements,
        totals,
        energy_balance_residual: totals.supplied
            - totals.recovered
            - totals.dissipated
            - totals.stored_delta,
    })
}

/// Net energy drawn from all sources per clock period of the window.
pub fn energy_per_operation(report: &EnergyReport, n_cycles: usize, period: f64) -> Result<f64, EnergyError> {
    let cycles = (report.window.1 - report.window.0) / period;
    if n_cycles == 0 || (cycles - n_cycles as f64).abs() > 1e-6 * cycles.max(1.0) {
        return Err(EnergyError::NonIntegerCycles { cycles });
    }
    Ok(report.net_supplied() / n_cycles as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub gate: String,
    pub adiabatic_j_per_op: f64,
    pub baseline_j_per_op: f64,
    /// Baseline over adiabatic energy per operation.
    pub ratio: f64,
}

pub fn compare_designs(
    gate: &str,
    adiabatic_j_per_op: f64,
    baseline_j_per_op: f64,
) -> Result<ComparisonRow, EnergyError> {
    if !(adiabatic_j_per_op > 0.0) {
        return Err(EnergyError::DegenerateComparison(adiabatic_j_per_op));
    }
    Ok(ComparisonRow {
        gate: gate.to_string(),
        adiabatic_j_per_op,
        baseline_j_per_op,
        ratio: baseline_j_per_op / adiabatic_j_per_op,
    })
}
