use serde::{Deserialize, Serialize};

use super::{gate_oracle, CircuitError, DesignStyle, GateKind, GateTemplate, TestbenchSpec};
use crate::devices::{ClockPhase, MtjConfig};
use crate::energy::{integrate_energy, EnergyReport};
use crate::engine::{transient_run, EngineError, TransientConfig, TransientResult};

/// One output rail sampled at the middle of a hold phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RailReading {
    pub node: String,
    pub volts: f64,
    /// `None` when the voltage lies between the logic thresholds.
    pub level: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleVerdict {
    pub cycle: usize,
    pub pattern: Vec<bool>,
    pub expected: Vec<bool>,
    pub readings: Vec<RailReading>,
    pub pass: bool,
    /// MTJ configurations at the end of the cycle's wait phase.
    pub mtj_after_wait: Vec<MtjConfig>,
    /// Configurations implied by the cycle's stored bit.
    pub mtj_expected: Vec<MtjConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperationEnergy {
    pub n_cycles: usize,
    pub period: f64,
    /// Net energy per operation from every source except the MTJ write
    /// drivers.
    pub logic_j_per_op: f64,
    pub write_j_per_op: f64,
    pub total_j_per_op: f64,
    /// `logic_j_per_op / period`.
    pub logic_power_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRun {
    pub template: GateTemplate,
    pub verdicts: Vec<CycleVerdict>,
    pub energy: EnergyReport,
    pub per_op: OperationEnergy,
}

impl GateRun {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn pass_count(&self) -> usize {
        self.verdicts.iter().filter(|v| v.pass).count()
    }
}

/// Samples every output rail at the midpoint of the hold phase of `cycle`
/// (1-based). At least 0.9 vdd reads as 1, at most 0.1 vdd as 0.
pub fn logic_readout(result: &TransientResult, template: &GateTemplate, cycle: usize) -> Vec<RailReading> {
    let clock = &template.clock;
    let t = clock.phase_start(cycle, ClockPhase::Hold) + 0.5 * clock.t_phase;
    template
        .rails()
        .into_iter()
        .map(|node| {
            let volts = result.voltage_at(node, t).unwrap_or(f64::NAN);
            let level = if volts >= 0.9 * clock.vdd {
                Some(true)
            } else if volts <= 0.1 * clock.vdd {
                Some(false)
            } else {
                None
            };
            RailReading {
                node: node.to_string(),
                volts,
                level,
            }
        })
        .collect()
}

/// Runs the template's own `.tran` setup.
pub fn simulate_template(template: &GateTemplate) -> Result<TransientResult, CircuitError> {
    let cfg = TransientConfig::from_netlist(&template.netlist).map_err(|source| CircuitError::Simulation {
        cycle: 1,
        source,
    })?;
    transient_run(&template.netlist, &cfg).map_err(|source| {
        let cycle = match source {
            EngineError::NonConvergence { time } => (time / template.clock.period()).floor() as usize + 1,
            _ => 1,
        };
        CircuitError::Simulation { cycle, source }
    })
}

/// Checks every cycle after the first against the oracle and audits energy
/// over the same cycles.
pub fn evaluate_run(template: &GateTemplate, result: &TransientResult) -> Result<GateRun, CircuitError> {
    let tb = &template.testbench;
    let clock = &template.clock;
    let n = tb.n_cycles();
    let first = if n > 1 { 2 } else { 1 };
    let tol = 1e-18 + 1e-9 * tb.tstop();

    let mut verdicts = Vec::new();
    for cycle in first..=n {
        let pattern = tb.patterns[cycle - 1].clone();
        let expected = gate_oracle(template.kind, &pattern)?;
        let readings = logic_readout(result, template, cycle);
        let pass = readings
            .iter()
            .zip(&expected)
            .all(|(r, &want)| r.level == Some(want));
        let end_of_wait = clock.phase_start(cycle, ClockPhase::Evaluate);
        let mtj_after_wait = match result.index_at(end_of_wait, tol) {
            Some(k) => template
                .mtj_roles
                .iter()
                .map(|r| result.mtj_states(&r.element).map_or(r.initial, |s| s[k]))
                .collect(),
            None => Vec::new(),
        };
        let mtj_expected = template.mtj_roles.iter().map(|r| r.state_for(pattern[1])).collect();
        verdicts.push(CycleVerdict {
            cycle,
            pattern,
            expected,
            readings,
            pass,
            mtj_after_wait,
            mtj_expected,
        });
    }

    let window = (clock.phase_start(first, ClockPhase::Wait), tb.tstop());
    let energy = integrate_energy(result, &template.netlist, window)?;
    let cycles = n + 1 - first;
    let drivers = template.write_drivers();
    let is_driver = |name: &str| drivers.iter().any(|d| d.eq_ignore_ascii_case(name));
    let logic = energy.net_supplied_by(|e| !is_driver(&e.name)) / cycles as f64;
    let write = energy.net_supplied_by(|e| is_driver(&e.name)) / cycles as f64;
    let per_op = OperationEnergy {
        n_cycles: cycles,
        period: clock.period(),
        logic_j_per_op: logic,
        write_j_per_op: write,
        total_j_per_op: logic + write,
        logic_power_w: logic / clock.period(),
    };
    Ok(GateRun {
        template: template.clone(),
        verdicts,
        energy,
        per_op,
    })
}

/// Builds, simulates and checks `kind` in `style` under `tb`.
pub fn verify_truth_table(
    kind: GateKind,
    style: DesignStyle,
    tb: &TestbenchSpec,
) -> Result<(GateRun, TransientResult), CircuitError> {
    let template = super::build_gate(kind, style, tb)?;
    let result = simulate_template(&template)?;
    let run = evaluate_run(&template, &result)?;
    Ok((run, result))
}
