//! Gate templates for the hybrid MTJ/CMOS AND/NAND, XOR/XNOR and full
//! adder, in an adiabatic power-clocked style and a precharge sense
//! amplifier baseline on a constant supply, plus truth-table oracles and
//! end-to-end verification.
//!
//! Input `b` is stored in the MTJs, which are rewritten by gated current
//! drivers during every wait phase; the remaining inputs drive select
//! transistors that connect each output rail to one MTJ path.
//!
//! In the adiabatic style each rail charges from the power clock through
//! its path, PMOS selects and a cross-coupled PMOS; the rail behind the
//! less resistive path rises first and the cross-coupled pair latches it.
//! In the baseline both rails are precharged to the supply and discharge
//! through their paths when enabled; the rail behind the less resistive
//! path falls first. The two styles therefore attach each path to opposite
//! rails.

mod build;
mod oracle;
mod run;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::devices::{MtjConfig, MtjParams, PowerClock};
use crate::engine::EngineError;
use crate::netlist::Netlist;

pub use build::build_gate;
pub use oracle::{full_adder_oracle, gate_oracle, FullAdderBits};
pub use run::{
    evaluate_run, logic_readout, simulate_template, verify_truth_table, CycleVerdict, GateRun,
    OperationEnergy, RailReading,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("{kind} takes {expected} inputs, pattern has {found}")]
    Arity {
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("invalid testbench: {0}")]
    InvalidTestbench(String),
    #[error("simulation failed during cycle {cycle}: {source}")]
    Simulation { cycle: usize, source: EngineError },
    #[error("energy audit failed: {0}")]
    Energy(#[from] crate::energy::EnergyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    #[serde(rename = "and")]
    AndNand,
    #[serde(rename = "xor")]
    XorXnor,
    FullAdder,
}

impl GateKind {
    pub const ALL: [GateKind; 3] = [GateKind::AndNand, GateKind::XorXnor, GateKind::FullAdder];

    pub fn as_str(self) -> &'static str {
        match self {
            GateKind::AndNand => "and",
            GateKind::XorXnor => "xor",
            GateKind::FullAdder => "fulladder",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::FullAdder => 3,
            _ => 2,
        }
    }

    pub fn input_names(self) -> &'static [&'static str] {
        match self {
            GateKind::FullAdder => &["a", "b", "c"],
            _ => &["a", "b"],
        }
    }

    /// Output node pairs, true rail first.
    pub fn output_pairs(self) -> &'static [(&'static str, &'static str)] {
        match self {
            GateKind::AndNand => &[("and", "nand")],
            GateKind::XorXnor => &[("xor", "xnor")],
            GateKind::FullAdder => &[("sum", "sumb"), ("cout", "coutb")],
        }
    }

    /// Every input combination in binary counting order, first input as the
    /// most significant bit.
    pub fn all_patterns(self) -> Vec<Vec<bool>> {
        let n = self.arity();
        (0..1usize << n)
            .map(|k| (0..n).map(|i| k >> (n - 1 - i) & 1 == 1).collect())
            .collect()
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "and" | "nand" | "andnand" => Ok(GateKind::AndNand),
            "xor" | "xnor" | "xorxnor" => Ok(GateKind::XorXnor),
            "fulladder" | "fa" | "full-adder" => Ok(GateKind::FullAdder),
            other => Err(format!("unknown gate kind `{other}` (expected and, xor or fulladder)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DesignStyle {
    #[serde(rename = "adiabatic")]
    AdiabaticMtj,
    #[serde(rename = "baseline")]
    BaselineMtj,
}

impl DesignStyle {
    pub fn as_str(self) -> &'static str {
        match self {
            DesignStyle::AdiabaticMtj => "adiabatic",
            DesignStyle::BaselineMtj => "baseline",
        }
    }
}

impl fmt::Display for DesignStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DesignStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "adiabatic" => Ok(DesignStyle::AdiabaticMtj),
            "baseline" => Ok(DesignStyle::BaselineMtj),
            other => Err(format!("unknown style `{other}` (expected adiabatic or baseline)")),
        }
    }
}

/// Stimulus and operating point for one gate simulation. Cycle `k` (1-based)
/// applies `patterns[k - 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestbenchSpec {
    pub patterns: Vec<Vec<bool>>,
    pub vdd: f64,
    pub t_phase: f64,
    pub c_load: f64,
    pub write_current: f64,
    pub dt: f64,
    pub mtj: MtjParams,
}

impl TestbenchSpec {
    /// One warm-up cycle repeating the first pattern, then every input
    /// combination once, at the default operating point (1 V, 10 ns
    /// phases, 1 fF loads, 80 uA writes, 10 ps steps).
    pub fn exhaustive(kind: GateKind) -> Self {
        let all = kind.all_patterns();
        let mut patterns = vec![all[0].clone()];
        patterns.extend(all);
        TestbenchSpec {
            patterns,
            vdd: 1.0,
            t_phase: 10e-9,
            c_load: 1e-15,
            write_current: 80e-6,
            dt: 10e-12,
            mtj: MtjParams::default(),
        }
    }

    pub fn with_t_phase(mut self, t_phase: f64) -> Self {
        self.t_phase = t_phase;
        self
    }

    pub fn clock(&self) -> PowerClock {
        PowerClock {
            vdd: self.vdd,
            t_phase: self.t_phase,
            t0: 0.0,
        }
    }

    pub fn n_cycles(&self) -> usize {
        self.patterns.len()
    }

    pub fn tstop(&self) -> f64 {
        self.n_cycles() as f64 * self.clock().period()
    }

    pub fn validate(&self, kind: GateKind) -> Result<(), CircuitError> {
        let bad = |m: &str| Err(CircuitError::InvalidTestbench(m.to_string()));
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if self.patterns.is_empty() {
            return bad("at least one pattern is required");
        }
        if let Some(p) = self.patterns.iter().find(|p| p.len() != kind.arity()) {
            return Err(CircuitError::Arity {
                kind,
                expected: kind.arity(),
                found: p.len(),
            });
        }
        if !pos(self.vdd) || !pos(self.t_phase) || !pos(self.c_load) || !pos(self.dt) {
            return bad("vdd, t_phase, c_load and dt must be positive");
        }
        if self.dt >= self.t_phase {
            return bad("dt must be smaller than t_phase");
        }
        if !(self.write_current.abs() > self.mtj.ic) {
            return bad("write current must exceed the MTJ critical current");
        }
        Ok(())
    }
}

/// One data MTJ of a template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MtjRole {
    /// Role name used in descriptions of the gate, `MTJ1` to `MTJ4`.
    pub role: String,
    pub element: String,
    pub initial: MtjConfig,
    /// Configuration written when the stored bit is 1.
    pub on_one: MtjConfig,
    /// Current source that programs this MTJ, if any.
    pub driver: Option<String>,
}

impl MtjRole {
    pub fn state_for(&self, bit: bool) -> MtjConfig {
        if bit {
            self.on_one
        } else {
            self.on_one.flipped()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateTemplate {
    pub kind: GateKind,
    pub style: DesignStyle,
    pub netlist: Netlist,
    /// Output node pairs, true rail first.
    pub outputs: Vec<(String, String)>,
    /// Voltage sources driving the input select transistors.
    pub input_drivers: Vec<String>,
    pub clock: PowerClock,
    pub mtj_roles: Vec<MtjRole>,
    pub c_load: f64,
    pub testbench: TestbenchSpec,
}

impl GateTemplate {
    pub fn rails(&self) -> Vec<&str> {
        self.outputs
            .iter()
            .flat_map(|(t, c)| [t.as_str(), c.as_str()])
            .collect()
    }

    pub fn write_drivers(&self) -> Vec<&str> {
        self.mtj_roles
            .iter()
            .filter_map(|r| r.driver.as_deref())
            .collect()
    }

    /// Removes the MTJ programming sources, leaving the stored states
    /// frozen at their initial values.
    pub fn without_write_drivers(mut self) -> Self {
        let drivers: Vec<String> = self.write_drivers().iter().map(|s| s.to_string()).collect();
        self.netlist
            .elements
            .retain(|e| !drivers.iter().any(|d| d.eq_ignore_ascii_case(&e.name)));
        for r in &mut self.mtj_roles {
            r.driver = None;
        }
        self
    }

    /// Overrides the state an MTJ starts from.
    pub fn with_initial_state(mut self, role: &str, state: MtjConfig) -> Self {
        if let Some(r) = self.mtj_roles.iter_mut().find(|r| r.role == role) {
            r.initial = state;
            if let Some(e) = self
                .netlist
                .elements
                .iter_mut()
                .find(|e| e.name.eq_ignore_ascii_case(&r.element))
            {
                if let crate::netlist::ElementKind::Mtj { initial_state, .. } = &mut e.kind {
                    *initial_state = state;
                }
            }
        }
        self
    }
}
