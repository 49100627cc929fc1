//! Modified nodal analysis, Newton-Raphson and the fixed-step transient loop.
//!
//! Unknowns are ordered as node voltages (ground excluded, netlist node
//! order) followed by one branch current per voltage source. Voltage-source
//! currents follow the SPICE convention: positive current flows into the
//! `+` terminal, so a source delivering power reports a negative current.

mod lu;
mod mna;
mod transient;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::devices::{Integration, MtjConfig};
use crate::netlist::Netlist;

pub use lu::{solve_linear, LinearSystem, PIVOT_FLOOR};
pub use mna::{CapState, StepKind};
pub use transient::{transient_run, NewtonOutcome, Simulator};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("singular matrix (no usable pivot in column {column})")]
    SingularMatrix { column: usize },
    #[error("Newton iteration did not converge at t = {time:e} s")]
    NonConvergence { time: f64 },
    #[error("netlist has no .tran directive and no timestep was given")]
    MissingTran,
    #[error("invalid transient configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransientConfig {
    pub dt: f64,
    pub tstop: f64,
    pub newton_abstol: f64,
    /// Absolute tolerance applied to branch-current unknowns.
    pub newton_abstol_current: f64,
    pub newton_reltol: f64,
    pub newton_itmax: usize,
    pub max_dt_halvings: u32,
    /// Method for regular steps. The first step, and the first step after a
    /// rejected one, always use backward Euler.
    pub integration: Integration,
    pub gmin: f64,
}

impl TransientConfig {
    pub fn new(dt: f64, tstop: f64) -> Self {
        TransientConfig {
            dt,
            tstop,
            newton_abstol: 1e-6,
            newton_abstol_current: 1e-9,
            newton_reltol: 1e-3,
            newton_itmax: 100,
            max_dt_halvings: 10,
            integration: Integration::Trapezoidal,
            gmin: 1e-12,
        }
    }

    pub fn from_netlist(n: &Netlist) -> Result<Self, EngineError> {
        let tran = n.directives.tran.ok_or(EngineError::MissingTran)?;
        Ok(Self::new(tran.dt, tran.tstop))
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !pos(self.tstop) || !pos(self.dt) || self.dt > self.tstop {
            return Err(EngineError::InvalidConfig("need 0 < dt <= tstop".into()));
        }
        if !pos(self.newton_abstol) || !pos(self.newton_abstol_current) || !pos(self.newton_reltol) {
            return Err(EngineError::InvalidConfig("tolerances must be positive".into()));
        }
        if self.newton_itmax < 1 {
            return Err(EngineError::InvalidConfig("newton_itmax must be at least 1".into()));
        }
        if !(self.gmin >= 0.0) {
            return Err(EngineError::InvalidConfig("gmin must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub newton_iterations: usize,
}

/// Waveforms of one transient run. Every series is indexed like `times`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransientResult {
    pub times: Vec<f64>,
    /// Non-ground node names, in unknown order.
    pub node_names: Vec<String>,
    pub node_voltages: Vec<Vec<f64>>,
    pub vsource_names: Vec<String>,
    pub vsource_currents: Vec<Vec<f64>>,
    pub mtj_names: Vec<String>,
    pub mtj_state_trace: Vec<Vec<MtjConfig>>,
    /// One entry per netlist element, in netlist order.
    pub element_names: Vec<String>,
    /// Power absorbed by each element (negative when it delivers power).
    pub element_power_trace: Vec<Vec<f64>>,
    /// Power turned into heat by resistors, MTJs and MOSFET channels. Zero for
    /// sources and capacitors.
    pub element_dissipation_trace: Vec<Vec<f64>>,
    /// Largest nodal current imbalance of the nonlinear equations.
    pub kcl_residual: Vec<f64>,
    /// Largest element current magnitude at each point.
    pub max_branch_current: Vec<f64>,
    pub stats: RunStats,
}

impl TransientResult {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn voltage(&self, node: &str) -> Option<&[f64]> {
        if node == crate::netlist::GROUND {
            return None;
        }
        let node = node.to_ascii_lowercase();
        self.node_names
            .iter()
            .position(|n| *n == node)
            .map(|k| self.node_voltages[k].as_slice())
    }

    pub fn source_current(&self, source: &str) -> Option<&[f64]> {
        self.vsource_names
            .iter()
            .position(|n| n.eq_ignore_ascii_case(source))
            .map(|k| self.vsource_currents[k].as_slice())
    }

    pub fn mtj_states(&self, name: &str) -> Option<&[MtjConfig]> {
        self.mtj_names
            .iter()
            .position(|n| n.eq_ignore_ascii_case(name))
            .map(|k| self.mtj_state_trace[k].as_slice())
    }

    /// Index of the stored point at `t`, if one exists within `tol` seconds.
    pub fn index_at(&self, t: f64, tol: f64) -> Option<usize> {
        let k = self.times.partition_point(|&x| x < t);
        [k.checked_sub(1), Some(k)]
            .into_iter()
            .flatten()
            .filter(|&i| i < self.times.len())
            .min_by(|&a, &b| {
                (self.times[a] - t)
                    .abs()
                    .total_cmp(&(self.times[b] - t).abs())
            })
            .filter(|&i| (self.times[i] - t).abs() <= tol)
    }

    /// Linear interpolation of a node voltage; ground reads 0.
    pub fn voltage_at(&self, node: &str, t: f64) -> Option<f64> {
        if node == crate::netlist::GROUND {
            return Some(0.0);
        }
        let v = self.voltage(node)?;
        Some(interpolate(&self.times, v, t))
    }
}

pub(crate) fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    if times.is_empty() {
        return f64::NAN;
    }
    if t <= times[0] {
        return values[0];
    }
    let last = times.len() - 1;
    if t >= times[last] {
        return values[last];
    }
    let k = times.partition_point(|&x| x <= t);
    let (t0, t1) = (times[k - 1], times[k]);
    values[k - 1] + (values[k] - values[k - 1]) * (t - t0) / (t1 - t0)
}
