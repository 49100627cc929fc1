//! Transient simulation of hybrid MTJ/CMOS logic driven by a four-phase
//! power clock, with per-element energy bookkeeping.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuits;
pub mod devices;
pub mod energy;
pub mod engine;
pub mod netlist;

pub use circuits::{build_gate, verify_truth_table, DesignStyle, GateKind, GateTemplate, TestbenchSpec};
pub use devices::{MosfetParams, MtjConfig, MtjParams, Polarity, PowerClock, SourceSpec};
pub use energy::{compare_designs, energy_per_operation, integrate_energy, ComparisonRow, EnergyReport};
pub use engine::{transient_run, EngineError, TransientConfig, TransientResult};
pub use netlist::{parse_netlist, serialize_netlist, Netlist, NetlistError};
