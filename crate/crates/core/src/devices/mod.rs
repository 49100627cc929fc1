//! Device equations: level-1 MOSFET, behavioral MTJ, capacitor companion
//! model and source waveforms.

mod capacitor;
mod mosfet;
mod mtj;
mod source;

pub use capacitor::{capacitor_companion, Companion, Integration};
pub use mosfet::{mosfet_ids, terminal_current, DrainCurrent, MosfetParams, Polarity, TerminalCurrent};
pub use mtj::{mtj_resistance, mtj_update, MtjConfig, MtjParams, MtjState};
pub use source::{discharge_signal, source_value, ClockPhase, PowerClock, Pulse, SourceSpec};
