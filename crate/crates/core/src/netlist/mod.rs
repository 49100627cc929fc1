//! Circuit data model and a small SPICE-like netlist dialect.
//!
//! ```text
//! .title <text>
//! R<name> n1 n2 <ohms>
//! C<name> n1 n2 <farads> [IC=<volts>]
//! V<name> n+ n- DC <v> | <v> | PWL(t1 v1 ...) | PULSE(v1 v2 td tr tf pw per) | PCLK(vdd t_phase t0)
//! I<name> n+ n- <same specs, amps>
//! M<name> d g s N|P [VT=] [KP=] [W=] [L=] [LAMBDA=] [CG=]
//! J<name> nf np [RP=] [TMR=] [IC=] [TSW=] [STATE=P|AP]
//! .tran <dt> <tstop>
//! .record n1 v(n2) i(V1) ...
//! * comment
//! ```
//!
//! Everything is case-insensitive. Node names are folded to lower case;
//! element names keep their spelling but must be unique ignoring case.
//! Values accept the suffixes f p n u m k meg g.

mod parse;
mod serialize;
mod units;
mod validate;

use serde::{Deserialize, Serialize};

use crate::devices::{MosfetParams, MtjConfig, MtjParams, Polarity, SourceSpec};

pub use parse::{parse_netlist, NetlistError};
pub use serialize::serialize_netlist;
pub use units::{format_value, parse_value};
pub use validate::{validate_netlist, Diagnostic};

pub const GROUND: &str = "0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Netlist {
    pub title: String,
    /// Node names in first-appearance order; `nodes[0]` is ground.
    pub nodes: Vec<String>,
    pub elements: Vec<Element>,
    pub directives: SimDirectives,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub name: String,
    pub kind: ElementKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ElementKind {
    Resistor {
        n1: String,
        n2: String,
        ohms: f64,
    },
    Capacitor {
        n1: String,
        n2: String,
        farads: f64,
        initial_volts: Option<f64>,
    },
    VSource {
        np: String,
        nn: String,
        spec: SourceSpec,
    },
    /// Current flows from `np` through the source into `nn`.
    ISource {
        np: String,
        nn: String,
        spec: SourceSpec,
    },
    Mosfet {
        d: String,
        g: String,
        s: String,
        polarity: Polarity,
        params: MosfetParams,
    },
    Mtj {
        n_free: String,
        n_pinned: String,
        params: MtjParams,
        initial_state: MtjConfig,
    },
}

impl ElementKind {
    pub fn terminals(&self) -> Vec<&str> {
        match self {
            ElementKind::Resistor { n1, n2, .. } | ElementKind::Capacitor { n1, n2, .. } => {
                vec![n1, n2]
            }
            ElementKind::VSource { np, nn, .. } | ElementKind::ISource { np, nn, .. } => {
                vec![np, nn]
            }
            ElementKind::Mosfet { d, g, s, .. } => vec![d, g, s],
            ElementKind::Mtj {
                n_free, n_pinned, ..
            } => vec![n_free, n_pinned],
        }
    }

    fn terminals_mut(&mut self) -> Vec<&mut String> {
        match self {
            ElementKind::Resistor { n1, n2, .. } | ElementKind::Capacitor { n1, n2, .. } => {
                vec![n1, n2]
            }
            ElementKind::VSource { np, nn, .. } | ElementKind::ISource { np, nn, .. } => {
                vec![np, nn]
            }
            ElementKind::Mosfet { d, g, s, .. } => vec![d, g, s],
            ElementKind::Mtj {
                n_free, n_pinned, ..
            } => vec![n_free, n_pinned],
        }
    }

    /// The leading letter of an element of this kind.
    pub fn letter(&self) -> char {
        match self {
            ElementKind::Resistor { .. } => 'R',
            ElementKind::Capacitor { .. } => 'C',
            ElementKind::VSource { .. } => 'V',
            ElementKind::ISource { .. } => 'I',
            ElementKind::Mosfet { .. } => 'M',
            ElementKind::Mtj { .. } => 'J',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tran {
    pub dt: f64,
    pub tstop: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Probe {
    /// Node voltage, `v(node)`.
    Voltage(String),
    /// Voltage-source branch current, `i(Vname)`.
    Current(String),
}

impl Probe {
    pub fn label(&self) -> String {
        match self {
            Probe::Voltage(n) => format!("v({n})"),
            Probe::Current(s) => format!("i({s})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimDirectives {
    pub tran: Option<Tran>,
    pub record: Vec<Probe>,
}

impl Default for Netlist {
    fn default() -> Self {
        Netlist::new("")
    }
}

impl Netlist {
    pub fn new(title: impl Into<String>) -> Self {
        Netlist {
            title: title.into(),
            nodes: vec![GROUND.to_string()],
            elements: Vec::new(),
            directives: SimDirectives::default(),
        }
    }

    /// Appends an element, folding its node names to lower case and
    /// registering unseen nodes in order.
    pub fn add(&mut self, name: impl Into<String>, mut kind: ElementKind) -> &mut Self {
        for node in kind.terminals_mut() {
            *node = node.to_ascii_lowercase();
            if !self.nodes.iter().any(|n| n == node) {
                self.nodes.push(node.clone());
            }
        }
        self.elements.push(Element {
            name: name.into(),
            kind,
        });
        self
    }

    pub fn resistor(&mut self, name: &str, n1: &str, n2: &str, ohms: f64) -> &mut Self {
        self.add(
            name,
            ElementKind::Resistor {
                n1: n1.into(),
                n2: n2.into(),
                ohms,
            },
        )
    }

    pub fn capacitor(&mut self, name: &str, n1: &str, n2: &str, farads: f64) -> &mut Self {
        self.add(
            name,
            ElementKind::Capacitor {
                n1: n1.into(),
                n2: n2.into(),
                farads,
                initial_volts: None,
            },
        )
    }

    /// Capacitor held at `volts` in the operating point at `t = 0`.
    pub fn capacitor_ic(&mut self, name: &str, n1: &str, n2: &str, farads: f64, volts: f64) -> &mut Self {
        self.add(
            name,
            ElementKind::Capacitor {
                n1: n1.into(),
                n2: n2.into(),
                farads,
                initial_volts: Some(volts),
            },
        )
    }

    pub fn vsource(&mut self, name: &str, np: &str, nn: &str, spec: SourceSpec) -> &mut Self {
        self.add(
            name,
            ElementKind::VSource {
                np: np.into(),
                nn: nn.into(),
                spec,
            },
        )
    }

    pub fn isource(&mut self, name: &str, np: &str, nn: &str, spec: SourceSpec) -> &mut Self {
        self.add(
            name,
            ElementKind::ISource {
                np: np.into(),
                nn: nn.into(),
                spec,
            },
        )
    }

    pub fn mosfet(&mut self, name: &str, d: &str, g: &str, s: &str, polarity: Polarity) -> &mut Self {
        self.add(
            name,
            ElementKind::Mosfet {
                d: d.into(),
                g: g.into(),
                s: s.into(),
                polarity,
                params: MosfetParams::default_for(polarity),
            },
        )
    }

    pub fn mtj(
        &mut self,
        name: &str,
        n_free: &str,
        n_pinned: &str,
        params: MtjParams,
        initial_state: MtjConfig,
    ) -> &mut Self {
        self.add(
            name,
            ElementKind::Mtj {
                n_free: n_free.into(),
                n_pinned: n_pinned.into(),
                params,
                initial_state,
            },
        )
    }

    pub fn tran(&mut self, dt: f64, tstop: f64) -> &mut Self {
        self.directives.tran = Some(Tran { dt, tstop });
        self
    }

    pub fn record(&mut self, probe: Probe) -> &mut Self {
        self.directives.record.push(probe);
        self
    }

    pub fn element(&self, name: &str) -> Option<&Element> {
        self.elements
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(name))
    }

    pub fn count(&self, letter: char) -> usize {
        self.elements
            .iter()
            .filter(|e| e.kind.letter() == letter)
            .count()
    }
}
