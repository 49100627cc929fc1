use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ElementKind, Netlist, Probe, GROUND};
use crate::devices::SourceSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    /// Offending element, if the problem is tied to one.
    pub element: Option<String>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.element {
            Some(e) => write!(f, "{e}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

fn check_source(spec: &SourceSpec, out: &mut Vec<String>) {
    match spec {
        SourceSpec::Dc(v) => {
            if !v.is_finite() {
                out.push("non-finite DC value".into());
            }
        }
        SourceSpec::Pwl(points) => {
            if points.is_empty() {
                out.push("PWL needs at least one breakpoint".into());
            }
            if points.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
                out.push("non-finite PWL breakpoint".into());
            }
            if points.windows(2).any(|w| w[1].0 <= w[0].0) {
                out.push("PWL breakpoints must be strictly increasing in time".into());
            }
        }
        SourceSpec::Pulse(p) => {
            if [p.delay, p.rise, p.fall, p.width, p.period]
                .iter()
                .any(|v| !v.is_finite() || *v < 0.0)
            {
                out.push("PULSE timing values must be non-negative".into());
            }
        }
        SourceSpec::PowerClock(c) => {
            if !positive(c.vdd) {
                out.push("power clock vdd must be positive".into());
            }
            if !positive(c.t_phase) {
                out.push("power clock phase time must be positive".into());
            }
            if !c.t0.is_finite() {
                out.push("power clock t0 must be finite".into());
            }
        }
    }
}

/// Checks every netlist and element invariant. An empty result means the
/// netlist is valid.
pub fn validate_netlist(n: &Netlist) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut global = |message: String| {
        diags.push(Diagnostic {
            element: None,
            message,
        })
    };

    if n.nodes.first().map(String::as_str) != Some(GROUND) {
        global("no ground node".into());
    } else if !n.elements.is_empty()
        && !n
            .elements
            .iter()
            .any(|e| e.kind.terminals().contains(&GROUND))
    {
        global("no element is connected to the ground node".into());
    }
    if let Some(tran) = n.directives.tran {
        if !positive(tran.tstop) {
            global(".tran stop time must be positive".into());
        } else if !positive(tran.dt) || tran.dt >= tran.tstop {
            global(".tran timestep must satisfy 0 < dt < tstop".into());
        }
    }

    let nodes: HashSet<&str> = n.nodes.iter().map(String::as_str).collect();
    let mut names = HashSet::new();
    for e in &n.elements {
        let mut problems = Vec::new();
        if !names.insert(e.name.to_ascii_lowercase()) {
            problems.push("duplicate element name".to_string());
        }
        if !e
            .name
            .chars()
            .next()
            .is_some_and(|c| c.to_ascii_uppercase() == e.kind.letter())
        {
            problems.push(format!("name must start with `{}`", e.kind.letter()));
        }
        for t in e.kind.terminals() {
            if !nodes.contains(t) {
                problems.push(format!("terminal `{t}` is not a declared node"));
            }
        }
        match &e.kind {
            ElementKind::Resistor { ohms, .. } => {
                if !positive(*ohms) {
                    problems.push("resistance must be positive".into());
                }
            }
            ElementKind::Capacitor {
                farads,
                initial_volts,
                ..
            } => {
                if !positive(*farads) {
                    problems.push("capacitance must be positive".into());
                }
                if initial_volts.is_some_and(|v| !v.is_finite()) {
                    problems.push("initial condition must be finite".into());
                }
            }
            ElementKind::VSource { spec, .. } | ElementKind::ISource { spec, .. } => {
                check_source(spec, &mut problems)
            }
            ElementKind::Mosfet { params: p, .. } => {
                if !positive(p.kp) || !positive(p.w) || !positive(p.l) {
                    problems.push("KP, W and L must be positive".into());
                }
                if !(p.lambda >= 0.0) || !(p.cg >= 0.0) || !p.vt0.is_finite() {
                    problems.push("LAMBDA and CG must be non-negative and VT finite".into());
                }
            }
            ElementKind::Mtj {
                n_free,
                n_pinned,
                params: p,
                ..
            } => {
                if n_free == n_pinned {
                    problems.push("free and pinned terminals must differ".into());
                }
                if !positive(p.rp) || !positive(p.tmr) || !positive(p.ic) || !positive(p.tsw) {
                    problems.push("RP, TMR, IC and TSW must be positive".into());
                }
            }
        }
        diags.extend(problems.into_iter().map(|message| Diagnostic {
            element: Some(e.name.clone()),
            message,
        }));
    }

    for probe in &n.directives.record {
        let ok = match probe {
            Probe::Voltage(node) => nodes.contains(node.as_str()),
            Probe::Current(src) => n
                .element(src)
                .is_some_and(|e| matches!(e.kind, ElementKind::VSource { .. })),
        };
        if !ok {
            diags.push(Diagnostic {
                element: None,
                message: format!("recorded signal `{}` does not exist", probe.label()),
            });
        }
    }
    diags
}
