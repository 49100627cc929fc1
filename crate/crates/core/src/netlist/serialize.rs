use std::fmt::Write;

use super::units::format_value as f;
use super::{ElementKind, Netlist};
use crate::devices::SourceSpec;

fn spec_text(spec: &SourceSpec) -> String {
    match spec {
        SourceSpec::Dc(v) => format!("DC {}", f(*v)),
        SourceSpec::Pwl(points) => {
            let body: Vec<String> = points
                .iter()
                .map(|(t, v)| format!("{} {}", f(*t), f(*v)))
                .collect();
            format!("PWL({})", body.join(" "))
        }
        SourceSpec::Pulse(p) => format!(
            "PULSE({} {} {} {} {} {} {})",
            f(p.v1),
            f(p.v2),
            f(p.delay),
            f(p.rise),
            f(p.fall),
            f(p.width),
            f(p.period)
        ),
        SourceSpec::PowerClock(c) => {
            format!("PCLK({} {} {})", f(c.vdd), f(c.t_phase), f(c.t0))
        }
    }
}

/// Writes a netlist in the dialect accepted by
/// [`parse_netlist`](super::parse_netlist). Every parameter is written
/// explicitly at full precision.
pub fn serialize_netlist(n: &Netlist) -> String {
    let mut out = String::new();
    let _ = writeln!(out, ".title {}", n.title);
    for e in &n.elements {
        let line = match &e.kind {
            ElementKind::Resistor { n1, n2, ohms } => format!("{} {n1} {n2} {}", e.name, f(*ohms)),
            ElementKind::Capacitor {
                n1,
                n2,
                farads,
                initial_volts,
            } => {
                let mut s = format!("{} {n1} {n2} {}", e.name, f(*farads));
                if let Some(ic) = initial_volts {
                    let _ = write!(s, " IC={}", f(*ic));
                }
                s
            }
            ElementKind::VSource { np, nn, spec } | ElementKind::ISource { np, nn, spec } => {
                format!("{} {np} {nn} {}", e.name, spec_text(spec))
            }
            ElementKind::Mosfet {
                d,
                g,
                s,
                polarity,
                params: p,
            } => format!(
                "{} {d} {g} {s} {} VT={} KP={} W={} L={} LAMBDA={} CG={}",
                e.name,
                polarity.as_str(),
                f(p.vt0),
                f(p.kp),
                f(p.w),
                f(p.l),
                f(p.lambda),
                f(p.cg)
            ),
            ElementKind::Mtj {
                n_free,
                n_pinned,
                params: p,
                initial_state,
            } => format!(
                "{} {n_free} {n_pinned} RP={} TMR={} IC={} TSW={} STATE={}",
                e.name,
                f(p.rp),
                f(p.tmr),
                f(p.ic),
                f(p.tsw),
                initial_state
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    if let Some(tran) = n.directives.tran {
        let _ = writeln!(out, ".tran {} {}", f(tran.dt), f(tran.tstop));
    }
    if !n.directives.record.is_empty() {
        let probes: Vec<String> = n.directives.record.iter().map(|p| p.label()).collect();
        let _ = writeln!(out, ".record {}", probes.join(" "));
    }
    out.push_str(".end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::{parse_netlist, Probe};
    use super::*;

    #[test]
    fn empty_netlist() {
        let mut n = Netlist::new("empty");
        n.tran(1e-12, 1e-9);
        let text = serialize_netlist(&n);
        assert_eq!(text, ".title empty\n.tran 1e-12 1e-9\n.end\n");
        assert_eq!(parse_netlist(&text).unwrap(), n);
    }

    #[test]
    fn one_resistor() {
        let mut n = Netlist::new("r");
        n.resistor("R1", "a", "0", 2e3);
        n.vsource("V1", "a", "0", SourceSpec::Dc(1.0));
        n.record(Probe::Voltage("a".into()));
        n.record(Probe::Current("V1".into()));
        let back = parse_netlist(&serialize_netlist(&n)).unwrap();
        assert_eq!(back, n);
    }
}
