use super::{CircuitError, DesignStyle, GateKind, GateTemplate, MtjRole, TestbenchSpec};
use crate::devices::{MtjConfig, Polarity, Pulse, SourceSpec};
use crate::netlist::{Netlist, Probe};

use MtjConfig::{Antiparallel as AP, Parallel as P};
use Polarity::N;

/// Edge time of input, discharge and write-driver waveforms, as a fraction
/// of the phase time.
const EDGE_FRACTION: f64 = 0.02;
/// Enable edge of the baseline sense amplifier.
const BASELINE_EDGE: f64 = 50e-12;

fn edge(tb: &TestbenchSpec) -> f64 {
    EDGE_FRACTION * tb.t_phase
}

fn cycle_start(tb: &TestbenchSpec, k: usize) -> f64 {
    k as f64 * 4.0 * tb.t_phase
}

/// Level per cycle, switching over the first edge of each wait phase.
fn stepped(tb: &TestbenchSpec, levels: &[f64]) -> SourceSpec {
    let e = edge(tb);
    let mut pts = vec![(0.0, levels[0])];
    for k in 1..levels.len() {
        if levels[k] != levels[k - 1] {
            let s = cycle_start(tb, k);
            pts.push((s, levels[k - 1]));
            pts.push((s + e, levels[k]));
        }
    }
    SourceSpec::Pwl(pts)
}

/// Write current per cycle, on only inside the wait phase.
fn write_pulses(tb: &TestbenchSpec, currents: &[f64]) -> SourceSpec {
    let e = edge(tb);
    let mut pts = vec![(0.0, 0.0)];
    for (k, &i) in currents.iter().enumerate() {
        let s = cycle_start(tb, k);
        pts.push((s + e, 0.0));
        pts.push((s + 2.0 * e, i));
        pts.push((s + tb.t_phase - 2.0 * e, i));
        pts.push((s + tb.t_phase - e, 0.0));
    }
    SourceSpec::Pwl(pts)
}

fn complement(gate: &'static str) -> &'static str {
    match gate {
        "a" => "ab",
        "ab" => "a",
        "c" => "cb",
        "cb" => "c",
        "vbias" => "0",
        other => other,
    }
}

/// One select-transistor path between two nodes of an evaluation network.
struct Switch {
    name: &'static str,
    from: &'static str,
    to: &'static str,
    gate: &'static str,
}

struct Network {
    switches: Vec<Switch>,
    /// `(role, element, node, state when b = 1)`; each MTJ runs from its node
    /// to ground in the baseline and to the clock in the adiabatic style.
    mtjs: Vec<(&'static str, &'static str, &'static str, MtjConfig)>,
    /// Inputs other than `b`, each driving a true and a complement node.
    selects: Vec<(usize, &'static str, &'static str)>,
    bias: bool,
}

fn sw(name: &'static str, from: &'static str, to: &'static str, gate: &'static str) -> Switch {
    Switch { name, from, to, gate }
}

fn network(kind: GateKind) -> Network {
    match kind {
        // Paths as seen by the baseline: the NAND rail reaches MTJ1 through
        // T5 (gated by a), the AND rail reaches MTJ2 through an always-on T6.
        GateKind::AndNand => Network {
            switches: vec![sw("MT5", "xnand", "m1", "a"), sw("MT6", "xand", "m2", "vbias")],
            mtjs: vec![("MTJ1", "J1", "m1", P), ("MTJ2", "J2", "m2", AP)],
            selects: vec![(0, "a", "ab")],
            bias: true,
        },
        // Input a steers each rail to one of the two complementary MTJs.
        GateKind::XorXnor => Network {
            switches: vec![
                sw("MT1", "xxor", "m1", "a"),
                sw("MT2", "xxnor", "m1", "ab"),
                sw("MT3", "xxor", "m2", "ab"),
                sw("MT4", "xxnor", "m2", "a"),
            ],
            mtjs: vec![("MTJ1", "J1", "m1", P), ("MTJ2", "J2", "m2", AP)],
            selects: vec![(0, "a", "ab")],
            bias: false,
        },
        // Sum: a selects an intermediate node (u or v) per rail, c then
        // selects MTJ1 or MTJ2, so each rail reaches the MTJ pair through
        // a xor c. Carry: parallel selects over a and c onto MTJ3/MTJ4.
        GateKind::FullAdder => Network {
            switches: vec![
                sw("MT1", "xsumb", "u", "a"),
                sw("MT2", "xsumb", "v", "ab"),
                sw("MT3", "xsum", "u", "ab"),
                sw("MT4", "xsum", "v", "a"),
                sw("MT5", "u", "m2", "cb"),
                sw("MT6", "u", "m1", "c"),
                sw("MT7", "v", "m1", "cb"),
                sw("MT8", "v", "m2", "c"),
                sw("MT9", "xcoutb", "m3", "a"),
                sw("MT10", "xcoutb", "m3", "c"),
                sw("MT11", "xcout", "m4", "ab"),
                sw("MT12", "xcout", "m4", "cb"),
            ],
            mtjs: vec![
                ("MTJ1", "J1", "m1", P),
                ("MTJ2", "J2", "m2", AP),
                ("MTJ3", "J3", "m3", P),
                ("MTJ4", "J4", "m4", AP),
            ],
            selects: vec![(0, "a", "ab"), (2, "c", "cb")],
            bias: false,
        },
    }
}

/// Cross-coupled latch on the power clock. Rail `o` charges from the clock
/// through its pull-up network into `x<o>` and the PMOS above it; the
/// losing rail is held low by the cross-coupled NMOS. The discharge signal
/// grounds and equalises both rails during wait.
fn adiabatic_latch(n: &mut Netlist, o: &str, ob: &str) {
    for (r, other) in [(o, ob), (ob, o)] {
        n.mosfet(&format!("MP{r}"), r, other, &format!("x{r}"), Polarity::P);
        n.mosfet(&format!("MN{r}"), r, other, "0", N);
        n.mosfet(&format!("MD{r}"), r, "dis", "0", N);
        // One equaliser per direction keeps gate coupling symmetric.
        n.mosfet(&format!("ME{r}"), r, "dis", other, N);
    }
}

/// Precharge sense amplifier on the constant supply. Rail `o` discharges
/// through its footer into `x<o>` while `en` is high. The node between the
/// cross-coupled NMOS and the footer is precharged with the rail so each
/// evaluation starts from the same state.
fn baseline_latch(n: &mut Netlist, o: &str, ob: &str) {
    for (r, other) in [(o, ob), (ob, o)] {
        let t = format!("t{r}");
        n.mosfet(&format!("MC{r}"), r, "en", "vdd", Polarity::P);
        n.mosfet(&format!("MCT{r}"), &t, "en", "vdd", Polarity::P);
        n.mosfet(&format!("MP{r}"), r, other, "vdd", Polarity::P);
        n.mosfet(&format!("MN{r}"), r, other, &t, N);
        n.mosfet(&format!("MF{r}"), &t, "en", &format!("x{r}"), N);
    }
}

/// Builds a complete testbench netlist for `kind` in `style`.
pub fn build_gate(kind: GateKind, style: DesignStyle, tb: &TestbenchSpec) -> Result<GateTemplate, CircuitError> {
    tb.validate(kind)?;
    let clock = tb.clock();
    let net = network(kind);
    let mut n = Netlist::new(format!("{kind} {style}"));

    match style {
        DesignStyle::AdiabaticMtj => {
            n.vsource("VCLK", "clk", "0", SourceSpec::PowerClock(clock));
            let e = edge(tb);
            n.vsource(
                "VDIS",
                "dis",
                "0",
                SourceSpec::Pulse(Pulse {
                    v1: 0.0,
                    v2: tb.vdd,
                    delay: 0.0,
                    rise: e,
                    fall: e,
                    width: tb.t_phase - 2.0 * e,
                    period: clock.period(),
                }),
            );
        }
        DesignStyle::BaselineMtj => {
            n.vsource("VDD", "vdd", "0", SourceSpec::Dc(tb.vdd));
            let mut pts = vec![(0.0, 0.0)];
            for k in 0..tb.n_cycles() {
                let s = cycle_start(tb, k);
                if k > 0 {
                    pts.push((s, tb.vdd));
                    pts.push((s + BASELINE_EDGE, 0.0));
                }
                pts.push((s + tb.t_phase, 0.0));
                pts.push((s + tb.t_phase + BASELINE_EDGE, tb.vdd));
            }
            n.vsource("VEN", "en", "0", SourceSpec::Pwl(pts));
        }
    }

    let mut input_drivers = Vec::new();
    for &(bit, t, c) in &net.selects {
        let levels: Vec<f64> = tb
            .patterns
            .iter()
            .map(|p| if p[bit] { tb.vdd } else { 0.0 })
            .collect();
        let inverse: Vec<f64> = levels.iter().map(|v| tb.vdd - v).collect();
        for (node, lv) in [(t, levels), (c, inverse)] {
            let name = format!("V{}", node.to_ascii_uppercase());
            n.vsource(&name, node, "0", stepped(tb, &lv));
            input_drivers.push(name);
        }
    }
    if net.bias && style == DesignStyle::BaselineMtj {
        n.vsource("VBIAS", "vbias", "0", SourceSpec::Dc(tb.vdd));
        input_drivers.push("VBIAS".to_string());
    }

    let outputs: Vec<(String, String)> = kind
        .output_pairs()
        .iter()
        .map(|(t, c)| (t.to_string(), c.to_string()))
        .collect();
    for (o, ob) in &outputs {
        match style {
            DesignStyle::AdiabaticMtj => adiabatic_latch(&mut n, o, ob),
            DesignStyle::BaselineMtj => baseline_latch(&mut n, o, ob),
        }
    }
    let pairs: Vec<(String, String)> = outputs
        .iter()
        .map(|(o, ob)| (format!("x{o}"), format!("x{ob}")))
        .collect();
    for s in &net.switches {
        match style {
            DesignStyle::BaselineMtj => {
                n.mosfet(s.name, s.from, s.gate, s.to, N);
            }
            DesignStyle::AdiabaticMtj => {
                // A rail wins here when its path is the stronger one, so
                // each rail takes the path its complement has in the
                // baseline, through PMOS selects on the complement inputs.
                let from = pairs
                    .iter()
                    .find_map(|(x, xb)| {
                        if s.from == x {
                            Some(xb.as_str())
                        } else if s.from == xb {
                            Some(x.as_str())
                        } else {
                            None
                        }
                    })
                    .unwrap_or(s.from);
                n.mosfet(s.name, from, complement(s.gate), s.to, Polarity::P);
            }
        }
    }
    if style == DesignStyle::AdiabaticMtj {
        // Internal network nodes float once the selects close; ground them
        // with the rails so every evaluation starts from the same state.
        let mut internal: Vec<&str> = Vec::new();
        for s in &net.switches {
            for node in [s.from, s.to] {
                if !node.starts_with('m') && !internal.contains(&node) {
                    internal.push(node);
                }
            }
        }
        for node in internal {
            n.mosfet(&format!("MX{node}"), node, "dis", "0", N);
        }
    }

    let b = 1;
    let mut mtj_roles = Vec::new();
    for &(role, element, node, on_one) in &net.mtjs {
        let initial = on_one.flipped();
        let pinned = match style {
            DesignStyle::AdiabaticMtj => "clk",
            DesignStyle::BaselineMtj => "0",
        };
        n.mtj(element, node, pinned, tb.mtj, initial);
        let driver = format!("IW{}", &element[1..]);
        let currents: Vec<f64> = tb
            .patterns
            .iter()
            .map(|p| {
                let target = if p[b] { on_one } else { on_one.flipped() };
                match target {
                    P => tb.write_current.abs(),
                    AP => -tb.write_current.abs(),
                }
            })
            .collect();
        n.isource(&driver, "0", node, write_pulses(tb, &currents));
        mtj_roles.push(MtjRole {
            role: role.to_string(),
            element: element.to_string(),
            initial,
            on_one,
            driver: Some(driver),
        });
    }

    for (o, ob) in &outputs {
        n.capacitor(&format!("CL{o}"), o, "0", tb.c_load);
        n.capacitor(&format!("CL{ob}"), ob, "0", tb.c_load);
    }

    n.tran(tb.dt, tb.tstop());
    match style {
        DesignStyle::AdiabaticMtj => n.record(Probe::Voltage("clk".into())),
        DesignStyle::BaselineMtj => n.record(Probe::Voltage("en".into())),
    };
    for (o, ob) in &outputs {
        n.record(Probe::Voltage(o.clone()));
        n.record(Probe::Voltage(ob.clone()));
    }
    match style {
        DesignStyle::AdiabaticMtj => n.record(Probe::Current("VCLK".into())),
        DesignStyle::BaselineMtj => n.record(Probe::Current("VDD".into())),
    };

    Ok(GateTemplate {
        kind,
        style,
        netlist: n,
        outputs,
        input_drivers,
        clock,
        mtj_roles,
        c_load: tb.c_load,
        testbench: tb.clone(),
    })
}
