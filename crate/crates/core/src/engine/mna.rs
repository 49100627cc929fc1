use std::collections::HashMap;

use super::lu::LinearSystem;
use super::EngineError;
use crate::devices::{
    capacitor_companion, mtj_resistance, source_value, terminal_current, Integration, MosfetParams,
    MtjConfig, MtjParams, MtjState, Polarity, SourceSpec,
};
use crate::netlist::{validate_netlist, ElementKind, Netlist};

/// How reactive elements are treated in one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepKind {
    /// Operating point: capacitors open, or held at their initial condition
    /// when one is given.
    Dc,
    Transient { h: f64, method: Integration },
}

/// Voltage across and current through a capacitor (including MOSFET gate
/// capacitance) at the last accepted point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CapState {
    pub v: f64,
    pub i: f64,
}

// Node indices: 0 is ground, unknown index is node - 1.
#[derive(Debug, Clone)]
pub(crate) enum Compiled {
    Resistor {
        a: usize,
        b: usize,
        g: f64,
    },
    Capacitor {
        a: usize,
        b: usize,
        c: f64,
        slot: usize,
        ic: Option<(f64, usize)>,
    },
    VSource {
        p: usize,
        n: usize,
        spec: SourceSpec,
        branch: usize,
    },
    ISource {
        p: usize,
        n: usize,
        spec: SourceSpec,
    },
    Mosfet {
        d: usize,
        g: usize,
        s: usize,
        polarity: Polarity,
        params: MosfetParams,
        cg_slot: Option<usize>,
    },
    Mtj {
        f: usize,
        p: usize,
        params: MtjParams,
        index: usize,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Circuit {
    pub node_names: Vec<String>,
    pub elements: Vec<Compiled>,
    pub element_names: Vec<String>,
    pub vsource_names: Vec<String>,
    pub mtj_names: Vec<String>,
    pub mtj_initial: Vec<MtjConfig>,
    pub n_cap_slots: usize,
    pub n_ic: usize,
    pub nonlinear: bool,
    pub gmin: f64,
}

/// Per-element quantities at a solved point.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct ElementSample {
    pub absorbed: f64,
    pub dissipated: f64,
    pub current: f64,
}

#[inline]
fn stamp_g(sys: &mut LinearSystem, a: usize, b: usize, g: f64) {
    if a > 0 {
        sys.add(a - 1, a - 1, g);
    }
    if b > 0 {
        sys.add(b - 1, b - 1, g);
    }
    if a > 0 && b > 0 {
        sys.add(a - 1, b - 1, -g);
        sys.add(b - 1, a - 1, -g);
    }
}

/// Current `i` leaving node `a` and entering node `b` through an element.
#[inline]
fn stamp_i(sys: &mut LinearSystem, a: usize, b: usize, i: f64) {
    if a > 0 {
        sys.b[a - 1] -= i;
    }
    if b > 0 {
        sys.b[b - 1] += i;
    }
}

/// Couples branch unknown `q` into the KCL rows of `p` (+) and `n` (-) and
/// adds the constraint `v_p - v_n = value` in row `q`.
#[inline]
fn stamp_branch(sys: &mut LinearSystem, p: usize, n: usize, q: usize, value: f64) {
    if p > 0 {
        sys.add(p - 1, q, 1.0);
        sys.add(q, p - 1, 1.0);
    }
    if n > 0 {
        sys.add(n - 1, q, -1.0);
        sys.add(q, n - 1, -1.0);
    }
    sys.b[q] = value;
}

#[inline]
fn volt(x: &[f64], node: usize) -> f64 {
    if node == 0 {
        0.0
    } else {
        x[node - 1]
    }
}

impl Circuit {
    pub fn compile(netlist: &Netlist, gmin: f64) -> Result<Self, EngineError> {
        let diags = validate_netlist(netlist);
        if !diags.is_empty() {
            let text: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            return Err(EngineError::InvalidNetlist(text.join("; ")));
        }
        let index: HashMap<&str, usize> = netlist
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let node = |name: &str| index[name];

        let mut ckt = Circuit {
            node_names: netlist.nodes.clone(),
            elements: Vec::with_capacity(netlist.elements.len()),
            element_names: Vec::with_capacity(netlist.elements.len()),
            vsource_names: Vec::new(),
            mtj_names: Vec::new(),
            mtj_initial: Vec::new(),
            n_cap_slots: 0,
            n_ic: 0,
            nonlinear: false,
            gmin,
        };
        for e in &netlist.elements {
            let compiled = match &e.kind {
                ElementKind::Resistor { n1, n2, ohms } => Compiled::Resistor {
                    a: node(n1),
                    b: node(n2),
                    g: 1.0 / ohms,
                },
                ElementKind::Capacitor {
                    n1,
                    n2,
                    farads,
                    initial_volts,
                } => {
                    let slot = ckt.n_cap_slots;
                    ckt.n_cap_slots += 1;
                    let ic = initial_volts.map(|v| {
                        ckt.n_ic += 1;
                        (v, ckt.n_ic - 1)
                    });
                    Compiled::Capacitor {
                        a: node(n1),
                        b: node(n2),
                        c: *farads,
                        slot,
                        ic,
                    }
                }
                ElementKind::VSource { np, nn, spec } => {
                    ckt.vsource_names.push(e.name.clone());
                    Compiled::VSource {
                        p: node(np),
                        n: node(nn),
                        spec: spec.clone(),
                        branch: ckt.vsource_names.len() - 1,
                    }
                }
                ElementKind::ISource { np, nn, spec } => Compiled::ISource {
                    p: node(np),
                    n: node(nn),
                    spec: spec.clone(),
                },
                ElementKind::Mosfet {
                    d,
                    g,
                    s,
                    polarity,
                    params,
                } => {
                    ckt.nonlinear = true;
                    let cg_slot = (params.cg > 0.0).then(|| {
                        ckt.n_cap_slots += 1;
                        ckt.n_cap_slots - 1
                    });
                    Compiled::Mosfet {
                        d: node(d),
                        g: node(g),
                        s: node(s),
                        polarity: *polarity,
                        params: *params,
                        cg_slot,
                    }
                }
                ElementKind::Mtj {
                    n_free,
                    n_pinned,
                    params,
                    initial_state,
                } => {
                    ckt.mtj_names.push(e.name.clone());
                    ckt.mtj_initial.push(*initial_state);
                    Compiled::Mtj {
                        f: node(n_free),
                        p: node(n_pinned),
                        params: *params,
                        index: ckt.mtj_names.len() - 1,
                    }
                }
            };
            ckt.elements.push(compiled);
            ckt.element_names.push(e.name.clone());
        }
        Ok(ckt)
    }

    pub fn n_node_unknowns(&self) -> usize {
        self.node_names.len() - 1
    }

    pub fn n_unknowns(&self, kind: StepKind) -> usize {
        let base = self.n_node_unknowns() + self.vsource_names.len();
        match kind {
            StepKind::Dc => base + self.n_ic,
            StepKind::Transient { .. } => base,
        }
    }

    fn companion(kind: StepKind, c: f64, st: CapState) -> Option<(f64, f64)> {
        match kind {
            StepKind::Dc => None,
            StepKind::Transient { h, method } => {
                let cm = capacitor_companion(c, st.v, st.i, h, method);
                Some((cm.geq, cm.ieq))
            }
        }
    }

    /// Builds the Newton-linearised system around the trial point `x`.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble_into(
        &self,
        sys: &mut LinearSystem,
        x: &[f64],
        t: f64,
        kind: StepKind,
        caps: &[CapState],
        mtj: &[MtjState],
        source_scale: f64,
    ) {
        let nv = self.n_node_unknowns();
        let nb = self.vsource_names.len();
        sys.clear();
        for k in 0..nv {
            sys.add(k, k, self.gmin);
        }
        for el in &self.elements {
            match *el {
                Compiled::Resistor { a, b, g } => stamp_g(sys, a, b, g),
                Compiled::Capacitor { a, b, c, slot, ic } => match Self::companion(kind, c, caps[slot]) {
                    Some((geq, ieq)) => {
                        stamp_g(sys, a, b, geq);
                        stamp_i(sys, a, b, ieq);
                    }
                    None => {
                        if let Some((v, k)) = ic {
                            stamp_branch(sys, a, b, nv + nb + k, v);
                        }
                    }
                },
                Compiled::VSource {
                    p,
                    n,
                    ref spec,
                    branch,
                } => stamp_branch(sys, p, n, nv + branch, source_scale * source_value(spec, t)),
                Compiled::ISource { p, n, ref spec } => {
                    stamp_i(sys, p, n, source_scale * source_value(spec, t))
                }
                Compiled::Mosfet {
                    d,
                    g,
                    s,
                    polarity,
                    ref params,
                    cg_slot,
                } => {
                    let (vd, vg, vs) = (volt(x, d), volt(x, g), volt(x, s));
                    let tc = terminal_current(polarity, vd, vg, vs, params);
                    let i0 = tc.ids - tc.d_vd * vd - tc.d_vg * vg - tc.d_vs * vs;
                    for (row, sign) in [(d, 1.0), (s, -1.0)] {
                        if row == 0 {
                            continue;
                        }
                        let r = row - 1;
                        for (col, j) in [(d, tc.d_vd), (g, tc.d_vg), (s, tc.d_vs)] {
                            if col > 0 && j != 0.0 {
                                sys.add(r, col - 1, sign * j);
                            }
                        }
                        sys.b[r] -= sign * i0;
                    }
                    if let Some(slot) = cg_slot {
                        if let Some((geq, ieq)) = Self::companion(kind, params.cg, caps[slot]) {
                            stamp_g(sys, g, s, geq);
                            stamp_i(sys, g, s, ieq);
                        }
                    }
                }
                Compiled::Mtj { f, p, ref params, index } => {
                    stamp_g(sys, f, p, 1.0 / mtj_resistance(&mtj[index], params))
                }
            }
        }
    }

    /// Initial reactive state implied by an operating point.
    pub fn initial_caps(&self, x: &[f64]) -> Vec<CapState> {
        let nv = self.n_node_unknowns();
        let nb = self.vsource_names.len();
        let mut caps = vec![CapState::default(); self.n_cap_slots];
        for el in &self.elements {
            match *el {
                Compiled::Capacitor { a, b, slot, ic, .. } => {
                    caps[slot] = CapState {
                        v: volt(x, a) - volt(x, b),
                        i: ic.map_or(0.0, |(_, k)| x[nv + nb + k]),
                    };
                }
                Compiled::Mosfet {
                    g, s, cg_slot: Some(slot), ..
                } => {
                    caps[slot] = CapState {
                        v: volt(x, g) - volt(x, s),
                        i: 0.0,
                    };
                }
                _ => {}
            }
        }
        caps
    }

    /// Evaluates element powers at a solved point and writes the updated
    /// reactive state into `caps_out`.
    #[allow(clippy::too_many_arguments)]
    pub fn sample(
        &self,
        x: &[f64],
        t: f64,
        kind: StepKind,
        caps: &[CapState],
        mtj: &[MtjState],
        caps_out: &mut [CapState],
        out: &mut [ElementSample],
    ) {
        let nv = self.n_node_unknowns();
        let cap_current = |c: f64, st: CapState, v: f64| match Self::companion(kind, c, st) {
            Some((geq, ieq)) => geq * v + ieq,
            None => 0.0,
        };
        for (el, o) in self.elements.iter().zip(out.iter_mut()) {
            *o = match *el {
                Compiled::Resistor { a, b, g } => {
                    let v = volt(x, a) - volt(x, b);
                    ElementSample {
                        absorbed: g * v * v,
                        dissipated: g * v * v,
                        current: g * v,
                    }
                }
                Compiled::Capacitor { a, b, c, slot, ic } => {
                    let v = volt(x, a) - volt(x, b);
                    let i = match (kind, ic) {
                        (StepKind::Dc, Some((_, k))) => x[nv + self.vsource_names.len() + k],
                        _ => cap_current(c, caps[slot], v),
                    };
                    caps_out[slot] = CapState { v, i };
                    ElementSample {
                        absorbed: v * i,
                        dissipated: 0.0,
                        current: i,
                    }
                }
                Compiled::VSource { p, n, branch, .. } => {
                    let i = x[nv + branch];
                    ElementSample {
                        absorbed: (volt(x, p) - volt(x, n)) * i,
                        dissipated: 0.0,
                        current: i,
                    }
                }
                Compiled::ISource { p, n, ref spec } => {
                    let i = source_value(spec, t);
                    ElementSample {
                        absorbed: (volt(x, p) - volt(x, n)) * i,
                        dissipated: 0.0,
                        current: i,
                    }
                }
                Compiled::Mosfet {
                    d,
                    g,
                    s,
                    polarity,
                    ref params,
                    cg_slot,
                } => {
                    let (vd, vg, vs) = (volt(x, d), volt(x, g), volt(x, s));
                    let ids = terminal_current(polarity, vd, vg, vs, params).ids;
                    let channel = ids * (vd - vs);
                    let mut absorbed = channel;
                    let mut current = ids.abs();
                    if let Some(slot) = cg_slot {
                        let v = vg - vs;
                        let i = cap_current(params.cg, caps[slot], v);
                        caps_out[slot] = CapState { v, i };
                        absorbed += v * i;
                        current = current.max(i.abs());
                    }
                    ElementSample {
                        absorbed,
                        dissipated: channel,
                        current,
                    }
                }
                Compiled::Mtj { f, p, ref params, index } => {
                    let v = volt(x, f) - volt(x, p);
                    let r = mtj_resistance(&mtj[index], params);
                    ElementSample {
                        absorbed: v * v / r,
                        dissipated: v * v / r,
                        current: v / r,
                    }
                }
            };
        }
    }

    /// Current from free to pinned layer of each MTJ at a solved point.
    pub fn mtj_currents(&self, x: &[f64], mtj: &[MtjState]) -> Vec<(usize, f64, MtjParams)> {
        self.elements
            .iter()
            .filter_map(|el| match *el {
                Compiled::Mtj { f, p, params, index } => {
                    let v = volt(x, f) - volt(x, p);
                    Some((index, v / mtj_resistance(&mtj[index], &params), params))
                }
                _ => None,
            })
            .collect()
    }
}
