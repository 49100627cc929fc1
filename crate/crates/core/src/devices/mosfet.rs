//! Level-1 (square-law) MOSFET.
//!
//! The drain current is evaluated in the N-type frame with `vds >= 0`.
//! [`terminal_current`] handles P-type mirroring and source/drain swapping
//! and returns the partial derivatives with respect to each terminal
//! voltage, which is what the MNA stamp needs.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    N,
    P,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::N => "N",
            Polarity::P => "P",
        }
    }
}

/// Level-1 parameter card. `vt0` is signed: positive for N-type, negative
/// for P-type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MosfetParams {
    pub vt0: f64,
    /// Transconductance parameter mu*Cox, A/V^2.
    pub kp: f64,
    pub w: f64,
    pub l: f64,
    pub lambda: f64,
    /// Lumped gate capacitance, stamped between gate and source.
    pub cg: f64,
}

impl MosfetParams {
    pub fn nmos_default() -> Self {
        MosfetParams {
            vt0: 0.4,
            kp: 4e-4,
            w: 64e-9,
            l: 32e-9,
            lambda: 0.1,
            cg: 0.05e-15,
        }
    }

    pub fn pmos_default() -> Self {
        MosfetParams {
            vt0: -0.4,
            kp: 2e-4,
            w: 128e-9,
            l: 32e-9,
            lambda: 0.1,
            cg: 0.05e-15,
        }
    }

    pub fn default_for(polarity: Polarity) -> Self {
        match polarity {
            Polarity::N => Self::nmos_default(),
            Polarity::P => Self::pmos_default(),
        }
    }

    /// kp * W / L
    pub fn beta(&self) -> f64 {
        self.kp * self.w / self.l
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrainCurrent {
    pub id: f64,
    pub gm: f64,
    pub gds: f64,
}

/// Square-law drain current for an N-type device with `vds >= 0`.
///
/// `gm` and `gds` are the exact partial derivatives of the returned `id`.
pub fn mosfet_ids(vgs: f64, vds: f64, p: &MosfetParams) -> DrainCurrent {
    let vov = vgs - p.vt0;
    if vov <= 0.0 {
        return DrainCurrent {
            id: 0.0,
            gm: 0.0,
            gds: 0.0,
        };
    }
    let beta = p.beta();
    let clm = 1.0 + p.lambda * vds;
    if vds < vov {
        let core = vov * vds - 0.5 * vds * vds;
        DrainCurrent {
            id: beta * core * clm,
            gm: beta * vds * clm,
            gds: beta * (vov - vds) * clm + beta * core * p.lambda,
        }
    } else {
        let core = 0.5 * vov * vov;
        DrainCurrent {
            id: beta * core * clm,
            gm: beta * vov * clm,
            gds: beta * core * p.lambda,
        }
    }
}

/// Current flowing into the drain terminal and out of the source terminal,
/// with its partial derivatives with respect to the drain, gate and source
/// node voltages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalCurrent {
    pub ids: f64,
    pub d_vd: f64,
    pub d_vg: f64,
    pub d_vs: f64,
}

pub fn terminal_current(
    polarity: Polarity,
    vd: f64,
    vg: f64,
    vs: f64,
    p: &MosfetParams,
) -> TerminalCurrent {
    match polarity {
        Polarity::N => n_frame(vd, vg, vs, p.vt0, p),
        Polarity::P => {
            // Mirror every voltage; the current flips sign and the
            // derivatives keep theirs (two sign changes).
            let m = n_frame(-vd, -vg, -vs, -p.vt0, p);
            TerminalCurrent {
                ids: -m.ids,
                d_vd: m.d_vd,
                d_vg: m.d_vg,
                d_vs: m.d_vs,
            }
        }
    }
}

fn n_frame(vd: f64, vg: f64, vs: f64, vt0: f64, p: &MosfetParams) -> TerminalCurrent {
    let card = MosfetParams { vt0, ..*p };
    if vd >= vs {
        let c = mosfet_ids(vg - vs, vd - vs, &card);
        TerminalCurrent {
            ids: c.id,
            d_vd: c.gds,
            d_vg: c.gm,
            d_vs: -c.gm - c.gds,
        }
    } else {
        // Physical source is the `d` terminal.
        let c = mosfet_ids(vg - vd, vs - vd, &card);
        TerminalCurrent {
            ids: -c.id,
            d_vd: c.gm + c.gds,
            d_vg: -c.gm,
            d_vs: -c.gds,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn card(vt0: f64, beta: f64, lambda: f64) -> MosfetParams {
        MosfetParams {
            vt0,
            kp: beta,
            w: 1.0,
            l: 1.0,
            lambda,
            cg: 0.0,
        }
    }

    #[test]
    fn cutoff() {
        let c = mosfet_ids(0.3, 1.0, &card(0.4, 2e-4, 0.0));
        assert_eq!(c.id, 0.0);
        assert_eq!(c.gm, 0.0);
        assert_eq!(c.gds, 0.0);
    }

    #[test]
    fn saturation_value() {
        let c = mosfet_ids(1.0, 1.0, &card(0.5, 2e-4, 0.0));
        assert!((c.id - 25e-6).abs() < 1e-18);
    }

    #[test]
    fn triode_value() {
        let c = mosfet_ids(1.0, 0.1, &card(0.5, 2e-4, 0.0));
        assert!((c.id - 9e-6).abs() < 1e-18);
    }

    #[test]
    fn reversed_nmos_conducts_backwards() {
        let p = card(0.4, 1e-4, 0.0);
        let fwd = terminal_current(Polarity::N, 0.0, 1.0, 0.2, &p);
        // d below s: current flows out of d.
        assert!(fwd.ids < 0.0);
        let sym = terminal_current(Polarity::N, 0.2, 1.0, 0.0, &p);
        assert!((fwd.ids + sym.ids).abs() < 1e-18);
    }

    #[test]
    fn pmos_sources_current_into_drain_node() {
        let p = MosfetParams::pmos_default();
        // Source at 1 V, gate at 0, drain at 0.5: current flows s -> d,
        // i.e. out of the drain terminal into the drain node.
        let t = terminal_current(Polarity::P, 0.5, 0.0, 1.0, &p);
        assert!(t.ids < 0.0);
        let off = terminal_current(Polarity::P, 0.5, 1.0, 1.0, &p);
        assert_eq!(off.ids, 0.0);
    }

    #[test]
    fn default_cards_are_matched() {
        let n = MosfetParams::nmos_default();
        let p = MosfetParams::pmos_default();
        assert!((n.beta() - p.beta()).abs() < 1e-18);
        assert!((n.beta() - 8e-4).abs() < 1e-15);
    }
}
