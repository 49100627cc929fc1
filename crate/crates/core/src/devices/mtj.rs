//! Behavioral magnetic tunnel junction: two-valued resistance set by the
//! magnetic configuration, and deterministic spin-transfer switching once
//! the current exceeds the critical magnitude for a dwell time.
//!
//! Current is measured flowing from the free-layer terminal to the
//! pinned-layer terminal. Positive current above `ic` writes P, negative
//! current below `-ic` writes AP.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MtjConfig {
    #[serde(rename = "P")]
    Parallel,
    #[serde(rename = "AP")]
    Antiparallel,
}

impl MtjConfig {
    pub fn as_str(self) -> &'static str {
        match self {
            MtjConfig::Parallel => "P",
            MtjConfig::Antiparallel => "AP",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            MtjConfig::Parallel => MtjConfig::Antiparallel,
            MtjConfig::Antiparallel => MtjConfig::Parallel,
        }
    }
}

impl fmt::Display for MtjConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MtjConfig {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "P" => Ok(MtjConfig::Parallel),
            "AP" => Ok(MtjConfig::Antiparallel),
            other => Err(format!("expected P or AP, found `{other}`")),
        }
    }
}

/// Artifact defaults (`rp` = 2 kOhm, `tmr` = 1.5, `ic` = 50 uA, `tsw` = 5 ns)
/// stand in for a physics-based compact model; they are not measured data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MtjParams {
    pub rp: f64,
    pub tmr: f64,
    pub ic: f64,
    pub tsw: f64,
}

impl Default for MtjParams {
    fn default() -> Self {
        MtjParams {
            rp: 2e3,
            tmr: 1.5,
            ic: 50e-6,
            tsw: 5e-9,
        }
    }
}

impl MtjParams {
    pub fn rap(&self) -> f64 {
        self.rp * (1.0 + self.tmr)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MtjState {
    pub config: MtjConfig,
    /// Accumulated time with current above `+ic`.
    pub dwell_pos: f64,
    /// Accumulated time with current below `-ic`.
    pub dwell_neg: f64,
}

impl MtjState {
    pub fn new(config: MtjConfig) -> Self {
        MtjState {
            config,
            dwell_pos: 0.0,
            dwell_neg: 0.0,
        }
    }
}

pub fn mtj_resistance(state: &MtjState, p: &MtjParams) -> f64 {
    match state.config {
        MtjConfig::Parallel => p.rp,
        MtjConfig::Antiparallel => p.rap(),
    }
}

// Dwell sums are built from many small steps; allow for the rounding in
// the running sum so that exactly `tsw` worth of steps switches.
const DWELL_SLACK: f64 = 1e-9;

/// Advances the switching state by one accepted timestep.
pub fn mtj_update(state: &MtjState, i_branch: f64, dt: f64, p: &MtjParams) -> MtjState {
    let target = if i_branch > p.ic {
        MtjConfig::Parallel
    } else if i_branch < -p.ic {
        MtjConfig::Antiparallel
    } else {
        return MtjState::new(state.config);
    };
    if state.config == target {
        return MtjState::new(target);
    }
    let mut next = *state;
    let dwell = match target {
        MtjConfig::Parallel => {
            next.dwell_neg = 0.0;
            next.dwell_pos += dt;
            next.dwell_pos
        }
        MtjConfig::Antiparallel => {
            next.dwell_pos = 0.0;
            next.dwell_neg += dt;
            next.dwell_neg
        }
    };
    if dwell >= p.tsw * (1.0 - DWELL_SLACK) {
        MtjState::new(target)
    } else {
        next
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drive(mut s: MtjState, i: f64, total: f64, dt: f64, p: &MtjParams) -> MtjState {
        let steps = (total / dt).round() as usize;
        for _ in 0..steps {
            s = mtj_update(&s, i, dt, p);
        }
        s
    }

    #[test]
    fn resistance_values() {
        let p = MtjParams::default();
        assert_eq!(mtj_resistance(&MtjState::new(MtjConfig::Parallel), &p), 2e3);
        assert_eq!(
            mtj_resistance(&MtjState::new(MtjConfig::Antiparallel), &p),
            5e3
        );
        let tiny = MtjParams { tmr: 1e-6, ..p };
        let r = mtj_resistance(&MtjState::new(MtjConfig::Antiparallel), &tiny);
        assert!((r - 2e3).abs() < 1e-2);
    }

    #[test]
    fn negative_current_writes_ap() {
        let p = MtjParams::default();
        let s = drive(MtjState::new(MtjConfig::Parallel), -60e-6, 5e-9, 10e-12, &p);
        assert_eq!(s.config, MtjConfig::Antiparallel);
    }

    #[test]
    fn rewrite_is_noop() {
        let p = MtjParams::default();
        let start = MtjState::new(MtjConfig::Antiparallel);
        let s = drive(start, -60e-6, 5e-9, 10e-12, &p);
        assert_eq!(s, start);
    }

    #[test]
    fn subcritical_current_never_switches() {
        let p = MtjParams::default();
        let s = drive(MtjState::new(MtjConfig::Parallel), 40e-6, 1e-6, 1e-9, &p);
        assert_eq!(s.config, MtjConfig::Parallel);
        assert_eq!(s.dwell_pos, 0.0);
    }

    #[test]
    fn interrupted_pulse_restarts_dwell() {
        let p = MtjParams::default();
        let mut s = drive(MtjState::new(MtjConfig::Antiparallel), 60e-6, 4e-9, 1e-10, &p);
        assert!(s.dwell_pos > 3.9e-9);
        s = mtj_update(&s, 0.0, 1e-10, &p);
        assert_eq!(s.dwell_pos, 0.0);
        s = drive(s, 60e-6, 4e-9, 1e-10, &p);
        assert_eq!(s.config, MtjConfig::Antiparallel);
    }

    #[test]
    fn opposite_current_resets_other_dwell() {
        let p = MtjParams::default();
        let s = MtjState {
            config: MtjConfig::Parallel,
            dwell_pos: 0.0,
            dwell_neg: 0.0,
        };
        let s = mtj_update(&s, -60e-6, 1e-9, &p);
        assert_eq!(s.dwell_neg, 1e-9);
        // Still P, so a positive pulse is a same-state write.
        let s = mtj_update(&s, 60e-6, 1e-9, &p);
        assert_eq!(s.dwell_neg, 0.0);
        assert_eq!(s.dwell_pos, 0.0);
    }
}
