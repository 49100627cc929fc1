//! Time-dependent source waveforms, including the four-phase power clock.

use serde::{Deserialize, Serialize};

/// Four-phase trapezoidal supply. One period is `4 * t_phase`, starting at
/// `t0` with the wait phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerClock {
    pub vdd: f64,
    pub t_phase: f64,
    pub t0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClockPhase {
    Wait,
    Evaluate,
    Hold,
    Recovery,
}

impl ClockPhase {
    pub const ALL: [ClockPhase; 4] = [
        ClockPhase::Wait,
        ClockPhase::Evaluate,
        ClockPhase::Hold,
        ClockPhase::Recovery,
    ];

    /// Position of the phase within the period, 0..4.
    pub fn index(self) -> usize {
        match self {
            ClockPhase::Wait => 0,
            ClockPhase::Evaluate => 1,
            ClockPhase::Hold => 2,
            ClockPhase::Recovery => 3,
        }
    }
}

impl PowerClock {
    pub fn period(&self) -> f64 {
        4.0 * self.t_phase
    }

    fn local_time(&self, t: f64) -> f64 {
        (t - self.t0).rem_euclid(self.period())
    }

    pub fn phase_at(&self, t: f64) -> ClockPhase {
        let tau = self.local_time(t);
        ClockPhase::ALL[((tau / self.t_phase) as usize).min(3)]
    }

    /// Start time of `phase` in the 1-based clock cycle `cycle`.
    pub fn phase_start(&self, cycle: usize, phase: ClockPhase) -> f64 {
        assert!(cycle >= 1, "clock cycles are numbered from 1");
        self.t0 + (cycle - 1) as f64 * self.period() + phase.index() as f64 * self.t_phase
    }

    pub fn value(&self, t: f64) -> f64 {
        let tau = self.local_time(t);
        let tp = self.t_phase;
        let v = if tau < tp {
            0.0
        } else if tau < 2.0 * tp {
            self.vdd * (tau - tp) / tp
        } else if tau < 3.0 * tp {
            self.vdd
        } else {
            self.vdd * (4.0 * tp - tau) / tp
        };
        v.clamp(0.0, self.vdd)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SourceSpec {
    Dc(f64),
    /// Piecewise-linear `(seconds, value)` breakpoints, clamped at both ends.
    Pwl(Vec<(f64, f64)>),
    Pulse(Pulse),
    PowerClock(PowerClock),
}

/// SPICE `PULSE(v1 v2 td tr tf pw per)`. A zero period means a single pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub v1: f64,
    pub v2: f64,
    pub delay: f64,
    pub rise: f64,
    pub fall: f64,
    pub width: f64,
    pub period: f64,
}

impl Pulse {
    pub fn value(&self, t: f64) -> f64 {
        if t < self.delay {
            return self.v1;
        }
        let mut tp = t - self.delay;
        if self.period > 0.0 {
            tp = tp.rem_euclid(self.period);
        }
        if tp < self.rise {
            self.v1 + (self.v2 - self.v1) * tp / self.rise
        } else if tp < self.rise + self.width {
            self.v2
        } else if tp < self.rise + self.width + self.fall {
            self.v2 + (self.v1 - self.v2) * (tp - self.rise - self.width) / self.fall
        } else {
            self.v1
        }
    }
}

fn pwl_value(points: &[(f64, f64)], t: f64) -> f64 {
    let (first, last) = match (points.first(), points.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return 0.0,
    };
    if t <= first.0 {
        return first.1;
    }
    if t >= last.0 {
        return last.1;
    }
    // First breakpoint strictly after t; exists because t < last.0.
    let k = points.partition_point(|&(tk, _)| tk <= t);
    let (t0, v0) = points[k - 1];
    let (t1, v1) = points[k];
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

pub fn source_value(spec: &SourceSpec, t: f64) -> f64 {
    match spec {
        SourceSpec::Dc(v) => *v,
        SourceSpec::Pwl(points) => pwl_value(points, t),
        SourceSpec::Pulse(p) => p.value(t),
        SourceSpec::PowerClock(c) => c.value(t),
    }
}

/// Ideal discharge control for the output equalizer: `vdd` during the wait
/// phase, 0 otherwise.
pub fn discharge_signal(t: f64, clock: &PowerClock) -> f64 {
    match clock.phase_at(t) {
        ClockPhase::Wait => clock.vdd,
        _ => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clk() -> PowerClock {
        PowerClock {
            vdd: 1.0,
            t_phase: 10e-9,
            t0: 0.0,
        }
    }

    #[test]
    fn power_clock_phases() {
        let c = SourceSpec::PowerClock(clk());
        assert_eq!(source_value(&c, 5e-9), 0.0);
        assert!((source_value(&c, 15e-9) - 0.5).abs() < 1e-12);
        assert_eq!(source_value(&c, 25e-9), 1.0);
        assert!((source_value(&c, 35e-9) - 0.5).abs() < 1e-12);
        assert!((source_value(&c, 45e-9)).abs() < 1e-12);
    }

    #[test]
    fn power_clock_offset() {
        let c = PowerClock { t0: 3e-9, ..clk() };
        assert_eq!(c.phase_at(2e-9), ClockPhase::Recovery);
        assert_eq!(c.phase_at(4e-9), ClockPhase::Wait);
        assert_eq!(c.phase_start(2, ClockPhase::Hold), 3e-9 + 40e-9 + 20e-9);
    }

    #[test]
    fn discharge_follows_wait() {
        let c = clk();
        assert_eq!(discharge_signal(5e-9, &c), 1.0);
        assert_eq!(discharge_signal(25e-9, &c), 0.0);
        for k in 0..50 {
            let t = k as f64 * 0.8e-9;
            assert_eq!(discharge_signal(t, &c), discharge_signal(t + 40e-9, &c));
        }
    }

    #[test]
    fn pwl_interpolates_and_clamps() {
        let s = SourceSpec::Pwl(vec![(1e-9, 0.0), (2e-9, 1.0), (4e-9, 0.0)]);
        assert_eq!(source_value(&s, 0.0), 0.0);
        assert!((source_value(&s, 1.5e-9) - 0.5).abs() < 1e-12);
        assert!((source_value(&s, 3e-9) - 0.5).abs() < 1e-12);
        assert_eq!(source_value(&s, 10e-9), 0.0);
        assert_eq!(source_value(&s, 2e-9), 1.0);
    }

    #[test]
    fn pulse_semantics() {
        let p = SourceSpec::Pulse(Pulse {
            v1: 0.0,
            v2: 1.0,
            delay: 1e-9,
            rise: 1e-9,
            fall: 2e-9,
            width: 3e-9,
            period: 10e-9,
        });
        assert_eq!(source_value(&p, 0.5e-9), 0.0);
        assert!((source_value(&p, 1.5e-9) - 0.5).abs() < 1e-12);
        assert_eq!(source_value(&p, 3e-9), 1.0);
        assert!((source_value(&p, 6e-9) - 0.5).abs() < 1e-12);
        assert_eq!(source_value(&p, 8e-9), 0.0);
        assert!((source_value(&p, 11.5e-9) - 0.5).abs() < 1e-9);
    }
}
