use mtjsim::devices::{
    capacitor_companion, discharge_signal, mosfet_ids, mtj_resistance, mtj_update, source_value, terminal_current,
    Integration, MtjState, Pulse,
};
use mtjsim::{MosfetParams, MtjConfig, MtjParams, Polarity, PowerClock, SourceSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

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
fn square_law_examples() {
    let p = card(0.5, 2e-4, 0.0);
    assert_eq!(mosfet_ids(0.3, 1.0, &card(0.4, 2e-4, 0.0)).id, 0.0);
    assert!((mosfet_ids(1.0, 1.0, &p).id - 25e-6).abs() < 1e-18);
    assert!((mosfet_ids(1.0, 0.1, &p).id - 9e-6).abs() < 1e-18);
}

#[test]
fn derivatives_match_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let h = 1e-6;
    for _ in 0..100 {
        let p = card(rng.gen_range(0.2..0.6), rng.gen_range(1e-4..2e-3), rng.gen_range(0.0..0.2));
        let vgs = rng.gen_range(0.0..1.5);
        let vds = rng.gen_range(0.0..1.5);
        let at = mosfet_ids(vgs, vds, &p);
        let gm = (mosfet_ids(vgs + h, vds, &p).id - mosfet_ids(vgs - h, vds, &p).id) / (2.0 * h);
        let gds = (mosfet_ids(vgs, vds + h, &p).id - mosfet_ids(vgs, vds - h, &p).id) / (2.0 * h);
        // Kinks at the region boundaries only disturb second derivatives;
        // the floor covers points sitting right at cutoff.
        let close = |fd: f64, exact: f64| (fd - exact).abs() <= 1e-4 * exact.abs() + 1e-12;
        assert!(close(gm, at.gm), "gm {gm} vs {} at vgs={vgs} vds={vds}", at.gm);
        assert!(close(gds, at.gds), "gds {gds} vs {} at vgs={vgs} vds={vds}", at.gds);
    }
}

#[test]
fn terminal_derivatives_match_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = 1e-6;
    for _ in 0..100 {
        let pol = if rng.gen_bool(0.5) { Polarity::N } else { Polarity::P };
        let p = MosfetParams::default_for(pol);
        let (vd, vg, vs) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        let t = terminal_current(pol, vd, vg, vs, &p);
        let fd = |dd: f64, dg: f64, ds: f64| {
            (terminal_current(pol, vd + dd, vg + dg, vs + ds, &p).ids
                - terminal_current(pol, vd - dd, vg - dg, vs - ds, &p).ids)
                / (2.0 * h)
        };
        let close = |fd: f64, exact: f64| (fd - exact).abs() <= 1e-4 * exact.abs() + 1e-11;
        assert!(close(fd(h, 0.0, 0.0), t.d_vd));
        assert!(close(fd(0.0, h, 0.0), t.d_vg));
        assert!(close(fd(0.0, 0.0, h), t.d_vs));
    }
}

#[test]
fn swapped_terminals_reverse_current() {
    let p = MosfetParams::nmos_default();
    let fwd = terminal_current(Polarity::N, 0.8, 1.0, 0.1, &p).ids;
    let rev = terminal_current(Polarity::N, 0.1, 1.0, 0.8, &p).ids;
    assert!(fwd > 0.0);
    assert!((fwd + rev).abs() < 1e-18);
}

proptest! {
    #[test]
    fn current_continuous_at_saturation_edge(
        vgs in 0.0f64..2.0, vt0 in 0.1f64..0.8, beta in 1e-5f64..1e-2, lambda in 0.0f64..0.3,
    ) {
        let p = card(vt0, beta, lambda);
        let vov = vgs - vt0;
        prop_assume!(vov > 0.0);
        let edge = vov;
        let below = mosfet_ids(vgs, edge * (1.0 - 1e-15), &p).id;
        let at = mosfet_ids(vgs, edge, &p).id;
        prop_assert!((below - at).abs() <= 1e-15);
    }

    #[test]
    fn current_monotone_in_vds(
        vgs in 0.0f64..2.0, a in 0.0f64..2.0, b in 0.0f64..2.0, lambda in 0.0f64..0.3,
    ) {
        let p = card(0.4, 4e-4, lambda);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(mosfet_ids(vgs, lo, &p).id <= mosfet_ids(vgs, hi, &p).id);
    }

    #[test]
    fn power_clock_periodic_and_bounded(
        t in 0.0f64..1e-6, vdd in 0.1f64..3.0, tph in 1e-9f64..1e-7, t0 in 0.0f64..1e-8,
    ) {
        let c = PowerClock { vdd, t_phase: tph, t0 };
        let v = c.value(t);
        prop_assert!((0.0..=vdd).contains(&v));
        prop_assert!((v - c.value(t + c.period())).abs() <= 1e-9 * vdd);
        let d = discharge_signal(t, &c);
        prop_assert!(d == 0.0 || d == vdd);
    }

    #[test]
    fn power_clock_continuous(t in 0.0f64..1e-6, tph in 1e-9f64..1e-7) {
        let c = PowerClock { vdd: 1.0, t_phase: tph, t0: 0.0 };
        let eps = tph * 1e-9;
        // Slope is at most vdd / t_phase.
        prop_assert!((c.value(t + eps) - c.value(t)).abs() <= 1.01 * eps / tph + 1e-12);
    }

    #[test]
    fn mtj_update_deterministic(i in -1e-4f64..1e-4, dt in 1e-12f64..1e-8, ap in any::<bool>()) {
        let p = MtjParams::default();
        let cfg = if ap { MtjConfig::Antiparallel } else { MtjConfig::Parallel };
        let s = MtjState::new(cfg);
        let a = mtj_update(&s, i, dt, &p);
        prop_assert_eq!(a, mtj_update(&s, i, dt, &p));
        prop_assert!(a.dwell_pos >= 0.0 && a.dwell_neg >= 0.0);
        prop_assert!(a.dwell_pos == 0.0 || a.dwell_neg == 0.0);
        let r = mtj_resistance(&a, &p);
        prop_assert!(r == p.rp || r == p.rap());
    }
}

#[test]
fn clock_samples() {
    let c = PowerClock {
        vdd: 1.0,
        t_phase: 10e-9,
        t0: 0.0,
    };
    let spec = SourceSpec::PowerClock(c);
    assert_eq!(source_value(&spec, 5e-9), 0.0);
    assert!((source_value(&spec, 15e-9) - 0.5).abs() < 1e-12);
    assert_eq!(source_value(&spec, 25e-9), 1.0);
    assert!((source_value(&spec, 35e-9) - 0.5).abs() < 1e-12);
    assert_eq!(discharge_signal(5e-9, &c), 1.0);
    assert_eq!(discharge_signal(25e-9, &c), 0.0);
}

#[test]
fn pwl_and_pulse() {
    let pwl = SourceSpec::Pwl(vec![(1.0, 0.0), (3.0, 2.0)]);
    assert_eq!(source_value(&pwl, 0.0), 0.0);
    assert_eq!(source_value(&pwl, 2.0), 1.0);
    assert_eq!(source_value(&pwl, 9.0), 2.0);
    let pulse = SourceSpec::Pulse(Pulse {
        v1: 0.0,
        v2: 1.0,
        delay: 1.0,
        rise: 1.0,
        fall: 1.0,
        width: 2.0,
        period: 10.0,
    });
    assert_eq!(source_value(&pulse, 0.5), 0.0);
    assert_eq!(source_value(&pulse, 1.5), 0.5);
    assert_eq!(source_value(&pulse, 3.0), 1.0);
    assert_eq!(source_value(&pulse, 4.5), 0.5);
    assert_eq!(source_value(&pulse, 13.0), 1.0);
}

#[test]
fn companion_examples() {
    let trap = capacitor_companion(1e-12, 0.0, 0.0, 1e-9, Integration::Trapezoidal);
    assert!((trap.geq - 2e-3).abs() < 1e-15 && trap.ieq == 0.0);
    let be = capacitor_companion(1e-12, 0.0, 0.0, 1e-9, Integration::BackwardEuler);
    assert!((be.geq - 1e-3).abs() < 1e-15 && be.ieq == 0.0);
    let be = capacitor_companion(1e-12, 1.0, 0.0, 1e-9, Integration::BackwardEuler);
    assert!((be.ieq + 1e-3).abs() < 1e-15);
}

fn hold(mut s: MtjState, i: f64, total: f64, dt: f64, p: &MtjParams) -> MtjState {
    for _ in 0..(total / dt).round() as usize {
        s = mtj_update(&s, i, dt, p);
    }
    s
}

#[test]
fn switching_threshold_and_dwell() {
    let p = MtjParams::default();
    let dt = 10e-12;
    let ap = MtjState::new(MtjConfig::Antiparallel);
    let pp = MtjState::new(MtjConfig::Parallel);
    assert_eq!(hold(ap, 1.2 * p.ic, p.tsw, dt, &p).config, MtjConfig::Parallel);
    assert_eq!(hold(pp, -1.2 * p.ic, p.tsw, dt, &p).config, MtjConfig::Antiparallel);
    // One step short of tsw is not enough.
    assert_eq!(hold(ap, 1.2 * p.ic, p.tsw - dt, dt, &p).config, MtjConfig::Antiparallel);
    assert_eq!(hold(ap, 0.8 * p.ic, 10.0 * p.tsw, dt, &p).config, MtjConfig::Antiparallel);
    assert_eq!(hold(pp, -0.8 * p.ic, 10.0 * p.tsw, dt, &p).config, MtjConfig::Parallel);
    assert_eq!(hold(pp, 1.2 * p.ic, 3.0 * p.tsw, dt, &p), pp);
}
