use mtjsim::devices::Pulse;
use mtjsim::netlist::{format_value, parse_value, validate_netlist, ElementKind, Probe};
use mtjsim::{
    build_gate, parse_netlist, serialize_netlist, DesignStyle, GateKind, MtjConfig, MtjParams, Netlist, NetlistError,
    Polarity, PowerClock, SourceSpec, TestbenchSpec,
};
use proptest::prelude::*;

#[test]
fn element_lines() {
    let n = parse_netlist(
        "* examples\n\
         R1 a 0 2k\n\
         J1 x y RP=2k TMR=1.5 IC=50u TSW=5n STATE=AP\n\
         V1 clk 0 PCLK(1.0 10n 0)\n\
         R2 x 0 1\nR3 y 0 1\n",
    )
    .unwrap();
    match &n.element("R1").unwrap().kind {
        ElementKind::Resistor { n1, n2, ohms } => assert_eq!((n1.as_str(), n2.as_str(), *ohms), ("a", "0", 2000.0)),
        k => panic!("{k:?}"),
    }
    match &n.element("j1").unwrap().kind {
        ElementKind::Mtj {
            params, initial_state, ..
        } => {
            assert_eq!(params.rap(), 5e3);
            assert_eq!(*initial_state, MtjConfig::Antiparallel);
        }
        k => panic!("{k:?}"),
    }
    match &n.element("V1").unwrap().kind {
        ElementKind::VSource {
            spec: SourceSpec::PowerClock(c),
            ..
        } => assert_eq!((c.vdd, c.t_phase), (1.0, 10e-9)),
        k => panic!("{k:?}"),
    }
}

#[test]
fn unknown_leading_letter_is_rejected_with_line() {
    let err = parse_netlist("R1 a 0 1k\n\nX1 a 0 foo\n").unwrap_err();
    assert_eq!(err.line(), Some(3));
    let err = parse_netlist("R1 a 0 1k\nL1 a 0 1n\n").unwrap_err();
    assert_eq!(err.line(), Some(2));
}

#[test]
fn parse_errors() {
    assert!(matches!(
        parse_netlist("R1 a 0 1k\nr1 a 0 2k\n").unwrap_err(),
        NetlistError::DuplicateName { line: 2, .. }
    ));
    assert!(matches!(
        parse_netlist("M1 d g 0 N FOO=1\n").unwrap_err(),
        NetlistError::UnknownParameter { line: 1, .. }
    ));
    assert_eq!(parse_netlist("R1 a b 1k\n").unwrap_err(), NetlistError::MissingGround);
    assert!(parse_netlist("V1 a 0 PWL(0 0 1n)\n").is_err());
    assert!(parse_netlist("V1 a 0 PWL(1n 0 1n 1)\n").is_err());
}

#[test]
fn validation_diagnostics() {
    let mut n = Netlist::new("bad");
    n.resistor("R1", "a", "b", 1e3);
    let d = validate_netlist(&n);
    assert_eq!(d.len(), 1);
    assert!(d[0].message.contains("ground"));

    let mut n = Netlist::new("zero cap");
    n.resistor("R1", "a", "0", 1e3).capacitor("C1", "a", "0", 0.0);
    let d = validate_netlist(&n);
    assert_eq!(d.len(), 1);
    assert_eq!(d[0].element.as_deref(), Some("C1"));
}

#[test]
fn empty_netlist_round_trips() {
    let mut n = Netlist::new("empty");
    n.tran(1e-12, 1e-9);
    let text = serialize_netlist(&n);
    assert_eq!(text, ".title empty\n.tran 1e-12 1e-9\n.end\n");
    assert_eq!(parse_netlist(&text).unwrap(), n);
}

#[test]
fn suffix_scaling() {
    let table = [("f", -15), ("p", -12), ("n", -9), ("u", -6), ("m", -3), ("k", 3), ("meg", 6), ("g", 9)];
    for (s, exp) in table {
        // Exact means the same double as the decimal literal.
        let want: f64 = format!("7e{exp}").parse().unwrap();
        assert_eq!(parse_value(&format!("7{s}")), Some(want), "{s}");
        assert_eq!(parse_value(&format!("7{}", s.to_uppercase())), Some(want), "{s}");
    }
    assert_eq!(parse_value("k"), None);
    assert_eq!(parse_value("1x"), None);
}

#[test]
fn every_template_round_trips_and_validates() {
    for kind in GateKind::ALL {
        for style in [DesignStyle::AdiabaticMtj, DesignStyle::BaselineMtj] {
            let t = build_gate(kind, style, &TestbenchSpec::exhaustive(kind)).unwrap();
            assert!(validate_netlist(&t.netlist).is_empty(), "{kind} {style}");
            let text = serialize_netlist(&t.netlist);
            assert_eq!(parse_netlist(&text).unwrap(), t.netlist, "{kind} {style}");
            assert_eq!(serialize_netlist(&parse_netlist(&text).unwrap()), text);
        }
    }
}

fn value() -> impl Strategy<Value = f64> {
    (1u32..1000, -15i32..10).prop_map(|(m, e)| m as f64 * 10f64.powi(e) / 7.0)
}

fn node() -> impl Strategy<Value = String> {
    prop_oneof![Just("0".to_string()), "[a-z][a-z0-9_]{0,4}"]
}

fn spec() -> impl Strategy<Value = SourceSpec> {
    prop_oneof![
        value().prop_map(SourceSpec::Dc),
        prop::collection::vec(value(), 1..5).prop_map(|vs| {
            SourceSpec::Pwl(vs.iter().enumerate().map(|(k, v)| (k as f64 * 1.5e-9, *v)).collect())
        }),
        (value(), value(), value()).prop_map(|(a, b, c)| SourceSpec::Pulse(Pulse {
            v1: 0.0,
            v2: a,
            delay: b,
            rise: c,
            fall: c,
            width: b,
            period: 0.0,
        })),
        (value(), value()).prop_map(|(vdd, tph)| SourceSpec::PowerClock(PowerClock { vdd, t_phase: tph, t0: 0.0 })),
    ]
}

#[derive(Debug, Clone)]
enum Item {
    R(String, String, f64),
    C(String, String, f64, Option<f64>),
    V(String, String, SourceSpec),
    I(String, String, SourceSpec),
    M(String, String, String, bool),
    J(String, String, f64, bool),
}

fn item() -> impl Strategy<Value = Item> {
    prop_oneof![
        (node(), node(), value()).prop_map(|(a, b, v)| Item::R(a, b, v)),
        (node(), node(), value(), prop::option::of(value())).prop_map(|(a, b, v, ic)| Item::C(a, b, v, ic)),
        (node(), node(), spec()).prop_map(|(a, b, s)| Item::V(a, b, s)),
        (node(), node(), spec()).prop_map(|(a, b, s)| Item::I(a, b, s)),
        (node(), node(), node(), any::<bool>()).prop_map(|(d, g, s, p)| Item::M(d, g, s, p)),
        (node(), node(), value(), any::<bool>()).prop_map(|(a, b, rp, ap)| Item::J(a, b, rp, ap)),
    ]
}

fn assemble(items: &[Item], tran: Option<(f64, f64)>) -> Netlist {
    let mut n = Netlist::new("generated");
    for (k, it) in items.iter().enumerate() {
        match it {
            Item::R(a, b, v) => {
                n.resistor(&format!("R{k}"), a, b, *v);
            }
            Item::C(a, b, v, ic) => match ic {
                Some(ic) => {
                    n.capacitor_ic(&format!("C{k}"), a, b, *v, *ic);
                }
                None => {
                    n.capacitor(&format!("C{k}"), a, b, *v);
                }
            },
            Item::V(a, b, s) => {
                n.vsource(&format!("V{k}"), a, b, s.clone());
            }
            Item::I(a, b, s) => {
                n.isource(&format!("I{k}"), a, b, s.clone());
            }
            Item::M(d, g, s, p) => {
                n.mosfet(&format!("M{k}"), d, g, s, if *p { Polarity::P } else { Polarity::N });
            }
            Item::J(a, b, rp, ap) => {
                let params = MtjParams { rp: *rp, ..MtjParams::default() };
                let state = if *ap { MtjConfig::Antiparallel } else { MtjConfig::Parallel };
                n.mtj(&format!("J{k}"), a, b, params, state);
            }
        }
    }
    // Tie the first node to ground so that every generated circuit has one.
    n.resistor("Rgnd", &n.nodes.get(1).cloned().unwrap_or_else(|| "z".into()), "0", 1.0);
    if let Some((dt, tstop)) = tran {
        n.tran(dt, tstop);
    }
    let probes: Vec<Probe> = n.nodes.iter().skip(1).take(2).map(|s| Probe::Voltage(s.clone())).collect();
    for p in probes {
        n.record(p);
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_inverts_serialize(
        items in prop::collection::vec(item(), 0..12),
        tran in prop::option::of((1u32..100, 101u32..1000)),
    ) {
        let n = assemble(&items, tran.map(|(a, b)| (a as f64 * 1e-12, b as f64 * 1e-12)));
        // Generated circuits may break electrical invariants (a MOSFET or MTJ
        // with coincident terminals); only valid ones must round-trip.
        prop_assume!(validate_netlist(&n).is_empty());
        let text = serialize_netlist(&n);
        prop_assert_eq!(parse_netlist(&text).unwrap(), n);
    }

    #[test]
    fn values_format_losslessly(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(parse_value(&format_value(v)), Some(v));
    }
}
