use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use mtjsim::engine::solve_linear;
use mtjsim::{
    build_gate, integrate_energy, parse_netlist, serialize_netlist, transient_run, DesignStyle, GateKind, TestbenchSpec,
    TransientConfig,
};
use mtjsim_bench::{dominant_system, rc_ladder};

fn lu(c: &mut Criterion) {
    let mut group = c.benchmark_group("lu");
    for n in [8, 16, 32] {
        let sys = dominant_system(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &sys, |b, sys| {
            b.iter(|| solve_linear(black_box(sys)).unwrap())
        });
    }
    group.finish();
}

fn parse(c: &mut Criterion) {
    let tb = TestbenchSpec::exhaustive(GateKind::FullAdder);
    let text = serialize_netlist(&build_gate(GateKind::FullAdder, DesignStyle::AdiabaticMtj, &tb).unwrap().netlist);
    c.bench_function("parse_fulladder_template", |b| b.iter(|| parse_netlist(black_box(&text)).unwrap()));
}

fn transient(c: &mut Criterion) {
    let ladder = rc_ladder(8, 1000);
    let cfg = TransientConfig::from_netlist(&ladder).unwrap();
    c.bench_function("rc_ladder_8x1000", |b| b.iter(|| transient_run(black_box(&ladder), &cfg).unwrap()));

    let mut tb = TestbenchSpec::exhaustive(GateKind::AndNand);
    tb.patterns.truncate(2);
    let gate = build_gate(GateKind::AndNand, DesignStyle::AdiabaticMtj, &tb).unwrap();
    let cfg = TransientConfig::from_netlist(&gate.netlist).unwrap();
    let mut group = c.benchmark_group("gate");
    group.sample_size(10);
    group.bench_function("and_adiabatic_two_cycles", |b| {
        b.iter(|| transient_run(black_box(&gate.netlist), &cfg).unwrap())
    });
    let result = transient_run(&gate.netlist, &cfg).unwrap();
    group.bench_function("energy_audit_and", |b| {
        b.iter(|| integrate_energy(black_box(&result), &gate.netlist, (0.0, tb.tstop())).unwrap())
    });
    group.finish();
}

criterion_group!(benches, lu, parse, transient);
criterion_main!(benches);
