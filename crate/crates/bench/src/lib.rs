//! Fixtures shared by the criterion benchmarks in `benches/`.

use mtjsim::engine::LinearSystem;
use mtjsim::{Netlist, SourceSpec};

/// Diagonally dominant `n x n` system with a deterministic fill, so every
/// size solves without pivot trouble.
pub fn dominant_system(n: usize) -> LinearSystem {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        2.0 * n as f64
                    } else {
                        ((i * 7 + j * 13) % 11) as f64 / 11.0 - 0.5
                    }
                })
                .collect()
        })
        .collect();
    let b = (0..n).map(|i| (i % 5) as f64 - 2.0).collect();
    LinearSystem::from_rows(&rows, b)
}

/// `stages` RC sections driven by a 1 V ramp, simulated for `steps` steps.
pub fn rc_ladder(stages: usize, steps: usize) -> Netlist {
    let mut n = Netlist::new(format!("rc ladder x{stages}"));
    n.vsource("V1", "n0", "0", SourceSpec::Pwl(vec![(0.0, 0.0), (1e-9, 1.0)]));
    for k in 0..stages {
        let (a, b) = (format!("n{k}"), format!("n{}", k + 1));
        n.resistor(&format!("R{k}"), &a, &b, 1e3)
            .capacitor(&format!("C{k}"), &b, "0", 1e-13);
    }
    n.tran(1e-12, steps as f64 * 1e-12);
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use mtjsim::engine::solve_linear;
    use mtjsim::{transient_run, TransientConfig};

    #[test]
    fn fixtures_are_usable() {
        let sys = dominant_system(16);
        let x = solve_linear(&sys).unwrap();
        assert!(sys.residual(&x).iter().all(|r| r.abs() < 1e-12));
        let n = rc_ladder(4, 50);
        let res = transient_run(&n, &TransientConfig::from_netlist(&n).unwrap()).unwrap();
        assert_eq!(res.len(), 51);
    }
}
