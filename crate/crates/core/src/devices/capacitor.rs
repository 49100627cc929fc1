use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Integration {
    Trapezoidal,
    BackwardEuler,
}

/// Norton equivalent of a capacitor over one step: `i = geq * v + ieq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Companion {
    pub geq: f64,
    pub ieq: f64,
}

pub fn capacitor_companion(
    c: f64,
    v_prev: f64,
    i_prev: f64,
    dt: f64,
    method: Integration,
) -> Companion {
    match method {
        Integration::Trapezoidal => {
            let geq = 2.0 * c / dt;
            Companion {
                geq,
                ieq: -geq * v_prev - i_prev,
            }
        }
        Integration::BackwardEuler => {
            let geq = c / dt;
            Companion {
                geq,
                ieq: -geq * v_prev,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_values() {
        let t = capacitor_companion(1e-12, 0.0, 0.0, 1e-9, Integration::Trapezoidal);
        assert!((t.geq - 2e-3).abs() < 1e-18);
        assert_eq!(t.ieq, 0.0);

        let b = capacitor_companion(1e-12, 0.0, 0.0, 1e-9, Integration::BackwardEuler);
        assert!((b.geq - 1e-3).abs() < 1e-18);
        assert_eq!(b.ieq, 0.0);

        let b = capacitor_companion(1e-12, 1.0, 0.0, 1e-9, Integration::BackwardEuler);
        assert!((b.ieq + 1e-3).abs() < 1e-18);
    }

    #[test]
    fn trapezoidal_carries_previous_current() {
        let t = capacitor_companion(1e-12, 0.5, 2e-4, 1e-9, Integration::Trapezoidal);
        assert!((t.ieq - (-1e-3 - 2e-4)).abs() < 1e-18);
    }
}
