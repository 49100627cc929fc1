use super::lu::{lu_solve_in_place, LinearSystem};
use super::mna::{CapState, Circuit, ElementSample, StepKind};
use super::{EngineError, RunStats, TransientConfig, TransientResult};
use crate::devices::{mtj_update, Integration, MtjState};
use crate::netlist::Netlist;

/// Converged solution of one Newton solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
}

/// One simulation context: compiled circuit plus the reactive and magnetic
/// state carried between accepted steps.
#[derive(Debug, Clone)]
pub struct Simulator {
    circuit: Circuit,
    cfg: TransientConfig,
    caps: Vec<CapState>,
    mtj: Vec<MtjState>,
    source_scale: f64,
    sys: LinearSystem,
    work: Vec<f64>,
}

impl Simulator {
    pub fn new(netlist: &Netlist, cfg: TransientConfig) -> Result<Self, EngineError> {
        cfg.validate()?;
        let circuit = Circuit::compile(netlist, cfg.gmin)?;
        let caps = vec![CapState::default(); circuit.n_cap_slots];
        let mtj = circuit.mtj_initial.iter().map(|&c| MtjState::new(c)).collect();
        Ok(Simulator {
            circuit,
            cfg,
            caps,
            mtj,
            source_scale: 1.0,
            sys: LinearSystem::zeros(0),
            work: Vec::new(),
        })
    }

    pub fn config(&self) -> &TransientConfig {
        &self.cfg
    }

    /// Non-ground node names in unknown order.
    pub fn node_names(&self) -> &[String] {
        &self.circuit.node_names[1..]
    }

    pub fn mtj_states(&self) -> &[MtjState] {
        &self.mtj
    }

    pub fn n_unknowns(&self, kind: StepKind) -> usize {
        self.circuit.n_unknowns(kind)
    }

    /// Linearised MNA system around `x` at time `t` using the current
    /// reactive and MTJ state.
    pub fn assemble(&self, x: &[f64], t: f64, kind: StepKind) -> LinearSystem {
        let mut sys = LinearSystem::zeros(self.circuit.n_unknowns(kind));
        self.circuit
            .assemble_into(&mut sys, x, t, kind, &self.caps, &self.mtj, self.source_scale);
        sys
    }

    fn prepare(&mut self, kind: StepKind) {
        let n = self.circuit.n_unknowns(kind);
        if self.sys.n != n {
            self.sys = LinearSystem::zeros(n);
        }
    }

    fn assemble_cached(&mut self, x: &[f64], t: f64, kind: StepKind) {
        self.prepare(kind);
        self.circuit.assemble_into(
            &mut self.sys,
            x,
            t,
            kind,
            &self.caps,
            &self.mtj,
            self.source_scale,
        );
    }

    fn converged(&self, old: &[f64], new: &[f64]) -> bool {
        let nv = self.circuit.n_node_unknowns();
        old.iter().zip(new).enumerate().all(|(k, (a, b))| {
            let abstol = if k < nv {
                self.cfg.newton_abstol
            } else {
                self.cfg.newton_abstol_current
            };
            (b - a).abs() <= abstol + self.cfg.newton_reltol * a.abs().max(b.abs())
        })
    }

    /// Newton-Raphson from `guess`. A circuit without nonlinear devices is
    /// solved exactly by the first linear solve.
    pub fn newton_solve(
        &mut self,
        guess: &[f64],
        t: f64,
        kind: StepKind,
    ) -> Result<NewtonOutcome, EngineError> {
        let mut x = guess.to_vec();
        x.resize(self.circuit.n_unknowns(kind), 0.0);
        for it in 1..=self.cfg.newton_itmax {
            self.assemble_cached(&x, t, kind);
            self.work.clear();
            self.work.extend_from_slice(&self.sys.b);
            lu_solve_in_place(self.sys.n, &mut self.sys.a, &mut self.work)?;
            if self.work.iter().any(|v| !v.is_finite()) {
                break;
            }
            let done = !self.circuit.nonlinear || self.converged(&x, &self.work);
            std::mem::swap(&mut x, &mut self.work);
            if done {
                return Ok(NewtonOutcome { x, iterations: it });
            }
        }
        Err(EngineError::NonConvergence { time: t })
    }

    /// Operating point at `t = 0`. Falls back to ramping every source up from
    /// zero when a direct solve fails.
    pub fn dc_operating_point(&mut self) -> Result<NewtonOutcome, EngineError> {
        let n = self.circuit.n_unknowns(StepKind::Dc);
        let zero = vec![0.0; n];
        match self.newton_solve(&zero, 0.0, StepKind::Dc) {
            Ok(sol) => Ok(sol),
            Err(EngineError::NonConvergence { .. }) => {
                let mut x = zero;
                let mut iterations = 0;
                for k in 1..=20 {
                    self.source_scale = k as f64 / 20.0;
                    let step = self.newton_solve(&x, 0.0, StepKind::Dc);
                    self.source_scale = 1.0;
                    let step = step?;
                    iterations += step.iterations;
                    x = step.x;
                }
                Ok(NewtonOutcome { x, iterations })
            }
            Err(e) => Err(e),
        }
    }

    /// Largest KCL imbalance over the node rows at a solved point.
    fn kcl_residual(&mut self, x: &[f64], t: f64, kind: StepKind) -> f64 {
        self.assemble_cached(x, t, kind);
        let nv = self.circuit.n_node_unknowns();
        self.sys.residual(x)[..nv]
            .iter()
            .fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Runs the transient analysis to `tstop`.
    pub fn run(mut self) -> Result<TransientResult, EngineError> {
        let c = &self.circuit;
        let nv = c.n_node_unknowns();
        let nb = c.vsource_names.len();
        let n_el = c.elements.len();
        let mut res = TransientResult {
            times: Vec::new(),
            node_names: c.node_names[1..].to_vec(),
            node_voltages: vec![Vec::new(); nv],
            vsource_names: c.vsource_names.clone(),
            vsource_currents: vec![Vec::new(); nb],
            mtj_names: c.mtj_names.clone(),
            mtj_state_trace: vec![Vec::new(); c.mtj_names.len()],
            element_names: c.element_names.clone(),
            element_power_trace: vec![Vec::new(); n_el],
            element_dissipation_trace: vec![Vec::new(); n_el],
            kcl_residual: Vec::new(),
            max_branch_current: Vec::new(),
            stats: RunStats::default(),
        };
        let mut samples = vec![ElementSample::default(); n_el];
        let mut caps_next = vec![CapState::default(); c.n_cap_slots];

        let dc = self.dc_operating_point()?;
        res.stats.newton_iterations += dc.iterations;
        self.caps = self.circuit.initial_caps(&dc.x);
        caps_next.clone_from(&self.caps);
        let kcl = self.kcl_residual(&dc.x, 0.0, StepKind::Dc);
        self.circuit.sample(
            &dc.x,
            0.0,
            StepKind::Dc,
            &self.caps,
            &self.mtj,
            &mut caps_next,
            &mut samples,
        );
        self.record(&mut res, 0.0, &dc.x, &samples, kcl);
        let mut x: Vec<f64> = dc.x[..nv + nb].to_vec();

        let (dt, tstop) = (self.cfg.dt, self.cfg.tstop);
        let n_steps = ((tstop / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let mut t = 0.0;
        let mut use_be = true;
        for k in 1..=n_steps {
            let target = if k == n_steps { tstop } else { k as f64 * dt };
            let mut h = target - t;
            let mut halvings = 0;
            while t < target {
                let step_h = h.min(target - t);
                let t_new = if step_h >= target - t { target } else { t + step_h };
                let method = if use_be {
                    Integration::BackwardEuler
                } else {
                    self.cfg.integration
                };
                let kind = StepKind::Transient { h: t_new - t, method };
                match self.newton_solve(&x, t_new, kind) {
                    Ok(sol) => {
                        res.stats.newton_iterations += sol.iterations;
                        res.stats.accepted_steps += 1;
                        let kcl = self.kcl_residual(&sol.x, t_new, kind);
                        self.circuit.sample(
                            &sol.x,
                            t_new,
                            kind,
                            &self.caps,
                            &self.mtj,
                            &mut caps_next,
                            &mut samples,
                        );
                        std::mem::swap(&mut self.caps, &mut caps_next);
                        for (idx, i, p) in self.circuit.mtj_currents(&sol.x, &self.mtj) {
                            self.mtj[idx] = mtj_update(&self.mtj[idx], i, t_new - t, &p);
                        }
                        self.record(&mut res, t_new, &sol.x, &samples, kcl);
                        x = sol.x;
                        t = t_new;
                        use_be = false;
                    }
                    Err(EngineError::NonConvergence { .. }) => {
                        res.stats.rejected_steps += 1;
                        halvings += 1;
                        if halvings > self.cfg.max_dt_halvings {
                            return Err(EngineError::NonConvergence { time: t_new });
                        }
                        h = step_h / 2.0;
                        use_be = true;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(res)
    }

    fn record(
        &self,
        res: &mut TransientResult,
        t: f64,
        x: &[f64],
        samples: &[ElementSample],
        kcl: f64,
    ) {
        let nv = self.circuit.n_node_unknowns();
        res.times.push(t);
        for (trace, v) in res.node_voltages.iter_mut().zip(x) {
            trace.push(*v);
        }
        for (trace, i) in res.vsource_currents.iter_mut().zip(&x[nv..]) {
            trace.push(*i);
        }
        for (trace, s) in res.mtj_state_trace.iter_mut().zip(&self.mtj) {
            trace.push(s.config);
        }
        let mut max_i: f64 = 0.0;
        for (k, s) in samples.iter().enumerate() {
            res.element_power_trace[k].push(s.absorbed);
            res.element_dissipation_trace[k].push(s.dissipated);
            max_i = max_i.max(s.current.abs());
        }
        res.kcl_residual.push(kcl);
        res.max_branch_current.push(max_i);
    }
}

/// Simulates `netlist` from its operating point at `t = 0` to `cfg.tstop`.
pub fn transient_run(netlist: &Netlist, cfg: &TransientConfig) -> Result<TransientResult, EngineError> {
    Simulator::new(netlist, *cfg)?.run()
}
