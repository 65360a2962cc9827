//! Reflection-channel heat engine.
//!
//! A static qubit sits in front of a closed gate that reflects every flying
//! qubit. Each flying qubit scatters, bounces off the gate, scatters again
//! (all internal bounces included) and returns to its reservoir, where it is
//! discarded. Repeating this with a polarized (FM) reservoir magnetizes the
//! static qubit; switching to an unpolarized (NM) reservoir demagnetizes it.

use std::fmt::{self, Write as _};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    bloch, inverse, spin_projector, trace_distance, von_neumann_entropy, BlochVector, CMatrix,
    DensityMatrix,
};
use crate::scatter::{qubit_block, unit_axis, ScatterParams};

/// Trace-preservation tolerance asserted on every interaction.
pub const TRACE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reservoir {
    Polarized { axis: [f64; 3] },
    Unpolarized,
}

impl Reservoir {
    pub fn polarized(axis: [f64; 3]) -> Result<Self> {
        Ok(Reservoir::Polarized {
            axis: unit_axis(axis)?,
        })
    }

    /// State of one flying qubit drawn from the reservoir.
    pub fn flying_state(&self) -> Result<CMatrix> {
        match *self {
            Reservoir::Polarized { axis } => Ok(spin_projector(unit_axis(axis)?)),
            Reservoir::Unpolarized => Ok(CMatrix::identity(2).scale_re(0.5)),
        }
    }

    /// The static-qubit state this reservoir drives towards.
    pub fn target(&self) -> Result<DensityMatrix> {
        match *self {
            Reservoir::Polarized { axis } => DensityMatrix::new(spin_projector(unit_axis(axis)?)),
            Reservoir::Unpolarized => Ok(DensityMatrix::maximally_mixed(2)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub params: ScatterParams,
    /// Round-trip phase `2kL` between the impurity and the closed gate.
    #[serde(default)]
    pub mirror_phase: f64,
    pub max_iters: usize,
    /// Trace distance to the target state at which a phase stops.
    pub convergence_tol: f64,
    /// Magnetization axis of the FM reservoir.
    #[serde(default = "z_axis")]
    pub fm_axis: [f64; 3],
}

fn z_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

impl EngineConfig {
    pub fn new(omega: f64) -> Self {
        EngineConfig {
            params: ScatterParams::new(omega),
            mirror_phase: 0.0,
            max_iters: 200,
            convergence_tol: 1e-6,
            fm_axis: z_axis(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        unit_axis(self.fm_axis)?;
        if !self.mirror_phase.is_finite() {
            return Err(Error::InvalidConfig("mirror phase must be finite".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig(
                "convergence tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Total reflection operator of the impurity backed by the closed gate,
/// `R = r + t′ m (𝕀 − r′ m)⁻¹ t` with `m = e^{i·mirror_phase} 𝕀₄`.
///
/// At `mirror_phase = π` the gate sits on a node of the flying wave and the
/// impurity decouples (`R = −𝕀`).
pub fn reflection_channel(params: &ScatterParams, mirror_phase: f64) -> Result<CMatrix> {
    params.validate()?;
    let b = qubit_block(params);
    let m = Complex64::from_polar(1.0, mirror_phase);
    let id = CMatrix::identity(4);
    let loop_inv = inverse(&(&id - &b.r_prime.scale(m)))?;
    let bounce = &(&b.t_prime.scale(m) * &loop_inv) * &b.t;
    Ok(&b.r + &bounce)
}

fn apply_channel(r: &CMatrix, rho_f: &CMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    rho.require_dim(2)?;
    let joint = rho_f.kron(rho.mat());
    let out = (&(r * &joint) * &r.adjoint()).trace_out_first(2, 2);
    let tr = out.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidTrace(tr.re));
    }
    DensityMatrix::new(out.hermitian_part())
}

/// One flying qubit from `reservoir` making a full round trip.
pub fn interact_once(
    rho: &DensityMatrix,
    reservoir: &Reservoir,
    config: &EngineConfig,
) -> Result<DensityMatrix> {
    let r = reflection_channel(&config.params, config.mirror_phase)?;
    apply_channel(&r, &reservoir.flying_state()?, rho)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Magnetize,
    Demagnetize,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Magnetize => "magnetize",
            Phase::Demagnetize => "demagnetize",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleStep {
    pub iteration: usize,
    pub phase: Phase,
    pub state: DensityMatrix,
    pub entropy: f64,
    pub bloch: BlochVector,
}

/// Outcome of one engine phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSummary {
    pub iterations: usize,
    pub converged: bool,
    /// Trace distance to the target when the phase stopped.
    pub residual: f64,
    pub final_entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleTrace {
    pub initial: DensityMatrix,
    pub steps: Vec<CycleStep>,
    pub magnetize: PhaseSummary,
    pub demagnetize: PhaseSummary,
}

impl CycleTrace {
    /// `S(end of NM phase) − S(end of FM phase)`, in nats.
    pub fn entropy_transferred(&self) -> f64 {
        self.demagnetize.final_entropy - self.magnetize.final_entropy
    }

    pub fn converged(&self) -> bool {
        self.magnetize.converged && self.demagnetize.converged
    }

    /// `iteration,phase,bloch_x,bloch_y,bloch_z,entropy_nats`, one row per
    /// interaction.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iteration,phase,bloch_x,bloch_y,bloch_z,entropy_nats\n");
        for s in &self.steps {
            let [x, y, z] = s.bloch.as_array();
            writeln!(out, "{},{},{x:.15e},{y:.15e},{z:.15e},{:.15e}", s.iteration, s.phase, s.entropy)
                .expect("writing to a String");
        }
        out
    }
}

fn run_phase(
    r: &CMatrix,
    reservoir: Reservoir,
    phase: Phase,
    start: DensityMatrix,
    config: &EngineConfig,
    steps: &mut Vec<CycleStep>,
) -> Result<(DensityMatrix, PhaseSummary)> {
    let target = reservoir.target()?;
    let rho_f = reservoir.flying_state()?;
    let mut rho = start;
    let mut residual = trace_distance(&rho, &target)?;
    let mut iterations = 0;
    while residual >= config.convergence_tol && iterations < config.max_iters {
        rho = apply_channel(r, &rho_f, &rho)?;
        iterations += 1;
        residual = trace_distance(&rho, &target)?;
        steps.push(CycleStep {
            iteration: steps.len() + 1,
            phase,
            entropy: von_neumann_entropy(&rho),
            bloch: bloch(&rho)?,
            state: rho.clone(),
        });
    }
    let summary = PhaseSummary {
        iterations,
        converged: residual < config.convergence_tol,
        residual,
        final_entropy: von_neumann_entropy(&rho),
    };
    Ok((rho, summary))
}

/// Magnetizes `initial` with the FM reservoir, then demagnetizes it with the
/// NM reservoir. Non-convergence is reported in the summaries, not raised.
pub fn run_cycle(initial: &DensityMatrix, config: &EngineConfig) -> Result<CycleTrace> {
    config.validate()?;
    initial.require_dim(2)?;
    let r = reflection_channel(&config.params, config.mirror_phase)?;
    let mut steps = Vec::new();
    let fm = Reservoir::polarized(config.fm_axis)?;
    let (mid, magnetize) = run_phase(&r, fm, Phase::Magnetize, initial.clone(), config, &mut steps)?;
    let (_, demagnetize) = run_phase(
        &r,
        Reservoir::Unpolarized,
        Phase::Demagnetize,
        mid,
        config,
        &mut steps,
    )?;
    Ok(CycleTrace {
        initial: initial.clone(),
        steps,
        magnetize,
        demagnetize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::random;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{LN_2, PI};

    #[test]
    fn reflection_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let p = ScatterParams::new(rng.gen_range(-3.0..3.0));
            let r = reflection_channel(&p, rng.gen_range(-PI..PI)).unwrap();
            assert!(r.unitarity_error() < 1e-10);
        }
    }

    #[test]
    fn zero_coupling_and_node_are_pure_phases() {
        let id = CMatrix::identity(4);
        let r = reflection_channel(&ScatterParams::new(0.0), 0.7).unwrap();
        assert!(r.max_abs_diff(&id.scale(Complex64::from_polar(1.0, 0.7))) < 1e-14);
        let r = reflection_channel(&ScatterParams::new(1.3), PI).unwrap();
        assert!(r.max_abs_diff(&id.scale_re(-1.0)) < 1e-12);
    }

    #[test]
    fn fixed_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cfg = EngineConfig {
            mirror_phase: 0.4,
            ..EngineConfig::new(0.3)
        };
        for _ in 0..10 {
            let axis = random::random_axis(&mut rng);
            let res = Reservoir::polarized(axis).unwrap();
            let aligned = res.target().unwrap();
            let out = interact_once(&aligned, &res, &cfg).unwrap();
            assert!(out.mat().max_abs_diff(aligned.mat()) < 1e-12);
        }
        let mixed = DensityMatrix::maximally_mixed(2);
        let out = interact_once(&mixed, &Reservoir::Unpolarized, &cfg).unwrap();
        assert!(out.mat().max_abs_diff(mixed.mat()) < 1e-12);

        let rho = random::random_mixed(2, &mut rng);
        let res = Reservoir::polarized([1.0, 0.0, 0.0]).unwrap();
        let out = interact_once(&rho, &res, &EngineConfig::new(0.0)).unwrap();
        assert!(out.mat().max_abs_diff(rho.mat()) < 1e-14);
    }

    #[test]
    fn demagnetization_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let cfg = EngineConfig::new(rng.gen_range(0.05..2.0));
            let mut rho = random::haar_pure(2, &mut rng);
            let mut norm = bloch(&rho).unwrap().norm();
            for _ in 0..5 {
                rho = interact_once(&rho, &Reservoir::Unpolarized, &cfg).unwrap();
                let n = bloch(&rho).unwrap().norm();
                assert!(n < norm);
                norm = n;
            }
        }
    }

    #[test]
    fn cycle_moves_entropy() {
        let cfg = EngineConfig::new(0.5);
        let trace = run_cycle(&DensityMatrix::maximally_mixed(2), &cfg).unwrap();
        assert!(trace.converged());
        let s = trace.entropy_transferred();
        assert!(s > 0.5 * LN_2 && s <= LN_2 + 1e-9, "{s}");
        assert!(trace.steps.iter().all(|st| st.entropy <= LN_2 + 1e-12));
        let csv = trace.to_csv();
        assert_eq!(csv.lines().count(), trace.steps.len() + 1);
        assert!(csv.lines().nth(1).unwrap().starts_with("1,magnetize,"));
    }

    #[test]
    fn decoupled_engine_does_nothing() {
        let trace = run_cycle(&DensityMatrix::maximally_mixed(2), &EngineConfig::new(0.0)).unwrap();
        assert!(!trace.magnetize.converged);
        assert_eq!(trace.entropy_transferred(), 0.0);
    }

    #[test]
    fn config_is_validated() {
        let bad = EngineConfig {
            max_iters: 0,
            ..EngineConfig::new(1.0)
        };
        assert!(run_cycle(&DensityMatrix::maximally_mixed(2), &bad).is_err());
        assert!(Reservoir::polarized([0.0, 0.0, 0.5]).is_err());
    }
}
