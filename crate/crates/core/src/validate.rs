//! Invariant suites run by `flyqubit validate`.
//!
//! Each suite compares a closed form or a symmetry against the full matrix
//! computation on seeded random inputs and reports the largest deviation.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{interact_once, reflection_channel, EngineConfig, Reservoir};
use crate::error::Result;
use crate::gates::{conjugate_observable, GateSequence};
use crate::qmat::{
    decompose, random, spin_projector, trace_distance, CMatrix, DensityMatrix, PauliCoeffs,
};
use crate::scatter::{
    frozen_block, frozen_pair_block, frozen_pair_pt, pt_unpolarized_closed_form, qubit_block,
    qubit_single_pt_closed, qubit_t_single, qubit_t_single_closed, transmission_probability,
    two_qubit_block, unpolarized_input, FrozenSpin, ScatterParams,
};
use crate::tomo::{measure_plan, plan_standard, reconstruct, reconstruct_pure, Mode};

const SEED: u64 = 20_240_601;

/// Signature of the two-qubit unpolarized closed form under test.
pub type ClosedForm = fn(&ScatterParams, &DensityMatrix) -> Result<f64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

struct Suite {
    name: &'static str,
    tolerance: f64,
    cases: usize,
    max_error: f64,
}

impl Suite {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Suite {
            name,
            tolerance,
            cases: 0,
            max_error: 0.0,
        }
    }

    fn check(&mut self, err: f64) {
        self.cases += 1;
        // NaN must fail the suite
        if err.is_nan() || err > self.max_error {
            self.max_error = if err.is_nan() { f64::INFINITY } else { err };
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.to_string(),
            cases: self.cases,
            max_error: self.max_error,
            tolerance: self.tolerance,
            passed: self.cases > 0 && self.max_error <= self.tolerance,
        }
    }
}

fn rng(offset: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED + offset)
}

fn frozen_single() -> Result<SuiteResult> {
    let mut s = Suite::new("frozen_single_isotropy", 1e-12);
    let mut rng = rng(1);
    for _ in 0..100 {
        let p = ScatterParams::new(rng.gen_range(-5.0..5.0));
        let spin = FrozenSpin::new(random::random_axis(&mut rng))?;
        let t = frozen_block(&p, &spin).t;
        let want = CMatrix::identity(2).scale_re(1.0 / (1.0 + p.omega * p.omega));
        s.check((&t.adjoint() * &t).max_abs_diff(&want));
    }
    Ok(s.finish())
}

fn frozen_pair() -> Result<SuiteResult> {
    let mut s = Suite::new("frozen_pair_closed_form", 1e-10);
    for i in 0..20 {
        for j in 0..20 {
            let p = ScatterParams::new(0.1 + 0.2 * i as f64);
            let theta = PI * j as f64 / 19.0;
            let block = frozen_pair_block(&p, theta, 0.3)?;
            let pt = (&block.t.adjoint() * &block.t).trace().re / 2.0;
            s.check((pt - frozen_pair_pt(&p, theta)?).abs());
        }
    }
    Ok(s.finish())
}

fn qubit_single() -> Result<SuiteResult> {
    let mut s = Suite::new("qubit_single_closed_form", 1e-10);
    let mut rng = rng(3);
    let up = DensityMatrix::ground(2);
    for _ in 0..20 {
        let p = ScatterParams::new(rng.gen_range(-4.0..4.0));
        s.check(qubit_t_single(&p).max_abs_diff(&qubit_t_single_closed(p.omega)));
        let theta = rng.gen_range(0.0..PI);
        let stat = DensityMatrix::new(spin_projector([theta.sin(), 0.0, theta.cos()]))?;
        let pt = transmission_probability(&qubit_block(&p), &up.kron(&stat))?;
        s.check((pt - qubit_single_pt_closed(p.omega, theta)).abs());
    }
    Ok(s.finish())
}

fn two_qubit(closed: ClosedForm) -> Result<SuiteResult> {
    let mut s = Suite::new("two_qubit_closed_form", 1e-10);
    let mut rng = rng(4);
    for _ in 0..200 {
        let p = ScatterParams::new(rng.gen_range(0.0..4.0));
        let rho = random::random_mixed(4, &mut rng);
        let oracle = transmission_probability(&two_qubit_block(&p)?, &unpolarized_input(&rho))?;
        s.check((oracle - closed(&p, &rho)?).abs());
    }
    for k in 1..=50 {
        let p = ScatterParams::new(0.1 * k as f64);
        s.check((closed(&p, &DensityMatrix::singlet())? - 1.0).abs());
    }
    Ok(s.finish())
}

fn unitarity() -> Result<SuiteResult> {
    let mut s = Suite::new("s_matrix_unitarity", 1e-10);
    let mut rng = rng(5);
    for _ in 0..50 {
        let p = ScatterParams::with_kd(rng.gen_range(-3.0..3.0), rng.gen_range(-PI..PI));
        s.check(two_qubit_block(&p)?.unitarity_error());
        s.check(reflection_channel(&p, rng.gen_range(-PI..PI))?.unitarity_error());
    }
    Ok(s.finish())
}

fn rotation_symmetry() -> Result<SuiteResult> {
    let mut s = Suite::new("global_rotation_invariance", 1e-10);
    let mut rng = rng(6);
    for _ in 0..50 {
        let p = ScatterParams::with_kd(rng.gen_range(0.1..3.0), rng.gen_range(-PI..PI));
        let block = two_qubit_block(&p)?;
        let u = random::random_unitary(2, &mut rng);
        let rho = random::random_mixed(4, &mut rng);
        let moved = rho.evolve(&u.kron(&u));
        let a = transmission_probability(&block, &unpolarized_input(&rho))?;
        let b = transmission_probability(&block, &unpolarized_input(&moved))?;
        s.check((a - b).abs());
        // Ω → −Ω conjugates t, which also flips kd; compare at kd = 0
        let pt = |w: f64| -> Result<f64> {
            transmission_probability(&two_qubit_block(&ScatterParams::new(w))?, &unpolarized_input(&rho))
        };
        s.check((pt(p.omega)? - pt(-p.omega)?).abs());
    }
    Ok(s.finish())
}

fn gate_conjugation() -> Result<SuiteResult> {
    let mut s = Suite::new("gate_sign_patterns", 1e-12);
    let mut rng = rng(7);
    let cases: [(&str, fn(&PauliCoeffs) -> PauliCoeffs); 2] = [
        ("X@2", |a| flip(a, &[2, 3])),
        ("Y@2", |a| flip(a, &[1, 3])),
    ];
    for _ in 0..20 {
        let rho = random::random_mixed(4, &mut rng);
        let a = decompose(&rho)?;
        for (seq, want) in &cases {
            let seq: GateSequence = seq.parse()?;
            let got = decompose(&crate::gates::apply(&seq, &rho)?)?;
            s.check(got.max_abs_diff(&want(&a)));
        }
        let exch = crate::qmat::exchange_operator(2, 0, 1);
        let seq: GateSequence = "sqrtSWAP@12".parse()?;
        s.check(conjugate_observable(&seq, &exch)?.max_abs_diff(&exch));
    }
    Ok(s.finish())
}

fn flip(a: &PauliCoeffs, second: &[usize]) -> PauliCoeffs {
    let mut out = *a;
    for row in out.a.iter_mut() {
        for &j in second {
            row[j] = -row[j];
        }
    }
    out
}

fn tomography() -> Result<SuiteResult> {
    let mut s = Suite::new("tomography_round_trip", 1e-9);
    let mut rng = rng(8);
    let p = ScatterParams::new(1.0);
    for mode in [
        Mode::TwoQubitGates,
        Mode::TwoQubitPolarized,
        Mode::SingleQubitAncilla,
    ] {
        let plan = plan_standard(mode, p)?;
        for _ in 0..5 {
            let rho = random::random_mixed(mode.state_dim(), &mut rng);
            let rec = reconstruct(&plan, &measure_plan(&plan, &rho, 0, 0)?)?;
            s.check(trace_distance(&rec.state, &rho)?);
        }
    }
    let plan = plan_standard(Mode::PureState, p)?;
    for _ in 0..3 {
        let rho = random::haar_pure(4, &mut rng);
        let fit = reconstruct_pure(&plan, &measure_plan(&plan, &rho, 0, 0)?)?;
        s.check(1.0 - crate::qmat::fidelity(&fit.state, &rho)?);
    }
    Ok(s.finish())
}

fn engine() -> Result<SuiteResult> {
    let mut s = Suite::new("engine_fixed_points", 1e-12);
    let mut rng = rng(9);
    for _ in 0..20 {
        let cfg = EngineConfig {
            mirror_phase: rng.gen_range(-PI..PI),
            ..EngineConfig::new(rng.gen_range(0.0..2.0))
        };
        let res = Reservoir::polarized(random::random_axis(&mut rng))?;
        let aligned = res.target()?;
        s.check(interact_once(&aligned, &res, &cfg)?.mat().max_abs_diff(aligned.mat()));
        let mixed = DensityMatrix::maximally_mixed(2);
        let out = interact_once(&mixed, &Reservoir::Unpolarized, &cfg)?;
        s.check(out.mat().max_abs_diff(mixed.mat()));
    }
    Ok(s.finish())
}

/// Runs every suite with `closed` standing in for the two-qubit closed form.
pub fn run_suites_with(closed: ClosedForm) -> Result<ValidationReport> {
    let suites = vec![
        frozen_single()?,
        frozen_pair()?,
        qubit_single()?,
        two_qubit(closed)?,
        unitarity()?,
        rotation_symmetry()?,
        gate_conjugation()?,
        tomography()?,
        engine()?,
    ];
    Ok(ValidationReport {
        passed: suites.iter().all(|s| s.passed),
        suites,
    })
}

pub fn run_suites() -> Result<ValidationReport> {
    run_suites_with(pt_unpolarized_closed_form)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        let report = run_suites().unwrap();
        for s in &report.suites {
            assert!(s.passed, "{s:?}");
        }
        assert!(report.passed);
    }

    #[test]
    fn sign_mutation_is_caught() {
        fn flipped(p: &ScatterParams, rho: &DensityMatrix) -> Result<f64> {
            let m = rho.mat();
            let overlap = m[(1, 1)].re + m[(2, 2)].re + 2.0 * m[(1, 2)].re;
            let w2 = p.omega * p.omega;
            Ok(((1.0 + 12.0 * w2) + 4.0 * w2 * (1.0 + 8.0 * w2) * overlap)
                / p.two_qubit_denominator())
        }
        let report = run_suites_with(flipped).unwrap();
        assert!(!report.passed);
        let bad: Vec<_> = report.suites.iter().filter(|s| !s.passed).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].name, "two_qubit_closed_form");
    }
}
