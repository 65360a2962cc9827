use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::design::{detector_operator, injector_state};
use super::{
    AncillaTarget, Detector, Geometry, MeasurementRecord, MeasurementSetting, TomographyPlan,
};
use crate::error::{Error, Result};
use crate::gates::apply;
use crate::qmat::{partial_trace, spin_projector, DensityMatrix, Keep};
use crate::scatter::{transmission_probability, two_qubit_block, unit_axis};

/// State of the scattered static pair, built directly (Schrödinger picture).
fn scattered_pair(setting: &MeasurementSetting, rho: &DensityMatrix) -> Result<DensityMatrix> {
    rho.require_dim(setting.state_dim())?;
    match setting.geometry {
        Geometry::Pair => apply(&setting.seq, rho),
        Geometry::Ancilla { axis, target } => {
            let anc = DensityMatrix::new(spin_projector(unit_axis(axis)?))?;
            let reduced = match target {
                AncillaTarget::Single => {
                    if !setting.seq.is_empty() {
                        return Err(Error::InvalidConfig(
                            "gate sequences act on two-qubit registers only".into(),
                        ));
                    }
                    rho.clone()
                }
                AncillaTarget::Qubit1 => partial_trace(&apply(&setting.seq, rho)?, Keep::First)?,
                AncillaTarget::Qubit2 => partial_trace(&apply(&setting.seq, rho)?, Keep::Second)?,
            };
            Ok(anc.kron(&reduced))
        }
    }
}

/// `(P_T, detector mean)` from the full flying⊗pair state.
fn ideal_pair(setting: &MeasurementSetting, rho: &DensityMatrix) -> Result<(f64, f64)> {
    let pair = scattered_pair(setting, rho)?;
    let rho_f = DensityMatrix::new(injector_state(&setting.injector)?)?;
    let full = rho_f.kron(&pair);
    let block = two_qubit_block(&setting.params)?;
    let pt = transmission_probability(&block, &full)?;
    let value = match setting.detector {
        Detector::TotalTransmission => pt,
        Detector::Polarization { .. } => {
            full.expectation(&detector_operator(&setting.detector, &block.t)?)
        }
    };
    Ok((pt, value))
}

/// Noiseless detector mean for `setting` on `rho`.
pub fn ideal_value(setting: &MeasurementSetting, rho: &DensityMatrix) -> Result<f64> {
    Ok(ideal_pair(setting, rho)?.1)
}

/// Simulates `shots` flying qubits (none when `shots == 0`).
///
/// Transmission events are Bernoulli(P_T). With a polarization detector each
/// transmitted qubit is further resolved into ±1 along the detector axis with
/// probability `(1 ± ⟨σ·n̂⟩_out)/2`.
pub fn measure(
    setting: &MeasurementSetting,
    rho: &DensityMatrix,
    shots: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    let (pt, ideal) = ideal_pair(setting, rho)?;
    if shots == 0 {
        return Ok(MeasurementRecord {
            setting: setting.clone(),
            ideal_value: ideal,
            shots,
            observed_value: ideal,
            standard_error: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = shots as f64;
    let (observed, se) = match setting.detector {
        Detector::TotalTransmission => {
            let k = draw(&mut rng, shots, pt)?;
            let freq = k as f64 / n;
            // half-count smoothing keeps the error finite at 0 and N
            let p = (k as f64 + 0.5) / (n + 1.0);
            (freq, (p * (1.0 - p) / n).sqrt())
        }
        Detector::Polarization { .. } => {
            let pol = if pt > 0.0 { (ideal / pt).clamp(-1.0, 1.0) } else { 0.0 };
            let p_plus = pt * (1.0 + pol) / 2.0;
            let p_minus = pt * (1.0 - pol) / 2.0;
            let plus = draw(&mut rng, shots, p_plus)?;
            let rest = shots - plus;
            let cond = if p_plus < 1.0 { p_minus / (1.0 - p_plus) } else { 0.0 };
            let minus = draw(&mut rng, rest, cond)?;
            let mean = (plus as f64 - minus as f64) / n;
            let second = (plus + minus) as f64 / n;
            let var = (second - mean * mean).max(1.0 / n);
            (mean, (var / n).sqrt())
        }
    };
    Ok(MeasurementRecord {
        setting: setting.clone(),
        ideal_value: ideal,
        shots,
        observed_value: observed,
        standard_error: se,
    })
}

fn draw(rng: &mut impl Rng, n: u64, p: f64) -> Result<u64> {
    let p = p.clamp(0.0, 1.0);
    let dist = Binomial::new(n, p).map_err(|e| Error::InvalidConfig(format!("binomial: {e}")))?;
    Ok(dist.sample(rng))
}

/// Measures every setting of `plan`. Per-setting seeds are drawn from `seed`
/// in plan order, so the result does not depend on scheduling.
pub fn measure_plan(
    plan: &TomographyPlan,
    rho: &DensityMatrix,
    shots: u64,
    seed: u64,
) -> Result<Vec<MeasurementRecord>> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = plan.settings.iter().map(|_| master.gen()).collect();
    plan.settings
        .par_iter()
        .zip(seeds)
        .map(|(s, sd)| measure(s, rho, shots, sd))
        .collect()
}
