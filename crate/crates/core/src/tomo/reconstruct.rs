use serde::{Deserialize, Serialize};

use super::design::{build_design_matrix, DesignMatrix, Unknowns};
use super::lsq::weighted_least_squares;
use super::plan::{Mode, TomographyPlan};
use super::MeasurementRecord;
use crate::error::{Error, Result};
use crate::qmat::{assemble_matrix, decompose, eigh, project_psd, BlochVector, DensityMatrix, PauliCoeffs, PSD_TOL};

/// Smallest acceptable row norm of a single-qubit design.
const FLAT_ROW: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rank: usize,
    pub condition_number: f64,
    /// Weighted residual of the linear fit.
    pub residual: f64,
    /// Trace distance moved by the positivity repair (0 when none was needed).
    pub psd_projection_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reconstruction {
    pub mode: Mode,
    /// Reconstructed state: the register (dim 4), the lone qubit, or the
    /// marginal of the targeted qubit (dim 2).
    pub state: DensityMatrix,
    /// Pauli coefficients, for full two-qubit reconstructions.
    pub coeffs: Option<PauliCoeffs>,
    /// Bloch vector, for single-qubit and marginal reconstructions.
    pub bloch: Option<BlochVector>,
    pub diagnostics: Diagnostics,
}

fn check_alignment(plan: &TomographyPlan, records: &[MeasurementRecord]) -> Result<()> {
    if records.len() != plan.len() {
        return Err(Error::RecordMismatch {
            expected: plan.len(),
            found: records.len(),
        });
    }
    if let Some(k) = records
        .iter()
        .zip(&plan.settings)
        .position(|(r, s)| &r.setting != s)
    {
        return Err(Error::InvalidConfig(format!(
            "record {k} was taken with a different setting than the plan"
        )));
    }
    Ok(())
}

/// Unit weights in the noiseless case, `1/SE` otherwise. Records with a
/// zero SE borrow the smallest positive one.
fn weights(records: &[MeasurementRecord]) -> Vec<f64> {
    let floor = records
        .iter()
        .map(|r| r.standard_error)
        .filter(|&s| s > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !floor.is_finite() {
        return vec![1.0; records.len()];
    }
    records
        .iter()
        .map(|r| 1.0 / r.standard_error.max(floor))
        .collect()
}

struct LinearFit {
    x: Vec<f64>,
    rank: usize,
    condition_number: f64,
    residual: f64,
}

fn solve(design: &DesignMatrix, records: &[MeasurementRecord]) -> Result<LinearFit> {
    let b: Vec<f64> = records
        .iter()
        .zip(&design.offsets)
        .map(|(r, o)| r.observed_value - o)
        .collect();
    let sol = weighted_least_squares(&design.rows, &b, &weights(records))?;
    Ok(LinearFit {
        x: sol.x,
        rank: sol.rank,
        condition_number: sol.condition_number,
        residual: sol.residual,
    })
}

fn bloch_state(v: [f64; 3]) -> Result<(BlochVector, DensityMatrix, f64)> {
    let raw = BlochVector::new(v[0], v[1], v[2]);
    let clipped = raw.clipped();
    let moved = 0.5
        * raw
            .as_array()
            .iter()
            .zip(clipped.as_array())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
    let rho = clipped.to_density()?;
    Ok((clipped, rho, moved))
}

/// Full two-qubit reconstruction from a rank-15 plan.
pub fn reconstruct_two_qubit(
    plan: &TomographyPlan,
    records: &[MeasurementRecord],
) -> Result<Reconstruction> {
    check_alignment(plan, records)?;
    let design = build_design_matrix(plan)?;
    if design.unknowns != Unknowns::all_pauli() {
        return Err(Error::InvalidConfig(format!(
            "mode {} does not reconstruct a full two-qubit state",
            plan.mode
        )));
    }
    let fit = solve(&design, records)?;
    let raw = PauliCoeffs::from_free(&fit.x);
    let m = assemble_matrix(&raw);
    let min_eig = eigh(&m).values.into_iter().fold(f64::INFINITY, f64::min);
    let (state, moved, coeffs) = if min_eig < -PSD_TOL {
        let (state, moved) = project_psd(&m);
        let c = decompose(&state)?;
        (state, moved, c)
    } else {
        (DensityMatrix::new_unchecked(m), 0.0, raw)
    };
    Ok(Reconstruction {
        mode: plan.mode,
        state,
        coeffs: Some(coeffs),
        bloch: None,
        diagnostics: Diagnostics {
            rank: fit.rank,
            condition_number: fit.condition_number,
            residual: fit.residual,
            psd_projection_distance: moved,
        },
    })
}

fn reconstruct_bloch(
    plan: &TomographyPlan,
    records: &[MeasurementRecord],
    design: &DesignMatrix,
) -> Result<Reconstruction> {
    for row in &design.rows {
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < FLAT_ROW {
            return Err(Error::FlatDesign(norm));
        }
    }
    let fit = solve(design, records)?;
    let (b, state, moved) = bloch_state([fit.x[0], fit.x[1], fit.x[2]])?;
    Ok(Reconstruction {
        mode: plan.mode,
        state,
        coeffs: None,
        bloch: Some(b),
        diagnostics: Diagnostics {
            rank: fit.rank,
            condition_number: fit.condition_number,
            residual: fit.residual,
            psd_projection_distance: moved,
        },
    })
}

/// Bloch vector of a lone qubit read through an ancilla.
pub fn reconstruct_single(
    plan: &TomographyPlan,
    records: &[MeasurementRecord],
) -> Result<Reconstruction> {
    check_alignment(plan, records)?;
    let design = build_design_matrix(plan)?;
    if design.unknowns != Unknowns::Bloch {
        return Err(Error::InvalidConfig(format!(
            "mode {} is not a single-qubit mode",
            plan.mode
        )));
    }
    reconstruct_bloch(plan, records, &design)
}

/// Local Bloch vector of the register qubit targeted by a marginal plan.
pub fn reconstruct_marginal(
    plan: &TomographyPlan,
    records: &[MeasurementRecord],
) -> Result<Reconstruction> {
    check_alignment(plan, records)?;
    if plan.mode != Mode::FirstQubitMarginal {
        return Err(Error::InvalidConfig(format!(
            "mode {} is not a marginal mode",
            plan.mode
        )));
    }
    let design = build_design_matrix(plan)?;
    reconstruct_bloch(plan, records, &design)
}

/// Dispatches on the plan's mode. Pure-state plans are informationally
/// complete and go through the linear route here; see
/// [`reconstruct_pure`](super::reconstruct_pure) for the parametric fit.
pub fn reconstruct(plan: &TomographyPlan, records: &[MeasurementRecord]) -> Result<Reconstruction> {
    match plan.mode {
        Mode::SingleQubitAncilla => reconstruct_single(plan, records),
        Mode::FirstQubitMarginal => reconstruct_marginal(plan, records),
        Mode::TwoQubitGates | Mode::TwoQubitPolarized | Mode::PureState => {
            reconstruct_two_qubit(plan, records)
        }
    }
}
