use serde::{Deserialize, Serialize};

use super::{AncillaTarget, Detector, Geometry, Injector, MeasurementSetting, TomographyPlan};
use crate::error::{Error, Result};
use crate::gates::conjugate_observable;
use crate::qmat::{free_indices, n_dot_sigma, pauli2, sigma, spin_projector, CMatrix};
use crate::scatter::{two_qubit_block, unit_axis};

/// Unknowns a design matrix is written against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unknowns {
    /// Bloch vector of a single-qubit state.
    Bloch,
    /// A subset of the two-qubit Pauli coefficients `a[i][j]`.
    Pauli(Vec<(usize, usize)>),
}

impl Unknowns {
    pub fn all_pauli() -> Self {
        Unknowns::Pauli(free_indices().collect())
    }

    pub fn len(&self) -> usize {
        match self {
            Unknowns::Bloch => 3,
            Unknowns::Pauli(idx) => idx.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `value_k = offset_k + rows_k · unknowns`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignMatrix {
    pub unknowns: Unknowns,
    pub rows: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
}

impl DesignMatrix {
    pub fn predict(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.offsets)
            .map(|(r, o)| o + r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect()
    }
}

/// Flying-qubit state implied by the injector.
pub(crate) fn injector_state(injector: &Injector) -> Result<CMatrix> {
    match *injector {
        Injector::Unpolarized => Ok(CMatrix::identity(2).scale_re(0.5)),
        Injector::Polarized { axis, sign } => {
            let a = unit_axis(axis)?;
            let s = sign.signum();
            Ok(spin_projector([s * a[0], s * a[1], s * a[2]]))
        }
    }
}

/// Operator on flying⊗pair whose expectation on the incoming state is the
/// detector's mean outcome.
pub(crate) fn detector_operator(detector: &Detector, t: &CMatrix) -> Result<CMatrix> {
    match *detector {
        Detector::TotalTransmission => Ok(&t.adjoint() * t),
        Detector::Polarization { axis } => {
            let n = unit_axis(axis)?;
            let spin = n_dot_sigma(n).kron(&CMatrix::identity(4));
            Ok(&(&t.adjoint() * &spin) * t)
        }
    }
}

/// `Tr_f[(ρ_f ⊗ 𝕀) E]`: the observable seen by the scattered static pair.
fn pair_observable(setting: &MeasurementSetting) -> Result<CMatrix> {
    let block = two_qubit_block(&setting.params)?;
    let e = detector_operator(&setting.detector, &block.t)?;
    let rho_f = injector_state(&setting.injector)?;
    Ok((&rho_f.kron(&CMatrix::identity(4)) * &e).trace_out_first(2, 4).hermitian_part())
}

/// Observable `O` on the state under test with `value = tr(O ρ)`.
///
/// Dimension 4 for register settings (gates folded in, Heisenberg picture),
/// dimension 2 for a lone qubit behind an ancilla.
pub fn effective_observable(setting: &MeasurementSetting) -> Result<CMatrix> {
    let pair = pair_observable(setting)?;
    match setting.geometry {
        Geometry::Pair => conjugate_observable(&setting.seq, &pair),
        Geometry::Ancilla { axis, target } => {
            let anc = spin_projector(unit_axis(axis)?);
            let reduced = (&anc.kron(&CMatrix::identity(2)) * &pair)
                .trace_out_first(2, 2)
                .hermitian_part();
            let lifted = match target {
                AncillaTarget::Single => {
                    if !setting.seq.is_empty() {
                        return Err(Error::InvalidConfig(
                            "gate sequences act on two-qubit registers only".into(),
                        ));
                    }
                    return Ok(reduced);
                }
                AncillaTarget::Qubit1 => reduced.kron(&CMatrix::identity(2)),
                AncillaTarget::Qubit2 => CMatrix::identity(2).kron(&reduced),
            };
            conjugate_observable(&setting.seq, &lifted)
        }
    }
}

/// One affine row: `(offset, coefficients over the unknowns)`.
fn affine_row(obs: &CMatrix, unknowns: &Unknowns) -> Result<(f64, Vec<f64>)> {
    match unknowns {
        Unknowns::Bloch => {
            if obs.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: obs.dim(),
                });
            }
            let offset = 0.5 * obs.trace().re;
            let row = (1..4).map(|k| 0.5 * obs.trace_product(&sigma(k)).re).collect();
            Ok((offset, row))
        }
        Unknowns::Pauli(idx) => {
            if obs.dim() != 4 {
                return Err(Error::DimensionMismatch {
                    expected: 4,
                    found: obs.dim(),
                });
            }
            let offset = 0.25 * obs.trace().re;
            let mut row = Vec::with_capacity(idx.len());
            let mut leaked: f64 = 0.0;
            for (i, j) in free_indices() {
                let v = 0.25 * obs.trace_product(&pauli2(i, j)?).re;
                if idx.contains(&(i, j)) {
                    row.push(v);
                } else {
                    leaked = leaked.max(v.abs());
                }
            }
            if leaked > 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "setting depends on coefficients outside the unknown set (weight {leaked:e})"
                )));
            }
            // keep the caller's ordering
            let order: Vec<(usize, usize)> = free_indices().filter(|p| idx.contains(p)).collect();
            let reordered = idx
                .iter()
                .map(|p| row[order.iter().position(|q| q == p).unwrap()])
                .collect();
            Ok((offset, reordered))
        }
    }
}

pub(crate) fn design_for_settings(
    settings: &[MeasurementSetting],
    unknowns: Unknowns,
) -> Result<DesignMatrix> {
    let mut rows = Vec::with_capacity(settings.len());
    let mut offsets = Vec::with_capacity(settings.len());
    for s in settings {
        let (o, r) = affine_row(&effective_observable(s)?, &unknowns)?;
        offsets.push(o);
        rows.push(r);
    }
    Ok(DesignMatrix {
        unknowns,
        rows,
        offsets,
    })
}

/// Affine map from the plan's unknowns to its ideal measurement values.
pub fn build_design_matrix(plan: &TomographyPlan) -> Result<DesignMatrix> {
    design_for_settings(&plan.settings, plan.unknowns())
}
