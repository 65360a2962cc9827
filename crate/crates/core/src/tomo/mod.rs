//! Transmission-based tomography.
//!
//! A [`MeasurementSetting`] fixes everything about one experiment: gates
//! applied to the static qubits beforehand, how the flying qubits are
//! injected and detected, and which pair of static qubits they cross.
//! Because `P_T` is linear in the static density matrix, every setting is an
//! affine functional of the Pauli coefficients. [`design`] evaluates that
//! functional numerically from the Heisenberg-picture observable and its
//! Pauli decomposition.

mod design;
mod lsq;
mod measure;
mod plan;
mod pure;
mod reconstruct;

use serde::{Deserialize, Serialize};

use crate::gates::GateSequence;
use crate::scatter::ScatterParams;

pub use design::{build_design_matrix, effective_observable, DesignMatrix, Unknowns};
pub use lsq::{singular_values, weighted_least_squares, LsqSolution};
pub use measure::{ideal_value, measure, measure_plan};
pub use plan::{plan_marginal, plan_standard, Mode, TomographyPlan};
pub use pure::{reconstruct_pure, PureFit, PureStateParams, AMPLITUDE_FLOOR};
pub use reconstruct::{
    reconstruct, reconstruct_marginal, reconstruct_single, reconstruct_two_qubit, Diagnostics,
    Reconstruction,
};

/// How flying qubits enter the channel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Injector {
    Unpolarized,
    /// Pure spin state along `sign·axis`.
    Polarized { axis: [f64; 3], sign: f64 },
}

/// What is counted on the far side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Detector {
    /// Fraction of injected qubits transmitted.
    TotalTransmission,
    /// Transmitted qubits resolved along `axis`, each scoring ±1 (0 if
    /// reflected). The mean per injected qubit is `P_T·⟨σ·n̂⟩_out`, which
    /// stays linear in the state.
    Polarization { axis: [f64; 3] },
}

/// Which static qubits the flying qubit crosses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    /// Qubit 1 then qubit 2 of the register under test.
    Pair,
    /// An ancilla qubit polarized along `axis`, then the target qubit.
    Ancilla { axis: [f64; 3], target: AncillaTarget },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AncillaTarget {
    /// A lone single-qubit state (dimension 2).
    Single,
    /// Qubit 1 of a two-qubit register; qubit 2 is bypassed.
    Qubit1,
    /// Qubit 2 of a two-qubit register; qubit 1 is bypassed.
    Qubit2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSetting {
    #[serde(default)]
    pub seq: GateSequence,
    pub injector: Injector,
    pub detector: Detector,
    #[serde(default = "pair")]
    pub geometry: Geometry,
    pub params: ScatterParams,
}

fn pair() -> Geometry {
    Geometry::Pair
}

impl MeasurementSetting {
    /// Unpolarized injection, total transmission, across the pair.
    pub fn transmission(seq: GateSequence, params: ScatterParams) -> Self {
        MeasurementSetting {
            seq,
            injector: Injector::Unpolarized,
            detector: Detector::TotalTransmission,
            geometry: Geometry::Pair,
            params,
        }
    }

    pub fn with_injector(mut self, injector: Injector) -> Self {
        self.injector = injector;
        self
    }

    pub fn with_detector(mut self, detector: Detector) -> Self {
        self.detector = detector;
        self
    }

    pub fn with_geometry(mut self, geometry: Geometry) -> Self {
        self.geometry = geometry;
        self
    }

    /// Dimension of the state this setting is applied to.
    pub fn state_dim(&self) -> usize {
        match self.geometry {
            Geometry::Ancilla {
                target: AncillaTarget::Single,
                ..
            } => 2,
            _ => 4,
        }
    }
}

/// One setting with its ideal and observed values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub setting: MeasurementSetting,
    pub ideal_value: f64,
    pub shots: u64,
    pub observed_value: f64,
    pub standard_error: f64,
}
