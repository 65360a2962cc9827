use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::design::Unknowns;
use super::{AncillaTarget, Detector, Geometry, Injector, MeasurementSetting};
use crate::error::{Error, Result};
use crate::gates::{GateSequence, Target};
use crate::scatter::ScatterParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    SingleQubitAncilla,
    TwoQubitGates,
    TwoQubitPolarized,
    PureState,
    FirstQubitMarginal,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::SingleQubitAncilla,
        Mode::TwoQubitGates,
        Mode::TwoQubitPolarized,
        Mode::PureState,
        Mode::FirstQubitMarginal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::SingleQubitAncilla => "single_qubit_ancilla",
            Mode::TwoQubitGates => "two_qubit_gates",
            Mode::TwoQubitPolarized => "two_qubit_polarized",
            Mode::PureState => "pure_state",
            Mode::FirstQubitMarginal => "first_qubit_marginal",
        }
    }

    /// Dimension of the state the mode reconstructs.
    pub fn state_dim(self) -> usize {
        match self {
            Mode::SingleQubitAncilla => 2,
            _ => 4,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown tomography mode `{s}`")))
    }
}

/// An ordered list of settings together with the mode that interprets them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyPlan {
    pub mode: Mode,
    pub settings: Vec<MeasurementSetting>,
}

impl TomographyPlan {
    /// Unknowns the plan's design matrix is written against.
    pub fn unknowns(&self) -> Unknowns {
        match self.mode {
            Mode::SingleQubitAncilla => Unknowns::Bloch,
            Mode::FirstQubitMarginal => {
                let second = self.settings.iter().any(|s| {
                    matches!(
                        s.geometry,
                        Geometry::Ancilla {
                            target: AncillaTarget::Qubit2,
                            ..
                        }
                    )
                });
                if second {
                    Unknowns::Pauli((1..4).map(|k| (0, k)).collect())
                } else {
                    Unknowns::Pauli((1..4).map(|k| (k, 0)).collect())
                }
            }
            _ => Unknowns::all_pauli(),
        }
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    pub fn has_two_qubit_gate(&self) -> bool {
        self.settings.iter().any(|s| s.seq.has_two_qubit_gate())
    }
}

const AXES: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

fn seq(steps: &[&str]) -> GateSequence {
    steps.join(",").parse().expect("built-in gate sequence")
}

/// Single-qubit-gate settings on qubit 2. Each one maps `σ₁·σ₂` onto a
/// different signed combination of the correlation coefficients `a_ij`.
fn correlation_sequences() -> Vec<GateSequence> {
    [
        &[][..],
        &["X@2"],
        &["Y@2"],
        &["Ry90@2"],
        &["Ry90@2", "X@2"],
        &["Rz90@2"],
        &["Rz90@2", "Y@2"],
        &["Rx90@2"],
        &["Rx90@2", "Z@2"],
    ]
    .iter()
    .map(|s| seq(s))
    .collect()
}

/// sqrtSWAP settings. The swap part carries the local terms `a_{k0} − a_{0k}`
/// into the antisymmetric correlations, which the trailing rotation turns
/// into something `σ₁·σ₂` can see.
fn sqrt_swap_sequences() -> Vec<GateSequence> {
    [
        &["sqrtSWAP@12", "Rx90@2"][..],
        &["Rz90@2", "sqrtSWAP@12", "Rx90@2"],
        &["sqrtSWAP@12", "Ry90@2"],
        &["Rx90@2", "sqrtSWAP@12", "Ry90@2"],
        &["sqrtSWAP@12", "Rz90@2"],
        &["Ry90@2", "sqrtSWAP@12", "Rz90@2"],
    ]
    .iter()
    .map(|s| seq(s))
    .collect()
}

fn ancilla_settings(params: ScatterParams, target: AncillaTarget) -> Vec<MeasurementSetting> {
    AXES.iter()
        .map(|&axis| {
            MeasurementSetting::transmission(GateSequence::new(), params)
                .with_geometry(Geometry::Ancilla { axis, target })
        })
        .collect()
}

/// Polarization-detector settings under identity, X@2 and Y@2. Detecting
/// along `n̂` adds `⟨(σ₁+σ₂)·n̂⟩`; the flips on qubit 2 split that sum.
fn local_settings(params: ScatterParams) -> Vec<MeasurementSetting> {
    let mut out = Vec::new();
    for s in [seq(&[]), seq(&["X@2"]), seq(&["Y@2"])] {
        for &axis in &AXES {
            out.push(
                MeasurementSetting::transmission(s.clone(), params)
                    .with_detector(Detector::Polarization { axis }),
            );
        }
    }
    out
}

/// The standard plan for `mode`.
pub fn plan_standard(mode: Mode, params: ScatterParams) -> Result<TomographyPlan> {
    params.validate()?;
    let unpolarized = |s: GateSequence| MeasurementSetting::transmission(s, params);
    let settings = match mode {
        Mode::SingleQubitAncilla => ancilla_settings(params, AncillaTarget::Single),
        Mode::FirstQubitMarginal => ancilla_settings(params, AncillaTarget::Qubit1),
        Mode::TwoQubitGates => correlation_sequences()
            .into_iter()
            .chain(sqrt_swap_sequences())
            .map(unpolarized)
            .collect(),
        Mode::TwoQubitPolarized => correlation_sequences()
            .into_iter()
            .map(unpolarized)
            .chain(local_settings(params))
            .collect(),
        Mode::PureState => {
            let amplitude = [seq(&[]), seq(&["X@2"]), seq(&["Y@2"])];
            let phase = [
                seq(&["Rx90@2"]),
                seq(&["Ry90@2"]),
                seq(&["Rz90@2"]),
                seq(&["Rx90@2", "Z@2"]),
                seq(&["Ry90@2", "X@2"]),
                seq(&["Rz90@2", "Y@2"]),
            ];
            let mut v: Vec<_> = amplitude.into_iter().chain(phase).map(unpolarized).collect();
            for &axis in &AXES {
                for s in [seq(&[]), seq(&["X@2"]), seq(&["Y@2"])] {
                    v.push(
                        MeasurementSetting::transmission(s, params)
                            .with_injector(Injector::Polarized { axis, sign: 1.0 }),
                    );
                }
            }
            v
        }
    };
    Ok(TomographyPlan { mode, settings })
}

/// Ancilla settings that read the local Bloch vector of one register qubit,
/// bypassing the other one.
pub fn plan_marginal(params: ScatterParams, target: Target) -> Result<TomographyPlan> {
    params.validate()?;
    let t = match target {
        Target::Qubit1 => AncillaTarget::Qubit1,
        Target::Qubit2 => AncillaTarget::Qubit2,
        Target::Both => {
            return Err(Error::InvalidConfig(
                "a marginal plan targets a single qubit".into(),
            ))
        }
    };
    Ok(TomographyPlan {
        mode: Mode::FirstQubitMarginal,
        settings: ancilla_settings(params, t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tomo::{build_design_matrix, singular_values};

    fn rank_and_cond(plan: &TomographyPlan) -> (usize, f64) {
        let d = build_design_matrix(plan).unwrap();
        let s = singular_values(&d.rows);
        let rank = s.iter().filter(|&&v| v > 1e-10 * s[0]).count();
        (rank, s[0] / s[s.len() - 1])
    }

    #[test]
    fn standard_plans_are_complete_and_well_conditioned() {
        for mode in Mode::ALL {
            let plan = plan_standard(mode, ScatterParams::new(1.0)).unwrap();
            let (rank, cond) = rank_and_cond(&plan);
            assert_eq!(rank, plan.unknowns().len(), "{mode}");
            assert!(cond < 1e4, "{mode}: condition {cond}");
        }
    }

    #[test]
    fn polarized_plan_has_no_two_qubit_gate() {
        let p = plan_standard(Mode::TwoQubitPolarized, ScatterParams::new(0.7)).unwrap();
        assert!(!p.has_two_qubit_gate());
        let g = plan_standard(Mode::TwoQubitGates, ScatterParams::new(0.7)).unwrap();
        assert_eq!(g.len(), 15);
        assert!(g.has_two_qubit_gate());
    }

    #[test]
    fn correlation_settings_alone_miss_local_terms() {
        let plan = TomographyPlan {
            mode: Mode::TwoQubitGates,
            settings: correlation_sequences()
                .into_iter()
                .map(|s| MeasurementSetting::transmission(s, ScatterParams::new(1.0)))
                .collect(),
        };
        assert_eq!(rank_and_cond(&plan).0, 9);
    }

    #[test]
    fn second_qubit_marginal() {
        let p = plan_marginal(ScatterParams::new(1.0), Target::Qubit2).unwrap();
        assert_eq!(p.unknowns(), Unknowns::Pauli(vec![(0, 1), (0, 2), (0, 3)]));
        assert_eq!(rank_and_cond(&p).0, 3);
        assert!(plan_marginal(ScatterParams::new(1.0), Target::Both).is_err());
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("three_qubit".parse::<Mode>().is_err());
    }
}
