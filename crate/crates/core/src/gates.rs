//! Gates on the two-qubit static register and their action on states and
//! observables.
//!
//! Rotations follow `R_a(φ) = exp(−iφσ_a/2)`, so in the Schrödinger picture
//! `R_y(π/2)` carries z into x and x into −z.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{pauli2, sigma, CMatrix, DensityMatrix, I, ONE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn pauli_index(self) -> usize {
        match self {
            Axis::X => 1,
            Axis::Y => 2,
            Axis::Z => 3,
        }
    }

    fn letter(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }
}

/// `exp(−iφσ_a/2)`.
pub fn rotation(axis: Axis, angle: f64) -> CMatrix {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    &CMatrix::identity(2).scale_re(c) - &sigma(axis.pauli_index()).scale(I * s)
}

pub fn swap_matrix() -> CMatrix {
    let mut m = CMatrix::zeros(4);
    m[(0, 0)] = ONE;
    m[(1, 2)] = ONE;
    m[(2, 1)] = ONE;
    m[(3, 3)] = ONE;
    m
}

/// Principal square root of SWAP: `1` on the triplet, `i` on the singlet.
pub fn sqrt_swap_matrix() -> CMatrix {
    let a = Complex64::new(0.5, 0.5);
    let b = Complex64::new(0.5, -0.5);
    &CMatrix::identity(4).scale(a) + &swap_matrix().scale(b)
}

/// The closed gate set, plus arbitrary-angle rotations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    Rx90,
    Ry90,
    Rz90,
    /// `Rz` with no angle given; taken as π/2.
    Rz,
    SqrtSwap,
    Rot(Axis, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    matrix: CMatrix,
}

impl Gate {
    pub fn new(kind: GateKind) -> Gate {
        let h = std::f64::consts::FRAC_PI_2;
        let matrix = match kind {
            GateKind::X => sigma(1),
            GateKind::Y => sigma(2),
            GateKind::Z => sigma(3),
            GateKind::H => (&sigma(1) + &sigma(3)).scale_re(std::f64::consts::FRAC_1_SQRT_2),
            GateKind::Rx90 => rotation(Axis::X, h),
            GateKind::Ry90 => rotation(Axis::Y, h),
            GateKind::Rz90 | GateKind::Rz => rotation(Axis::Z, h),
            GateKind::SqrtSwap => sqrt_swap_matrix(),
            GateKind::Rot(a, angle) => rotation(a, angle),
        };
        Gate { kind, matrix }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        if self.kind == GateKind::SqrtSwap {
            2
        } else {
            1
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            GateKind::X => "X".into(),
            GateKind::Y => "Y".into(),
            GateKind::Z => "Z".into(),
            GateKind::H => "H".into(),
            GateKind::Rx90 => "Rx90".into(),
            GateKind::Ry90 => "Ry90".into(),
            GateKind::Rz90 => "Rz90".into(),
            GateKind::Rz => "Rz".into(),
            GateKind::SqrtSwap => "sqrtSWAP".into(),
            GateKind::Rot(a, angle) => format!("R{}({})", a.letter(), angle),
        }
    }
}

/// Looks up a gate by name: `X Y Z H Rx90 Ry90 Rz90 Rz sqrtSWAP` or an
/// explicit rotation such as `Ry(0.25)`.
pub fn standard_gate(name: &str) -> Result<Gate> {
    let kind = match name {
        "X" => GateKind::X,
        "Y" => GateKind::Y,
        "Z" => GateKind::Z,
        "H" => GateKind::H,
        "Rx90" => GateKind::Rx90,
        "Ry90" => GateKind::Ry90,
        "Rz90" => GateKind::Rz90,
        "Rz" => GateKind::Rz,
        "sqrtSWAP" => GateKind::SqrtSwap,
        _ => return parse_rotation(name).ok_or_else(|| Error::UnknownGate(name.to_string())),
    };
    Ok(Gate::new(kind))
}

fn parse_rotation(name: &str) -> Option<Gate> {
    let rest = name.strip_prefix('R')?;
    let mut chars = rest.chars();
    let axis = match chars.next()? {
        'x' => Axis::X,
        'y' => Axis::Y,
        'z' => Axis::Z,
        _ => return None,
    };
    let angle: f64 = chars.as_str().strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()?;
    angle.is_finite().then(|| Gate::new(GateKind::Rot(axis, angle)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Qubit1,
    Qubit2,
    Both,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Qubit1 => "1",
            Target::Qubit2 => "2",
            Target::Both => "12",
        })
    }
}

/// The 4×4 operator of `gate` acting on `target`.
pub fn embed(gate: &Gate, target: Target) -> Result<CMatrix> {
    let id = CMatrix::identity(2);
    match (gate.arity(), target) {
        (1, Target::Qubit1) => Ok(gate.matrix.kron(&id)),
        (1, Target::Qubit2) => Ok(id.kron(&gate.matrix)),
        (2, Target::Both) => Ok(gate.matrix.clone()),
        (arity, target) => Err(Error::ArityMismatch {
            gate: gate.name(),
            arity,
            target: target.to_string(),
        }),
    }
}

/// Gates applied in order, first element first.
///
/// Text form: comma-separated `name@target` tokens with targets `1`, `2`
/// or `12`, e.g. `Rz90@2,sqrtSWAP@12,Rx90@2`. The empty string is the
/// empty sequence.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GateSequence {
    steps: Vec<(Gate, Target)>,
}

impl GateSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn then(mut self, gate: Gate, target: Target) -> Result<Self> {
        embed(&gate, target)?;
        self.steps.push((gate, target));
        Ok(self)
    }

    /// Builder shorthand taking gate names; panics on bad names, so it is
    /// meant for hard-coded plans.
    pub fn of(steps: &[(&str, Target)]) -> Self {
        steps.iter().fold(GateSequence::new(), |seq, (name, target)| {
            seq.then(standard_gate(name).expect("known gate"), *target)
                .expect("arity matches target")
        })
    }

    pub fn steps(&self) -> &[(Gate, Target)] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn has_two_qubit_gate(&self) -> bool {
        self.steps.iter().any(|(g, _)| g.arity() == 2)
    }

    /// `U = U_k ⋯ U_1`.
    pub fn unitary(&self) -> CMatrix {
        self.steps.iter().fold(CMatrix::identity(4), |acc, (g, t)| {
            &embed(g, *t).expect("validated on insertion") * &acc
        })
    }
}

impl fmt::Display for GateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self
            .steps
            .iter()
            .map(|(g, t)| format!("{}@{}", g.name(), t))
            .collect();
        f.write_str(&tokens.join(","))
    }
}

impl FromStr for GateSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut seq = GateSequence::new();
        for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, target) = token
                .rsplit_once('@')
                .ok_or_else(|| Error::Parse(format!("gate token `{token}` lacks @target")))?;
            let target = match target {
                "1" => Target::Qubit1,
                "2" => Target::Qubit2,
                "12" => Target::Both,
                other => return Err(Error::Parse(format!("unknown target `{other}`"))),
            };
            seq = seq.then(standard_gate(name)?, target)?;
        }
        Ok(seq)
    }
}

impl Serialize for GateSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GateSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `ρ ↦ U ρ U†`.
pub fn apply(seq: &GateSequence, rho: &DensityMatrix) -> Result<DensityMatrix> {
    rho.require_dim(4)?;
    if seq.is_empty() {
        return Ok(rho.clone());
    }
    Ok(rho.evolve(&seq.unitary()))
}

/// Heisenberg picture `O ↦ U† O U`, so that `tr(apply(ρ)·O) = tr(ρ·O′)`.
pub fn conjugate_observable(seq: &GateSequence, obs: &CMatrix) -> Result<CMatrix> {
    if obs.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: obs.dim(),
        });
    }
    let herm = obs.hermiticity_error();
    if herm > 1e-12 {
        return Err(Error::NotHermitian(herm));
    }
    let u = seq.unitary();
    Ok(obs.conjugate_by(&u.adjoint()).hermitian_part())
}

/// Pauli transfer matrix `R[k][l] = ¼ tr(M_k U M_l U†)` with `k = 4i + j`.
pub fn pauli_transfer(u: &CMatrix) -> [[f64; 16]; 16] {
    let basis: Vec<CMatrix> = (0..16).map(|k| pauli2(k / 4, k % 4).unwrap()).collect();
    let mut out = [[0.0; 16]; 16];
    for (l, ml) in basis.iter().enumerate() {
        let moved = ml.conjugate_by(u);
        for (k, mk) in basis.iter().enumerate() {
            out[k][l] = 0.25 * mk.trace_product(&moved).re;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{decompose, exchange_operator, random};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(i: usize, j: usize) -> CMatrix {
        pauli2(i, j).unwrap()
    }

    #[test]
    fn gate_algebra() {
        let x = standard_gate("X").unwrap();
        assert!((x.matrix() * x.matrix()).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
        let r = sqrt_swap_matrix();
        assert!((&r * &r).max_abs_diff(&swap_matrix()) < 1e-15);
        let h = standard_gate("H").unwrap();
        let xry = standard_gate("X").unwrap().matrix() * standard_gate("Ry90").unwrap().matrix();
        assert!(xry.eq_up_to_phase(h.matrix(), 1e-15));
        assert!(standard_gate("Rz").unwrap().matrix().eq_up_to_phase(standard_gate("Rz90").unwrap().matrix(), 0.0));
        assert!(matches!(standard_gate("CNOT"), Err(Error::UnknownGate(_))));
        for name in ["X", "Y", "Z", "H", "Rx90", "Ry90", "Rz90", "Rz", "sqrtSWAP", "Rx(0.3)"] {
            assert!(standard_gate(name).unwrap().matrix().unitarity_error() < 1e-15, "{name}");
        }
    }

    #[test]
    fn embed_examples() {
        let x = standard_gate("X").unwrap();
        let u = embed(&x, Target::Qubit2).unwrap();
        const ZERO: Complex64 = Complex64::new(0.0, 0.0);
        let ket00 = [ONE, ZERO, ZERO, ZERO];
        assert_eq!(u.apply(&ket00), vec![ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(embed(&x, Target::Both), Err(Error::ArityMismatch { .. })));
        let sw = standard_gate("sqrtSWAP").unwrap();
        assert!(matches!(embed(&sw, Target::Qubit1), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn x_on_second_flips_two_correlators() {
        let u = embed(&standard_gate("X").unwrap(), Target::Qubit2).unwrap();
        assert!(m(2, 2).conjugate_by(&u).max_abs_diff(&m(2, 2).scale_re(-1.0)) < 1e-15);
        assert!(m(3, 3).conjugate_by(&u).max_abs_diff(&m(3, 3).scale_re(-1.0)) < 1e-15);
        assert!(m(1, 1).conjugate_by(&u).max_abs_diff(&m(1, 1)) < 1e-15);
    }

    #[test]
    fn ry90_on_second_turns_z_into_x() {
        let u = embed(&standard_gate("Ry90").unwrap(), Target::Qubit2).unwrap();
        assert!(m(1, 3).conjugate_by(&u).max_abs_diff(&m(1, 1)) < 1e-15);
        assert!(m(3, 1).conjugate_by(&u).max_abs_diff(&m(3, 3).scale_re(-1.0)) < 1e-15);
        assert!(m(2, 2).conjugate_by(&u).max_abs_diff(&m(2, 2)) < 1e-15);
    }

    #[test]
    fn sqrt_swap_moves_antisymmetric_correlator_into_local_terms() {
        let seq: GateSequence = "sqrtSWAP@12".parse().unwrap();
        let anti = &m(3, 2) - &m(2, 3);
        let got = conjugate_observable(&seq, &anti).unwrap();
        assert!(got.max_abs_diff(&(&m(0, 1) - &m(1, 0))) < 1e-15);
        let sym = &m(3, 2) + &m(2, 3);
        assert!(conjugate_observable(&seq, &sym).unwrap().max_abs_diff(&sym) < 1e-15);
        let ex = exchange_operator(2, 0, 1);
        assert!(conjugate_observable(&seq, &ex).unwrap().max_abs_diff(&ex) < 1e-15);
    }

    #[test]
    fn sequence_text_round_trip() {
        let s = "Rz90@2,sqrtSWAP@12,Rx90@2";
        let seq: GateSequence = s.parse().unwrap();
        assert_eq!(seq.to_string(), s);
        assert_eq!(seq.steps().len(), 3);
        assert!(seq.has_two_qubit_gate());
        let empty: GateSequence = "".parse().unwrap();
        assert!(empty.is_empty());
        assert!("X@3".parse::<GateSequence>().is_err());
        assert!("X".parse::<GateSequence>().is_err());
        assert!("sqrtSWAP@1".parse::<GateSequence>().is_err());
        let rot: GateSequence = "Ry(0.25)@1".parse().unwrap();
        assert_eq!(rot.to_string(), "Ry(0.25)@1");
        let json = serde_json::to_string(&seq).unwrap();
        assert_eq!(json, format!("\"{s}\""));
    }

    #[test]
    fn apply_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = random::random_mixed(4, &mut rng);
        assert_eq!(apply(&GateSequence::new(), &rho).unwrap(), rho);
        let xx: GateSequence = "X@2,X@2".parse().unwrap();
        assert!(apply(&xx, &rho).unwrap().mat().max_abs_diff(rho.mat()) < 1e-15);
        let sw: GateSequence = "sqrtSWAP@12".parse().unwrap();
        let after = apply(&sw, &rho).unwrap();
        let before = decompose(&rho).unwrap().sigma_dot_sigma();
        assert!((decompose(&after).unwrap().sigma_dot_sigma() - before).abs() < 1e-14);
        assert!(DensityMatrix::new(after.into_mat()).is_ok());
    }

    #[test]
    fn heisenberg_schrodinger_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let seq: GateSequence = "Rz90@2,sqrtSWAP@12,Rx90@2,H@1,Ry(0.7)@2".parse().unwrap();
        for _ in 0..10 {
            let rho = random::random_mixed(4, &mut rng);
            let obs = random::random_mixed(4, &mut rng).into_mat();
            let lhs = apply(&seq, &rho).unwrap().expectation(&obs);
            let rhs = rho.expectation(&conjugate_observable(&seq, &obs).unwrap());
            assert!((lhs - rhs).abs() < 1e-12);
        }
        let id = CMatrix::identity(4);
        assert!(conjugate_observable(&seq, &id).unwrap().max_abs_diff(&id) < 1e-14);
        let mut bad = CMatrix::zeros(4);
        bad[(0, 1)] = ONE;
        assert!(matches!(conjugate_observable(&seq, &bad), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn clifford_frames_are_signed_permutations() {
        for name in ["X", "Y", "Z", "H", "Rx90", "Ry90", "Rz90"] {
            for target in [Target::Qubit1, Target::Qubit2] {
                let u = embed(&standard_gate(name).unwrap(), target).unwrap();
                let r = pauli_transfer(&u);
                for row in r.iter() {
                    let nonzero: Vec<f64> = row.iter().copied().filter(|v| v.abs() > 1e-12).collect();
                    assert_eq!(nonzero.len(), 1, "{name}@{target}");
                    assert!((nonzero[0].abs() - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
