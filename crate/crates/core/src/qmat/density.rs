use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cmatrix::{CMatrix, ZERO};
use super::linalg::eigh;
use super::pauli::{pauli2, sigma};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;

/// Validation thresholds for density matrices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    /// Most negative eigenvalue accepted (given as a positive magnitude).
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: HERMITIAN_TOL,
            trace: TRACE_TOL,
            psd: PSD_TOL,
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix on 1, 2 or 3 qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl TryFrom<CMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(m: CMatrix) -> Result<Self> {
        DensityMatrix::new(m)
    }
}

impl From<DensityMatrix> for CMatrix {
    fn from(d: DensityMatrix) -> Self {
        d.mat
    }
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::with_tolerances(mat, &Tolerances::default())
    }

    pub fn with_tolerances(mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        if !matches!(mat.dim(), 2 | 4 | 8) {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: mat.dim(),
            });
        }
        let herm = mat.hermiticity_error();
        if herm > tol.hermitian {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = eigh(&mat).values[0];
        if min < -tol.psd {
            return Err(Error::NotPositive(min));
        }
        Ok(DensityMatrix { mat })
    }

    /// Wraps without validation. For matrices that are valid by construction
    /// (conjugations, tensor products and partial traces of valid states).
    pub(crate) fn new_unchecked(mat: CMatrix) -> Self {
        DensityMatrix { mat }
    }

    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidTrace(0.0));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(CMatrix::outer(&v, &v))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix::new_unchecked(CMatrix::identity(dim).scale_re(1.0 / dim as f64))
    }

    /// |0…0⟩⟨0…0| of the given dimension.
    pub fn ground(dim: usize) -> Self {
        let mut m = CMatrix::zeros(dim);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        DensityMatrix::new_unchecked(m)
    }

    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [
            ZERO,
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
            ZERO,
        ];
        DensityMatrix::new_unchecked(CMatrix::outer(&psi, &psi))
    }

    /// `p·singlet + (1-p)·𝕀₄/4`, valid for p in [-1/3, 1].
    pub fn werner(p: f64) -> Result<Self> {
        let m = &Self::singlet().mat.scale_re(p) + &CMatrix::identity(4).scale_re((1.0 - p) / 4.0);
        Self::new(m)
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.mat.kron(&other.mat))
    }

    /// `U ρ U†`; `u` is assumed unitary.
    pub fn evolve(&self, u: &CMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.mat.conjugate_by(u))
    }

    /// Re tr(ρ·O).
    pub fn expectation(&self, obs: &CMatrix) -> f64 {
        self.mat.trace_product(obs).re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.mat).values
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    pub fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// The sixteen real coefficients `a[i][j] = ⟨σ_i ⊗ σ_j⟩` of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliCoeffs {
    pub a: [[f64; 4]; 4],
}

impl PauliCoeffs {
    /// All-zero correlations, i.e. the maximally mixed state.
    pub fn mixed() -> Self {
        let mut a = [[0.0; 4]; 4];
        a[0][0] = 1.0;
        PauliCoeffs { a }
    }

    /// Packs the 15 free coefficients in row-major `(i,j) ≠ (0,0)` order.
    pub fn free(&self) -> [f64; 15] {
        let mut out = [0.0; 15];
        for (k, (i, j)) in free_indices().enumerate() {
            out[k] = self.a[i][j];
        }
        out
    }

    pub fn from_free(free: &[f64]) -> Self {
        assert_eq!(free.len(), 15);
        let mut c = Self::mixed();
        for (k, (i, j)) in free_indices().enumerate() {
            c.a[i][j] = free[k];
        }
        c
    }

    /// `⟨σ₁·σ₂⟩ = a₁₁ + a₂₂ + a₃₃`.
    pub fn sigma_dot_sigma(&self) -> f64 {
        self.a[1][1] + self.a[2][2] + self.a[3][3]
    }

    pub fn max_abs_diff(&self, other: &PauliCoeffs) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.a[i][j] - other.a[i][j]).abs());
            }
        }
        worst
    }
}

/// `(i, j)` pairs of the 15 free coefficients, row-major.
pub fn free_indices() -> impl Iterator<Item = (usize, usize)> {
    (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&p| p != (0, 0))
}

pub fn decompose(rho: &DensityMatrix) -> Result<PauliCoeffs> {
    rho.require_dim(4)?;
    decompose_matrix(rho.mat(), HERMITIAN_TOL)
}

/// `a[i][j] = tr(X·M_{i,j})` of an arbitrary Hermitian 4×4 matrix.
pub fn decompose_matrix(m: &CMatrix, herm_tol: f64) -> Result<PauliCoeffs> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim(),
        });
    }
    let herm = m.hermiticity_error();
    if herm > herm_tol {
        return Err(Error::NotHermitian(herm));
    }
    let mut a = [[0.0; 4]; 4];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let z = m.trace_product(&pauli2(i, j)?);
            debug_assert!(z.im.abs() < 1e-10 * (1.0 + m.max_abs()));
            *slot = z.re;
        }
    }
    Ok(PauliCoeffs { a })
}

/// `(1/4) Σ a_{i,j} M_{i,j}` without any positivity check.
pub fn assemble_matrix(coeffs: &PauliCoeffs) -> CMatrix {
    let mut acc = CMatrix::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            let a = coeffs.a[i][j];
            if a != 0.0 {
                acc = &acc + &sigma(i).kron(&sigma(j)).scale_re(a / 4.0);
            }
        }
    }
    acc
}

pub fn assemble(coeffs: &PauliCoeffs) -> Result<DensityMatrix> {
    if (coeffs.a[0][0] - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidTrace(coeffs.a[0][0]));
    }
    DensityMatrix::new(assemble_matrix(coeffs))
}

/// Which static qubit survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Keep {
    First,
    Second,
}

pub fn partial_trace(rho: &DensityMatrix, keep: Keep) -> Result<DensityMatrix> {
    rho.require_dim(4)?;
    let m = match keep {
        Keep::First => rho.mat().trace_out_second(2, 2),
        Keep::Second => rho.mat().trace_out_first(2, 2),
    };
    Ok(DensityMatrix::new_unchecked(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// `½(𝕀₂ + Σ ⟨σ_k⟩ σ_k)`.
    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::identity(2);
        for (k, v) in self.as_array().iter().enumerate() {
            m = &m + &sigma(k + 1).scale_re(*v);
        }
        m.scale_re(0.5)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix())
    }

    /// Rescales onto the unit ball when noise has pushed the norm past 1.
    pub fn clipped(&self) -> BlochVector {
        let n = self.norm();
        if n <= 1.0 {
            *self
        } else {
            BlochVector::new(self.x / n, self.y / n, self.z / n)
        }
    }
}

pub fn bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    rho.require_dim(2)?;
    let e = |k| rho.expectation(&sigma(k));
    Ok(BlochVector::new(e(1), e(2), e(3)))
}

/// Von Neumann entropy in nats, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho
        .eigenvalues()
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum();
    s.clamp(0.0, (rho.dim() as f64).ln())
}

pub fn nats_to_bits(s: f64) -> f64 {
    s / std::f64::consts::LN_2
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.require_dim(sigma.dim())?;
    let sqrt_rho = eigh(rho.mat()).map_values(|x| x.max(0.0).sqrt());
    let inner = &(&sqrt_rho * sigma.mat()) * &sqrt_rho;
    let tr: f64 = eigh(&inner)
        .values
        .into_iter()
        .map(|x| x.max(0.0).sqrt())
        .sum();
    Ok((tr * tr).clamp(0.0, 1.0))
}

/// `½ ‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.require_dim(sigma.dim())?;
    Ok(trace_distance_matrix(rho.mat(), sigma.mat()))
}

pub(crate) fn trace_distance_matrix(a: &CMatrix, b: &CMatrix) -> f64 {
    0.5 * eigh(&(a - b)).values.iter().map(|x| x.abs()).sum::<f64>()
}

/// Nearest unit-trace PSD matrix by clipping negative eigenvalues and
/// renormalizing. Returns the state and the trace distance moved.
pub fn project_psd(m: &CMatrix) -> (DensityMatrix, f64) {
    let e = eigh(&m.hermitian_part());
    let clipped: Vec<f64> = e.values.iter().map(|&x| x.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let n = clipped.len();
    let projected = if total > 0.0 {
        let scaled = super::linalg::Eigen {
            values: clipped.iter().map(|x| x / total).collect(),
            vectors: e.vectors.clone(),
        };
        scaled.map_values(|x| x)
    } else {
        CMatrix::identity(n).scale_re(1.0 / n as f64)
    };
    let moved = trace_distance_matrix(m, &projected);
    (DensityMatrix::new_unchecked(projected), moved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::pauli::{exchange_operator, pauli};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn decompose_known_states() {
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!(decompose(&mixed).unwrap().max_abs_diff(&PauliCoeffs::mixed()) < 1e-15);

        let a = decompose(&DensityMatrix::ground(4)).unwrap().a;
        for i in 0..4 {
            for j in 0..4 {
                let want = if matches!((i, j), (0, 0) | (3, 0) | (0, 3) | (3, 3)) {
                    1.0
                } else {
                    0.0
                };
                assert!((a[i][j] - want).abs() < 1e-15, "a[{i}][{j}]");
            }
        }

        let s = decompose(&DensityMatrix::singlet()).unwrap();
        let mut want = PauliCoeffs::mixed();
        want.a[1][1] = -1.0;
        want.a[2][2] = -1.0;
        want.a[3][3] = -1.0;
        assert!(s.max_abs_diff(&want) < 1e-15);
        assert!((s.sigma_dot_sigma() + 3.0).abs() < 1e-15);
    }

    #[test]
    fn assemble_known_coefficients() {
        let mixed = assemble(&PauliCoeffs::mixed()).unwrap();
        assert!(mixed.mat().max_abs_diff(&CMatrix::identity(4).scale_re(0.25)) < 1e-15);
        let mut s = PauliCoeffs::mixed();
        s.a[1][1] = -1.0;
        s.a[2][2] = -1.0;
        s.a[3][3] = -1.0;
        let rho = assemble(&s).unwrap();
        assert!(rho.mat().max_abs_diff(DensityMatrix::singlet().mat()) < 1e-15);
    }

    #[test]
    fn assemble_rejects_inconsistent_coefficients() {
        let mut bad = PauliCoeffs::mixed();
        bad.a[3][3] = 1.0;
        bad.a[1][1] = 1.0;
        bad.a[2][2] = 1.0;
        bad.a[3][0] = 1.0;
        assert!(matches!(assemble(&bad), Err(Error::NotPositive(_))));
        let mut untraced = PauliCoeffs::mixed();
        untraced.a[0][0] = 2.0;
        assert!(matches!(assemble(&untraced), Err(Error::InvalidTrace(_))));
    }

    #[test]
    fn decompose_rejects_non_hermitian() {
        let mut m = CMatrix::identity(4).scale_re(0.25);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(decompose_matrix(&m, HERMITIAN_TOL), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn validation_errors() {
        let mut m = CMatrix::identity(2).scale_re(0.5);
        m[(0, 1)] = c(0.0, 0.1);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
        assert!(matches!(
            DensityMatrix::new(CMatrix::identity(2)),
            Err(Error::InvalidTrace(_))
        ));
        let neg = CMatrix::diag(&[c(1.5, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotPositive(_))));
        let loose = Tolerances {
            psd: 1.0,
            ..Tolerances::default()
        };
        let neg = CMatrix::diag(&[c(1.5, 0.0), c(-0.5, 0.0)]);
        assert!(DensityMatrix::with_tolerances(neg, &loose).is_ok());
    }

    #[test]
    fn partial_trace_cases() {
        let a = BlochVector::new(0.3, -0.2, 0.5).to_density().unwrap();
        let b = BlochVector::new(0.0, 0.6, -0.1).to_density().unwrap();
        let ab = a.kron(&b);
        assert!(partial_trace(&ab, Keep::First).unwrap().mat().max_abs_diff(a.mat()) < 1e-15);
        assert!(partial_trace(&ab, Keep::Second).unwrap().mat().max_abs_diff(b.mat()) < 1e-15);
        let r1 = partial_trace(&DensityMatrix::singlet(), Keep::First).unwrap();
        assert!(r1.mat().max_abs_diff(&CMatrix::identity(2).scale_re(0.5)) < 1e-15);
    }

    #[test]
    fn reduced_state_matches_coefficients() {
        // ⟨σ_z⟩ of the reduced matrix is +a₃₀ (operational sign convention).
        let rho = DensityMatrix::ground(4);
        let r1 = partial_trace(&rho, Keep::First).unwrap();
        assert_eq!(bloch(&r1).unwrap().z, decompose(&rho).unwrap().a[3][0]);
    }

    #[test]
    fn bloch_examples() {
        let b = bloch(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert_eq!(b.as_array(), [0.0, 0.0, 0.0]);
        let b = bloch(&DensityMatrix::ground(2)).unwrap();
        assert_eq!(b.as_array(), [0.0, 0.0, 1.0]);
        let m = (&CMatrix::identity(2) + &pauli(1).unwrap().scale_re(0.6)).scale_re(0.5);
        let b = bloch(&DensityMatrix::new(m.clone()).unwrap()).unwrap();
        assert!((b.x - 0.6).abs() < 1e-15 && b.y == 0.0 && b.z == 0.0);
        assert!(b.to_matrix().max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&DensityMatrix::ground(2)).abs() < 1e-15);
        let mixed = von_neumann_entropy(&DensityMatrix::maximally_mixed(2));
        assert!((mixed - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((nats_to_bits(mixed) - 1.0).abs() < 1e-15);
        let d = DensityMatrix::new(CMatrix::diag(&[c(0.75, 0.0), c(0.25, 0.0)])).unwrap();
        let want = -0.75 * 0.75f64.ln() - 0.25 * 0.25f64.ln();
        assert!((von_neumann_entropy(&d) - want).abs() < 1e-15);
    }

    #[test]
    fn fidelity_examples() {
        let up = DensityMatrix::ground(2);
        let down = DensityMatrix::new(CMatrix::diag(&[c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert!(fidelity(&up, &down).unwrap() < 1e-15);
        assert!((fidelity(&up, &up).unwrap() - 1.0).abs() < 1e-14);
        let half = DensityMatrix::maximally_mixed(2);
        assert!((fidelity(&up, &half).unwrap() - 0.5).abs() < 1e-14);
        assert!(fidelity(&up, &DensityMatrix::singlet()).is_err());
    }

    #[test]
    fn exchange_expectation_identity() {
        // ½(1 − ⟨σ₁·σ₂⟩) = ρ₂₂ + ρ₃₃ − 2 Re ρ₂₃ on a fixed non-trivial state.
        let psi = [c(0.3, 0.1), c(0.5, -0.2), c(-0.1, 0.6), c(0.2, 0.3)];
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let m = rho.mat();
        let lhs = 0.5 * (1.0 - rho.expectation(&exchange_operator(2, 0, 1)));
        let rhs = m[(1, 1)].re + m[(2, 2)].re - 2.0 * m[(1, 2)].re;
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn projection_is_idempotent() {
        let m = CMatrix::diag(&[c(0.7, 0.0), c(0.4, 0.0), c(-0.05, 0.0), c(-0.05, 0.0)]);
        let (p, moved) = project_psd(&m);
        assert!(moved > 0.0);
        assert!((p.mat().trace().re - 1.0).abs() < 1e-15);
        let (pp, moved2) = project_psd(p.mat());
        assert!(pp.mat().max_abs_diff(p.mat()) < 1e-14);
        assert!(moved2 < 1e-14);
    }
}
