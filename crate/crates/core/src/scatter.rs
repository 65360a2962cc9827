//! Spin-dependent scattering off exchange-coupled delta impurities.
//!
//! A single impurity with exchange operator `H` (either `n̂·σ_f` for a frozen
//! classical spin or `σ_f·σ_s` for a qubit) has transmission
//! `t = (𝕀 + iΩH)⁻¹` and reflection `r = t − 𝕀`, identical from both sides.
//! Two impurities a phase `kd` apart are combined with the standard two-port
//! composition, keeping all internal multiple reflections.
//!
//! Space ordering: flying qubit first, then static qubit(s).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    bloch, decompose, exchange_operator, inverse, n_dot_sigma, spin_projector, CMatrix,
    DensityMatrix, Keep, I,
};

/// Dimensionless coupling `Ω = mJ/ħ²k` and the inter-impurity phase `kd`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterParams {
    pub omega: f64,
    #[serde(default)]
    pub kd_phase: f64,
}

impl ScatterParams {
    pub fn new(omega: f64) -> Self {
        ScatterParams {
            omega,
            kd_phase: 0.0,
        }
    }

    pub fn with_kd(omega: f64, kd_phase: f64) -> Self {
        ScatterParams { omega, kd_phase }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.omega.is_finite() || !self.kd_phase.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "omega and kd must be finite (got {}, {})",
                self.omega, self.kd_phase
            )));
        }
        Ok(())
    }

    /// True when `kd` is a multiple of 2π, where the closed forms hold.
    pub fn kd_is_trivial(&self) -> bool {
        (Complex64::from_polar(1.0, self.kd_phase) - 1.0).norm() < 1e-12
    }

    fn require_trivial_kd(&self) -> Result<()> {
        if !self.kd_is_trivial() {
            return Err(Error::InvalidConfig(format!(
                "closed form requires kd = 2nπ (got {})",
                self.kd_phase
            )));
        }
        Ok(())
    }

    /// `(1 + 16Ω²)(1 + 4Ω²)`, the common denominator of the two-qubit forms.
    pub fn two_qubit_denominator(&self) -> f64 {
        let w2 = self.omega * self.omega;
        (1.0 + 16.0 * w2) * (1.0 + 4.0 * w2)
    }
}

/// Classical spin frozen along a unit vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrozenSpin {
    n_hat: [f64; 3],
}

impl FrozenSpin {
    pub fn new(n_hat: [f64; 3]) -> Result<Self> {
        Ok(FrozenSpin {
            n_hat: unit_axis(n_hat)?,
        })
    }

    /// Direction given by polar angle `theta` and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        FrozenSpin {
            n_hat: [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
        }
    }

    pub fn n_hat(&self) -> [f64; 3] {
        self.n_hat
    }
}

pub(crate) fn unit_axis(v: [f64; 3]) -> Result<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitAxis(n));
    }
    Ok(v)
}

/// S-matrix blocks `s = [r t′; t r′]` of one scatterer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterBlock {
    pub r: CMatrix,
    pub t: CMatrix,
    pub r_prime: CMatrix,
    pub t_prime: CMatrix,
}

impl ScatterBlock {
    /// Left-right symmetric delta scatterer: `r = r′ = t − 𝕀`, `t′ = t`.
    pub fn delta(t: CMatrix) -> Self {
        let r = &t - &CMatrix::identity(t.dim());
        ScatterBlock {
            r_prime: r.clone(),
            t_prime: t.clone(),
            r,
            t,
        }
    }

    /// Perfectly transparent block (`r = 0`, `t = 𝕀`).
    pub fn transparent(dim: usize) -> Self {
        ScatterBlock {
            r: CMatrix::zeros(dim),
            t: CMatrix::identity(dim),
            r_prime: CMatrix::zeros(dim),
            t_prime: CMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    /// The full `2d × 2d` matrix `[[r, t′], [t, r′]]`.
    pub fn s_matrix(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(2 * d, |row, col| {
            let (br, bc) = (row / d, col / d);
            let (i, j) = (row % d, col % d);
            match (br, bc) {
                (0, 0) => self.r[(i, j)],
                (0, 1) => self.t_prime[(i, j)],
                (1, 0) => self.t[(i, j)],
                _ => self.r_prime[(i, j)],
            }
        })
    }

    pub fn unitarity_error(&self) -> f64 {
        self.s_matrix().unitarity_error()
    }

    fn map(&self, f: impl Fn(&CMatrix) -> CMatrix) -> ScatterBlock {
        ScatterBlock {
            r: f(&self.r),
            t: f(&self.t),
            r_prime: f(&self.r_prime),
            t_prime: f(&self.t_prime),
        }
    }
}

fn delta_transmission(h: &CMatrix, omega: f64) -> CMatrix {
    let a = &CMatrix::identity(h.dim()) + &h.scale(I * omega);
    // 𝕀 + iΩH with H Hermitian has eigenvalues 1 + iΩλ, never zero.
    inverse(&a).expect("1 + iΩH is invertible for Hermitian H and real Ω")
}

/// `t = (𝕀₂ + iΩ n̂·σ_f)⁻¹` for a frozen impurity spin.
pub fn frozen_t(params: &ScatterParams, spin: &FrozenSpin) -> CMatrix {
    delta_transmission(&n_dot_sigma(spin.n_hat), params.omega)
}

pub fn frozen_block(params: &ScatterParams, spin: &FrozenSpin) -> ScatterBlock {
    ScatterBlock::delta(frozen_t(params, spin))
}

/// Rotation angle of the transmitted spin about `n̂`, `arctan(2Ω/(1−Ω²))`
/// taken on the branch continuous from `Ω = 0`.
pub fn frozen_rotation_angle(omega: f64) -> f64 {
    2.0 * omega.atan()
}

/// `P_T = 1/(1 + 2Ω²(1 + cos θ))` for two frozen spins at relative angle θ.
pub fn frozen_pair_pt(params: &ScatterParams, theta: f64) -> Result<f64> {
    params.require_trivial_kd()?;
    let w2 = params.omega * params.omega;
    Ok(1.0 / (1.0 + 2.0 * w2 * (1.0 + theta.cos())))
}

/// Cascade of a frozen spin along +z followed by one along `(θ, φ)`.
pub fn frozen_pair_block(params: &ScatterParams, theta: f64, phi: f64) -> Result<ScatterBlock> {
    let first = frozen_block(params, &FrozenSpin::from_angles(0.0, 0.0));
    let second = frozen_block(params, &FrozenSpin::from_angles(theta, phi));
    cascade(&first, &second, params)
}

/// `t = (𝕀₄ + iΩ σ_f·σ_s)⁻¹` for one qubit impurity, by matrix inversion.
pub fn qubit_t_single(params: &ScatterParams) -> CMatrix {
    delta_transmission(&exchange_operator(2, 0, 1), params.omega)
}

/// The same operator written out entrywise: the triplet sector transmits
/// with `1/(1+iΩ)` and the exchange block mixes `|01⟩, |10⟩`.
pub fn qubit_t_single_closed(omega: f64) -> CMatrix {
    let w = Complex64::new(omega, 0.0);
    let pre = 1.0 / (1.0 + I * w);
    let den = 3.0 * w + I;
    let diag = pre * (w + I) / den;
    let off = pre * 2.0 * w / den;
    let z = Complex64::new(0.0, 0.0);
    CMatrix::from_rows([
        [pre, z, z, z],
        [z, diag, off, z],
        [z, off, diag, z],
        [z, z, z, pre],
    ])
}

pub fn qubit_block(params: &ScatterParams) -> ScatterBlock {
    ScatterBlock::delta(qubit_t_single(params))
}

/// P_T for flying spin along +z and a static qubit polarized along `(θ, ·)`:
/// `((7Ω²+1) + 2Ω² cos θ) / ((Ω²+1)(9Ω²+1))`.
pub fn qubit_single_pt_closed(omega: f64, theta: f64) -> f64 {
    let w2 = omega * omega;
    ((7.0 * w2 + 1.0) + 2.0 * w2 * theta.cos()) / ((w2 + 1.0) * (9.0 * w2 + 1.0))
}

/// Lifts a flying⊗qubit block to flying⊗qubit1⊗qubit2, acting on the chosen
/// static qubit and as identity on the other.
pub fn embed_block(block: &ScatterBlock, which: Keep) -> Result<ScatterBlock> {
    if block.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: block.dim(),
        });
    }
    Ok(block.map(|m| embed_operator(m, which)))
}

/// `m` on (flying, chosen qubit), identity on the spectator.
pub fn embed_operator(m: &CMatrix, which: Keep) -> CMatrix {
    match which {
        Keep::First => m.kron(&CMatrix::identity(2)),
        Keep::Second => CMatrix::from_fn(8, |row, col| {
            let (f, q1, q2) = (row >> 2, (row >> 1) & 1, row & 1);
            let (fp, q1p, q2p) = (col >> 2, (col >> 1) & 1, col & 1);
            if q1 != q1p {
                Complex64::new(0.0, 0.0)
            } else {
                m[(f * 2 + q2, fp * 2 + q2p)]
            }
        }),
    }
}

/// Composes `b1` (left) and `b2` (right) separated by propagation phase
/// `e^{ikd}`. Phases are referenced to the outer interfaces of the pair.
///
/// `t = e^{ikd} t₂ (𝕀 − e^{2ikd} r₁′ r₂)⁻¹ t₁`, and the companions follow
/// from the same internal-amplitude bookkeeping.
pub fn cascade(b1: &ScatterBlock, b2: &ScatterBlock, params: &ScatterParams) -> Result<ScatterBlock> {
    if b1.dim() != b2.dim() {
        return Err(Error::DimensionMismatch {
            expected: b1.dim(),
            found: b2.dim(),
        });
    }
    let n = b1.dim();
    let id = CMatrix::identity(n);
    let phase = Complex64::from_polar(1.0, params.kd_phase);
    let phase2 = phase * phase;

    let resonant = |e: Error| match e {
        Error::Singular(c) => Error::ResonantCascade(c),
        other => other,
    };
    // Right-moving internal loop and left-moving internal loop.
    let loop_right = inverse(&(&id - &(&b1.r_prime * &b2.r).scale(phase2))).map_err(resonant)?;
    let loop_left = inverse(&(&id - &(&b2.r * &b1.r_prime).scale(phase2))).map_err(resonant)?;

    let t = (&(&b2.t * &loop_right) * &b1.t).scale(phase);
    let r = &b1.r + &(&(&(&b1.t_prime * &b2.r) * &loop_right) * &b1.t).scale(phase2);
    let t_prime = (&(&b1.t_prime * &loop_left) * &b2.t_prime).scale(phase);
    let r_prime =
        &b2.r_prime + &(&(&(&b2.t * &loop_right) * &b1.r_prime) * &b2.t_prime).scale(phase2);

    Ok(ScatterBlock {
        r,
        t,
        r_prime,
        t_prime,
    })
}

/// Two qubit impurities, qubit 1 on the left, qubit 2 on the right.
pub fn two_qubit_block(params: &ScatterParams) -> Result<ScatterBlock> {
    let single = qubit_block(params);
    let first = embed_block(&single, Keep::First)?;
    let second = embed_block(&single, Keep::Second)?;
    cascade(&first, &second, params)
}

/// `P_T = tr(t† t ρ)` for a state of the full flying⊗static space.
pub fn transmission_probability(block: &ScatterBlock, rho_in: &DensityMatrix) -> Result<f64> {
    rho_in.require_dim(block.dim())?;
    Ok(rho_in.expectation(&(&block.t.adjoint() * &block.t)))
}

/// `P_R = tr(r† r ρ)` for injection from the left.
pub fn reflection_probability(block: &ScatterBlock, rho_in: &DensityMatrix) -> Result<f64> {
    rho_in.require_dim(block.dim())?;
    Ok(rho_in.expectation(&(&block.r.adjoint() * &block.r)))
}

/// `P_T` together with the Bloch vector of the transmitted flying qubit,
/// read off `t ρ t† / P_T` traced over the static qubits.
pub fn transmitted_flying_state(
    block: &ScatterBlock,
    rho_in: &DensityMatrix,
) -> Result<(f64, [f64; 3])> {
    rho_in.require_dim(block.dim())?;
    let out = rho_in.mat().conjugate_by(&block.t);
    let pt = out.trace().re;
    if pt <= 0.0 {
        return Err(Error::ZeroTransmission);
    }
    let flying = out.trace_out_second(2, block.dim() / 2).scale_re(1.0 / pt);
    let b = bloch(&DensityMatrix::new_unchecked(flying))?;
    Ok((pt, b.as_array()))
}

/// `𝕀₂/2 ⊗ ρ`: unpolarized flying qubit.
pub fn unpolarized_input(rho_static: &DensityMatrix) -> DensityMatrix {
    DensityMatrix::maximally_mixed(2).kron(rho_static)
}

/// Flying qubit pure along `sign·axis`, tensored with the static state.
pub fn polarized_input(axis: [f64; 3], sign: f64, rho_static: &DensityMatrix) -> Result<DensityMatrix> {
    let a = unit_axis(axis)?;
    let proj = spin_projector([sign * a[0], sign * a[1], sign * a[2]]);
    Ok(DensityMatrix::new_unchecked(proj).kron(rho_static))
}

/// P_T of an unpolarized flying qubit as a function of `⟨σ₁·σ₂⟩` alone.
pub fn pt_from_exchange(omega: f64, sigma_dot_sigma: f64) -> f64 {
    let w2 = omega * omega;
    ((1.0 + 12.0 * w2) + 2.0 * w2 * (1.0 + 8.0 * w2) * (1.0 - sigma_dot_sigma))
        / ((1.0 + 16.0 * w2) * (1.0 + 4.0 * w2))
}

/// Closed-form two-qubit P_T for unpolarized injection:
///
/// `[(1+12Ω²) + 4Ω²(1+8Ω²)(ρ₂₂+ρ₃₃−2Re ρ₂₃)] / [(1+16Ω²)(1+4Ω²)]`
///
/// (1-based indices). Valid only at `kd = 2nπ`.
pub fn pt_unpolarized_closed_form(params: &ScatterParams, rho: &DensityMatrix) -> Result<f64> {
    params.require_trivial_kd()?;
    rho.require_dim(4)?;
    let m = rho.mat();
    let overlap = m[(1, 1)].re + m[(2, 2)].re - 2.0 * m[(1, 2)].re;
    let w2 = params.omega * params.omega;
    Ok(((1.0 + 12.0 * w2) + 4.0 * w2 * (1.0 + 8.0 * w2) * overlap) / params.two_qubit_denominator())
}

fn spin_sum(rho: &DensityMatrix) -> Result<[f64; 3]> {
    let a = decompose(rho)?.a;
    Ok([a[1][0] + a[0][1], a[2][0] + a[0][2], a[3][0] + a[0][3]])
}

/// Polarization of the transmitted flying qubit for unpolarized injection:
/// `[6Ω²/((1+16Ω²)(1+4Ω²))]·⟨σ₁+σ₂⟩/P_T`.
pub fn transmitted_polarization(params: &ScatterParams, rho: &DensityMatrix) -> Result<[f64; 3]> {
    let pt = pt_unpolarized_closed_form(params, rho)?;
    if pt <= 0.0 {
        return Err(Error::ZeroTransmission);
    }
    let pre = 6.0 * params.omega * params.omega / params.two_qubit_denominator();
    let s = spin_sum(rho)?;
    Ok(s.map(|v| pre * v / pt))
}

/// P_T with the flying qubit injected along `sign·axis`:
/// `P_T + sign·[2Ω²/((1+16Ω²)(1+4Ω²))]·⟨(σ₁+σ₂)·n̂⟩`.
///
/// Spin aligned with the static polarization transmits better (the aligned
/// three-spin state sees only the weak triplet channel), hence the plus sign.
pub fn pt_polarized_input(
    params: &ScatterParams,
    rho: &DensityMatrix,
    axis: [f64; 3],
    sign: f64,
) -> Result<f64> {
    let n = unit_axis(axis)?;
    let pt = pt_unpolarized_closed_form(params, rho)?;
    let s = spin_sum(rho)?;
    let proj = s[0] * n[0] + s[1] * n[1] + s[2] * n[2];
    let pre = 2.0 * params.omega * params.omega / params.two_qubit_denominator();
    Ok(pt + sign.signum() * pre * proj)
}
