
use super::cmatrix::{CMatrix, I, ONE, ZERO};
use crate::error::{Error, Result};

/// σ₀ = 𝕀₂, σ₁ = σx, σ₂ = σy, σ₃ = σz.
pub fn pauli(i: usize) -> Result<CMatrix> {
    let m = match i {
        0 => CMatrix::from_rows([[ONE, ZERO], [ZERO, ONE]]),
        1 => CMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]]),
        2 => CMatrix::from_rows([[ZERO, -I], [I, ZERO]]),
        3 => CMatrix::from_rows([[ONE, ZERO], [ZERO, -ONE]]),
        _ => return Err(Error::IndexOutOfRange(i)),
    };
    Ok(m)
}

pub(crate) fn sigma(i: usize) -> CMatrix {
    pauli(i).expect("pauli index in 0..4")
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kron(b)
}

/// Two-qubit Pauli product `M_{i,j} = σ_i ⊗ σ_j`.
pub fn pauli2(i: usize, j: usize) -> Result<CMatrix> {
    Ok(pauli(i)?.kron(&pauli(j)?))
}

/// `n̂·σ` for a real 3-vector.
pub fn n_dot_sigma(n: [f64; 3]) -> CMatrix {
    let mut acc = CMatrix::zeros(2);
    for (k, &nk) in n.iter().enumerate() {
        acc = &acc + &sigma(k + 1).scale_re(nk);
    }
    acc
}

/// `σ_a·σ_b = Σ_k σ_k^(a) σ_k^(b)` on `n_factors` qubits.
pub fn exchange_operator(n_factors: usize, a: usize, b: usize) -> CMatrix {
    assert!(a < n_factors && b < n_factors && a != b);
    let dim = 1 << n_factors;
    let mut acc = CMatrix::zeros(dim);
    for k in 1..4 {
        let mut term = CMatrix::identity(1);
        for f in 0..n_factors {
            let factor = if f == a || f == b {
                sigma(k)
            } else {
                CMatrix::identity(2)
            };
            term = term.kron(&factor);
        }
        acc = &acc + &term;
    }
    acc
}

/// Single-qubit operator `op` placed on factor `which` of `n_factors` qubits.
pub fn on_qubit(op: &CMatrix, n_factors: usize, which: usize) -> CMatrix {
    assert_eq!(op.dim(), 2);
    let mut out = CMatrix::identity(1);
    for f in 0..n_factors {
        out = if f == which {
            out.kron(op)
        } else {
            out.kron(&CMatrix::identity(2))
        };
    }
    out
}

/// Projector onto the spin-½ state pointing along `n̂` (|0⟩ = +z).
pub fn spin_projector(n: [f64; 3]) -> CMatrix {
    (&CMatrix::identity(2) + &n_dot_sigma(n)).scale_re(0.5)
}
