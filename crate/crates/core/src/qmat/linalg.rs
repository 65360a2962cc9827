//! LU inversion and Hermitian eigen-decomposition for small dense matrices.

use num_complex::Complex64;

use super::cmatrix::{CMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Inverses whose 1-norm condition estimate exceeds this are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Off-diagonal Frobenius norm at which a Jacobi sweep stops.
pub const JACOBI_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 100;

fn norm1(m: &CMatrix) -> f64 {
    let n = m.dim();
    (0..n)
        .map(|c| (0..n).map(|r| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse by LU with partial pivoting.
///
/// Fails with [`Error::Singular`] on an exact zero pivot or when
/// `‖A‖₁‖A⁻¹‖₁` exceeds [`CONDITION_LIMIT`].
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    let n = a.dim();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| lu[(i, k)].norm().total_cmp(&lu[(j, k)].norm()))
            .unwrap();
        if lu[(pivot, k)].norm() == 0.0 {
            return Err(Error::Singular(f64::INFINITY));
        }
        if pivot != k {
            for c in 0..n {
                let tmp = lu[(k, c)];
                lu[(k, c)] = lu[(pivot, c)];
                lu[(pivot, c)] = tmp;
            }
            perm.swap(k, pivot);
        }
        let d = lu[(k, k)];
        for r in k + 1..n {
            let f = lu[(r, k)] / d;
            lu[(r, k)] = f;
            for c in k + 1..n {
                let sub = f * lu[(k, c)];
                lu[(r, c)] -= sub;
            }
        }
    }

    let mut inv = CMatrix::zeros(n);
    let mut col = vec![ZERO; n];
    for j in 0..n {
        // solve L y = P e_j, then U x = y
        for (i, slot) in col.iter_mut().enumerate() {
            *slot = if perm[i] == j { ONE } else { ZERO };
        }
        for i in 0..n {
            let mut s = col[i];
            for k in 0..i {
                s -= lu[(i, k)] * col[k];
            }
            col[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = col[i];
            for k in i + 1..n {
                s -= lu[(i, k)] * col[k];
            }
            col[i] = s / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }

    let cond = norm1(a) * norm1(&inv);
    if !cond.is_finite() || cond > CONDITION_LIMIT {
        return Err(Error::Singular(cond));
    }
    Ok(inv)
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// Column `k` holds the eigenvector for `values[k]`.
    pub vectors: CMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.dim()).map(|r| self.vectors[(r, k)]).collect()
    }

    /// Rebuilds `V f(Λ) V†`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        CMatrix::from_fn(n, |r, c| {
            (0..n)
                .map(|k| v[(r, k)] * v[(c, k)].conj() * f(self.values[k]))
                .sum()
        })
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi. The input is symmetrized first, so callers should
/// check Hermiticity themselves when it matters.
pub fn eigh(m: &CMatrix) -> Eigen {
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = CMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) < JACOBI_TOL {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // J acts on columns (p, q): J = D·R with D = diag(1, e^{-iφ}).
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                for r in 0..n {
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    a[(r, p)] = arp * jpp + arq * jqp;
                    a[(r, q)] = arp * jpq + arq * jqq;
                }
                for col in 0..n {
                    let apc = a[(p, col)];
                    let aqc = a[(q, col)];
                    a[(p, col)] = jpp.conj() * apc + jqp.conj() * aqc;
                    a[(q, col)] = jpq.conj() * apc + jqq.conj() * aqc;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp * jpp + vrq * jqp;
                    v[(r, q)] = vrp * jpq + vrq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    Eigen { values, vectors }
}

/// Real symmetric eigenvalues by cyclic Jacobi, ascending. Used on the
/// normal matrices of least-squares designs, which exceed dimension 8.
pub fn eigvals_sym(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[r][c] * a[r][c])
            .sum::<f64>()
            .sqrt();
        let scale = (0..n).map(|i| a[i][i].abs()).fold(1e-300, f64::max);
        if off < 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (rp, rq) = (row[p], row[q]);
                    row[p] = c * rp - s * rq;
                    row[q] = s * rp + c * rq;
                }
                for col in 0..n {
                    let (pc, qc) = (a[p][col], a[q][col]);
                    a[p][col] = c * pc - s * qc;
                    a[q][col] = s * pc + c * qc;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(f64::total_cmp);
    vals
}
