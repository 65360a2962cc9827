use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense square complex matrix in row-major layout.
///
/// Everything in this crate lives in dimension 2, 4 or 8 (flying qubit,
/// one or two static qubits), so no attempt is made at blocking or SIMD.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

/// JSON wire form: `{"dim": n, "re": [...], "im": [...]}`, both row-major.
#[derive(Serialize, Deserialize)]
pub(crate) struct MatrixRepr {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl TryFrom<MatrixRepr> for CMatrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.re.len() != repr.im.len() {
            return Err(Error::Parse(format!(
                "re has {} entries but im has {}",
                repr.re.len(),
                repr.im.len()
            )));
        }
        let data = repr
            .re
            .iter()
            .zip(&repr.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        CMatrix::from_vec(repr.dim, data)
    }
}

impl From<CMatrix> for MatrixRepr {
    fn from(m: CMatrix) -> Self {
        MatrixRepr {
            dim: m.dim,
            re: m.data.iter().map(|z| z.re).collect(),
            im: m.data.iter().map(|z| z.im).collect(),
        }
    }
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        CMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::NotSquare {
                dim,
                len: data.len(),
            });
        }
        Ok(CMatrix { dim, data })
    }

    /// Builds from nested rows; panics on ragged input (meant for literals).
    pub fn from_rows<const N: usize>(rows: [[Complex64; N]; N]) -> Self {
        CMatrix {
            dim: N,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        CMatrix { dim, data }
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Outer product |u⟩⟨v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |r, c| u[r] * v[c].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (da, db) = (self.dim, other.dim);
        Self::from_fn(da * db, |row, col| {
            let (p, q) = (row / db, row % db);
            let (r, s) = (col / db, col % db);
            self[(p, r)] * other[(q, s)]
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    /// `U · self · U†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        &(u * self) * &u.adjoint()
    }

    /// Re tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &CMatrix) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest |A - A†| entry.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Largest |U†U - I| entry.
    pub fn unitarity_error(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&CMatrix::identity(self.dim))
    }

    /// Symmetrized copy `(A + A†)/2`.
    pub fn hermitian_part(&self) -> CMatrix {
        (self + &self.adjoint()).scale_re(0.5)
    }

    /// Equality up to a global phase, to within `tol` entrywise.
    pub fn eq_up_to_phase(&self, other: &CMatrix, tol: f64) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let Some((idx, _)) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        else {
            return true;
        };
        if other.data[idx].norm() == 0.0 {
            return self.max_abs() <= tol;
        }
        let phase = self.data[idx] / other.data[idx];
        if (phase.norm() - 1.0).abs() > tol {
            return false;
        }
        self.max_abs_diff(&other.scale(phase)) <= tol
    }

    /// Trace out the first factor of a `d1 ⊗ d2` bipartition.
    pub fn trace_out_first(&self, d1: usize, d2: usize) -> CMatrix {
        assert_eq!(d1 * d2, self.dim);
        CMatrix::from_fn(d2, |r, c| (0..d1).map(|k| self[(k * d2 + r, k * d2 + c)]).sum())
    }

    /// Trace out the second factor of a `d1 ⊗ d2` bipartition.
    pub fn trace_out_second(&self, d1: usize, d2: usize) -> CMatrix {
        assert_eq!(d1 * d2, self.dim);
        CMatrix::from_fn(d1, |r, c| (0..d2).map(|k| self[(r * d2 + k, c * d2 + k)]).sum())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;

    fn neg(self) -> CMatrix {
        self.scale_re(-1.0)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:>9.5}{:+.5}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
