//! Seeded random states and unitaries.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::cmatrix::CMatrix;
use super::density::DensityMatrix;

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-uniform pure state vector.
pub fn haar_vector(dim: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn haar_pure(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let v = haar_vector(dim, rng);
    DensityMatrix::new_unchecked(CMatrix::outer(&v, &v))
}

/// Hilbert-Schmidt random mixed state `G G† / tr(G G†)`.
pub fn random_mixed(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, |_, _| gaussian(rng));
    let ggd = &g * &g.adjoint();
    let tr = ggd.trace().re;
    DensityMatrix::new_unchecked(ggd.scale_re(1.0 / tr).hermitian_part())
}

/// Haar unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    CMatrix::from_fn(dim, |r, c| cols[c][r])
}

/// Uniform point on the unit sphere.
pub fn random_axis(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-8 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}
