//! Weighted linear least squares through a one-sided Jacobi SVD.

use crate::error::{Error, Result};

const SWEEPS: usize = 60;

struct Svd {
    /// Left singular directions scaled by σ (columns of `A·V`).
    av: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    sigma: Vec<f64>,
}

/// Hestenes one-sided Jacobi on the columns of a row-major `m × n` matrix.
fn svd(rows: &[Vec<f64>]) -> Svd {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..m).map(|i| rows[i][j]).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for _ in 0..SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha: f64 = cols[i].iter().map(|x| x * x).sum();
                let beta: f64 = cols[j].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..m {
                    let (a, b) = (cols[i][k], cols[j][k]);
                    cols[i][k] = c * a - s * b;
                    cols[j][k] = s * a + c * b;
                }
                for k in 0..n {
                    let (a, b) = (v[i][k], v[j][k]);
                    v[i][k] = c * a - s * b;
                    v[j][k] = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    Svd { av: cols, v, sigma }
}

/// Singular values in descending order.
pub fn singular_values(rows: &[Vec<f64>]) -> Vec<f64> {
    let mut s = svd(rows).sigma;
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

#[derive(Clone, Debug)]
pub struct LsqSolution {
    pub x: Vec<f64>,
    pub rank: usize,
    /// `σ_max / σ_min` of the weighted design.
    pub condition_number: f64,
    /// Weighted residual norm `‖W(Ax − b)‖`.
    pub residual: f64,
}

/// Minimizes `Σ_k w_k² (row_k·x − b_k)²`.
///
/// Fails with [`Error::RankDeficient`] when fewer than `n` singular values
/// exceed `1e-10·σ_max`.
pub fn weighted_least_squares(rows: &[Vec<f64>], b: &[f64], weights: &[f64]) -> Result<LsqSolution> {
    let m = rows.len();
    assert_eq!(b.len(), m);
    assert_eq!(weights.len(), m);
    let n = rows.first().map_or(0, Vec::len);
    let wrows: Vec<Vec<f64>> = rows
        .iter()
        .zip(weights)
        .map(|(r, w)| r.iter().map(|x| x * w).collect())
        .collect();
    let wb: Vec<f64> = b.iter().zip(weights).map(|(x, w)| x * w).collect();

    let d = svd(&wrows);
    let smax = d.sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = 1e-10 * smax;
    let rank = d.sigma.iter().filter(|&&s| s > cutoff).count();
    if rank < n || smax == 0.0 {
        return Err(Error::RankDeficient { rank, needed: n });
    }
    let smin = d.sigma.iter().copied().fold(f64::INFINITY, f64::min);

    let mut x = vec![0.0; n];
    for k in 0..n {
        let s2 = d.sigma[k] * d.sigma[k];
        let coef: f64 = d.av[k].iter().zip(&wb).map(|(u, y)| u * y).sum::<f64>() / s2;
        for (xi, vi) in x.iter_mut().zip(&d.v[k]) {
            *xi += coef * vi;
        }
    }
    let residual = wrows
        .iter()
        .zip(&wb)
        .map(|(r, y)| {
            let fit: f64 = r.iter().zip(&x).map(|(a, xi)| a * xi).sum();
            (fit - y).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    Ok(LsqSolution {
        x,
        rank,
        condition_number: smax / smin,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_overdetermined_system() {
        let rows = vec![
            vec![1.0, 2.0, 0.0],
            vec![0.0, 1.0, -1.0],
            vec![3.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ];
        let x_true = [0.5, -1.5, 2.0];
        let b: Vec<f64> = rows
            .iter()
            .map(|r| r.iter().zip(&x_true).map(|(a, x)| a * x).sum())
            .collect();
        let sol = weighted_least_squares(&rows, &b, &[1.0, 2.0, 0.5, 1.0]).unwrap();
        for (got, want) in sol.x.iter().zip(x_true) {
            assert!((got - want).abs() < 1e-13);
        }
        assert_eq!(sol.rank, 3);
        assert!(sol.residual < 1e-13);
    }

    #[test]
    fn weights_pull_towards_precise_rows() {
        // Two inconsistent measurements of one unknown.
        let rows = vec![vec![1.0], vec![1.0]];
        let sol = weighted_least_squares(&rows, &[0.0, 1.0], &[1.0, 3.0]).unwrap();
        assert!((sol.x[0] - 0.9).abs() < 1e-14);
    }

    #[test]
    fn rank_deficiency_detected() {
        let rows = vec![vec![1.0, 2.0], vec![2.0, 4.0], vec![-1.0, -2.0]];
        let err = weighted_least_squares(&rows, &[1.0, 2.0, 3.0], &[1.0; 3]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { rank: 1, needed: 2 }));
    }

    #[test]
    fn singular_values_of_diagonal() {
        let rows = vec![vec![3.0, 0.0], vec![0.0, -4.0], vec![0.0, 0.0]];
        let s = singular_values(&rows);
        assert!((s[0] - 4.0).abs() < 1e-15 && (s[1] - 3.0).abs() < 1e-15);
    }
}
