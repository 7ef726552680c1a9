//! Singular values and minimum-norm least squares.
//!
//! Matrices are stored as nalgebra `DMatrix<Complex64>`; decompositions run
//! in faer's real SVD. Matrices with an all-real payload are decomposed
//! directly, complex ones through the real embedding
//! `[[Re A, -Im A], [Im A, Re A]]`, whose singular values are those of `A`,
//! each repeated twice. (nalgebra's own SVD can stall at a backward error
//! near `1e-6` on well-conditioned matrices with repeated singular values,
//! which the circulant structure of periodic models produces routinely.)

use faer::Mat;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn is_real(a: &DMatrix<Complex64>) -> bool {
    a.iter().all(|v| v.im == 0.0)
}

/// `a` itself when real, otherwise its real embedding.
fn to_real(a: &DMatrix<Complex64>, real: bool) -> Mat<f64> {
    let (r, c) = a.shape();
    if real {
        return Mat::from_fn(r, c, |i, j| a[(i, j)].re);
    }
    Mat::from_fn(2 * r, 2 * c, |i, j| {
        let v = a[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    })
}

/// Singular values in descending order.
pub(crate) fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let real = is_real(a);
    let mut sv = to_real(a, real)
        .singular_values()
        .expect("SVD of a finite matrix converges");
    sv.sort_by(|x, y| y.total_cmp(x));
    if real {
        sv
    } else {
        sv.into_iter().step_by(2).collect()
    }
}

/// `(σ_min, σ_max)` of a matrix, counting missing singular values of a
/// wide matrix as zeros.
pub(crate) fn extreme_singular_values(a: &DMatrix<Complex64>) -> (f64, f64) {
    let sv = singular_values(a);
    let max = sv.first().copied().unwrap_or(0.0);
    let min = if a.nrows() < a.ncols() {
        0.0
    } else {
        sv.last().copied().unwrap_or(0.0)
    };
    (min, max)
}

pub(crate) struct LeastSquares {
    pub solution: DVector<Complex64>,
    pub residual: f64,
    pub sigma_min: f64,
    pub rank_deficient: bool,
}

/// Minimum-norm least-squares solve of `a x = b`. Singular values at or
/// below `rel_tol · σ_max` are discarded.
pub(crate) fn min_norm_solve(a: &DMatrix<Complex64>, b: &DVector<Complex64>, rel_tol: f64) -> LeastSquares {
    let (r, c) = a.shape();
    if r == 0 || c == 0 {
        return LeastSquares {
            solution: DVector::zeros(c),
            residual: b.norm(),
            sigma_min: 0.0,
            rank_deficient: true,
        };
    }
    let real = is_real(a);
    let svd = to_real(a, real).thin_svd().expect("SVD of a finite matrix converges");
    let (u, v) = (svd.U(), svd.V());
    let sigma = svd.S().column_vector();
    let k = sigma.nrows();
    let sigma_max = (0..k).map(|i| sigma[i]).fold(0.0, f64::max);
    let mut sigma_min = (0..k).map(|i| sigma[i]).fold(f64::INFINITY, f64::min);
    if r < c || !sigma_min.is_finite() {
        sigma_min = 0.0;
    }
    let eps = rel_tol * sigma_max;
    let rank_deficient = sigma_min <= eps;

    // Right-hand sides in real form: the real and imaginary parts of b as
    // two columns for a real matrix, the stacked vector for an embedding.
    let rhs: Vec<Vec<f64>> = if real {
        vec![b.iter().map(|z| z.re).collect(), b.iter().map(|z| z.im).collect()]
    } else {
        vec![b.iter().map(|z| z.re).chain(b.iter().map(|z| z.im)).collect()]
    };
    let x: Vec<Vec<f64>> = rhs
        .iter()
        .map(|y| {
            let mut x = vec![0.0; v.nrows()];
            for j in 0..k {
                if sigma[j] <= eps {
                    continue;
                }
                let coef = (0..u.nrows()).map(|i| u[(i, j)] * y[i]).sum::<f64>() / sigma[j];
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi += coef * v[(i, j)];
                }
            }
            x
        })
        .collect();
    let solution = if real {
        DVector::from_fn(c, |i, _| Complex64::new(x[0][i], x[1][i]))
    } else {
        DVector::from_fn(c, |i, _| Complex64::new(x[0][i], x[0][i + c]))
    };
    let residual = (a * &solution - b).norm();
    LeastSquares {
        solution,
        residual,
        sigma_min,
        rank_deficient,
    }
}
