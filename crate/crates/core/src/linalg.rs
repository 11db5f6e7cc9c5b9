//! Dense linear algebra at desk scale: Perron eigendata by power iteration
//! and stationary vectors by Gaussian elimination (binary64 or exact).

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;

pub const POWER_TOLERANCE: f64 = 1e-14;
pub const POWER_MAX_ITERATIONS: usize = 100_000;

/// Perron eigenvalue with positive right and left eigenvectors,
/// normalized so that `right` sums to 1 and `left · right = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralData {
    pub lambda: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

fn check_square_nonnegative(matrix: &[Vec<f64>]) -> Result<usize> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::EmptyAlphabet);
    }
    for row in matrix {
        if row.len() != n {
            return Err(Error::Shape(format!("expected {n}x{n}")));
        }
        if row.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite and nonnegative".into(),
            ));
        }
    }
    Ok(n)
}

pub fn is_irreducible(matrix: &[Vec<f64>]) -> bool {
    let succ = graph::support(matrix);
    let comps = graph::strongly_connected(matrix.len(), &succ);
    comps.len() == 1 && graph::is_nontrivial(&comps[0], &succ)
}

/// Perron eigendata of an irreducible nonnegative matrix.
///
/// Iterates `A + I` from the uniform vector: the shift makes the iteration
/// converge for irreducible matrices of any period without moving the
/// eigenvectors.
pub fn perron(matrix: &[Vec<f64>]) -> Result<SpectralData> {
    let n = check_square_nonnegative(matrix)?;
    if !is_irreducible(matrix) {
        return Err(Error::Reducible);
    }
    let right = power_iterate(n, |v, out| {
        for i in 0..n {
            out[i] = v[i] + (0..n).map(|j| matrix[i][j] * v[j]).sum::<f64>();
        }
    })?;
    let left = power_iterate(n, |v, out| {
        for j in 0..n {
            out[j] = v[j] + (0..n).map(|i| v[i] * matrix[i][j]).sum::<f64>();
        }
    })?;

    let rsum: f64 = right.iter().sum();
    let right: Vec<f64> = right.iter().map(|x| x / rsum).collect();
    let ar: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| matrix[i][j] * right[j]).sum())
        .collect();
    let lambda = ar.iter().sum::<f64>();
    let dot: f64 = left.iter().zip(&right).map(|(l, r)| l * r).sum();
    let left: Vec<f64> = left.iter().map(|x| x / dot).collect();

    let scale = lambda.max(1.0);
    let res_r = (0..n)
        .map(|i| (ar[i] - lambda * right[i]).abs())
        .fold(0.0, f64::max);
    let res_l = (0..n)
        .map(|j| {
            let la: f64 = (0..n).map(|i| left[i] * matrix[i][j]).sum();
            (la - lambda * left[j]).abs() / left.iter().cloned().fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    if res_r > 1e-10 * scale || res_l > 1e-10 * scale {
        return Err(Error::NoConvergence {
            iterations: POWER_MAX_ITERATIONS,
            delta: res_r.max(res_l),
        });
    }
    Ok(SpectralData {
        lambda,
        right,
        left,
    })
}

fn power_iterate(n: usize, step: impl Fn(&[f64], &mut [f64])) -> Result<Vec<f64>> {
    let mut v = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut delta = f64::INFINITY;
    for _ in 0..POWER_MAX_ITERATIONS {
        step(&v, &mut next);
        let max = next.iter().cloned().fold(0.0, f64::max);
        next.iter_mut().for_each(|x| *x /= max);
        delta = v
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut v, &mut next);
        if delta <= POWER_TOLERANCE {
            return Ok(v);
        }
    }
    Err(Error::NoConvergence {
        iterations: POWER_MAX_ITERATIONS,
        delta,
    })
}

/// Spectral radius of a nonnegative (possibly reducible) matrix: the
/// largest Perron root over its nontrivial strongly connected blocks.
pub fn spectral_radius(matrix: &[Vec<f64>]) -> Result<f64> {
    let n = check_square_nonnegative(matrix)?;
    let succ = graph::support(matrix);
    let mut best = 0.0f64;
    for comp in graph::strongly_connected(n, &succ) {
        if !graph::is_nontrivial(&comp, &succ) {
            continue;
        }
        let sub: Vec<Vec<f64>> = comp
            .iter()
            .map(|&i| comp.iter().map(|&j| matrix[i][j]).collect())
            .collect();
        best = best.max(perron(&sub)?.lambda);
    }
    Ok(best)
}

/// Unique stationary row vector of a stochastic matrix.
pub fn stationary(transition: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = transition.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| transition[j][i] - if i == j { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    let mut b = vec![0.0; n];
    a[n - 1] = vec![1.0; n];
    b[n - 1] = 1.0;
    let x = solve(a, b).ok_or_else(|| {
        Error::InvalidMeasure("stationary vector is not unique; supply it explicitly".into())
    })?;
    Ok(x.into_iter().map(|v| if v.abs() < 1e-15 { 0.0 } else { v }).collect())
}

/// Gaussian elimination with partial pivoting. `None` if singular.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-13 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Exact stationary vector of a rational stochastic matrix.
pub fn stationary_exact(transition: &[Vec<BigRational>]) -> Result<Vec<BigRational>> {
    let n = transition.len();
    let one = BigRational::one();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        &transition[j][i] - &one
                    } else {
                        transition[j][i].clone()
                    }
                })
                .collect()
        })
        .collect();
    let mut b = vec![BigRational::zero(); n];
    a[n - 1] = vec![one.clone(); n];
    b[n - 1] = one;

    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero()).ok_or_else(|| {
            Error::InvalidMeasure("stationary vector is not unique; supply it explicitly".into())
        })?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..n {
            if row == col || a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] / &a[col][col];
            for k in col..n {
                let t = &f * &a[col][k];
                a[row][k] -= t;
            }
            let t = &f * &b[col];
            b[row] -= t;
        }
    }
    let x: Vec<BigRational> = (0..n).map(|i| &b[i] / &a[i][i]).collect();
    if x.iter().any(|v| v.is_negative()) {
        return Err(Error::InvalidMeasure("negative stationary entry".into()));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_perron_root() {
        let sd = perron(&[vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((sd.lambda - phi).abs() < 1e-13);
        let dot: f64 = sd.left.iter().zip(&sd.right).map(|(a, b)| a * b).sum();
        assert!((dot - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_two_shift_is_uniform() {
        let sd = perron(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!((sd.lambda - 2.0).abs() < 1e-14);
        assert!((sd.right[0] - sd.right[1]).abs() < 1e-14);
        assert!((sd.left[0] - sd.left[1]).abs() < 1e-14);
    }

    #[test]
    fn periodic_matrix_converges_through_the_shift() {
        let sd = perron(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((sd.lambda - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reducible_input_is_rejected() {
        assert!(matches!(
            perron(&[vec![1.0, 0.0], vec![0.0, 1.0]]),
            Err(Error::Reducible)
        ));
        assert!((spectral_radius(&[vec![1.0, 1.0], vec![0.0, 3.0]]).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(spectral_radius(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap(), 0.0);
    }

    #[test]
    fn stationary_float_and_exact_agree() {
        let p = vec![vec![0.5, 0.5], vec![1.0, 0.0]];
        let s = stationary(&p).unwrap();
        assert!((s[0] - 2.0 / 3.0).abs() < 1e-15);
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let e = stationary_exact(&[vec![r(1, 2), r(1, 2)], vec![r(1, 1), r(0, 1)]]).unwrap();
        assert_eq!(e, vec![r(2, 3), r(1, 3)]);
    }

    #[test]
    fn stationary_of_two_closed_classes_is_not_unique() {
        let p = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(stationary(&p).is_err());
    }
}
