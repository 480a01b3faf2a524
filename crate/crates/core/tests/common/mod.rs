#![allow(dead_code)]

use bps_core::{CMatrix, Complex64};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn to_na(m: &CMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn unit_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let v = random_vec(rng, n);
    let s = bps_core::matrix::norm(&v);
    v.into_iter().map(|z| z / s).collect()
}

/// Gaussian matrix scaled to unit Frobenius norm.
pub fn random_unit_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let m = CMatrix::from_fn(rows, cols, |_, _| gaussian(rng));
    let f = m.frobenius_norm();
    m.scale(1.0 / f)
}

/// Unit-mass matrix of the given rank (product of Gaussian factors).
pub fn random_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, rank: usize) -> CMatrix {
    let a = CMatrix::from_fn(rows, rank, |_, _| gaussian(rng));
    let b = CMatrix::from_fn(rank, cols, |_, _| gaussian(rng));
    let m = a.matmul(&b);
    let f = m.frobenius_norm();
    m.scale(1.0 / f)
}

/// Singular values from nalgebra, descending.
pub fn oracle_singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn oracle_op_norm(m: &CMatrix) -> f64 {
    oracle_singular_values(m).first().copied().unwrap_or(0.0)
}
