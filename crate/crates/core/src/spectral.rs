//! Singular values, Schmidt decomposition, positive square roots and polar
//! decomposition of truncated amplitude matrices.
//!
//! The SVD is one-sided (Hestenes) Jacobi: columns are rotated pairwise until
//! mutually orthogonal relative to their norms, which keeps small singular
//! values accurate. Hermitian eigenproblems use two-sided cyclic Jacobi with
//! the same 2x2 rotation.
//!
//! Certified intervals rest on Weyl's inequality
//! `|sigma_k(M) - sigma_k(M_n)| <= ||M - M_n||` combined with the truncation
//! tail bound.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{canonical_phase, dot, norm, CMatrix};
use crate::minor::CANONICAL_PHASE_FLOOR;
use crate::state::{check_sizes, CoefficientSource, TruncatedState, TruncationConfig};

const MAX_SWEEPS: usize = 80;

/// Default relative threshold separating the kernel in [`polar_decompose`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Eigenvalues of a nonnegative-definite input down to `-PSD_CLAMP` are
/// clamped to zero; anything more negative is an error.
pub const PSD_CLAMP: f64 = 1e-10;

/// Tolerance on `|T_ij - conj(T_ji)|` accepted by [`positive_sqrt`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// `[max(0, center - radius), center + radius]`.
    pub fn around_nonnegative(center: f64, radius: f64) -> Self {
        Self {
            lo: (center - radius).max(0.0),
            hi: center + radius,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// `M = U diag(sigma) V^dagger` with `k = min(rows, cols)` columns in `U` and
/// `V`. Singular values are nonincreasing; the first significant entry of
/// each left vector is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: CMatrix,
    pub singular_values: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let (n, m) = (self.u.rows(), self.v.rows());
        let mut out = CMatrix::zeros(n, m);
        for (k, &s) in self.singular_values.iter().enumerate() {
            for i in 0..n {
                let a = self.u[(i, k)] * s;
                for j in 0..m {
                    out[(i, j)] += a * self.v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn sigma(&self, k: usize) -> f64 {
        self.singular_values.get(k).copied().unwrap_or(0.0)
    }
}

/// Applies `[p, q] <- [p, q] J` with `J = [[c, s e], [-s conj(e), c]]`.
#[inline]
fn rotate_pair(p: &mut [Complex64], q: &mut [Complex64], c: f64, s: f64, e: Complex64) {
    let se = e * s;
    let sec = e.conj() * s;
    for (a, b) in p.iter_mut().zip(q.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = x * c - sec * y;
        *b = se * x + y * c;
    }
}

/// Rotation `(c, s, e)` annihilating the off-diagonal of the Hermitian 2x2
/// `[[alpha, gamma], [conj(gamma), beta]]` under `J^dagger H J`.
#[inline]
fn jacobi_rotation(alpha: f64, beta: f64, gamma: Complex64) -> (f64, f64, Complex64) {
    let g = gamma.norm();
    let e = gamma / g;
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta.abs() > 1e150 {
        0.5 / zeta
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, c * t, e)
}

fn split_two<T>(v: &mut [T], p: usize, q: usize) -> (&mut T, &mut T) {
    debug_assert!(p < q);
    let (a, b) = v.split_at_mut(q);
    (&mut a[p], &mut b[0])
}

/// One-sided Jacobi on a matrix with `rows >= cols`.
fn jacobi_svd_tall(a: &CMatrix) -> (Vec<Vec<Complex64>>, Vec<f64>, Vec<Vec<Complex64>>) {
    let (n, m) = (a.rows(), a.cols());
    debug_assert!(n >= m);
    let mut g: Vec<Vec<Complex64>> = (0..m).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..m)
        .map(|j| {
            let mut e = vec![Complex64::default(); m];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..m {
            for q in p + 1..m {
                let alpha: f64 = g[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = g[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&g[p], &g[q]);
                let gabs = gamma.norm();
                if gabs == 0.0 || gabs <= f64::EPSILON * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                let (gp, gq) = split_two(&mut g, p, q);
                rotate_pair(gp, gq, c, s, e);
                let (vp, vq) = split_two(&mut v, p, q);
                rotate_pair(vp, vq, c, s, e);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma: Vec<f64> = g.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for &j in &order {
        let mut u: Vec<Complex64> = if sigma[j] > 0.0 {
            g[j].iter().map(|z| z / sigma[j]).collect()
        } else {
            vec![Complex64::default(); n]
        };
        if !orthonormalize_against(&mut u, &u_cols) {
            u = complete_basis(&u_cols, n);
        }
        u_cols.push(u);
    }
    let v_cols = order.iter().map(|&j| v[j].clone()).collect();
    let sigma = order.iter().map(|&j| sigma[j]).collect();
    (u_cols, sigma, v_cols)
}

/// Two passes of modified Gram-Schmidt; false if `u` collapses.
fn orthonormalize_against(u: &mut [Complex64], basis: &[Vec<Complex64>]) -> bool {
    let start = norm(u);
    if start == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for b in basis {
            let h = dot(b, u);
            for (x, y) in u.iter_mut().zip(b) {
                *x -= h * y;
            }
        }
    }
    let r = norm(u);
    if r < 0.5 * start {
        return false;
    }
    u.iter_mut().for_each(|z| *z /= r);
    true
}

fn complete_basis(basis: &[Vec<Complex64>], n: usize) -> Vec<Complex64> {
    for i in 0..n {
        let mut e = vec![Complex64::default(); n];
        e[i] = Complex64::new(1.0, 0.0);
        if orthonormalize_against(&mut e, basis) {
            return e;
        }
    }
    unreachable!(
        "basis of size {} cannot be completed in dimension {n}",
        basis.len()
    )
}

fn columns_to_matrix(cols: &[Vec<Complex64>], rows: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Singular value decomposition by one-sided Jacobi. Deterministic for a
/// fixed input.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let (n, c) = (m.rows(), m.cols());
    let (mut u_cols, sigma, mut v_cols) = if n >= c {
        jacobi_svd_tall(m)
    } else {
        let (u, s, v) = jacobi_svd_tall(&m.adjoint());
        (v, s, u)
    };
    for (u, v) in u_cols.iter_mut().zip(v_cols.iter_mut()) {
        let phase = canonical_phase(u, CANONICAL_PHASE_FLOOR);
        v.iter_mut().for_each(|z| *z *= phase);
    }
    Ok(Svd {
        u: columns_to_matrix(&u_cols, n),
        singular_values: sigma,
        v: columns_to_matrix(&v_cols, c),
    })
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> Result<f64> {
    Ok(svd(m)?.sigma(0))
}

/// `-sum p log2 p` over `p = sigma_k^2 > 0`, without renormalizing.
pub fn schmidt_entropy_bits(singular_values: &[f64]) -> f64 {
    singular_values
        .iter()
        .map(|s| s * s)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi. Eigenvalues
/// are returned in nonincreasing order with eigenvectors as columns.
pub fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if h.rows() != h.cols() {
        return Err(Error::InvalidArgument(format!(
            "eigenproblem needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = h.rows();
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::default(); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();
    let negligible = f64::EPSILON * f64::EPSILON * a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let gamma = a[(p, q)];
                let gabs = gamma.norm();
                let (alpha, beta) = (a[(p, p)].re, a[(q, q)].re);
                if gabs == 0.0
                    || gabs <= negligible
                    || gabs <= f64::EPSILON * alpha.abs().sqrt() * beta.abs().sqrt()
                {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                let (se, sec) = (e * s, e.conj() * s);
                for k in 0..n {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = x * c - sec * y;
                    a[(k, q)] = se * x + y * c;
                }
                for k in 0..n {
                    let (x, y) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = x * c - se * y;
                    a[(q, k)] = sec * x + y * c;
                }
                a[(p, q)] = Complex64::default();
                a[(q, p)] = Complex64::default();
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                let (vp, vq) = split_two(&mut v, p, q);
                rotate_pair(vp, vq, c, s, e);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let cols: Vec<Vec<Complex64>> = order.iter().map(|&i| v[i].clone()).collect();
    Ok((values, columns_to_matrix(&cols, n)))
}

/// `V diag(w) V^dagger`, symmetrized.
fn hermitian_from_eigen(v: &CMatrix, w: &[f64]) -> CMatrix {
    let n = v.rows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &wk) in w.iter().enumerate() {
        if wk == 0.0 {
            continue;
        }
        for i in 0..n {
            let a = v[(i, k)] * wk;
            for j in 0..n {
                out[(i, j)] += a * v[(j, k)].conj();
            }
        }
    }
    let mut sym = out.clone();
    for i in 0..n {
        for j in 0..n {
            sym[(i, j)] = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
        }
    }
    sym
}

/// Unique nonnegative-definite `A` with `A A = T` for Hermitian
/// nonnegative-definite `T`.
pub fn positive_sqrt(t: &CMatrix) -> Result<CMatrix> {
    if t.rows() != t.cols() {
        return Err(Error::InvalidArgument(format!(
            "square root needs a square matrix, got {}x{}",
            t.rows(),
            t.cols()
        )));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let deviation = t.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = t.rows();
    let sym = CMatrix::from_fn(n, n, |i, j| (t[(i, j)] + t[(j, i)].conj()) * 0.5);
    let (values, vectors) = hermitian_eigen(&sym)?;
    if let Some(&lowest) = values.last() {
        if lowest < -PSD_CLAMP {
            return Err(Error::NegativeEigenvalue { eigenvalue: lowest });
        }
    }
    let roots: Vec<f64> = values.iter().map(|&w| w.max(0.0).sqrt()).collect();
    Ok(hermitian_from_eigen(&vectors, &roots))
}

/// `M = U A` with `A = sqrt(M^dagger M)` and `U` a partial isometry that is
/// zero on `ker A`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarParts {
    /// `cols x cols`, Hermitian nonnegative-definite.
    pub a: CMatrix,
    /// `rows x cols`.
    pub u: CMatrix,
    /// Number of singular values above the kernel threshold.
    pub rank: usize,
}

/// Polar decomposition with the default kernel threshold `1e-10 * sigma_1`.
pub fn polar_decompose(m: &CMatrix) -> Result<PolarParts> {
    polar_decompose_with_tol(m, DEFAULT_RANK_TOL)
}

/// Polar decomposition from the SVD: `A = V diag(sigma) V^dagger` is the
/// positive square root of `M^dagger M`, and `U` maps each right singular
/// vector with `sigma_k > rel_tol * sigma_1` to its left partner.
pub fn polar_decompose_with_tol(m: &CMatrix, rel_tol: f64) -> Result<PolarParts> {
    let d = svd(m)?;
    let threshold = rel_tol * d.sigma(0);
    let a = hermitian_from_eigen(&d.v, &d.singular_values);
    let (n, c) = (m.rows(), m.cols());
    let mut u = CMatrix::zeros(n, c);
    let mut rank = 0;
    for (k, &s) in d.singular_values.iter().enumerate() {
        if s <= threshold || s == 0.0 {
            continue;
        }
        rank += 1;
        for i in 0..n {
            let uk = d.u[(i, k)];
            for j in 0..c {
                u[(i, j)] += uk * d.v[(j, k)].conj();
            }
        }
    }
    Ok(PolarParts { a, u, rank })
}

/// Schmidt decomposition of a truncated state with certified intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    /// Nonincreasing.
    pub singular_values: Vec<f64>,
    /// Schmidt basis of subsystem A, one column per singular value.
    pub left_vectors: CMatrix,
    /// Schmidt basis of subsystem B.
    pub right_vectors: CMatrix,
    /// `[max(0, sigma_k - tau), sigma_k + tau]` with `tau` the tail bound.
    pub sigma_intervals: Vec<Interval>,
    pub truncated_entropy: f64,
}

impl SpectralSummary {
    pub fn of(state: &TruncatedState) -> Result<Self> {
        let d = svd(state.matrix())?;
        let tau = state.tail_op_bound();
        Ok(Self {
            sigma_intervals: d
                .singular_values
                .iter()
                .map(|&s| Interval::around_nonnegative(s, tau))
                .collect(),
            truncated_entropy: schmidt_entropy_bits(&d.singular_values),
            singular_values: d.singular_values,
            left_vectors: d.u,
            right_vectors: d.v,
        })
    }

    pub fn sigma(&self, k: usize) -> f64 {
        self.singular_values.get(k).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEntry {
    pub size: usize,
    pub singular_values: Vec<f64>,
    pub tail_op_bound: f64,
}

/// Spectra of the square truncations `M_n` for increasing `n`.
pub fn convergence_profile(
    src: &CoefficientSource,
    sizes: &[usize],
    config: &TruncationConfig,
) -> Result<Vec<ProfileEntry>> {
    check_sizes(sizes)?;
    sizes
        .iter()
        .map(|&n| {
            let state = src.truncate(n, n, config)?;
            Ok(ProfileEntry {
                size: n,
                singular_values: svd(state.matrix())?.singular_values,
                tail_op_bound: state.tail_op_bound(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_entry_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        a.sub(b).max_abs()
    }

    #[test]
    fn bell_spectrum() {
        let m = CMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, 0.0], &[0.0, FRAC_1_SQRT_2]]);
        let d = svd(&m).unwrap();
        assert_eq!(d.singular_values, vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert!((schmidt_entropy_bits(&d.singular_values) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tmsv_diagonal_spectrum() {
        let d: Vec<Complex64> = (0..20)
            .map(|k| c(0.75f64.sqrt() * 0.5f64.powi(k), 0.0))
            .collect();
        let s = svd(&CMatrix::diagonal(&d)).unwrap();
        for (k, sk) in s.singular_values.iter().enumerate() {
            assert!((sk - 0.75f64.sqrt() * 0.5f64.powi(k as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn wide_and_tall_reconstruct() {
        let m = CMatrix::from_fn(3, 5, |i, j| {
            c((i + 2 * j) as f64 * 0.1 - 0.3, (i * j) as f64 * 0.05)
        });
        for a in [m.clone(), m.adjoint()] {
            let d = svd(&a).unwrap();
            assert_eq!(d.singular_values.len(), 3);
            assert!(max_entry_diff(&d.reconstruct(), &a) < 1e-13);
            let utu = d.u.adjoint().matmul(&d.u);
            assert!(max_entry_diff(&utu, &CMatrix::identity(3)) < 1e-13);
            let vtv = d.v.adjoint().matmul(&d.v);
            assert!(max_entry_diff(&vtv, &CMatrix::identity(3)) < 1e-13);
            assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient_basis_is_completed() {
        let mut m = CMatrix::zeros(4, 3);
        m[(1, 0)] = c(0.6, 0.0);
        m[(1, 2)] = c(0.0, 0.8);
        let d = svd(&m).unwrap();
        assert!((d.sigma(0) - 1.0).abs() < 1e-15);
        assert_eq!(d.sigma(1), 0.0);
        let utu = d.u.adjoint().matmul(&d.u);
        assert!(max_entry_diff(&utu, &CMatrix::identity(3)) < 1e-14);
        assert!(max_entry_diff(&d.reconstruct(), &m) < 1e-15);
    }

    #[test]
    fn left_vectors_have_canonical_phase() {
        let m = CMatrix::from_fn(3, 3, |i, j| {
            c((i as f64 - j as f64) * 0.2, (i + j) as f64 * 0.1)
        });
        let d = svd(&m).unwrap();
        for k in 0..3 {
            let lead =
                d.u.column(k)
                    .into_iter()
                    .find(|z| z.norm() > CANONICAL_PHASE_FLOOR)
                    .unwrap();
            assert!(lead.re > 0.0 && lead.im == 0.0);
        }
    }

    #[test]
    fn non_finite_is_rejected() {
        let m = CMatrix::from_real_rows(&[&[f64::NAN]]);
        assert_eq!(svd(&m).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn sqrt_examples() {
        let i3 = CMatrix::identity(3);
        assert!(max_entry_diff(&positive_sqrt(&i3).unwrap(), &i3) < 1e-15);
        let d = CMatrix::from_real_rows(&[&[4.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        let r = CMatrix::from_real_rows(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 0.0]]);
        assert!(max_entry_diff(&positive_sqrt(&d).unwrap(), &r) < 1e-15);
        let bell = CMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, 0.0], &[0.0, FRAC_1_SQRT_2]]);
        let root = positive_sqrt(&bell.adjoint().matmul(&bell)).unwrap();
        assert!(max_entry_diff(&root, &CMatrix::identity(2).scale(FRAC_1_SQRT_2)) < 1e-15);
    }

    #[test]
    fn sqrt_of_dense_hermitian() {
        let b = CMatrix::from_fn(3, 3, |i, j| {
            c((i + j) as f64 * 0.1 + 0.05, i as f64 * 0.1 - j as f64 * 0.1)
        });
        let t = b.adjoint().matmul(&b);
        let a = positive_sqrt(&t).unwrap();
        assert!(a.hermitian_deviation() < 1e-15);
        assert!(a.matmul(&a).sub(&t).frobenius_norm() < 1e-12);
    }

    #[test]
    fn sqrt_errors() {
        let nh = CMatrix::from_real_rows(&[&[1.0, 0.5], &[0.0, 1.0]]);
        assert!(matches!(
            positive_sqrt(&nh),
            Err(Error::NotHermitian { .. })
        ));
        let neg = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1e-6]]);
        assert!(matches!(
            positive_sqrt(&neg),
            Err(Error::NegativeEigenvalue { .. })
        ));
        let barely = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1e-12]]);
        let r = positive_sqrt(&barely).unwrap();
        assert_eq!(r[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn polar_examples() {
        let bell = CMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, 0.0], &[0.0, FRAC_1_SQRT_2]]);
        let p = polar_decompose(&bell).unwrap();
        assert!(max_entry_diff(&p.a, &CMatrix::identity(2).scale(FRAC_1_SQRT_2)) < 1e-15);
        assert!(max_entry_diff(&p.u, &CMatrix::identity(2)) < 1e-15);

        let x = [c(0.6, 0.0), c(0.0, 0.8)];
        let y = [c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)];
        let m = CMatrix::outer(&x, &y, 0.5);
        let p = polar_decompose(&m).unwrap();
        assert_eq!(p.rank, 1);
        assert!(max_entry_diff(&p.a, &CMatrix::outer(&y, &y, 0.5)) < 1e-15);
        assert!(max_entry_diff(&p.u.matmul(&p.a), &m) < 1e-15);
        let uy = p.u.mul_vec(&y);
        assert!(uy.iter().zip(&x).all(|(a, b)| (a - b).norm() < 1e-15));
        assert!(norm(&p.u.mul_vec(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])) < 1e-15);

        let z = polar_decompose(&CMatrix::zeros(2, 2)).unwrap();
        assert_eq!(z.rank, 0);
        assert_eq!(z.a, CMatrix::zeros(2, 2));
        assert_eq!(z.u, CMatrix::zeros(2, 2));
    }

    #[test]
    fn profiles() {
        let cfg = TruncationConfig::default();
        let t = CoefficientSource::two_mode_squeezed(0.5).unwrap();
        let p = convergence_profile(&t, &[2, 4, 8], &cfg).unwrap();
        let bounds: Vec<f64> = p.iter().map(|e| e.tail_op_bound).collect();
        assert_eq!(bounds, vec![0.25, 0.0625, 0.00390625]);
        for e in &p {
            assert!((e.singular_values[0] - 0.75f64.sqrt()).abs() < 1e-15);
        }

        let bell = CoefficientSource::dense(
            2,
            2,
            [
                ((0, 0), c(FRAC_1_SQRT_2, 0.0)),
                ((1, 1), c(FRAC_1_SQRT_2, 0.0)),
            ],
            0.0,
        )
        .unwrap();
        let p = convergence_profile(&bell, &[2, 3], &cfg).unwrap();
        assert_eq!(&p[0].singular_values[..], &p[1].singular_values[..2]);
        assert_eq!(p[1].singular_values[2], 0.0);

        let g = crate::SequenceSpec::geometric(0.75f64.sqrt(), 0.5);
        let o = CoefficientSource::outer_product(g.clone(), g).unwrap();
        let p = convergence_profile(&o, &[4, 8], &cfg).unwrap();
        assert!(p[0].singular_values[0] < p[1].singular_values[0]);
        assert!(p[1].singular_values[0] < 1.0);
        for e in &p {
            assert!(e.singular_values[1] < 1e-15);
        }
    }
}
