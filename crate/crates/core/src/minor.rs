//! The 2x2-minor separability test and the constructive rank-one
//! factorization by column proportionality.
//!
//! An amplitude matrix factors as `c * x y^dagger` exactly when every 2x2
//! minor vanishes, and then every column is a multiple `lambda_j` of any
//! nonzero column. The factorization pivots on the largest-norm column rather
//! than the first nonzero one; the two agree in exact arithmetic.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{canonical_phase, dot, norm, CMatrix};

/// Entries below this modulus are ignored when fixing the phase of a unit
/// vector.
pub const CANONICAL_PHASE_FLOOR: f64 = 1e-10;

/// Above this size on either side, [`max_minor_magnitude`] is estimated
/// from column-proportionality residuals instead of enumerated.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 64;

/// Rows `(i, j)` and columns `(k, l)` of a 2x2 submatrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinorIndex {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxMinor {
    pub value: f64,
    /// `None` when the matrix has a single row or column.
    pub witness: Option<MinorIndex>,
    /// `false` when the value came from the residual estimate.
    pub exhaustive: bool,
}

/// `M ~ scale * x y^dagger` with unit `x`, `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneFactor {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub scale: f64,
    /// `||M - scale * x y^dagger||_F`.
    pub residual: f64,
}

impl RankOneFactor {
    pub fn reconstruct(&self) -> CMatrix {
        CMatrix::outer(&self.x, &self.y, self.scale)
    }

    /// Builds a factor from an arbitrary pair, normalizing and fixing the
    /// phase so the first significant entry of `x` is real positive. The
    /// residual is measured against `m`.
    pub fn canonical(
        m: &CMatrix,
        mut x: Vec<Complex64>,
        mut y: Vec<Complex64>,
        scale: f64,
    ) -> Self {
        let (nx, ny) = (norm(&x), norm(&y));
        let mut scale = scale * nx * ny;
        if nx > 0.0 {
            x.iter_mut().for_each(|z| *z /= nx);
        }
        if ny > 0.0 {
            y.iter_mut().for_each(|z| *z /= ny);
        }
        if scale < 0.0 {
            scale = -scale;
            y.iter_mut().for_each(|z| *z = -*z);
        }
        let phase = canonical_phase(&mut x, CANONICAL_PHASE_FLOOR);
        y.iter_mut().for_each(|z| *z *= phase);
        let residual = m.sub(&CMatrix::outer(&x, &y, scale)).frobenius_norm();
        Self {
            x,
            y,
            scale,
            residual,
        }
    }
}

/// Result of [`proportionality_factor`].
#[derive(Debug, Clone, PartialEq)]
pub enum Proportionality {
    Factor(RankOneFactor),
    /// Some column is not a multiple of the pivot; reports the worst one.
    NotProportional {
        column: usize,
        residual: f64,
    },
    /// Every column has norm at most `tol`.
    ZeroMatrix,
}

impl Proportionality {
    pub fn factor(&self) -> Option<&RankOneFactor> {
        match self {
            Proportionality::Factor(f) => Some(f),
            _ => None,
        }
    }

    pub fn into_factor(self) -> Option<RankOneFactor> {
        match self {
            Proportionality::Factor(f) => Some(f),
            _ => None,
        }
    }
}

/// `det [[a_ik, a_il], [a_jk, a_jl]] = a_ik a_jl - a_il a_jk`.
pub fn minor_det(m: &CMatrix, i: usize, j: usize, k: usize, l: usize) -> Result<Complex64> {
    if i.max(j) >= m.rows() || k.max(l) >= m.cols() {
        return Err(Error::IndexOutOfRange(format!(
            "minor rows ({i}, {j}) cols ({k}, {l}) in a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if i == j || k == l {
        return Err(Error::InvalidArgument(
            "minor needs distinct rows and distinct columns".into(),
        ));
    }
    Ok(m[(i, k)] * m[(j, l)] - m[(i, l)] * m[(j, k)])
}

#[inline]
fn minor_abs(m: &CMatrix, i: usize, j: usize, k: usize, l: usize) -> f64 {
    (m[(i, k)] * m[(j, l)] - m[(i, l)] * m[(j, k)]).norm()
}

/// Largest `|minor|` over the row pairs of the column pair `(k, l)`.
fn max_over_rows(m: &CMatrix, k: usize, l: usize) -> (f64, MinorIndex) {
    let mut best = (
        0.0,
        MinorIndex {
            rows: (0, 1),
            cols: (k, l),
        },
    );
    for i in 0..m.rows() {
        for j in i + 1..m.rows() {
            let v = minor_abs(m, i, j, k, l);
            if v > best.0 {
                best = (
                    v,
                    MinorIndex {
                        rows: (i, j),
                        cols: (k, l),
                    },
                );
            }
        }
    }
    best
}

/// Largest 2x2 minor modulus, enumerated up to [`DEFAULT_EXHAUSTIVE_CAP`].
pub fn max_minor_magnitude(m: &CMatrix) -> MaxMinor {
    max_minor_magnitude_capped(m, DEFAULT_EXHAUSTIVE_CAP)
}

/// Like [`max_minor_magnitude`] with an explicit enumeration cap.
///
/// Above the cap the value is the exact maximum over row pairs of the
/// column pair (pivot, worst residual column). That is a genuine minor, so it
/// never exceeds the true maximum, and it is at least
/// `sigma_1 sigma_2 / (m sqrt(C(n, 2)))`.
pub fn max_minor_magnitude_capped(m: &CMatrix, cap: usize) -> MaxMinor {
    let (n, c) = (m.rows(), m.cols());
    if n < 2 || c < 2 {
        return MaxMinor {
            value: 0.0,
            witness: None,
            exhaustive: true,
        };
    }
    if n <= cap && c <= cap {
        let mut best = (
            0.0,
            MinorIndex {
                rows: (0, 1),
                cols: (0, 1),
            },
        );
        for k in 0..c {
            for l in k + 1..c {
                let cand = max_over_rows(m, k, l);
                if cand.0 > best.0 {
                    best = cand;
                }
            }
        }
        return MaxMinor {
            value: best.0,
            witness: Some(best.1),
            exhaustive: true,
        };
    }
    let cols = ColumnScan::new(m);
    let worst = (0..c)
        .filter(|&j| j != cols.pivot)
        .max_by(|&a, &b| cols.residuals[a].total_cmp(&cols.residuals[b]))
        .unwrap_or(0);
    let (k, l) = (cols.pivot.min(worst), cols.pivot.max(worst));
    let (value, witness) = max_over_rows(m, k, l);
    MaxMinor {
        value,
        witness: Some(witness),
        exhaustive: false,
    }
}

/// True iff every 2x2 minor has modulus at most `tol`.
pub fn minors_vanish(m: &CMatrix, tol: f64) -> bool {
    max_minor_magnitude(m).value <= tol
}

struct ColumnScan {
    pivot: usize,
    pivot_norm: f64,
    /// Unit vector along the pivot column (zero if the matrix is zero).
    direction: Vec<Complex64>,
    norms: Vec<f64>,
    /// `x^dagger M_j`.
    coefficients: Vec<Complex64>,
    /// `||M_j - coefficient_j x||`.
    residuals: Vec<f64>,
}

impl ColumnScan {
    fn new(m: &CMatrix) -> Self {
        let columns: Vec<Vec<Complex64>> = (0..m.cols()).map(|j| m.column(j)).collect();
        let norms: Vec<f64> = columns.iter().map(|c| norm(c)).collect();
        let mut pivot = 0;
        for (j, &v) in norms.iter().enumerate() {
            if v > norms[pivot] {
                pivot = j;
            }
        }
        let pivot_norm = norms.get(pivot).copied().unwrap_or(0.0);
        let direction: Vec<Complex64> = if pivot_norm > 0.0 {
            columns[pivot].iter().map(|z| z / pivot_norm).collect()
        } else {
            vec![Complex64::default(); m.rows()]
        };
        let mut coefficients = Vec::with_capacity(columns.len());
        let mut residuals = Vec::with_capacity(columns.len());
        for col in &columns {
            let lambda = dot(&direction, col);
            let r: f64 = col
                .iter()
                .zip(&direction)
                .map(|(a, x)| (a - lambda * x).norm_sqr())
                .sum::<f64>()
                .sqrt();
            coefficients.push(lambda);
            residuals.push(r);
        }
        residuals[pivot] = 0.0;
        Self {
            pivot,
            pivot_norm,
            direction,
            norms,
            coefficients,
            residuals,
        }
    }
}

/// Constructive rank-one factorization.
///
/// Every column must lie within `tol` (norm of its component orthogonal to
/// the pivot) of the span of the largest-norm column. Columns of norm at most
/// `tol` are taken as exactly zero. On success the residual is at most
/// `tol * sqrt(cols)`.
pub fn proportionality_factor(m: &CMatrix, tol: f64) -> Result<Proportionality> {
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be nonnegative, got {tol}"
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.cols() == 0 || m.rows() == 0 {
        return Ok(Proportionality::ZeroMatrix);
    }
    let scan = ColumnScan::new(m);
    if scan.pivot_norm <= tol {
        return Ok(Proportionality::ZeroMatrix);
    }
    let mut lambdas = Vec::with_capacity(m.cols());
    let mut worst: Option<(usize, f64)> = None;
    for j in 0..m.cols() {
        if scan.norms[j] <= tol {
            lambdas.push(Complex64::default());
            continue;
        }
        let r = scan.residuals[j];
        if r > tol && worst.is_none_or(|(_, w)| r > w) {
            worst = Some((j, r));
        }
        lambdas.push(scan.coefficients[j]);
    }
    if let Some((column, residual)) = worst {
        return Ok(Proportionality::NotProportional { column, residual });
    }
    // M_j ~ lambda_j x, so M ~ x (conj lambda)^dagger.
    let y: Vec<Complex64> = lambdas.iter().map(|l| l.conj()).collect();
    Ok(Proportionality::Factor(RankOneFactor::canonical(
        m,
        scan.direction,
        y,
        1.0,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> CMatrix {
        CMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, 0.0], &[0.0, FRAC_1_SQRT_2]])
    }

    /// Independent cofactor-style 2x2 determinant.
    fn det2(a: [[Complex64; 2]; 2]) -> Complex64 {
        a[0][0] * a[1][1] - a[1][0] * a[0][1]
    }

    #[test]
    fn bell_minor() {
        let d = minor_det(&bell(), 0, 1, 0, 1).unwrap();
        assert!((d - c(0.5, 0.0)).norm() <= f64::EPSILON);
        let mm = max_minor_magnitude(&bell());
        assert!((mm.value - 0.5).abs() <= f64::EPSILON);
        assert_eq!(
            mm.witness,
            Some(MinorIndex {
                rows: (0, 1),
                cols: (0, 1)
            })
        );
    }

    #[test]
    fn minor_is_antisymmetric() {
        let m = CMatrix::from_fn(3, 3, |i, j| {
            c((i * 3 + j) as f64 * 0.1, (i as f64) - (j as f64) * 0.3)
        });
        let d = minor_det(&m, 0, 2, 1, 2).unwrap();
        assert_eq!(minor_det(&m, 2, 0, 1, 2).unwrap(), -d);
        assert_eq!(minor_det(&m, 0, 2, 2, 1).unwrap(), -d);
        let cof = det2([[m[(0, 1)], m[(0, 2)]], [m[(2, 1)], m[(2, 2)]]]);
        assert!((d - cof).norm() < 1e-15);
    }

    #[test]
    fn minor_index_errors() {
        assert!(matches!(
            minor_det(&bell(), 0, 2, 0, 1),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            minor_det(&bell(), 0, 0, 0, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn tmsv_3x3_max_minor() {
        let d: Vec<Complex64> = (0..3)
            .map(|k| c(0.75f64.sqrt() * 0.5f64.powi(k), 0.0))
            .collect();
        let mm = max_minor_magnitude(&CMatrix::diagonal(&d));
        assert!((mm.value - 0.375).abs() < 1e-15);
    }

    #[test]
    fn single_row_has_no_witness() {
        let m = CMatrix::from_real_rows(&[&[0.6, 0.8]]);
        let mm = max_minor_magnitude(&m);
        assert_eq!(mm.value, 0.0);
        assert!(mm.witness.is_none());
        assert!(minors_vanish(&m, 0.0));
    }

    #[test]
    fn zero_padded_basis_state_vanishes_at_zero_tol() {
        let mut m = CMatrix::zeros(4, 3);
        m[(0, 0)] = c(1.0, 0.0);
        assert!(minors_vanish(&m, 0.0));
        assert!(!minors_vanish(&bell(), 1e-9));
    }

    #[test]
    fn recovers_hand_built_product() {
        let m = CMatrix::from_real_rows(&[&[0.6, 0.48], &[0.48, 0.384]]);
        let f = proportionality_factor(&m, 1e-12)
            .unwrap()
            .into_factor()
            .unwrap();
        assert!(f.residual <= 1e-12);
        let back = f.reconstruct();
        for i in 0..2 {
            for j in 0..2 {
                assert!((back[(i, j)] - m[(i, j)]).norm() <= 1e-12);
            }
        }
        assert!((norm(&f.x) - 1.0).abs() < 1e-12);
        assert!((norm(&f.y) - 1.0).abs() < 1e-12);
        assert!(f.x[0].re > 0.0 && f.x[0].im == 0.0);
    }

    #[test]
    fn bell_is_not_proportional() {
        let p = proportionality_factor(&bell(), 1e-9).unwrap();
        assert!(matches!(
            p,
            Proportionality::NotProportional { column: 1, .. }
        ));
    }

    #[test]
    fn single_basis_state_factor() {
        let m = CMatrix::from_real_rows(&[&[1.0]]);
        let f = proportionality_factor(&m, 1e-9)
            .unwrap()
            .into_factor()
            .unwrap();
        assert_eq!(f.x, vec![c(1.0, 0.0)]);
        assert_eq!(f.y, vec![c(1.0, 0.0)]);
        assert_eq!(f.scale, 1.0);
        assert_eq!(f.residual, 0.0);
    }

    #[test]
    fn zero_matrix_is_signalled() {
        assert_eq!(
            proportionality_factor(&CMatrix::zeros(2, 2), 1e-9).unwrap(),
            Proportionality::ZeroMatrix
        );
        let tiny = CMatrix::from_real_rows(&[&[1e-12, 0.0], &[0.0, 1e-12]]);
        assert_eq!(
            proportionality_factor(&tiny, 1e-9).unwrap(),
            Proportionality::ZeroMatrix
        );
    }

    #[test]
    fn small_columns_are_treated_as_zero() {
        let m = CMatrix::from_real_rows(&[&[0.8, 0.0], &[0.6, 1e-11]]);
        let f = proportionality_factor(&m, 1e-9)
            .unwrap()
            .into_factor()
            .unwrap();
        assert_eq!(f.y[1], c(0.0, 0.0));
        assert!(f.residual <= 1e-9 * 2f64.sqrt());
    }

    #[test]
    fn phase_canonicalization() {
        let x = [c(0.6, 0.0), c(0.0, 0.8)];
        let y = [c(0.28, 0.0), c(0.0, 0.96)];
        let base = proportionality_factor(&CMatrix::outer(&x, &y, 0.9), 1e-9)
            .unwrap()
            .into_factor()
            .unwrap();
        for (t, p) in [(0.3, -1.2), (2.0, 0.5), (-3.0, 3.0), (1.1, 1.1)] {
            let ex = Complex64::from_polar(1.0, t);
            let ey = Complex64::from_polar(1.0, p);
            let xs: Vec<_> = x.iter().map(|z| z * ex).collect();
            let ys: Vec<_> = y.iter().map(|z| z * ey).collect();
            let f = proportionality_factor(&CMatrix::outer(&xs, &ys, 0.9), 1e-9)
                .unwrap()
                .into_factor()
                .unwrap();
            assert!((f.scale - base.scale).abs() < 1e-12);
            for (a, b) in f.x.iter().zip(&base.x) {
                assert!((a - b).norm() < 1e-12);
            }
            // The matrix itself carries the global phase e^{i(t - p)}, which
            // lands on y.
            let global = Complex64::from_polar(1.0, p - t);
            for (a, b) in f.y.iter().zip(&base.y) {
                assert!((a - b * global).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn estimate_above_cap_is_a_genuine_minor() {
        let m = CMatrix::from_fn(5, 4, |i, j| {
            c(
                ((i * 7 + j * 3) % 5) as f64 * 0.1,
                (i as f64 - j as f64) * 0.05,
            )
        });
        let exact = max_minor_magnitude_capped(&m, 64);
        let est = max_minor_magnitude_capped(&m, 2);
        assert!(!est.exhaustive);
        assert!(est.value <= exact.value);
        let w = est.witness.unwrap();
        let d = minor_det(&m, w.rows.0, w.rows.1, w.cols.0, w.cols.1).unwrap();
        assert!((d.norm() - est.value).abs() < 1e-15);
        assert!(est.value > 0.0);
    }
}
