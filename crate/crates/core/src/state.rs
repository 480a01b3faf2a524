//! Amplitude sources and their finite truncations.
//!
//! Every source describes an amplitude matrix `M = (a_ij)` with
//! `sum |a_ij|^2 = 1`. Truncating to the upper-left `n x m` block drops the
//! entries outside the block; for any unit vector `phi`,
//! `||(M - M_n) phi||^2` is at most the dropped squared mass, so
//! `sqrt(dropped mass)` bounds the operator norm of the remainder. Closed-form
//! families compute that mass analytically rather than as `1 - partial_sum`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::DEFAULT_NORMALIZATION_TOL;

/// A square-summable sequence `v_0, v_1, ...`.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    /// Finitely supported; entries past the end are zero.
    Explicit(Vec<Complex64>),
    /// `v_k = first * ratio^k`, requires `|ratio| < 1`.
    Geometric { first: Complex64, ratio: Complex64 },
}

impl SequenceSpec {
    pub fn geometric(first: impl Into<Complex64>, ratio: impl Into<Complex64>) -> Self {
        SequenceSpec::Geometric {
            first: first.into(),
            ratio: ratio.into(),
        }
    }

    fn check(&self, what: &str) -> Result<()> {
        match self {
            SequenceSpec::Explicit(v) => {
                if v.is_empty() {
                    return Err(Error::Structural(format!(
                        "{what}: empty explicit sequence"
                    )));
                }
                if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    return Err(Error::Structural(format!("{what}: non-finite entry")));
                }
            }
            SequenceSpec::Geometric { first, ratio } => {
                if ![first.re, first.im, ratio.re, ratio.im]
                    .iter()
                    .all(|x| x.is_finite())
                {
                    return Err(Error::Structural(format!(
                        "{what}: non-finite geometric parameter"
                    )));
                }
                if ratio.norm() >= 1.0 {
                    return Err(Error::Structural(format!(
                        "{what}: geometric ratio modulus {} is not below 1",
                        ratio.norm()
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_nonnegative_real(&self, what: &str) -> Result<()> {
        let ok = |z: &Complex64| z.im == 0.0 && z.re >= 0.0;
        let fine = match self {
            SequenceSpec::Explicit(v) => v.iter().all(ok),
            SequenceSpec::Geometric { first, ratio } => ok(first) && ok(ratio),
        };
        if fine {
            Ok(())
        } else {
            Err(Error::Structural(format!(
                "{what}: Schmidt coefficients must be nonnegative reals"
            )))
        }
    }

    pub fn value(&self, k: usize) -> Complex64 {
        match self {
            SequenceSpec::Explicit(v) => v.get(k).copied().unwrap_or_default(),
            SequenceSpec::Geometric { first, ratio } => first * ratio.powu(k as u32),
        }
    }

    /// Length of the support, `None` when infinite.
    pub fn support(&self) -> Option<usize> {
        match self {
            SequenceSpec::Explicit(v) => Some(v.len()),
            SequenceSpec::Geometric { first, .. } if first.norm_sqr() == 0.0 => Some(0),
            SequenceSpec::Geometric { .. } => None,
        }
    }

    /// `sum_k |v_k|^2`.
    pub fn mass(&self) -> f64 {
        match self {
            SequenceSpec::Explicit(v) => v.iter().map(|z| z.norm_sqr()).sum(),
            SequenceSpec::Geometric { first, ratio } => first.norm_sqr() / (1.0 - ratio.norm_sqr()),
        }
    }

    /// `sum_{k < len} |v_k|^2`.
    pub fn head_mass(&self, len: usize) -> f64 {
        match self {
            SequenceSpec::Explicit(v) => v.iter().take(len).map(|z| z.norm_sqr()).sum(),
            SequenceSpec::Geometric { first, ratio } => {
                let q = ratio.norm_sqr();
                first.norm_sqr() * (1.0 - q.powi(len as i32)) / (1.0 - q)
            }
        }
    }

    /// `sum_{k >= len} |v_k|^2`, computed directly (never as `mass - head`).
    pub fn tail_mass(&self, len: usize) -> f64 {
        match self {
            SequenceSpec::Explicit(v) => v.iter().skip(len).map(|z| z.norm_sqr()).sum(),
            SequenceSpec::Geometric { first, ratio } => {
                let q = ratio.norm_sqr();
                first.norm_sqr() * q.powi(len as i32) / (1.0 - q)
            }
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Explicit(v) => write!(f, "list[{}]", v.len()),
            SequenceSpec::Geometric { first, ratio } => {
                write!(f, "geometric(first={first}, ratio={ratio})")
            }
        }
    }
}

/// How the amplitudes `a_ij` of a state are defined. Indices start at 0.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientSource {
    /// Explicit entries of a `rows x cols` matrix; missing entries are zero.
    /// `declared_tail` is squared mass known to live outside the listed
    /// entries (a residual the user cannot describe further).
    DenseFinite {
        rows: usize,
        cols: usize,
        entries: BTreeMap<(usize, usize), Complex64>,
        declared_tail: f64,
    },
    /// `a_ij = x_i * conj(y_j)`.
    OuterProduct { x: SequenceSpec, y: SequenceSpec },
    /// `a_ij = delta_ij * c_i` with `c_i >= 0`.
    SchmidtDiagonal { coeffs: SequenceSpec },
    /// `a_ij = delta_ij * sqrt(1 - lambda^2) * lambda^i`.
    TwoModeSqueezed { lambda: f64 },
}

/// Outcome of [`CoefficientSource::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub mass: f64,
    pub tol: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Largest allowed `n * m`.
    pub element_budget: usize,
    pub normalization_tol: f64,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        Self {
            element_budget: 4096 * 4096,
            normalization_tol: DEFAULT_NORMALIZATION_TOL,
        }
    }
}

impl CoefficientSource {
    /// Dense source from explicit entries. Duplicate indices are rejected.
    pub fn dense(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Complex64)>,
        declared_tail: f64,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, z) in entries {
            if map.insert(idx, z).is_some() {
                return Err(Error::Structural(format!("duplicate entry at {idx:?}")));
            }
        }
        let src = CoefficientSource::DenseFinite {
            rows,
            cols,
            entries: map,
            declared_tail,
        };
        src.check_structure()?;
        Ok(src)
    }

    /// Dense source holding every nonzero entry of `m`.
    pub fn dense_from_matrix(m: &CMatrix) -> Result<Self> {
        let entries = (0..m.rows())
            .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), m[(i, j)]))
            .filter(|(_, z)| z.norm_sqr() > 0.0);
        Self::dense(m.rows(), m.cols(), entries, 0.0)
    }

    pub fn two_mode_squeezed(lambda: f64) -> Result<Self> {
        let src = CoefficientSource::TwoModeSqueezed { lambda };
        src.check_structure()?;
        Ok(src)
    }

    pub fn outer_product(x: SequenceSpec, y: SequenceSpec) -> Result<Self> {
        let src = CoefficientSource::OuterProduct { x, y };
        src.check_structure()?;
        Ok(src)
    }

    pub fn schmidt_diagonal(coeffs: SequenceSpec) -> Result<Self> {
        let src = CoefficientSource::SchmidtDiagonal { coeffs };
        src.check_structure()?;
        Ok(src)
    }

    /// Structural well-formedness, independent of normalization.
    pub fn check_structure(&self) -> Result<()> {
        match self {
            CoefficientSource::DenseFinite {
                rows,
                cols,
                entries,
                declared_tail,
            } => {
                if *rows == 0 || *cols == 0 {
                    return Err(Error::Structural(
                        "dense source needs rows, cols >= 1".into(),
                    ));
                }
                if entries.is_empty() {
                    return Err(Error::Structural("dense source has no entries".into()));
                }
                if !(declared_tail.is_finite() && *declared_tail >= 0.0) {
                    return Err(Error::Structural(format!(
                        "declared tail {declared_tail} must be a nonnegative finite number"
                    )));
                }
                for (&(i, j), z) in entries {
                    if i >= *rows || j >= *cols {
                        return Err(Error::Structural(format!(
                            "entry ({i}, {j}) outside the declared {rows}x{cols} shape"
                        )));
                    }
                    if !z.re.is_finite() || !z.im.is_finite() {
                        return Err(Error::Structural(format!("entry ({i}, {j}) is not finite")));
                    }
                }
                Ok(())
            }
            CoefficientSource::OuterProduct { x, y } => {
                x.check("x")?;
                y.check("y")
            }
            CoefficientSource::SchmidtDiagonal { coeffs } => {
                coeffs.check("coeffs")?;
                coeffs.check_nonnegative_real("coeffs")
            }
            CoefficientSource::TwoModeSqueezed { lambda } => {
                if (0.0..1.0).contains(lambda) {
                    Ok(())
                } else {
                    Err(Error::Structural(format!(
                        "squeezing parameter {lambda} outside [0, 1)"
                    )))
                }
            }
        }
    }

    /// Total squared mass over the full index set, summed for finite data and
    /// in closed form for the infinite families.
    pub fn total_mass(&self) -> f64 {
        match self {
            CoefficientSource::DenseFinite {
                entries,
                declared_tail,
                ..
            } => entries.values().map(|z| z.norm_sqr()).sum::<f64>() + declared_tail,
            CoefficientSource::OuterProduct { x, y } => x.mass() * y.mass(),
            CoefficientSource::SchmidtDiagonal { coeffs } => coeffs.mass(),
            // (1 - l^2) * sum l^(2k) = 1 exactly for |l| < 1.
            CoefficientSource::TwoModeSqueezed { .. } => 1.0,
        }
    }

    /// Checks that the total squared mass is within `tol` of 1.
    pub fn validate(&self, tol: f64) -> Result<ValidationReport> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        self.check_structure()?;
        let mass = self.total_mass();
        Ok(ValidationReport {
            mass,
            tol,
            passed: (mass - 1.0).abs() <= tol,
        })
    }

    /// `a_ij`.
    pub fn amplitude(&self, i: usize, j: usize) -> Complex64 {
        match self {
            CoefficientSource::DenseFinite { entries, .. } => {
                entries.get(&(i, j)).copied().unwrap_or_default()
            }
            CoefficientSource::OuterProduct { x, y } => x.value(i) * y.value(j).conj(),
            CoefficientSource::SchmidtDiagonal { coeffs } if i == j => coeffs.value(i),
            CoefficientSource::TwoModeSqueezed { lambda } if i == j => {
                Complex64::new((1.0 - lambda * lambda).sqrt() * lambda.powi(i as i32), 0.0)
            }
            _ => Complex64::default(),
        }
    }

    /// Squared mass outside the upper-left `n x m` block (including any
    /// declared tail).
    pub fn omitted_mass(&self, n: usize, m: usize) -> f64 {
        match self {
            CoefficientSource::DenseFinite {
                entries,
                declared_tail,
                ..
            } => {
                entries
                    .iter()
                    .filter(|(&(i, j), _)| i >= n || j >= m)
                    .map(|(_, z)| z.norm_sqr())
                    .sum::<f64>()
                    + declared_tail
            }
            CoefficientSource::OuterProduct { x, y } => {
                // X*Y - X_n*Y_m split into nonnegative pieces.
                x.tail_mass(n) * y.mass() + x.head_mass(n) * y.tail_mass(m)
            }
            CoefficientSource::SchmidtDiagonal { coeffs } => coeffs.tail_mass(n.min(m)),
            CoefficientSource::TwoModeSqueezed { lambda } => lambda.powi(2 * n.min(m) as i32),
        }
    }

    /// Certified bound on `||M - M_nm||` for the `n x m` truncation.
    ///
    /// Any shortfall of the total mass below 1 is added to the dropped mass so
    /// the result is never below `sqrt(1 - s_nm)`.
    pub fn tail_op_bound(&self, n: usize, m: usize) -> f64 {
        let slack = (1.0 - self.total_mass()).max(0.0);
        (self.omitted_mass(n, m) + slack).max(0.0).sqrt()
    }

    /// Shape of the finite support, `None` for infinitely supported sources.
    pub fn support_shape(&self) -> Option<(usize, usize)> {
        match self {
            CoefficientSource::DenseFinite { rows, cols, .. } => Some((*rows, *cols)),
            CoefficientSource::OuterProduct { x, y } => {
                Some((x.support()?.max(1), y.support()?.max(1)))
            }
            CoefficientSource::SchmidtDiagonal { coeffs } => {
                coeffs.support().map(|k| (k.max(1), k.max(1)))
            }
            CoefficientSource::TwoModeSqueezed { lambda } if *lambda == 0.0 => Some((1, 1)),
            CoefficientSource::TwoModeSqueezed { .. } => None,
        }
    }

    /// Truncation used when the caller does not pick one: the full shape for
    /// finitely supported sources, otherwise the smallest square size whose
    /// dropped mass has square root at most `target_tail`, capped at `cap`.
    pub fn default_truncation(&self, target_tail: f64, cap: usize) -> (usize, usize) {
        if let Some((r, c)) = self.support_shape() {
            return (r.min(cap), c.min(cap));
        }
        (1..=cap)
            .find(|&n| self.omitted_mass(n, n).max(0.0).sqrt() <= target_tail)
            .map_or((cap, cap), |n| (n, n))
    }

    /// Human-readable description of the source.
    pub fn digest(&self) -> String {
        match self {
            CoefficientSource::DenseFinite {
                rows,
                cols,
                entries,
                declared_tail,
            } => {
                let mut s = format!("dense {rows}x{cols} ({} entries)", entries.len());
                if *declared_tail > 0.0 {
                    s.push_str(&format!(", declared tail {declared_tail}"));
                }
                s
            }
            CoefficientSource::OuterProduct { x, y } => format!("outer x={x} y={y}"),
            CoefficientSource::SchmidtDiagonal { coeffs } => format!("schmidt {coeffs}"),
            CoefficientSource::TwoModeSqueezed { lambda } => format!("tmsv lambda={lambda}"),
        }
    }

    /// Upper-left `n x m` block together with its certified tail bound.
    ///
    /// The source must pass structural and normalization checks (the latter
    /// at `config.normalization_tol`).
    pub fn truncate(
        &self,
        n: usize,
        m: usize,
        config: &TruncationConfig,
    ) -> Result<TruncatedState> {
        self.check_budget(n, m, config)?;
        let report = self.validate(config.normalization_tol)?;
        if !report.passed {
            return Err(Error::Normalization {
                mass: report.mass,
                tol: report.tol,
            });
        }
        let matrix = match self {
            CoefficientSource::DenseFinite { entries, .. } => {
                let mut mat = CMatrix::zeros(n, m);
                for (&(i, j), z) in entries.range(..(n, 0)) {
                    if j < m {
                        mat[(i, j)] = *z;
                    }
                }
                mat
            }
            CoefficientSource::OuterProduct { x, y } => {
                let xs: Vec<_> = (0..n).map(|i| x.value(i)).collect();
                let ys: Vec<_> = (0..m).map(|j| y.value(j)).collect();
                CMatrix::outer(&xs, &ys, 1.0)
            }
            _ => {
                let mut mat = CMatrix::zeros(n, m);
                for k in 0..n.min(m) {
                    mat[(k, k)] = self.amplitude(k, k);
                }
                mat
            }
        };
        let slack = (1.0 - self.total_mass()).max(0.0);
        let unresolved = (self.omitted_mass(n, m) + slack).max(0.0);
        Ok(TruncatedState {
            captured_mass: matrix.squared_mass(),
            unresolved_mass: unresolved,
            tail_op_bound: unresolved.sqrt(),
            matrix,
            source_digest: self.digest(),
        })
    }

    /// Tail bounds of square truncations for strictly increasing `sizes`.
    pub fn tail_profile(
        &self,
        sizes: &[usize],
        config: &TruncationConfig,
    ) -> Result<Vec<(usize, f64)>> {
        check_sizes(sizes)?;
        self.check_structure()?;
        sizes
            .iter()
            .map(|&n| {
                self.check_budget(n, n, config)?;
                Ok((n, self.tail_op_bound(n, n)))
            })
            .collect()
    }

    fn check_budget(&self, n: usize, m: usize, config: &TruncationConfig) -> Result<()> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidArgument(format!(
                "truncation {n}x{m} must be at least 1x1"
            )));
        }
        match n.checked_mul(m) {
            Some(e) if e <= config.element_budget => Ok(()),
            _ => Err(Error::Resource {
                rows: n,
                cols: m,
                budget: config.element_budget,
            }),
        }
    }
}

pub(crate) fn check_sizes(sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("size list is empty".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "sizes {sizes:?} are not strictly increasing"
        )));
    }
    Ok(())
}

/// An `n x m` block of an amplitude matrix with the mass it captures and a
/// certified bound on the operator norm of everything it leaves out.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    matrix: CMatrix,
    captured_mass: f64,
    unresolved_mass: f64,
    tail_op_bound: f64,
    source_digest: String,
}

impl TruncatedState {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    /// `s_nm = sum_{i<n, j<m} |a_ij|^2`.
    pub fn captured_mass(&self) -> f64 {
        self.captured_mass
    }

    /// Upper bound on `||M - M_nm||`.
    pub fn tail_op_bound(&self) -> f64 {
        self.tail_op_bound
    }

    /// Squared mass outside the block, `1 - s_nm` for a normalized source,
    /// computed without cancellation. Equals `tail_op_bound^2`.
    pub fn unresolved_mass(&self) -> f64 {
        self.unresolved_mass
    }

    pub fn source_digest(&self) -> &str {
        &self.source_digest
    }
}
