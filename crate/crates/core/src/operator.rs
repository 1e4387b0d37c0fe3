use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix with explicit dimension metadata.
///
/// Carries every operator that appears in the library: inputs and outputs of
/// superoperators, Kraus operators, reference operators, Hamiltonians, and
/// basis matrices. Entries are stored row-major and are guaranteed finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    data: Array2<Complex64>,
}

impl Operator {
    /// Wrap a dense array, rejecting NaN/Inf entries and empty shapes.
    pub fn new(data: Array2<Complex64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::InvalidArgument(
                "operator must have positive dimensions".into(),
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "operator entries must be finite (no NaN/Inf)".into(),
            ));
        }
        Ok(Operator { data })
    }

    /// Build from a row-major flat list of entries.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} operator, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let data = Array2::from_shape_vec((rows, cols), entries)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Operator::new(data)
    }

    /// Build from real entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Operator::from_vec(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Operator {
            data: Array2::zeros((rows, cols)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Operator {
            data: Array2::from_diag_elem(dim, Complex64::new(1.0, 0.0)),
        }
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Array2::zeros((diag.len(), diag.len()));
        for (j, &d) in diag.iter().enumerate() {
            m[[j, j]] = d;
        }
        Operator { data: m }
    }

    /// Matrix unit |row⟩⟨col| of the given shape.
    pub fn matrix_unit(rows: usize, cols: usize, row: usize, col: usize) -> Self {
        let mut m = Array2::zeros((rows, cols));
        m[[row, col]] = Complex64::new(1.0, 0.0);
        Operator { data: m }
    }

    /// Column vector |x⟩⟨y| outer product.
    pub fn outer(x: &[Complex64], y: &[Complex64]) -> Self {
        let mut m = Array2::zeros((x.len(), y.len()));
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                m[[i, j]] = xi * yj.conj();
            }
        }
        Operator { data: m }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<Complex64> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[[r, c]]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Operator {
        Operator {
            data: self.data.t().mapv(|z| z.conj()),
        }
    }

    pub fn transpose(&self) -> Operator {
        Operator {
            data: self.data.t().to_owned(),
        }
    }

    pub fn conj(&self) -> Operator {
        Operator {
            data: self.data.mapv(|z| z.conj()),
        }
    }

    /// Matrix product; panics on shape mismatch (validate at API boundaries).
    pub fn dot(&self, other: &Operator) -> Operator {
        assert_eq!(
            self.cols(),
            other.rows(),
            "operator product shape mismatch ({}x{} times {}x{})",
            self.rows(),
            self.cols(),
            other.rows(),
            other.cols()
        );
        Operator {
            data: self.data.dot(&other.data),
        }
    }

    pub fn add(&self, other: &Operator) -> Operator {
        Operator {
            data: &self.data + &other.data,
        }
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        Operator {
            data: &self.data - &other.data,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Operator {
        Operator {
            data: self.data.mapv(|z| z * c),
        }
    }

    /// Kronecker product, first factor leading (row index of `self` is the
    /// slow index of the result).
    pub fn kron(&self, other: &Operator) -> Operator {
        let (m, n) = (self.rows(), self.cols());
        let (p, q) = (other.rows(), other.cols());
        let mut out = Array2::zeros((m * p, n * q));
        for a in 0..m {
            for b in 0..n {
                let s = self.data[[a, b]];
                if s == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..p {
                    for d in 0..q {
                        out[[a * p + c, b * q + d]] = s * other.data[[c, d]];
                    }
                }
            }
        }
        Operator { data: out }
    }

    /// Sum of diagonal entries; panics on non-square (validated by callers).
    pub fn trace_unchecked(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows()).map(|j| self.data[[j, j]]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-abs-entry distance to another operator of the same shape.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.data.dim(), other.data.dim());
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Column `j` as a bare vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows()).map(|i| self.data[[i, j]]).collect()
    }

    /// Columnwise orthonormality defect: max |⟨c_i, c_j⟩ − δ_ij|.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.cols();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..self.rows() {
                    s += self.data[[r, i]].conj() * self.data[[r, j]];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

/// Hilbert-Schmidt inner product of bare arrays, conjugate-linear in `a`.
pub(crate) fn hs_dot(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}
