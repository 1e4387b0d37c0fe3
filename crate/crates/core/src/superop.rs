//! Superoperators as dense matrices acting on vectorized operators.
//!
//! Vectorization convention (used everywhere in this crate): vec(X) stacks
//! the columns of X in order, with the column index as the leading tensor
//! factor, i.e. vec(X)[c·rows + r] = X[r, c]. Consequently the matrix of
//! X ↦ A·X·B is Bᵀ ⊗ A.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::Operator;

/// Column-stacked vectorization of an operator.
pub fn vec_std(x: &Operator) -> Vec<Complex64> {
    let (m, n) = (x.rows(), x.cols());
    let mut v = Vec::with_capacity(m * n);
    for c in 0..n {
        for r in 0..m {
            v.push(x.get(r, c));
        }
    }
    v
}

/// Inverse of [`vec_std`].
pub fn unvec_std(v: &[Complex64], rows: usize, cols: usize) -> Result<Operator> {
    if v.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "cannot reshape a vector of length {} into {rows}x{cols}",
            v.len()
        )));
    }
    let mut m = Array2::zeros((rows, cols));
    for c in 0..cols {
        for r in 0..rows {
            m[[r, c]] = v[c * rows + r];
        }
    }
    Operator::new(m)
}

/// Linear map on operators, stored as a d_out² × d_in² matrix such that
/// vec(Φ(X)) = matrix · vec(X).
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperator {
    dim_in: usize,
    dim_out: usize,
    matrix: Array2<Complex64>,
}

impl SuperOperator {
    pub fn new(dim_in: usize, dim_out: usize, matrix: Array2<Complex64>) -> Result<Self> {
        if matrix.nrows() != dim_out * dim_out || matrix.ncols() != dim_in * dim_in {
            return Err(Error::DimensionMismatch(format!(
                "superoperator matrix must be {}x{}, got {}x{}",
                dim_out * dim_out,
                dim_in * dim_in,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "superoperator entries must be finite".into(),
            ));
        }
        Ok(SuperOperator {
            dim_in,
            dim_out,
            matrix,
        })
    }

    pub fn identity(dim: usize) -> Self {
        SuperOperator {
            dim_in: dim,
            dim_out: dim,
            matrix: Array2::from_diag_elem(dim * dim, Complex64::new(1.0, 0.0)),
        }
    }

    pub fn zero(dim_in: usize, dim_out: usize) -> Self {
        SuperOperator {
            dim_in,
            dim_out,
            matrix: Array2::zeros((dim_out * dim_out, dim_in * dim_in)),
        }
    }

    /// Matrix of X ↦ A·X·B, which is Bᵀ ⊗ A.
    pub fn from_left_right(a: &Operator, b: &Operator) -> Result<Self> {
        if a.cols() != b.rows() || a.rows() != b.cols() {
            return Err(Error::DimensionMismatch(format!(
                "two-sided multiplication needs A ({}x{}) and B ({}x{}) with matching corners",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        let bt = b.transpose();
        let m = bt.kron(a);
        SuperOperator::new(a.cols(), a.rows(), m.into_data())
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, x: &Operator) -> Result<Operator> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "superoperator expects a {0}x{0} input, got {1}x{2}",
                self.dim_in,
                x.rows(),
                x.cols()
            )));
        }
        let v = vec_std(x);
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim_out * self.dim_out];
        for (row, o) in out.iter_mut().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for (col, &vi) in v.iter().enumerate() {
                s += self.matrix[[row, col]] * vi;
            }
            *o = s;
        }
        unvec_std(&out, self.dim_out, self.dim_out)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &SuperOperator) -> Result<SuperOperator> {
        if self.dim_in != other.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: inner dimensions {} and {} differ",
                self.dim_in, other.dim_out
            )));
        }
        SuperOperator::new(other.dim_in, self.dim_out, self.matrix.dot(&other.matrix))
    }

    /// Dual map with respect to the trace pairing tr(Φ(A)B) = tr(A Φ*(B)).
    ///
    /// In the vec representation this is the transpose conjugated by the
    /// index swap on both sides; for Hermiticity-preserving maps it agrees
    /// with the conjugate transpose.
    pub fn dual(&self) -> SuperOperator {
        let (di, do_) = (self.dim_in, self.dim_out);
        let mut m = Array2::zeros((di * di, do_ * do_));
        for u1 in 0..di {
            for u2 in 0..di {
                for v1 in 0..do_ {
                    for v2 in 0..do_ {
                        m[[u1 * di + u2, v1 * do_ + v2]] =
                            self.matrix[[v2 * do_ + v1, u2 * di + u1]];
                    }
                }
            }
        }
        SuperOperator {
            dim_in: do_,
            dim_out: di,
            matrix: m,
        }
    }

    /// Blockwise action id_n ⊗ Φ on n×n block matrices with d_in×d_in blocks.
    pub fn tensor_lift(&self, n: usize) -> Result<SuperOperator> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "tensor lift requires n >= 1".into(),
            ));
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let (di, do_) = (self.dim_in, self.dim_out);
        let (bi, bo) = (n * di, n * do_);
        let mut m = Array2::zeros((bo * bo, bi * bi));
        for jb in 0..n {
            for kb in 0..n {
                for q in 0..do_ {
                    for p in 0..do_ {
                        let row = (kb * do_ + q) * bo + (jb * do_ + p);
                        for c in 0..di {
                            for r in 0..di {
                                let col = (kb * di + c) * bi + (jb * di + r);
                                m[[row, col]] = self.matrix[[q * do_ + p, c * di + r]];
                            }
                        }
                    }
                }
            }
        }
        SuperOperator::new(bi, bo, m)
    }

    /// Φ ∘ (B*(·)B) as a superoperator.
    pub fn sandwich(&self, b: &Operator) -> Result<SuperOperator> {
        if b.rows() != self.dim_in || b.cols() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "sandwich operator must be {0}x{0}, got {1}x{2}",
                self.dim_in,
                b.rows(),
                b.cols()
            )));
        }
        let inner = SuperOperator::from_left_right(&b.adjoint(), b)?;
        self.compose(&inner)
    }

    /// Trace of the superoperator viewed as an operator on the
    /// Hilbert-Schmidt space (the trace of its d²×d² matrix).
    pub fn trace(&self) -> Result<Complex64> {
        if self.dim_in != self.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "superoperator trace requires d_in = d_out, got {} and {}",
                self.dim_in, self.dim_out
            )));
        }
        Ok((0..self.matrix.nrows()).map(|j| self.matrix[[j, j]]).sum())
    }

    pub fn add(&self, other: &SuperOperator) -> SuperOperator {
        assert_eq!(self.matrix.dim(), other.matrix.dim());
        SuperOperator {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &SuperOperator) -> SuperOperator {
        assert_eq!(self.matrix.dim(), other.matrix.dim());
        SuperOperator {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn scaled(&self, c: Complex64) -> SuperOperator {
        SuperOperator {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix: self.matrix.mapv(|z| z * c),
        }
    }

    /// Frobenius norm of the representing matrix (= Hilbert-Schmidt norm of
    /// the superoperator).
    pub fn hs_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &SuperOperator) -> f64 {
        assert_eq!(self.matrix.dim(), other.matrix.dim());
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// The representing matrix as an Operator (for Schatten-norm reuse).
    pub fn as_operator(&self) -> Operator {
        Operator::new(self.matrix.clone()).expect("finite by invariant")
    }

    /// Max deviation from L(X*) = L(X)* over all matrix units.
    pub fn hermiticity_preservation_defect(&self) -> f64 {
        let (di, do_) = (self.dim_in, self.dim_out);
        let mut worst = 0.0f64;
        for u1 in 0..do_ {
            for u2 in 0..do_ {
                for v1 in 0..di {
                    for v2 in 0..di {
                        let a = self.matrix[[u1 * do_ + u2, v1 * di + v2]];
                        let b = self.matrix[[u2 * do_ + u1, v2 * di + v1]].conj();
                        worst = worst.max((a - b).norm());
                    }
                }
            }
        }
        worst
    }
}
