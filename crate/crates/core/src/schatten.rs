//! Singular values, Schatten norms, traces, the Hilbert-Schmidt inner
//! product, Schatten factorizations, partial traces, and block truncation.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{hs_dot, Operator};

const MAX_SWEEPS: usize = 64;
/// Singular values below `s_max * RANK_CUTOFF` are treated as zero when
/// deciding rank (double-precision SVD noise floor).
pub const RANK_CUTOFF: f64 = 1e-13;

/// Schmidt (singular value) decomposition X = Σ_j s_j |f_j⟩⟨g_j|.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Non-increasing, non-negative singular values.
    pub singular_values: Vec<f64>,
    /// Orthonormal left vectors f_j as columns (`rows(X)` × k).
    pub left_vectors: Operator,
    /// Orthonormal right vectors g_j as columns (`cols(X)` × k).
    pub right_vectors: Operator,
}

impl SchmidtDecomposition {
    /// Σ_j s_j |f_j⟩⟨g_j|.
    pub fn reconstruct(&self) -> Operator {
        let m = self.left_vectors.rows();
        let n = self.right_vectors.rows();
        let mut out = Array2::zeros((m, n));
        for (j, &s) in self.singular_values.iter().enumerate() {
            for r in 0..m {
                for c in 0..n {
                    out[[r, c]] +=
                        self.left_vectors.get(r, j) * self.right_vectors.get(c, j).conj() * s;
                }
            }
        }
        Operator::new(out).expect("finite by construction")
    }

    /// Number of singular values above the relative rank cutoff.
    pub fn rank(&self) -> usize {
        let s0 = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values
            .iter()
            .filter(|&&s| s > s0 * RANK_CUTOFF)
            .count()
    }
}

/// Singular value decomposition via one-sided (Hestenes) Jacobi rotations.
///
/// Returns min(rows, cols) singular values sorted non-increasing; ties are
/// broken by lexicographic comparison of the left vectors so repeated runs
/// and equal-singular-value blocks order deterministically.
pub fn svd_schmidt(x: &Operator) -> Result<SchmidtDecomposition> {
    let (m, n) = (x.rows(), x.cols());
    if m < n {
        // Decompose the adjoint and swap the vector families.
        let d = svd_schmidt(&x.adjoint())?;
        return Ok(SchmidtDecomposition {
            singular_values: d.singular_values,
            left_vectors: d.right_vectors,
            right_vectors: d.left_vectors,
        });
    }

    let mut a = x.data().clone();
    let mut v: Array2<Complex64> = Array2::from_diag_elem(n, Complex64::new(1.0, 0.0));

    let scale = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n.saturating_sub(1) {
                for r in (p + 1)..n {
                    let mut alpha = 0.0f64;
                    let mut beta = 0.0f64;
                    let mut gamma = Complex64::new(0.0, 0.0);
                    for i in 0..m {
                        alpha += a[[i, p]].norm_sqr();
                        beta += a[[i, r]].norm_sqr();
                        gamma += a[[i, p]].conj() * a[[i, r]];
                    }
                    let g = gamma.norm();
                    if g <= 1e-15 * (alpha * beta).sqrt() || g <= 1e-300 {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / Complex64::new(g, 0.0);
                    let tau = (beta - alpha) / (2.0 * g);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;

                    // Column pair times diag(1, e^{-iφ}) · [[c, s], [-s, c]].
                    let e = phase.conj();
                    for i in 0..m {
                        let ap = a[[i, p]];
                        let ar = a[[i, r]] * e;
                        a[[i, p]] = ap * c - ar * s;
                        a[[i, r]] = ap * s + ar * c;
                    }
                    for i in 0..n {
                        let vp = v[[i, p]];
                        let vr = v[[i, r]] * e;
                        v[[i, p]] = vp * c - vr * s;
                        v[[i, r]] = vp * s + vr * c;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NumericalFailure(
                "singular value decomposition did not converge".into(),
            ));
        }
    }

    let mut sigma: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| a[[i, j]].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let s_max = sigma.iter().cloned().fold(0.0, f64::max);

    let mut u = Array2::zeros((m, n));
    for j in 0..n {
        if sigma[j] > s_max * RANK_CUTOFF && sigma[j] > 0.0 {
            for i in 0..m {
                u[[i, j]] = a[[i, j]] / sigma[j];
            }
        } else {
            sigma[j] = sigma[j].max(0.0);
        }
    }

    // Sort non-increasing; stabilize ties lexicographically on left vectors.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        sigma[j]
            .partial_cmp(&sigma[i])
            .unwrap()
            .then_with(|| lex_cmp_column(&u, i, j))
    });

    let mut s_sorted = Vec::with_capacity(n);
    let mut u_sorted = Array2::zeros((m, n));
    let mut v_sorted = Array2::zeros((n, n));
    for (new, &old) in order.iter().enumerate() {
        s_sorted.push(sigma[old]);
        for i in 0..m {
            u_sorted[[i, new]] = u[[i, old]];
        }
        for i in 0..n {
            v_sorted[[i, new]] = v[[i, old]];
        }
    }

    complete_null_columns(&mut u_sorted, &s_sorted, s_max);

    Ok(SchmidtDecomposition {
        singular_values: s_sorted,
        left_vectors: Operator::new(u_sorted)?,
        right_vectors: Operator::new(v_sorted)?,
    })
}

fn lex_cmp_column(u: &Array2<Complex64>, i: usize, j: usize) -> std::cmp::Ordering {
    for r in 0..u.nrows() {
        let (a, b) = (u[[r, i]], u[[r, j]]);
        match a.re.partial_cmp(&b.re).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
        match a.im.partial_cmp(&b.im).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Fill columns belonging to (numerically) zero singular values with an
/// orthonormal completion, so the left family is always orthonormal.
fn complete_null_columns(u: &mut Array2<Complex64>, sigma: &[f64], s_max: f64) {
    let (m, n) = (u.nrows(), u.ncols());
    for j in 0..n {
        if sigma[j] > s_max * RANK_CUTOFF && sigma[j] > 0.0 {
            continue;
        }
        // Gram-Schmidt a standard basis vector against the existing columns.
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for cand in 0..m {
            let mut w: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); m];
            w[cand] = Complex64::new(1.0, 0.0);
            for k in 0..n {
                if k == j {
                    continue;
                }
                let mut overlap = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    overlap += u[[i, k]].conj() * w[i];
                }
                for i in 0..m {
                    w[i] -= overlap * u[[i, k]];
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, w));
            }
            if norm > 0.9 {
                break;
            }
        }
        let (norm, w) = best.expect("dimension is positive");
        for i in 0..m {
            u[[i, j]] = w[i] / norm;
        }
    }
}

/// Whether ‖·‖_p is an actual norm (fails the triangle inequality for p < 1).
pub fn p_is_norm(p: f64) -> bool {
    p >= 1.0
}

/// Schatten p-norm (Σ_j s_j^p)^{1/p}; the operator norm for p = ∞.
///
/// Values for p ∈ (0, 1) are computed but are quasi-norms, see [`p_is_norm`].
pub fn schatten_norm(x: &Operator, p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Schatten exponent must be positive, got {p}"
        )));
    }
    let s = svd_schmidt(x)?.singular_values;
    if p.is_infinite() {
        return Ok(s.first().copied().unwrap_or(0.0));
    }
    // Values below the rank cutoff are SVD noise; for p < 1 they would
    // otherwise dominate the sum.
    let cutoff = s.first().copied().unwrap_or(0.0) * RANK_CUTOFF;
    Ok(s.iter()
        .filter(|&&v| v > cutoff)
        .map(|&v| v.powf(p))
        .sum::<f64>()
        .powf(1.0 / p))
}

/// Trace of a square operator.
pub fn trace(x: &Operator) -> Result<Complex64> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "trace requires a square operator, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(x.trace_unchecked())
}

/// Hilbert-Schmidt inner product tr(X*Y), conjugate-linear in `x`.
pub fn hs_inner(x: &Operator, y: &Operator) -> Result<Complex64> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::DimensionMismatch(format!(
            "HS inner product requires equal shapes, got {}x{} and {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    Ok(hs_dot(x.data(), y.data()))
}

/// Split X = Y·Z with Y = Σ s_j^{r/p} |f_j⟩⟨f_j| and Z = Σ s_j^{r/q} |f_j⟩⟨g_j|,
/// where 1/r = 1/p + 1/q.
pub fn factor_split(x: &Operator, p: f64, q: f64) -> Result<(Operator, Operator)> {
    if p.is_nan() || q.is_nan() || p <= 0.0 || q <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "factor exponents must be positive, got p={p}, q={q}"
        )));
    }
    let r = 1.0 / (1.0 / p + 1.0 / q);
    let d = svd_schmidt(x)?;
    let m = x.rows();
    let n = x.cols();
    let mut y = Array2::zeros((m, m));
    let mut z = Array2::zeros((m, n));
    for (j, &s) in d.singular_values.iter().enumerate() {
        let (wy, wz) = (s.powf(r / p), s.powf(r / q));
        for a in 0..m {
            for b in 0..m {
                y[[a, b]] += d.left_vectors.get(a, j) * d.left_vectors.get(b, j).conj() * wy;
            }
            for b in 0..n {
                z[[a, b]] += d.left_vectors.get(a, j) * d.right_vectors.get(b, j).conj() * wz;
            }
        }
    }
    Ok((Operator::new(y)?, Operator::new(z)?))
}

/// Partial trace over the leading tensor factor of an operator on H⊗Z.
///
/// The result T is the unique operator with tr(T·B) = tr(A·(1_H ⊗ B)).
pub fn partial_trace_first(a: &Operator, dim_h: usize, dim_z: usize) -> Result<Operator> {
    let d = dim_h * dim_z;
    if a.rows() != d || a.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "expected a square operator of size {d} = {dim_h}*{dim_z}, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let mut t = Array2::zeros((dim_z, dim_z));
    for r in 0..dim_z {
        for c in 0..dim_z {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..dim_h {
                s += a.get(k * dim_z + r, k * dim_z + c);
            }
            t[[r, c]] = s;
        }
    }
    Operator::new(t)
}

/// Block compression Σ_{k∈rows, j∈cols} ⟨f_k, A g_j⟩ |f_k⟩⟨g_j|, embedded at
/// full shape. `basis_f` spans the codomain, `basis_g` the domain; both must
/// be unitary.
pub fn block_truncate(
    a: &Operator,
    row_set: &[usize],
    col_set: &[usize],
    basis_f: &Operator,
    basis_g: &Operator,
) -> Result<Operator> {
    if basis_f.rows() != a.rows() || basis_g.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "bases of sizes {} and {} do not match a {}x{} operator",
            basis_f.rows(),
            basis_g.rows(),
            a.rows(),
            a.cols()
        )));
    }
    for b in [basis_f, basis_g] {
        if !b.is_square() || b.orthonormality_defect() > 1e-10 {
            return Err(Error::InvalidArgument(
                "block truncation bases must be unitary".into(),
            ));
        }
    }
    if let Some(&k) = row_set.iter().find(|&&k| k >= a.rows()) {
        return Err(Error::InvalidArgument(format!(
            "row index {k} out of range for {} rows",
            a.rows()
        )));
    }
    if let Some(&j) = col_set.iter().find(|&&j| j >= a.cols()) {
        return Err(Error::InvalidArgument(format!(
            "column index {j} out of range for {} columns",
            a.cols()
        )));
    }
    // Π_F A Π_G with the projections onto the selected basis vectors.
    let proj = |basis: &Operator, set: &[usize], dim: usize| -> Operator {
        let mut p = Array2::zeros((dim, dim));
        for &k in set {
            for r in 0..dim {
                for c in 0..dim {
                    p[[r, c]] += basis.get(r, k) * basis.get(c, k).conj();
                }
            }
        }
        Operator::new(p).expect("finite")
    };
    let pf = proj(basis_f, row_set, a.rows());
    let pg = proj(basis_g, col_set, a.cols());
    Ok(pf.dot(a).dot(&pg))
}
