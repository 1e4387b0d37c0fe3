//! Dense Hermitian eigendecomposition via cyclic complex Jacobi rotations.
//!
//! Self-contained and deterministic; accuracy is near machine precision for
//! the matrix sizes this library targets (a few dozen rows).

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::Operator;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition A = Q diag(w) Q* of a Hermitian matrix.
///
/// Eigenvalues are returned in ascending order with matching eigenvector
/// columns in `Q`. The input is symmetrized as (A + A*)/2; callers that care
/// about the Hermiticity defect must check it beforehand.
pub fn eigh(a: &Operator) -> Result<(Vec<f64>, Operator)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition requires a square operator, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    // Work on the Hermitian part so the rotation algebra is exact.
    let mut m: Array2<Complex64> = {
        let ad = a.adjoint();
        (a.data() + ad.data()).mapv(|z| z * 0.5)
    };
    let mut q: Array2<Complex64> = Array2::from_diag_elem(n, Complex64::new(1.0, 0.0));

    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok((vec![0.0; n], Operator::new(q)?));
    }
    let stop = scale * 1e-15;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off += 2.0 * m[[p, r]].norm_sqr();
            }
        }
        if off.sqrt() <= stop {
            converged = true;
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for r in (p + 1)..n {
                let apr = m[[p, r]];
                let g = apr.norm();
                if g <= 1e-300 {
                    continue;
                }
                let app = m[[p, p]].re;
                let arr = m[[r, r]].re;
                if g <= 1e-16 * (app.abs() + arr.abs()) {
                    continue;
                }
                rotated = true;
                // Phase that makes the off-diagonal entry real, then a real
                // rotation zeroing it.
                let phase = apr / Complex64::new(g, 0.0);
                let tau = (arr - app) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                // R = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on columns (p, r).
                let rpp = Complex64::new(c, 0.0);
                let rpr = Complex64::new(s, 0.0);
                let rrp = -phase.conj() * s;
                let rrr = phase.conj() * c;

                // M <- M R (columns), then M <- R* M (rows); Q <- Q R.
                for i in 0..n {
                    let mp = m[[i, p]];
                    let mr = m[[i, r]];
                    m[[i, p]] = mp * rpp + mr * rrp;
                    m[[i, r]] = mp * rpr + mr * rrr;
                    let qp = q[[i, p]];
                    let qr = q[[i, r]];
                    q[[i, p]] = qp * rpp + qr * rrp;
                    q[[i, r]] = qp * rpr + qr * rrr;
                }
                for j in 0..n {
                    let mp = m[[p, j]];
                    let mr = m[[r, j]];
                    m[[p, j]] = rpp.conj() * mp + rrp.conj() * mr;
                    m[[r, j]] = rpr.conj() * mp + rrr.conj() * mr;
                }
            }
        }
        if !rotated {
            // Every remaining off-diagonal entry is below its pair threshold;
            // further sweeps cannot make progress.
            break;
        }
    }
    if !converged {
        // One final check; Jacobi stalls only on pathological input.
        let mut off = 0.0f64;
        for p in 0..n {
            for r in (p + 1)..n {
                off += 2.0 * m[[p, r]].norm_sqr();
            }
        }
        if off.sqrt() > stop * 100.0 {
            return Err(Error::NumericalFailure(
                "Hermitian eigendecomposition did not converge".into(),
            ));
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|j| m[[j, j]].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let mut vals = Vec::with_capacity(n);
    let mut vecs = Array2::zeros((n, n));
    for (new, &old) in order.iter().enumerate() {
        vals.push(diag[old]);
        for i in 0..n {
            vecs[[i, new]] = q[[i, old]];
        }
    }
    Ok((vals, Operator::new(vecs)?))
}

/// Smallest eigenvalue of the Hermitian part of `a`.
pub fn min_eigenvalue(a: &Operator) -> Result<f64> {
    let (vals, _) = eigh(a)?;
    Ok(vals.first().copied().unwrap_or(0.0))
}
