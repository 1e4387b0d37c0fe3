//! Semigroup evolution e^{tL} and verification that canonical
//! decompositions generate completely positive (and trace-preserving)
//! dynamics.

use ndarray::Array2;
use num_complex::Complex64;

use crate::choi::{choi_map, WeightedBasis};
use crate::error::{Error, Result};
use crate::gksl::{Generator, GeneratorClass};
use crate::operator::Operator;
use crate::schatten;
use crate::superop::SuperOperator;

/// Order-13 Padé coefficients for the scaling-and-squaring exponential
/// (Higham's method at fixed order).
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

fn one_norm(a: &Array2<Complex64>) -> f64 {
    let mut max = 0.0f64;
    for c in 0..a.ncols() {
        let mut col = 0.0;
        for r in 0..a.nrows() {
            col += a[[r, c]].norm();
        }
        max = max.max(col);
    }
    max
}

/// Solve A·X = B by Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Array2<Complex64>, mut b: Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let m = b.ncols();
    for col in 0..n {
        let mut piv = col;
        let mut piv_norm = a[[col, col]].norm();
        for r in (col + 1)..n {
            let v = a[[r, col]].norm();
            if v > piv_norm {
                piv_norm = v;
                piv = r;
            }
        }
        if piv_norm < 1e-300 {
            return Err(Error::NumericalFailure(
                "singular denominator in the rational approximation".into(),
            ));
        }
        if piv != col {
            for j in 0..n {
                a.swap([col, j], [piv, j]);
            }
            for j in 0..m {
                b.swap([col, j], [piv, j]);
            }
        }
        let pivot = a[[col, col]];
        for r in (col + 1)..n {
            let f = a[[r, col]] / pivot;
            if f == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let v = a[[col, j]];
                a[[r, j]] -= f * v;
            }
            for j in 0..m {
                let v = b[[col, j]];
                b[[r, j]] -= f * v;
            }
        }
    }
    let mut x = Array2::zeros((n, m));
    for col in (0..n).rev() {
        for j in 0..m {
            let mut s = b[[col, j]];
            for k in (col + 1)..n {
                s -= a[[col, k]] * x[[k, j]];
            }
            x[[col, j]] = s / a[[col, col]];
        }
    }
    Ok(x)
}

/// Matrix exponential by scaling and squaring with the order-13 Padé
/// approximant.
pub fn matrix_exp(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "matrix exponential requires a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok(Array2::zeros((0, 0)));
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(Error::NumericalFailure(
            "non-finite input to the matrix exponential".into(),
        ));
    }
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / Complex64::new((2.0f64).powi(squarings as i32), 0.0));

    let id: Array2<Complex64> = Array2::from_diag_elem(n, Complex64::new(1.0, 0.0));
    let a2 = scaled.dot(&scaled);
    let a4 = a2.dot(&a2);
    let a6 = a2.dot(&a4);
    let cr = |k: usize| Complex64::new(PADE13[k], 0.0);

    let w1 = a6.mapv(|z| z * cr(13)) + &a4.mapv(|z| z * cr(11)) + &a2.mapv(|z| z * cr(9));
    let w2 = a6.dot(&w1)
        + &a6.mapv(|z| z * cr(7))
        + &a4.mapv(|z| z * cr(5))
        + &a2.mapv(|z| z * cr(3))
        + &id.mapv(|z| z * cr(1));
    let u = scaled.dot(&w2);
    let z1 = a6.mapv(|z| z * cr(12)) + &a4.mapv(|z| z * cr(10)) + &a2.mapv(|z| z * cr(8));
    let v = a6.dot(&z1)
        + &a6.mapv(|z| z * cr(6))
        + &a4.mapv(|z| z * cr(4))
        + &a2.mapv(|z| z * cr(2))
        + &id.mapv(|z| z * cr(0));

    let mut result = solve_linear(&v - &u, &v + &u)?;
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    if result.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalFailure(
            "overflow in the matrix exponential".into(),
        ));
    }
    Ok(result)
}

/// The semigroup element e^{tL}.
pub fn evolve(l: &Generator, t: f64) -> Result<SuperOperator> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "evolution time must be finite and non-negative, got {t}"
        )));
    }
    let m = l.superop().matrix().mapv(|z| z * Complex64::new(t, 0.0));
    SuperOperator::new(l.dim(), l.dim(), matrix_exp(&m)?)
}

/// One row of the semigroup-law check: ‖e^{(s+t)L} − e^{sL} e^{tL}‖₂ relative
/// to the sizes of the factors.
#[derive(Debug, Clone, Copy)]
pub struct SemigroupResidual {
    pub s: f64,
    pub t: f64,
    pub residual: f64,
}

/// Per-time diagnostics of the generated semigroup.
#[derive(Debug, Clone)]
pub struct EvolutionReport {
    pub t_grid: Vec<f64>,
    /// Minimum Choi eigenvalue of e^{tL} per grid point.
    pub min_choi_eigenvalues: Vec<f64>,
    /// ‖(e^{tL})*(1) − 1‖_∞ per grid point (trace preservation).
    pub trace_deviations: Vec<f64>,
    /// Semigroup-law residuals on grid pairs (s, t) whose sum is also a grid
    /// point.
    pub semigroup_residuals: Vec<SemigroupResidual>,
}

impl EvolutionReport {
    pub fn max_trace_deviation(&self) -> f64 {
        self.trace_deviations.iter().cloned().fold(0.0, f64::max)
    }

    pub fn min_choi_eigenvalue(&self) -> f64 {
        self.min_choi_eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_semigroup_residual(&self) -> f64 {
        self.semigroup_residuals
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }

    /// All reported values finite and within the given tolerances; the trace
    /// column only counts for trace-preserving generators.
    pub fn passes(&self, psd_tol: f64, trace_tol: Option<f64>) -> bool {
        let finite = self
            .min_choi_eigenvalues
            .iter()
            .chain(self.trace_deviations.iter())
            .all(|v| v.is_finite());
        finite
            && self.min_choi_eigenvalue() >= -psd_tol
            && trace_tol.is_none_or(|tt| self.max_trace_deviation() <= tt)
            && self.max_semigroup_residual() <= 1e-9
    }
}

/// Evaluate e^{tL} across a grid: CP of each snapshot via its minimum Choi
/// eigenvalue, trace preservation via the dual applied to the identity, and
/// the semigroup law on grid pairs (s, t) with s + t on the grid.
pub fn check_semigroup(l: &Generator, t_grid: &[f64], psd_tol: f64) -> Result<EvolutionReport> {
    if t_grid.is_empty() {
        return Err(Error::InvalidArgument("empty time grid".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid[0] < 0.0 {
        return Err(Error::InvalidArgument(
            "time grid must be non-negative and strictly ascending".into(),
        ));
    }
    let d = l.dim();
    let wb = WeightedBasis::uniform(d);
    let id = Operator::identity(d);
    let mut snapshots = Vec::with_capacity(t_grid.len());
    let mut min_eigs = Vec::with_capacity(t_grid.len());
    let mut trace_devs = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let psi = evolve(l, t)?;
        let c = choi_map(&psi, &wb)?;
        let min = if c.hermiticity_defect() > psd_tol.max(1e-9) * c.psd_scale() {
            // A non-Hermitian Choi snapshot cannot be PSD; report the defect
            // as a negative eigenvalue bound.
            -c.hermiticity_defect()
        } else {
            c.min_eigenvalue()?
        };
        min_eigs.push(min);
        let unital_defect = psi.dual().apply(&id)?.sub(&id);
        trace_devs.push(schatten::schatten_norm(&unital_defect, f64::INFINITY)?);
        snapshots.push(psi);
    }
    let mut residuals = Vec::new();
    for i in 0..t_grid.len() {
        for j in i..t_grid.len() {
            let sum = t_grid[i] + t_grid[j];
            let Some(k) = t_grid.iter().position(|&tk| (tk - sum).abs() <= 1e-12) else {
                continue;
            };
            let prod = snapshots[i].compose(&snapshots[j])?;
            let diff = snapshots[k].sub(&prod).hs_norm();
            let scale = 1.0 + snapshots[i].hs_norm() * snapshots[j].hs_norm();
            residuals.push(SemigroupResidual {
                s: t_grid[i],
                t: t_grid[j],
                residual: diff / scale,
            });
        }
    }
    Ok(EvolutionReport {
        t_grid: t_grid.to_vec(),
        min_choi_eigenvalues: min_eigs,
        trace_deviations: trace_devs,
        semigroup_residuals: residuals,
    })
}

/// Whether the report's trace column should be enforced for this generator.
pub fn enforce_trace_column(l: &Generator) -> bool {
    l.claimed_class() == GeneratorClass::CptpSemigroup
}
