//! Kraus decompositions: extraction from Choi operators, synthesis back to
//! superoperators, complete-positivity testing, the weighted-trace formula
//! tr(Φ(B*(·)B)) = Σ_j |tr(B*V_j)|², and CP_B membership.

use num_complex::Complex64;

use crate::choi::{choi_map, ChoiOperator, WeightedBasis};
use crate::eigen;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::schatten;
use crate::superop::{unvec_std, SuperOperator};

/// Ordered family {V_j} of equal-shape operators representing
/// Φ = Σ_j V_j (·) V_j*.
#[derive(Debug, Clone)]
pub struct KrausSet {
    dim_in: usize,
    dim_out: usize,
    operators: Vec<Operator>,
    /// Choi eigenvalues the set was extracted from, when applicable.
    pub weights_info: Option<Vec<f64>>,
}

impl KrausSet {
    pub fn new(operators: Vec<Operator>) -> Result<Self> {
        let first = operators.first().ok_or_else(|| {
            Error::InvalidArgument(
                "cannot infer dimensions from an empty Kraus list; use KrausSet::empty".into(),
            )
        })?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        for (j, v) in operators.iter().enumerate() {
            if v.rows() != dim_out || v.cols() != dim_in {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {j} has shape {}x{}, expected {dim_out}x{dim_in}",
                    v.rows(),
                    v.cols()
                )));
            }
        }
        Ok(KrausSet {
            dim_in,
            dim_out,
            operators,
            weights_info: None,
        })
    }

    /// The zero map between spaces of the given dimensions.
    pub fn empty(dim_in: usize, dim_out: usize) -> Self {
        KrausSet {
            dim_in,
            dim_out,
            operators: Vec::new(),
            weights_info: None,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Σ_j V_j* V_j (Hermitian PSD).
    pub fn gram_sum(&self) -> Operator {
        let mut s = Operator::zeros(self.dim_in, self.dim_in);
        for v in &self.operators {
            s = s.add(&v.adjoint().dot(v));
        }
        s
    }

    /// Σ_j V_j V_j* (the image of the identity, Hermitian PSD).
    pub fn range_sum(&self) -> Operator {
        let mut s = Operator::zeros(self.dim_out, self.dim_out);
        for v in &self.operators {
            s = s.add(&v.dot(&v.adjoint()));
        }
        s
    }
}

/// Extract Kraus operators from a PSD Choi operator by eigendecomposition,
/// keeping eigenvalues above `rank_tol` relative to the largest one.
///
/// The Choi operator is interpreted in the unit-weight standard-basis
/// convention. Eigenvector phases are fixed so the largest-magnitude entry
/// is real positive, which makes extraction reproducible; sets extracted
/// from degenerate eigenvalues are one valid gauge choice among many.
pub fn kraus_from_choi(c: &ChoiOperator, rank_tol: f64) -> Result<KrausSet> {
    let herm = c.hermiticity_defect();
    if herm > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "Choi operator must be Hermitian to 1e-10, defect {herm:.3e}"
        )));
    }
    let psd_tol = 1e-9 * c.psd_scale();
    let (vals, vecs) = eigen::eigh(&c.as_operator())?;
    if let Some(&min) = vals.first() {
        if min < -psd_tol {
            return Err(Error::NotCompletelyPositive {
                min_eigenvalue: min,
            });
        }
    }
    Ok(kraus_from_eigenpairs(
        &vals,
        &vecs,
        c.dim_in(),
        c.dim_out(),
        rank_tol,
    ))
}

/// Assemble a Kraus family from Choi eigenpairs, keeping eigenvalues above
/// `rank_tol` relative to the largest one.
pub(crate) fn kraus_from_eigenpairs(
    vals: &[f64],
    vecs: &Operator,
    dim_in: usize,
    dim_out: usize,
    rank_tol: f64,
) -> KrausSet {
    let max = vals.last().copied().unwrap_or(0.0).max(0.0);
    let mut ops = Vec::new();
    let mut kept = Vec::new();
    // Largest eigenvalues first for a well-ordered Kraus family.
    for idx in (0..vals.len()).rev() {
        let mu = vals[idx];
        if mu <= rank_tol * max || mu <= 0.0 {
            continue;
        }
        let mut w = vecs.column(idx);
        fix_phase(&mut w);
        let scale = Complex64::new(mu.sqrt(), 0.0);
        // Choi index pairs are (input j, output i): unvec at shape d_out×d_in
        // with the input index leading gives V[i, j] = w[(j, i)].
        let v = unvec_std(&w, dim_out, dim_in)
            .expect("eigenvector length matches the Choi dimension")
            .scaled(scale);
        ops.push(v);
        kept.push(mu);
    }
    let mut ks = if ops.is_empty() {
        KrausSet::empty(dim_in, dim_out)
    } else {
        KrausSet::new(ops).expect("equal shapes by construction")
    };
    ks.weights_info = Some(kept);
    ks
}

fn fix_phase(w: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_norm = 0.0f64;
    for (i, z) in w.iter().enumerate() {
        let n = z.norm();
        if n > best_norm * (1.0 + 1e-12) {
            best_norm = n;
            best = i;
        }
    }
    if best_norm == 0.0 {
        return;
    }
    let phase = w[best] / Complex64::new(best_norm, 0.0);
    let correction = phase.conj();
    for z in w.iter_mut() {
        *z *= correction;
    }
}

/// Synthesize the superoperator Σ_j V_j (·) V_j*, whose matrix is
/// Σ_j conj(V_j) ⊗ V_j.
pub fn superop_from_kraus(ks: &KrausSet) -> SuperOperator {
    let mut s = SuperOperator::zero(ks.dim_in(), ks.dim_out());
    for v in ks.operators() {
        let term = v.conj().kron(v);
        s = s.add(
            &SuperOperator::new(ks.dim_in(), ks.dim_out(), term.into_data())
                .expect("shape fixed by KrausSet invariant"),
        );
    }
    s
}

/// Complete-positivity verdict for a square-input superoperator.
#[derive(Debug, Clone, Copy)]
pub struct CpVerdict {
    pub is_cp: bool,
    pub min_eigenvalue: f64,
    pub hermiticity_defect: f64,
}

/// Test complete positivity via the unit-weight Choi operator: the map is CP
/// iff its Choi matrix is PSD (and Hermitian, which is reported alongside).
pub fn is_completely_positive(phi: &SuperOperator, tol: f64) -> Result<CpVerdict> {
    let wb = WeightedBasis::uniform(phi.dim_in());
    let c = choi_map(phi, &wb)?;
    let herm = c.hermiticity_defect();
    let min = c.min_eigenvalue()?;
    Ok(CpVerdict {
        is_cp: min >= -tol && herm <= tol.max(1e-10),
        min_eigenvalue: min,
        hermiticity_defect: herm,
    })
}

/// The weighted trace of Φ(B*(·)B) evaluated through the Kraus operators:
/// returns (Σ_j |tr(B*V_j)|², v) with v_j = tr(B*V_j).
pub fn weighted_trace_via_kraus(
    ks: &KrausSet,
    b: &Operator,
) -> Result<(f64, Vec<Complex64>)> {
    if b.rows() != ks.dim_out() || b.cols() != ks.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "reference operator must be {}x{}, got {}x{}",
            ks.dim_out(),
            ks.dim_in(),
            b.rows(),
            b.cols()
        )));
    }
    let badj = b.adjoint();
    let v: Vec<Complex64> = ks
        .operators()
        .iter()
        .map(|vj| badj.dot(vj).trace_unchecked())
        .collect();
    Ok((v.iter().map(|z| z.norm_sqr()).sum(), v))
}

/// Membership in CP_B = {Φ CP : tr(Φ(B*(·)B)) = 0}, equivalently
/// tr(B*V_j) ≈ 0 for every Kraus operator.
///
/// The comparison threshold scales with the a-priori bound
/// Σ_j |tr(B*V_j)|² ≤ ‖B‖₁² Σ_j ‖V_j‖_∞², so large Kraus families do not
/// trip an absolute epsilon.
pub fn is_in_cp_b(ks: &KrausSet, b: &Operator, tol: f64) -> Result<bool> {
    let (wt, _) = weighted_trace_via_kraus(ks, b)?;
    let b1 = schatten::schatten_norm(b, 1.0)?;
    let mut vnorms = 0.0;
    for v in ks.operators() {
        vnorms += schatten::schatten_norm(v, f64::INFINITY)?.powi(2);
    }
    Ok(wt <= tol * (1.0 + b1 * b1 * vnorms))
}

/// ‖Φ_V‖_{1→1} = ‖Σ_j V_j* V_j‖_∞ for a completely positive map given by
/// Kraus operators.
pub fn one_to_one_norm_cp(ks: &KrausSet) -> Result<f64> {
    if ks.is_empty() {
        return Ok(0.0);
    }
    schatten::schatten_norm(&ks.gram_sum(), f64::INFINITY)
}
