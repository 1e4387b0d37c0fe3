//! The weighted Choi formalism: the map Φ ↦ Σ λ_j*λ_k |g_j⟩⟨g_k| ⊗ Φ(|g_j⟩⟨g_k|),
//! its finite-dimensional inverse, vectorization, the weighted-trace
//! quadratic form, and the injectivity/surjectivity witnesses.

use ndarray::Array2;
use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::superop::{vec_std, SuperOperator};

/// Rule generating a weight sequence λ_j, j = 1, 2, ….
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightRule {
    /// λ_j = r^j.
    Geometric { ratio: f64 },
    /// λ_j = j^{-exponent}.
    InversePower { exponent: f64 },
}

impl WeightRule {
    /// Weight at 1-based index j.
    pub fn weight(&self, j: usize) -> f64 {
        match self {
            WeightRule::Geometric { ratio } => ratio.powi(j as i32),
            WeightRule::InversePower { exponent } => (j as f64).powf(-exponent),
        }
    }

    pub fn weights(&self, dim: usize) -> Vec<f64> {
        (1..=dim).map(|j| self.weight(j)).collect()
    }

    /// Whether the infinite sequence is absolutely summable (the ℓ¹ regime
    /// in which the weighted Choi map lands in the trace class).
    pub fn is_absolutely_summable(&self) -> bool {
        match self {
            WeightRule::Geometric { ratio } => ratio.abs() < 1.0,
            WeightRule::InversePower { exponent } => *exponent > 1.0,
        }
    }
}

/// Orthonormal basis G = {g_j} (columns of a unitary) together with a weight
/// vector λ. The associated reference operator is B = Σ_j λ_j |g_j⟩⟨g_j|.
#[derive(Debug, Clone)]
pub struct WeightedBasis {
    dim: usize,
    basis: Operator,
    weights: Vec<Complex64>,
    /// Generating rule, when the weights came from one; lets truncation
    /// experiments report which summability regime the sequence belongs to.
    pub rule: Option<WeightRule>,
}

impl WeightedBasis {
    pub fn new(basis: Operator, weights: Vec<Complex64>) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::DimensionMismatch(
                "basis matrix must be square".into(),
            ));
        }
        let dim = basis.rows();
        if weights.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {dim} weights, got {}",
                weights.len()
            )));
        }
        if basis.orthonormality_defect() > 1e-12 {
            return Err(Error::InvalidArgument(
                "basis columns must be orthonormal to 1e-12".into(),
            ));
        }
        if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::InvalidArgument("weights must be finite".into()));
        }
        Ok(WeightedBasis {
            dim,
            basis,
            weights,
            rule: None,
        })
    }

    /// Standard basis with the given weights.
    pub fn standard(weights: Vec<Complex64>) -> Result<Self> {
        let dim = weights.len();
        WeightedBasis::new(Operator::identity(dim), weights)
    }

    /// Standard basis with unit weights (the unweighted Choi convention).
    pub fn uniform(dim: usize) -> Self {
        WeightedBasis {
            dim,
            basis: Operator::identity(dim),
            weights: vec![Complex64::new(1.0, 0.0); dim],
            rule: None,
        }
    }

    /// Standard basis with weights from a rule, truncated at `dim`.
    pub fn from_rule(rule: WeightRule, dim: usize) -> Result<Self> {
        let weights = rule
            .weights(dim)
            .into_iter()
            .map(|w| Complex64::new(w, 0.0))
            .collect();
        let mut wb = WeightedBasis::standard(weights)?;
        wb.rule = Some(rule);
        Ok(wb)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &Operator {
        &self.basis
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn basis_vector(&self, j: usize) -> Vec<Complex64> {
        self.basis.column(j)
    }

    /// Whether every weight is nonzero (exact comparison; a zero weight is a
    /// structural statement, not a numerical accident).
    pub fn all_weights_nonzero(&self) -> bool {
        self.weights.iter().all(|w| *w != Complex64::new(0.0, 0.0))
    }

    /// The diagonal reference operator B = Σ_j λ_j |g_j⟩⟨g_j|.
    pub fn reference_operator(&self) -> Operator {
        let d = Operator::from_diag(&self.weights);
        self.basis.dot(&d).dot(&self.basis.adjoint())
    }

    /// Matrix unit |g_j⟩⟨g_k| in this basis.
    pub fn unit(&self, j: usize, k: usize) -> Operator {
        Operator::outer(&self.basis_vector(j), &self.basis_vector(k))
    }
}

/// The image of a superoperator under the weighted Choi map, stored with the
/// input index as the leading tensor factor.
#[derive(Debug, Clone)]
pub struct ChoiOperator {
    dim_in: usize,
    dim_out: usize,
    matrix: Array2<Complex64>,
}

impl ChoiOperator {
    pub fn new(dim_in: usize, dim_out: usize, matrix: Array2<Complex64>) -> Result<Self> {
        let d = dim_in * dim_out;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix must be {d}x{d}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(ChoiOperator {
            dim_in,
            dim_out,
            matrix,
        })
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

    pub fn as_operator(&self) -> Operator {
        Operator::new(self.matrix.clone()).expect("finite by construction")
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.as_operator().hermiticity_defect()
    }

    pub fn hs_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.matrix.nrows()).map(|j| self.matrix[[j, j]]).sum()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigen::eigh(&self.as_operator())?.0)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        eigen::min_eigenvalue(&self.as_operator())
    }

    /// PSD threshold scaled by the trace mass of the operator, so the
    /// verdict tracks eigensolver noise at larger dimension.
    pub fn psd_scale(&self) -> f64 {
        let t = self.trace().norm();
        if t > 0.0 {
            t.max(1.0)
        } else {
            1.0
        }
    }
}

/// The entangled vector Γ_{λ,G} = Σ_j λ_j* g_j ⊗ g_j as a column.
pub fn entangled_vector(wb: &WeightedBasis) -> Operator {
    let d = wb.dim();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        let g = wb.basis_vector(j);
        let w = wb.weights()[j].conj();
        for (a, &ga) in g.iter().enumerate() {
            for (b, &gb) in g.iter().enumerate() {
                v[a * d + b] += w * ga * gb;
            }
        }
    }
    Operator::from_vec(d * d, 1, v).expect("finite by construction")
}

/// The weighted Choi map Σ_{j,k} λ_j* λ_k |g_j⟩⟨g_k| ⊗ Φ(|g_j⟩⟨g_k|).
pub fn choi_map(phi: &SuperOperator, wb: &WeightedBasis) -> Result<ChoiOperator> {
    if phi.dim_in() != wb.dim() {
        return Err(Error::DimensionMismatch(format!(
            "superoperator input dimension {} does not match basis dimension {}",
            phi.dim_in(),
            wb.dim()
        )));
    }
    let (di, do_) = (wb.dim(), phi.dim_out());
    let d = di * do_;
    let mut c = Array2::zeros((d, d));
    for j in 0..di {
        for k in 0..di {
            let w = wb.weights()[j].conj() * wb.weights()[k];
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            let unit = wb.unit(j, k);
            let img = phi.apply(&unit)?;
            let block = unit.kron(&img);
            c += &block.data().mapv(|z| z * w);
        }
    }
    ChoiOperator::new(di, do_, c)
}

/// Finite-dimensional inverse of the weighted Choi map,
/// Φ(|g_j⟩⟨g_k|) = (λ_j* λ_k)⁻¹ tr_H((|g_k⟩⟨g_j| ⊗ 1) C).
pub fn choi_inverse(c: &ChoiOperator, wb: &WeightedBasis) -> Result<SuperOperator> {
    if c.dim_in() != wb.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Choi input dimension {} does not match basis dimension {}",
            c.dim_in(),
            wb.dim()
        )));
    }
    if !wb.all_weights_nonzero() {
        return Err(Error::Precondition(
            "the weighted Choi map is only invertible when every weight is nonzero".into(),
        ));
    }
    let (di, do_) = (c.dim_in(), c.dim_out());
    let c_op = c.as_operator();
    let id_out = Operator::identity(do_);
    let mut s = Array2::zeros((do_ * do_, di * di));
    for j in 0..di {
        for k in 0..di {
            let scale = (wb.weights()[j].conj() * wb.weights()[k]).inv();
            // tr_H((|g_k⟩⟨g_j| ⊗ 1) C), scaled.
            let m = wb.unit(k, j).kron(&id_out).dot(&c_op);
            let img = crate::schatten::partial_trace_first(&m, di, do_)?.scaled(scale);
            // S accumulates vec(Φ_jk)·vec(|g_j⟩⟨g_k|)^H over all basis pairs.
            let img_vec = vec_std(&img);
            let unit_vec = vec_std(&wb.unit(j, k));
            for (r, &iv) in img_vec.iter().enumerate() {
                for (col, &uv) in unit_vec.iter().enumerate() {
                    s[[r, col]] += iv * uv.conj();
                }
            }
        }
    }
    SuperOperator::new(di, do_, s)
}

/// Vectorization with respect to a weighted basis: X ↦ Σ_j g_j ⊗ X g_j.
pub fn vectorize(x: &Operator, wb: &WeightedBasis) -> Result<Operator> {
    if x.rows() != wb.dim() || x.cols() != wb.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vectorization expects a {0}x{0} operator, got {1}x{2}",
            wb.dim(),
            x.rows(),
            x.cols()
        )));
    }
    let d = wb.dim();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        let g = wb.basis_vector(j);
        // X g_j
        let mut xg = vec![Complex64::new(0.0, 0.0); d];
        for (r, slot) in xg.iter_mut().enumerate() {
            for (cidx, &gc) in g.iter().enumerate() {
                *slot += x.get(r, cidx) * gc;
            }
        }
        for (a, &ga) in g.iter().enumerate() {
            for (b, &xb) in xg.iter().enumerate() {
                v[a * d + b] += ga * xb;
            }
        }
    }
    Operator::from_vec(d * d, 1, v)
}

/// Quadratic-form evaluation of the weighted superoperator trace:
/// tr(Φ((XB)*(·)YB)) = ⟨vec X, C_{λ,G}(Φ) vec Y⟩.
pub fn weighted_trace_via_choi(
    phi: &SuperOperator,
    wb: &WeightedBasis,
    x: &Operator,
    y: &Operator,
) -> Result<Complex64> {
    let c = choi_map(phi, wb)?;
    let vx = vectorize(x, wb)?;
    let vy = vectorize(y, wb)?;
    let cy = c.as_operator().dot(&vy);
    crate::schatten::hs_inner(&vx, &cy)
}

/// Kernel witness for a vanishing weight: the nonzero map
/// Φ_j(X) = ⟨g_j, X g_j⟩ Z lies in the kernel of the weighted Choi map.
///
/// Returns the map and the Hilbert-Schmidt norm of its Choi image (which is
/// zero up to rounding, demonstrating non-injectivity).
pub fn kernel_witness(
    wb: &WeightedBasis,
    j: usize,
    z: &Operator,
) -> Result<(SuperOperator, f64)> {
    if j >= wb.dim() {
        return Err(Error::InvalidArgument(format!(
            "basis index {j} out of range for dimension {}",
            wb.dim()
        )));
    }
    if wb.weights()[j] != Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition(format!(
            "kernel witness requires weight {j} to vanish, got {}",
            wb.weights()[j]
        )));
    }
    if !z.is_square() || z.max_abs_entry() == 0.0 {
        return Err(Error::InvalidArgument(
            "witness target Z must be square and nonzero".into(),
        ));
    }
    let d = wb.dim();
    let do_ = z.rows();
    let g = wb.basis_vector(j);
    // S = vec(Z) · (conj(g_j) ⊗ g_j)^H so that Φ(X) = ⟨g_j, X g_j⟩ Z.
    let zv = vec_std(z);
    let mut w = vec![Complex64::new(0.0, 0.0); d * d];
    for (a, &ga) in g.iter().enumerate() {
        for (b, &gb) in g.iter().enumerate() {
            w[a * d + b] = ga.conj() * gb;
        }
    }
    let mut s = Array2::zeros((do_ * do_, d * d));
    for (r, &zr) in zv.iter().enumerate() {
        for (cidx, &wc) in w.iter().enumerate() {
            s[[r, cidx]] = zr * wc.conj();
        }
    }
    let phi = SuperOperator::new(d, do_, s)?;
    let norm = choi_map(&phi, wb)?.hs_norm();
    Ok((phi, norm))
}

/// Sup-norm table of the formal pre-image diagonal Λ_d with
/// ‖Λ_d‖_∞ = max_{j≤d} (j·|λ_j|)⁻², per truncation dimension.
///
/// Evaluated in closed form rather than by assembling Λ_d as a matrix, so
/// large truncations cannot overflow intermediate storage.
pub fn surjectivity_witness(rule: WeightRule, dims: &[usize]) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::with_capacity(dims.len());
    for &d in dims {
        if d == 0 {
            return Err(Error::InvalidArgument(
                "truncation dimensions must be positive".into(),
            ));
        }
        let mut sup = 0.0f64;
        for j in 1..=d {
            let w = rule.weight(j);
            if w == 0.0 || !w.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "weight rule produced an invalid weight {w} at index {j}"
                )));
            }
            let v = (j as f64 * w.abs()).powi(-2);
            sup = sup.max(v);
        }
        out.push((d, sup));
    }
    Ok(out)
}
