//! Generators of completely positive semigroups: construction, extraction of
//! an initial (K, Φ) decomposition, and the unique canonicalization relative
//! to a reference operator B with Re(tr B) ≠ 0.
//!
//! The canonical pair (K, Φ) satisfies L = K(·) + (·)K* + Φ with Φ completely
//! positive, tr(Φ(B*(·)B)) = 0, and Im(tr(B*K)) = 0; it is unique, and in the
//! trace-preserving case it carries the equivalent Hamiltonian/dissipator
//! form (H, Φ) with H = i(K + Φ*(1)/2).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::choi::{choi_map, ChoiOperator, WeightedBasis};
use crate::config::Tolerances;
use crate::eigen;
use crate::error::{Error, Result};
use crate::kraus::{superop_from_kraus, weighted_trace_via_kraus, KrausSet};
use crate::operator::Operator;
use crate::schatten;
use crate::superop::SuperOperator;

/// Which semigroup the generator claims to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorClass {
    CpSemigroup,
    CptpSemigroup,
    Unknown,
}

/// A square superoperator intended as a semigroup generator.
#[derive(Debug, Clone)]
pub struct Generator {
    superop: SuperOperator,
    claimed_class: GeneratorClass,
}

impl Generator {
    /// Wrap a raw superoperator, validating Hermiticity preservation and
    /// (for the CPTP class) trace preservation.
    pub fn from_superop(superop: SuperOperator, claimed_class: GeneratorClass) -> Result<Self> {
        if superop.dim_in() != superop.dim_out() {
            return Err(Error::DimensionMismatch(
                "a generator must have equal input and output dimensions".into(),
            ));
        }
        let scale = 1.0 + superop.hs_norm();
        let herm = superop.hermiticity_preservation_defect();
        if herm > 1e-10 * scale {
            return Err(Error::InvalidArgument(format!(
                "generator is not Hermiticity-preserving (defect {herm:.3e})"
            )));
        }
        if claimed_class == GeneratorClass::CptpSemigroup {
            let defect = trace_preservation_defect(&superop)?;
            if defect > 1e-10 * scale {
                return Err(Error::InvalidArgument(format!(
                    "generator is not trace-preserving (‖L*(1)‖ = {defect:.3e})"
                )));
            }
        }
        Ok(Generator {
            superop,
            claimed_class,
        })
    }

    pub fn superop(&self) -> &SuperOperator {
        &self.superop
    }

    pub fn claimed_class(&self) -> GeneratorClass {
        self.claimed_class
    }

    pub fn dim(&self) -> usize {
        self.superop.dim_in()
    }
}

/// ‖L*(1)‖_∞; zero exactly when the generated semigroup preserves traces.
pub fn trace_preservation_defect(superop: &SuperOperator) -> Result<f64> {
    let img = superop
        .dual()
        .apply(&Operator::identity(superop.dim_out()))?;
    schatten::schatten_norm(&img, f64::INFINITY)
}

/// Matrix of K(·) + (·)K*.
fn k_form_superop(k: &Operator) -> SuperOperator {
    let d = k.rows();
    let id = Operator::identity(d);
    let left = SuperOperator::from_left_right(k, &id).expect("square shapes");
    let right = SuperOperator::from_left_right(&id, &k.adjoint()).expect("square shapes");
    left.add(&right)
}

/// L = K(·) + (·)K* + Σ_j V_j (·) V_j*.
pub fn build_cp_generator(k: &Operator, ks: &KrausSet) -> Result<Generator> {
    if !k.is_square() {
        return Err(Error::DimensionMismatch("K must be square".into()));
    }
    if ks.dim_in() != k.rows() || ks.dim_out() != k.rows() {
        return Err(Error::DimensionMismatch(format!(
            "Kraus operators act on {}x{} while K is {}x{}",
            ks.dim_out(),
            ks.dim_in(),
            k.rows(),
            k.cols()
        )));
    }
    let superop = k_form_superop(k).add(&superop_from_kraus(ks));
    Ok(Generator {
        superop,
        claimed_class: GeneratorClass::CpSemigroup,
    })
}

/// L = −i[H, ·] + Σ_j V_j (·) V_j* − ½{Σ_j V_j*V_j, ·}, trace-preserving by
/// construction.
pub fn build_gksl_generator(h: &Operator, ks: &KrausSet) -> Result<Generator> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch("H must be square".into()));
    }
    if ks.dim_in() != h.rows() || ks.dim_out() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "Kraus operators act on {}x{} while H is {}x{}",
            ks.dim_out(),
            ks.dim_in(),
            h.rows(),
            h.cols()
        )));
    }
    if h.hermiticity_defect() > 1e-10 * (1.0 + h.max_abs_entry()) {
        return Err(Error::InvalidArgument(format!(
            "Hamiltonian must be Hermitian, defect {:.3e}",
            h.hermiticity_defect()
        )));
    }
    let minus_i = Complex64::new(0.0, -1.0);
    // K = −½ Σ V*V − iH collapses the GKSL form to the K-form.
    let k = ks
        .gram_sum()
        .scaled(Complex64::new(-0.5, 0.0))
        .add(&h.scaled(minus_i));
    let superop = k_form_superop(&k).add(&superop_from_kraus(ks));
    Ok(Generator {
        superop,
        claimed_class: GeneratorClass::CptpSemigroup,
    })
}

/// Orthogonal compression of the unit-weight Choi operator off the
/// maximally entangled vector: (1 − P) C(L) (1 − P) with P = |Γ⟩⟨Γ|/d.
fn projected_choi(l: &SuperOperator) -> Result<ChoiOperator> {
    let d = l.dim_in();
    let wb = WeightedBasis::uniform(d);
    let c = choi_map(l, &wb)?;
    let gamma = crate::choi::entangled_vector(&wb);
    let p = gamma
        .dot(&gamma.adjoint())
        .scaled(Complex64::new(1.0 / d as f64, 0.0));
    let q = Operator::identity(d * d).sub(&p);
    let compressed = q.dot(&c.as_operator()).dot(&q);
    ChoiOperator::new(d, d, compressed.into_data())
}

/// Split a generator into some (K₀, {V_j}) with L = K₀(·)+(·)K₀*+Φ₀.
///
/// Membership in the Lie wedge of the CP maps is decided by conditional
/// complete positivity: the Choi operator compressed off the maximally
/// entangled vector must be PSD. The Kraus part comes from that compression;
/// K₀ is the least-squares solution of matrix(L − Φ₀) = 1⊗K₀ + conj(K₀)⊗1,
/// gauge-fixed by Im(tr K₀) = 0.
pub fn extract_initial_decomposition(
    l: &Generator,
    tol: &Tolerances,
) -> Result<(Operator, KrausSet)> {
    let d = l.dim();
    let scale = 1.0 + l.superop().hs_norm();
    if l.superop().hermiticity_preservation_defect() > 1e-10 * scale {
        return Err(Error::Precondition(
            "generator must be Hermiticity-preserving".into(),
        ));
    }
    let c0 = projected_choi(l.superop())?;
    let (vals, vecs) = eigen::eigh(&c0.as_operator())?;
    let spread = vals.iter().fold(0.0f64, |m, &v| m.max(v.abs())).max(1.0);
    let min = vals.first().copied().unwrap_or(0.0);
    if min < -tol.tol_psd * spread {
        return Err(Error::NotCpGenerator {
            min_eigenvalue: min,
        });
    }
    let ks0 = crate::kraus::kraus_from_eigenpairs(&vals, &vecs, d, d, tol.rank_tol);

    // Closed-form least squares for K₀ over the real-linear family
    // K ↦ 1⊗K + conj(K)⊗1 (whose kernel is spanned by i·1, hence the gauge).
    let m = l.superop().sub(&superop_from_kraus(&ks0));
    let k0 = least_squares_k(&m);
    let residual = m.sub(&k_form_superop(&k0)).hs_norm();
    let threshold = 1e-8 * scale;
    if residual > threshold {
        return Err(Error::InconsistentGenerator {
            residual,
            threshold,
        });
    }
    Ok((k0, ks0))
}

/// Least-squares solution of matrix(M) = 1⊗K + conj(K)⊗1 with Im tr K = 0.
///
/// Writing Q = tr₁(M) + conj(tr₂(M)), the minimizer is
/// K = (Q − (tr Q / d)·1)/(2d) + (Re tr M /(2d²))·1; the derivation is the
/// orthogonal split of M into the traceless 1⊗·, conj(·)⊗1, and 1⊗1
/// components (checked against a dense solver in the test suite).
pub fn least_squares_k(m: &SuperOperator) -> Operator {
    let d = m.dim_in();
    let s = m.matrix();
    let mut q = Operator::zeros(d, d).into_data();
    for r in 0..d {
        for rp in 0..d {
            // tr₁: sum over the leading (column-of-X) index.
            let mut acc = Complex64::new(0.0, 0.0);
            for c in 0..d {
                acc += s[[c * d + r, c * d + rp]];
            }
            q[[r, rp]] += acc;
        }
    }
    for c in 0..d {
        for cp in 0..d {
            // conj(tr₂): sum over the trailing (row-of-X) index, conjugated.
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..d {
                acc += s[[c * d + r, cp * d + r]];
            }
            q[[c, cp]] += acc.conj();
        }
    }
    let q = Operator::new(q).expect("finite");
    let tr_q = q.trace_unchecked();
    let tr_s: Complex64 = (0..d * d).map(|j| s[[j, j]]).sum();
    let dd = d as f64;
    let centered = q.sub(&Operator::identity(d).scaled(tr_q / Complex64::new(dd, 0.0)));
    centered
        .scaled(Complex64::new(1.0 / (2.0 * dd), 0.0))
        .add(&Operator::identity(d).scaled(Complex64::new(tr_s.re / (2.0 * dd * dd), 0.0)))
}

/// Mode of a canonical decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionMode {
    Cp,
    Cptp,
}

/// The unique (K, Φ) — and in CPTP mode (H, Φ) — decomposition of a
/// generator relative to a reference operator B, with verification residuals.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    pub mode: DecompositionMode,
    pub k: Operator,
    /// Present in CPTP mode: H = i(K + Φ*(1)/2), Hermitian.
    pub hamiltonian: Option<Operator>,
    pub phi: KrausSet,
    pub reference: Operator,
    pub residuals: BTreeMap<String, f64>,
}

impl CanonicalDecomposition {
    /// The generator this decomposition represents, rebuilt from its parts.
    pub fn rebuild(&self) -> Result<Generator> {
        match self.mode {
            DecompositionMode::Cp => build_cp_generator(&self.k, &self.phi),
            DecompositionMode::Cptp => build_gksl_generator(
                self.hamiltonian.as_ref().expect("CPTP mode carries H"),
                &self.phi,
            ),
        }
    }
}

fn check_reference(b: &Operator, d: usize) -> Result<(Complex64, f64)> {
    if b.rows() != d || b.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "reference operator must be {d}x{d}, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let t = b.trace_unchecked();
    let b1 = schatten::schatten_norm(b, 1.0)?;
    if t.re.abs() <= 1e-12 * b1.max(1e-300) || b1 == 0.0 {
        return Err(Error::Precondition(format!(
            "canonicalization requires Re(tr(B)) != 0, got tr(B) = {:.3e}{:+.3e}i",
            t.re, t.im
        )));
    }
    Ok((t, b1))
}

/// Canonicalize a generator: extract an initial decomposition, then shift it
/// into the unique (K, Φ) with Φ ∈ CP_B and Im tr(B*K) = 0.
pub fn canonicalize(
    l: &Generator,
    b: &Operator,
    tol: &Tolerances,
) -> Result<CanonicalDecomposition> {
    check_reference(b, l.dim())?;
    let (k0, ks0) = extract_initial_decomposition(l, tol)?;
    canonicalize_parts_against(&k0, &ks0, b, tol, l.superop())
}

/// Canonicalize starting from a known decomposition L = K₀(·)+(·)K₀*+Φ₀.
///
/// Any gauge-equivalent presentation of the same generator lands on the same
/// canonical pair.
pub fn canonicalize_parts(
    k0: &Operator,
    ks0: &KrausSet,
    b: &Operator,
    tol: &Tolerances,
) -> Result<CanonicalDecomposition> {
    let l = build_cp_generator(k0, ks0)?;
    canonicalize_parts_against(k0, ks0, b, tol, l.superop())
}

fn canonicalize_parts_against(
    k0: &Operator,
    ks0: &KrausSet,
    b: &Operator,
    tol: &Tolerances,
    target: &SuperOperator,
) -> Result<CanonicalDecomposition> {
    let d = k0.rows();
    let (t, b1) = check_reference(b, d)?;
    let t_conj = t.conj();
    let badj = b.adjoint();
    let id = Operator::identity(d);

    // Shift every Kraus operator into the trace-orthogonal complement of B.
    let w: Vec<Complex64> = ks0
        .operators()
        .iter()
        .map(|v| badj.dot(v).trace_unchecked())
        .collect();
    let mut shifted = Vec::new();
    let mut k_shift = Operator::zeros(d, d);
    let mut w_sq = 0.0f64;
    for (v, &wj) in ks0.operators().iter().zip(&w) {
        let cj = wj / t_conj;
        let vt = v.sub(&id.scaled(cj));
        k_shift = k_shift.add(&v.scaled(cj.conj()));
        w_sq += wj.norm_sqr();
        if vt.frobenius_norm() > 1e-13 * (1.0 + v.frobenius_norm()) {
            shifted.push(vt);
        }
    }
    let phi = if shifted.is_empty() {
        KrausSet::empty(d, d)
    } else {
        KrausSet::new(shifted)?
    };

    let k_tilde = k0
        .add(&k_shift)
        .sub(&id.scaled(Complex64::new(w_sq / (2.0 * t.norm_sqr()), 0.0)));
    let im_tr = badj.dot(&k_tilde).trace_unchecked().im;
    let k = k_tilde.sub(&id.scaled(Complex64::new(0.0, im_tr / t.re)));

    // Verification residuals; these are rounding-level by construction.
    let rebuilt = build_cp_generator(&k, &phi)?;
    let recon = rebuilt.superop().sub(target).hs_norm();
    let im_tr_bk = badj.dot(&k).trace_unchecked().im.abs();
    let (wt, _) = weighted_trace_via_kraus(&phi, b)?;
    let phi_min_eig = if phi.is_empty() {
        0.0
    } else {
        crate::kraus::is_completely_positive(&superop_from_kraus(&phi), tol.tol_psd)?
            .min_eigenvalue
    };

    let scale = 1.0 + target.hs_norm();
    if recon > tol.tol_recon * scale {
        return Err(Error::NumericalFailure(format!(
            "canonical reconstruction residual {recon:.3e} exceeds {:.3e}",
            tol.tol_recon * scale
        )));
    }
    let k_inf = schatten::schatten_norm(&k, f64::INFINITY)?;
    if im_tr_bk > tol.tol_recon * (1.0 + b1 * k_inf) {
        return Err(Error::NumericalFailure(format!(
            "Im tr(B*K) = {im_tr_bk:.3e} not within tolerance of zero"
        )));
    }

    let mut residuals = BTreeMap::new();
    residuals.insert("reconstruction".into(), recon);
    residuals.insert("im_trace_bk".into(), im_tr_bk);
    residuals.insert("phi_weighted_trace".into(), wt);
    residuals.insert("phi_min_choi_eigenvalue".into(), phi_min_eig);

    Ok(CanonicalDecomposition {
        mode: DecompositionMode::Cp,
        k,
        hamiltonian: None,
        phi,
        reference: b.clone(),
        residuals,
    })
}

/// Canonicalize a trace-preserving generator into the Hamiltonian/dissipator
/// form (H, Φ) with H = i(K + Φ*(1)/2).
pub fn canonicalize_cptp(
    l: &Generator,
    b: &Operator,
    tol: &Tolerances,
) -> Result<CanonicalDecomposition> {
    let scale = 1.0 + l.superop().hs_norm();
    let tp = trace_preservation_defect(l.superop())?;
    if tp > 1e-9 * scale {
        return Err(Error::InvalidArgument(format!(
            "CPTP canonicalization requires a trace-preserving generator, ‖L*(1)‖ = {tp:.3e}"
        )));
    }
    let mut cd = canonicalize(l, b, tol)?;

    let half_gram = cd.phi.gram_sum().scaled(Complex64::new(0.5, 0.0));
    let h_raw = cd
        .k
        .add(&half_gram)
        .scaled(Complex64::new(0.0, 1.0));
    let h_defect = h_raw.hermiticity_defect();
    let h_tol = tol.tol_recon * (1.0 + h_raw.max_abs_entry());
    if h_defect > h_tol {
        return Err(Error::InconsistentGenerator {
            residual: h_defect,
            threshold: h_tol,
        });
    }
    let h = h_raw.add(&h_raw.adjoint()).scaled(Complex64::new(0.5, 0.0));

    let rebuilt = build_gksl_generator(&h, &cd.phi)?;
    let recon = rebuilt.superop().sub(l.superop()).hs_norm();
    if recon > tol.tol_recon * scale {
        return Err(Error::NumericalFailure(format!(
            "GKSL reconstruction residual {recon:.3e} exceeds {:.3e}",
            tol.tol_recon * scale
        )));
    }

    let tr_bh = b.adjoint().dot(&h).trace_unchecked();
    let b_self_adjoint = b.hermiticity_defect() <= 1e-12 * (1.0 + b.max_abs_entry());
    if b_self_adjoint && tr_bh.norm() > tol.tol_recon * (1.0 + b.max_abs_entry() * h.max_abs_entry() * l.dim() as f64) {
        return Err(Error::NumericalFailure(format!(
            "tr(BH) = {:.3e} not within tolerance of zero for self-adjoint B",
            tr_bh.norm()
        )));
    }
    // The general-B domain relation Im(tr(Φ(B))) = 2 Re(tr(B*H)) is recorded
    // for every B but only asserted through tr(BH) in the self-adjoint case.
    let phi_b = superop_from_kraus(&cd.phi).apply(b)?;
    let general_b =
        (phi_b.trace_unchecked().im - 2.0 * b.adjoint().dot(&h).trace_unchecked().re).abs();

    cd.mode = DecompositionMode::Cptp;
    cd.residuals.insert("gksl_reconstruction".into(), recon);
    cd.residuals.insert("trace_preservation".into(), tp);
    cd.residuals.insert("h_hermiticity".into(), h_defect);
    cd.residuals.insert("trace_bh".into(), tr_bh.norm());
    cd.residuals.insert("general_b_domain".into(), general_b);
    cd.hamiltonian = Some(h);
    Ok(cd)
}

/// Outcome of re-checking a canonical decomposition against a generator.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub residuals: BTreeMap<String, f64>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Recompute every invariant of a canonical decomposition against `l`,
/// reporting the residuals and which checks exceeded their tolerances.
pub fn verify_canonical(
    cd: &CanonicalDecomposition,
    l: &Generator,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let mut residuals = BTreeMap::new();
    let mut failures = Vec::new();
    let scale = 1.0 + l.superop().hs_norm();
    let b = &cd.reference;
    let b1 = schatten::schatten_norm(b, 1.0)?;

    let rebuilt = cd.rebuild()?;
    let recon = rebuilt.superop().sub(l.superop()).hs_norm();
    residuals.insert("reconstruction".into(), recon);
    if recon > tol.tol_recon * scale {
        failures.push("reconstruction".into());
    }

    let im_tr_bk = b.adjoint().dot(&cd.k).trace_unchecked().im.abs();
    let k_inf = schatten::schatten_norm(&cd.k, f64::INFINITY)?;
    residuals.insert("im_trace_bk".into(), im_tr_bk);
    if im_tr_bk > tol.tol_recon * (1.0 + b1 * k_inf) {
        failures.push("im_trace_bk".into());
    }

    let (wt, _) = weighted_trace_via_kraus(&cd.phi, b)?;
    residuals.insert("phi_weighted_trace".into(), wt);
    let gram_inf = if cd.phi.is_empty() {
        0.0
    } else {
        schatten::schatten_norm(&cd.phi.gram_sum(), f64::INFINITY)?
    };
    if wt > tol.tol_recon * (1.0 + b1 * b1 * gram_inf) {
        failures.push("phi_weighted_trace".into());
    }

    let phi_min_eig = if cd.phi.is_empty() {
        0.0
    } else {
        crate::kraus::is_completely_positive(&superop_from_kraus(&cd.phi), tol.tol_psd)?
            .min_eigenvalue
    };
    residuals.insert("phi_min_choi_eigenvalue".into(), phi_min_eig);
    if phi_min_eig < -tol.tol_psd * scale {
        failures.push("phi_min_choi_eigenvalue".into());
    }

    if cd.mode == DecompositionMode::Cptp {
        let tp = trace_preservation_defect(l.superop())?;
        residuals.insert("trace_preservation".into(), tp);
        if tp > tol.tol_recon * scale {
            failures.push("trace_preservation".into());
        }
        let h = cd.hamiltonian.as_ref().expect("CPTP mode carries H");
        let hd = h.hermiticity_defect();
        residuals.insert("h_hermiticity".into(), hd);
        if hd > tol.tol_recon * (1.0 + h.max_abs_entry()) {
            failures.push("h_hermiticity".into());
        }
        let tr_bh = b.adjoint().dot(h).trace_unchecked().norm();
        residuals.insert("trace_bh".into(), tr_bh);
        let b_self_adjoint = b.hermiticity_defect() <= 1e-12 * (1.0 + b.max_abs_entry());
        if b_self_adjoint
            && tr_bh > tol.tol_recon * (1.0 + b.max_abs_entry() * h.max_abs_entry() * l.dim() as f64)
        {
            failures.push("trace_bh".into());
        }
        let phi_b = superop_from_kraus(&cd.phi).apply(b)?;
        let general_b =
            (phi_b.trace_unchecked().im - 2.0 * b.adjoint().dot(h).trace_unchecked().re).abs();
        residuals.insert("general_b_domain".into(), general_b);
    }

    Ok(VerificationReport {
        residuals,
        failures,
    })
}

/// The unique decomposition (−H, Φ*) of the dual (Heisenberg-picture)
/// generator of a CPTP-mode decomposition; Φ* is represented by the
/// adjointed Kraus family {V_j*}.
pub fn dual_generator(cd: &CanonicalDecomposition) -> Result<(Operator, KrausSet)> {
    if cd.mode != DecompositionMode::Cptp {
        return Err(Error::InvalidArgument(
            "the dual decomposition is defined for CPTP-mode decompositions".into(),
        ));
    }
    let h = cd.hamiltonian.as_ref().expect("CPTP mode carries H");
    let minus_h = h.scaled(Complex64::new(-1.0, 0.0));
    let duals: Vec<Operator> = cd.phi.operators().iter().map(|v| v.adjoint()).collect();
    let ks = if duals.is_empty() {
        KrausSet::empty(cd.phi.dim_out(), cd.phi.dim_in())
    } else {
        KrausSet::new(duals)?
    };
    Ok((minus_h, ks))
}

/// Heisenberg-picture generator built from a dual pair: K*(·) + (·)K + Φ*.
/// Equals dual(L) when (−H, {V_j*}) came from [`dual_generator`].
pub fn heisenberg_superop(cd: &CanonicalDecomposition) -> Result<SuperOperator> {
    let (_, ks_dual) = dual_generator(cd)?;
    Ok(k_form_superop(&cd.k.adjoint()).add(&superop_from_kraus(&ks_dual)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn amplitude_damping_kraus(gamma: f64) -> KrausSet {
        KrausSet::new(vec![
            Operator::matrix_unit(2, 2, 0, 1).scaled(c(gamma.sqrt(), 0.0)),
        ])
        .unwrap()
    }

    fn half_identity(d: usize) -> Operator {
        Operator::identity(d).scaled(c(0.5, 0.0))
    }

    #[test]
    fn cp_generator_with_half_identity_k_is_identity_map() {
        let k = half_identity(2);
        let l = build_cp_generator(&k, &KrausSet::empty(2, 2)).unwrap();
        assert!(l.superop().max_abs_diff(&SuperOperator::identity(2)) < 1e-14);

        // The same L from a pure Kraus presentation.
        let l2 = build_cp_generator(
            &Operator::zeros(2, 2),
            &KrausSet::new(vec![Operator::identity(2)]).unwrap(),
        )
        .unwrap();
        assert!(l2.superop().max_abs_diff(&SuperOperator::identity(2)) < 1e-14);
    }

    #[test]
    fn commutator_generator_from_k() {
        // K = −iH gives L = −i[H, ·] for Hermitian H.
        let h = Operator::from_vec(2, 2, vec![c(0.3, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(-0.7, 0.0)])
            .unwrap();
        let k = h.scaled(c(0.0, -1.0));
        let l = build_cp_generator(&k, &KrausSet::empty(2, 2)).unwrap();
        let x = Operator::from_real(2, 2, &[0.4, 1.0, -0.2, 0.9]).unwrap();
        let expect = h
            .dot(&x)
            .sub(&x.dot(&h))
            .scaled(c(0.0, -1.0));
        assert!(l.superop().apply(&x).unwrap().max_abs_diff(&expect) < 1e-13);
    }

    #[test]
    fn gksl_amplitude_damping_action() {
        let l = build_gksl_generator(&Operator::zeros(2, 2), &amplitude_damping_kraus(1.0))
            .unwrap();
        let out = l
            .superop()
            .apply(&Operator::matrix_unit(2, 2, 1, 1))
            .unwrap();
        let expect = Operator::matrix_unit(2, 2, 0, 0).sub(&Operator::matrix_unit(2, 2, 1, 1));
        assert!(out.max_abs_diff(&expect) < 1e-14);
        assert!(trace_preservation_defect(l.superop()).unwrap() < 1e-12);
    }

    #[test]
    fn gksl_commutator_is_traceless() {
        let h = Operator::from_vec(2, 2, vec![c(1.0, 0.0), c(0.2, -0.4), c(0.2, 0.4), c(-1.0, 0.0)])
            .unwrap();
        let l = build_gksl_generator(&h, &KrausSet::empty(2, 2)).unwrap();
        let x = Operator::from_real(2, 2, &[0.5, 0.25, 1.0, -0.3]).unwrap();
        let lx = l.superop().apply(&x).unwrap();
        assert!(lx.trace_unchecked().norm() < 1e-13);

        let zero = build_gksl_generator(&Operator::zeros(2, 2), &KrausSet::empty(2, 2)).unwrap();
        assert!(zero.superop().hs_norm() < 1e-15);

        let skew = Operator::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(build_gksl_generator(&skew, &KrausSet::empty(2, 2)).is_err());
    }

    #[test]
    fn builder_shape_guards() {
        let k3 = Operator::identity(3);
        let ks2 = KrausSet::new(vec![Operator::identity(2)]).unwrap();
        assert!(matches!(
            build_cp_generator(&k3, &ks2),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            build_gksl_generator(&k3, &ks2),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(build_cp_generator(&Operator::zeros(2, 3), &ks2).is_err());
    }

    #[test]
    fn extraction_of_identity_generator() {
        let l = Generator::from_superop(SuperOperator::identity(2), GeneratorClass::CpSemigroup)
            .unwrap();
        let (k0, ks0) = extract_initial_decomposition(&l, &Tolerances::default()).unwrap();
        assert!(ks0.is_empty());
        assert!(k0.max_abs_diff(&half_identity(2)) < 1e-12);
    }

    #[test]
    fn extraction_of_amplitude_damping() {
        let gamma = 1.0;
        let l = build_gksl_generator(&Operator::zeros(2, 2), &amplitude_damping_kraus(gamma))
            .unwrap();
        let (k0, ks0) = extract_initial_decomposition(&l, &Tolerances::default()).unwrap();
        assert_eq!(ks0.len(), 1);
        // Recovered jump operator acts as X ↦ γ⟨1|X|1⟩|0⟩⟨0|.
        let phi0 = superop_from_kraus(&ks0);
        let img = phi0.apply(&Operator::matrix_unit(2, 2, 1, 1)).unwrap();
        assert!(img.max_abs_diff(&Operator::matrix_unit(2, 2, 0, 0).scaled(c(gamma, 0.0))) < 1e-12);
        let expect_k = Operator::matrix_unit(2, 2, 1, 1).scaled(c(-gamma / 2.0, 0.0));
        assert!(k0.max_abs_diff(&expect_k) < 1e-12);
        // Gauge: Im tr K₀ = 0.
        assert!(k0.trace_unchecked().im.abs() < 1e-13);
    }

    #[test]
    fn extraction_rejects_transposition() {
        let d = 2;
        let mut m = Operator::zeros(4, 4).into_data();
        for out_c in 0..d {
            for out_r in 0..d {
                m[[out_c * d + out_r, out_r * d + out_c]] = c(1.0, 0.0);
            }
        }
        let t = SuperOperator::new(d, d, m).unwrap();
        let l = Generator::from_superop(t, GeneratorClass::Unknown).unwrap();
        match extract_initial_decomposition(&l, &Tolerances::default()) {
            Err(Error::NotCpGenerator { min_eigenvalue }) => {
                assert!(min_eigenvalue < -0.5)
            }
            other => panic!("expected NotCpGenerator, got {other:?}"),
        }
    }

    #[test]
    fn canonicalize_identity_generator_fixed_point() {
        let tol = Tolerances::default();
        let b = half_identity(2);

        // Presentation 1: K₀ = 0, Kraus = {1}.
        let cd1 = canonicalize_parts(
            &Operator::zeros(2, 2),
            &KrausSet::new(vec![Operator::identity(2)]).unwrap(),
            &b,
            &tol,
        )
        .unwrap();
        assert!(cd1.k.max_abs_diff(&half_identity(2)) < 1e-12);
        assert!(cd1.phi.is_empty());

        // Presentation 2: K₀ = ½·1, no Kraus part — same canonical output.
        let cd2 = canonicalize_parts(&half_identity(2), &KrausSet::empty(2, 2), &b, &tol).unwrap();
        assert!(cd2.k.max_abs_diff(&cd1.k) < 1e-12);
        assert!(cd2.phi.is_empty());
    }

    #[test]
    fn canonicalize_amplitude_damping() {
        let tol = Tolerances::default();
        let b = half_identity(2);
        let l = build_gksl_generator(&Operator::zeros(2, 2), &amplitude_damping_kraus(1.0))
            .unwrap();
        let cd = canonicalize(&l, &b, &tol).unwrap();
        assert!(cd.k.max_abs_diff(&Operator::matrix_unit(2, 2, 1, 1).scaled(c(-0.5, 0.0))) < 1e-11);
        assert_eq!(cd.phi.len(), 1);
        assert!(cd.phi.operators()[0].max_abs_diff(&Operator::matrix_unit(2, 2, 0, 1)) < 1e-11);
        assert!(cd.residuals["reconstruction"] < 1e-10);
    }

    #[test]
    fn canonicalize_rejects_imaginary_trace_reference() {
        let l = Generator::from_superop(SuperOperator::identity(2), GeneratorClass::CpSemigroup)
            .unwrap();
        let b = Operator::identity(2).scaled(c(0.0, 1.0));
        match canonicalize(&l, &b, &Tolerances::default()) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("Re(tr(B))")),
            other => panic!("expected precondition error, got {other:?}"),
        }
    }

    #[test]
    fn cptp_canonicalization_hand_cases() {
        let tol = Tolerances::default();
        let b = half_identity(2);

        // Amplitude damping: H = 0.
        let l = build_gksl_generator(&Operator::zeros(2, 2), &amplitude_damping_kraus(1.0))
            .unwrap();
        let cd = canonicalize_cptp(&l, &b, &tol).unwrap();
        let h = cd.hamiltonian.as_ref().unwrap();
        assert!(h.max_abs_entry() < 1e-11);
        assert_eq!(cd.phi.len(), 1);

        // Pure Hamiltonian σ_z: H recovered, Φ = 0, tr(BH) = 0.
        let sigma_z = Operator::from_diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let l = build_gksl_generator(&sigma_z, &KrausSet::empty(2, 2)).unwrap();
        let cd = canonicalize_cptp(&l, &b, &tol).unwrap();
        let h = cd.hamiltonian.as_ref().unwrap();
        assert!(h.max_abs_diff(&sigma_z) < 1e-11);
        assert!(cd.phi.is_empty());
        assert!(cd.residuals["trace_bh"] < 1e-12);

        // Zero generator.
        let l = build_gksl_generator(&Operator::zeros(2, 2), &KrausSet::empty(2, 2)).unwrap();
        let cd = canonicalize_cptp(&l, &b, &tol).unwrap();
        assert!(cd.hamiltonian.as_ref().unwrap().max_abs_entry() < 1e-12);
        assert!(cd.phi.is_empty());
    }

    #[test]
    fn cptp_mode_rejects_non_trace_preserving() {
        let l = Generator::from_superop(SuperOperator::identity(2), GeneratorClass::CpSemigroup)
            .unwrap();
        assert!(matches!(
            canonicalize_cptp(&l, &half_identity(2), &Tolerances::default()),
            Err(Error::InvalidArgument(_))
        ));
        // The identity superoperator is not trace-preserving as a generator,
        // so claiming the CPTP class is a validation error already.
        assert!(matches!(
            Generator::from_superop(SuperOperator::identity(2), GeneratorClass::CptpSemigroup),
            Err(Error::InvalidArgument(_))
        ));
        // A non-Hermiticity-preserving matrix is rejected for any class.
        let v = Operator::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let lonly = SuperOperator::from_left_right(&v, &Operator::identity(2)).unwrap();
        assert!(matches!(
            Generator::from_superop(lonly, GeneratorClass::Unknown),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn verify_flags_tampered_decompositions() {
        let tol = Tolerances::default();
        let b = half_identity(2);
        let l = build_gksl_generator(&Operator::zeros(2, 2), &amplitude_damping_kraus(1.0))
            .unwrap();
        let cd = canonicalize(&l, &b, &tol).unwrap();
        let report = verify_canonical(&cd, &l, &tol).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures);

        // K += 0.1i·1 breaks both the trace condition and the reconstruction.
        let mut tampered = cd.clone();
        tampered.k = tampered.k.add(&Operator::identity(2).scaled(c(0.0, 0.1)));
        let report = verify_canonical(&tampered, &l, &tol).unwrap();
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| f == "im_trace_bk"));
        // |Im tr(B*K)| = 0.1·|tr B| = 0.1.
        assert!((report.residuals["im_trace_bk"] - 0.1).abs() < 1e-12);

        // Appending the Kraus operator B/‖B‖₁ breaks CP_B membership with the
        // exact weighted trace (‖B‖₂²/‖B‖₁)² = 1/4 for B = ½·1.
        let mut tampered = cd.clone();
        let b1 = schatten::schatten_norm(&b, 1.0).unwrap();
        let extra = b.scaled(c(1.0 / b1, 0.0));
        let mut ops = tampered.phi.operators().to_vec();
        ops.push(extra);
        tampered.phi = KrausSet::new(ops).unwrap();
        let report = verify_canonical(&tampered, &l, &tol).unwrap();
        assert!(!report.passed());
        let expected = (schatten::schatten_norm(&b, 2.0).unwrap().powi(2) / b1).powi(2);
        assert!((report.residuals["phi_weighted_trace"] - expected).abs() < 1e-12);
        assert!((expected - 0.25).abs() < 1e-13);
    }

    #[test]
    fn dual_decomposition_cases() {
        let tol = Tolerances::default();
        let b = half_identity(2);

        let l = build_gksl_generator(&Operator::zeros(2, 2), &amplitude_damping_kraus(1.0))
            .unwrap();
        let cd = canonicalize_cptp(&l, &b, &tol).unwrap();
        let (h_dual, ks_dual) = dual_generator(&cd).unwrap();
        assert!(h_dual.max_abs_entry() < 1e-11);
        assert_eq!(ks_dual.len(), 1);
        assert!(ks_dual.operators()[0].max_abs_diff(&Operator::matrix_unit(2, 2, 1, 0)) < 1e-11);
        // Heisenberg build equals the dual superoperator.
        let heis = heisenberg_superop(&cd).unwrap();
        assert!(heis.max_abs_diff(&l.superop().dual()) < 1e-10);

        let sigma_z = Operator::from_diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let l = build_gksl_generator(&sigma_z, &KrausSet::empty(2, 2)).unwrap();
        let cd = canonicalize_cptp(&l, &b, &tol).unwrap();
        let (h_dual, ks_dual) = dual_generator(&cd).unwrap();
        assert!(h_dual.max_abs_diff(&sigma_z.scaled(c(-1.0, 0.0))) < 1e-11);
        assert!(ks_dual.is_empty());

        // CP-mode input is rejected.
        let lcp = Generator::from_superop(SuperOperator::identity(2), GeneratorClass::CpSemigroup)
            .unwrap();
        let cd = canonicalize(&lcp, &b, &tol).unwrap();
        assert!(dual_generator(&cd).is_err());
    }
}
