/// Tolerance configuration shared by the verification-heavy operations.
///
/// Defaults match double-precision dense linear algebra at desk scale
/// (dimensions up to a few dozen). All values must be positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Equality of two scalar evaluation routes.
    pub tol_eq: f64,
    /// Eigenvalue floor for positive-semidefiniteness verdicts.
    pub tol_psd: f64,
    /// Residual bound for generator reconstructions.
    pub tol_recon: f64,
    /// Relative cutoff below the largest Choi eigenvalue when extracting
    /// Kraus operators.
    pub rank_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_eq: 1e-10,
            tol_psd: 1e-9,
            tol_recon: 1e-9,
            rank_tol: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> crate::error::Result<()> {
        for (name, v) in [
            ("tol_eq", self.tol_eq),
            ("tol_psd", self.tol_psd),
            ("tol_recon", self.tol_recon),
            ("rank_tol", self.rank_tol),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(crate::error::Error::InvalidArgument(format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}
