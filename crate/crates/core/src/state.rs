//! Validated density matrices.

use nalgebra::DVector;

use crate::algebra::{self, eigvals_hermitian, hermiticity_deviation, max_abs, CMat, Keep, SubsystemSplit, C64};
use crate::error::{Error, Result};

/// Tolerance for the Hermiticity, trace and positivity invariants.
pub const STATE_TOL: f64 = 1e-10;

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMat,
}

impl DensityMatrix {
    pub fn new(matrix: CMat) -> Result<Self> {
        Self::with_tolerance(matrix, STATE_TOL)
    }

    /// Validates with a looser (or tighter) tolerance than [`STATE_TOL`].
    pub fn with_tolerance(matrix: CMat, tol: f64) -> Result<Self> {
        check_invariants(&matrix, tol)?;
        Ok(DensityMatrix { matrix })
    }

    pub fn from_pure(psi: &DVector<C64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::Input("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(DensityMatrix { matrix: &v * v.adjoint() })
    }

    /// Computational basis state from a bit label such as `"10"` (qubit 1 first).
    pub fn basis_state(label: &str) -> Result<Self> {
        if label.is_empty() || !label.chars().all(|ch| ch == '0' || ch == '1') {
            return Err(Error::Input(format!("basis label {label:?} must be a non-empty 0/1 string")));
        }
        let idx = label.chars().fold(0usize, |acc, ch| acc * 2 + usize::from(ch == '1'));
        let mut psi = DVector::zeros(1 << label.len());
        psi[idx] = algebra::ONE;
        Self::from_pure(&psi)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { matrix: CMat::identity(dim, dim).unscale(dim as f64) }
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(populations.len(), populations.iter().map(|&p| algebra::c(p, 0.0)));
        Self::new(CMat::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat {
        self.matrix
    }

    /// Eigenvalues in ascending order with round-off negatives clamped to zero.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        clamp_spectrum(eigvals_hermitian(&self.matrix)?)
    }

    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn expectation(&self, op: &CMat) -> C64 {
        (op * &self.matrix).trace()
    }

    /// ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        let diff = &self.matrix - &other.matrix;
        Ok(0.5 * eigvals_hermitian(&diff)?.iter().map(|x| x.abs()).sum::<f64>())
    }

    pub fn partial_trace(&self, split: SubsystemSplit, keep: Keep) -> Result<DensityMatrix> {
        let m = algebra::partial_trace_matrix(&self.matrix, split, keep)?;
        Ok(DensityMatrix { matrix: m })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { matrix: algebra::kron(&self.matrix, &other.matrix) }
    }

    /// Keeps only the diagonal in the computational basis.
    pub fn dephased(&self) -> DensityMatrix {
        DensityMatrix { matrix: CMat::from_diagonal(&self.matrix.diagonal()) }
    }
}

/// Diagnostics used by the invariant checks; returns the worst violation of each kind.
#[derive(Debug, Clone, Copy)]
pub struct InvariantReport {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

pub fn invariant_report(m: &CMat) -> Result<InvariantReport> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    let hermiticity = hermiticity_deviation(m);
    let trace = m.trace();
    let trace_error = (trace - algebra::ONE).norm();
    let min_eigenvalue = algebra::hermitize(m).symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
    Ok(InvariantReport { hermiticity, trace_error, min_eigenvalue })
}

fn check_invariants(m: &CMat, tol: f64) -> Result<()> {
    let r = invariant_report(m)?;
    if r.hermiticity > tol {
        return Err(Error::NotHermitian { deviation: r.hermiticity });
    }
    if r.trace_error > tol {
        return Err(Error::Trace { trace: m.trace().re });
    }
    if r.min_eigenvalue < -tol {
        return Err(Error::NotPositive { value: r.min_eigenvalue });
    }
    Ok(())
}

/// Clamps eigenvalues in [−1e-10, 0) to zero; anything more negative is an error.
pub fn clamp_spectrum(values: Vec<f64>) -> Result<Vec<f64>> {
    values
        .into_iter()
        .map(|x| {
            if x >= 0.0 {
                Ok(x)
            } else if x >= -STATE_TOL {
                Ok(0.0)
            } else {
                Err(Error::NotPositive { value: x })
            }
        })
        .collect()
}

/// Max-entry distance, handy in tests.
pub fn max_entry_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    max_abs(&(a.matrix() - b.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{c, identity, pauli, Pauli};

    #[test]
    fn rejects_invalid_matrices() {
        assert!(matches!(DensityMatrix::new(pauli(Pauli::Plus)), Err(Error::NotHermitian { .. })));
        assert!(matches!(DensityMatrix::new(identity(2)), Err(Error::Trace { .. })));
        let m = CMat::from_diagonal(&nalgebra::dvector![c(1.5, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        assert_eq!(clamp_spectrum(vec![-5e-11, 1.0]).unwrap(), vec![0.0, 1.0]);
        assert!(clamp_spectrum(vec![-1e-9, 1.0]).is_err());
    }

    #[test]
    fn basis_state_labels() {
        let rho = DensityMatrix::basis_state("10").unwrap();
        assert_eq!(rho.matrix()[(2, 2)], algebra::ONE);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
        assert!(DensityMatrix::basis_state("12").is_err());
    }

    #[test]
    fn product_partial_trace_recovers_factor() {
        let a = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let b = DensityMatrix::maximally_mixed(2);
        let ab = a.tensor(&b);
        let back = ab.partial_trace(SubsystemSplit::qubits(), Keep::A).unwrap();
        assert!(max_entry_distance(&back, &a) < 1e-12);
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let a = DensityMatrix::basis_state("0").unwrap();
        let b = DensityMatrix::basis_state("1").unwrap();
        assert!((a.trace_distance(&b).unwrap() - 1.0).abs() < 1e-14);
    }
}
