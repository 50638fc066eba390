//! Dense complex matrices for few-qubit systems.
//!
//! Conventions used throughout the crate:
//!
//! * single-qubit basis order is (|0⟩, |1⟩) with σᶻ = diag(−1, +1), so |1⟩ is
//!   the excited state and σ⁺ = |1⟩⟨0| raises |0⟩ → |1⟩;
//! * in a bipartite space subsystem A (qubit 1) is the slower-varying index,
//!   giving the two-qubit order |00⟩, |01⟩, |10⟩, |11⟩.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };
pub const I: C64 = Complex { re: 0.0, im: 1.0 };

/// Default Hermiticity tolerance for eigendecomposition inputs.
pub const HERMITIAN_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
    Plus,
    Minus,
    Id,
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn pauli(which: Pauli) -> CMat {
    let (a, b, cc, d) = match which {
        Pauli::X => (ZERO, ONE, ONE, ZERO),
        Pauli::Y => (ZERO, -I, I, ZERO),
        Pauli::Z => (-ONE, ZERO, ZERO, ONE),
        // |1⟩⟨0|
        Pauli::Plus => (ZERO, ZERO, ONE, ZERO),
        // |0⟩⟨1|
        Pauli::Minus => (ZERO, ONE, ZERO, ZERO),
        Pauli::Id => (ONE, ZERO, ZERO, ONE),
    };
    CMat::from_row_slice(2, 2, &[a, b, cc, d])
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticommutator(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// Embeds a single-qubit operator on `site` (0 = qubit 1) of an `n`-qubit register.
pub fn embed(op: &CMat, site: usize, n_qubits: usize) -> CMat {
    assert!(site < n_qubits, "site {site} out of range for {n_qubits} qubits");
    (0..n_qubits).fold(identity(1), |acc, k| if k == site { kron(&acc, op) } else { kron(&acc, &identity(2)) })
}

/// Largest entrywise modulus of `m − m†`.
pub fn hermiticity_deviation(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Bipartition of a Hilbert space into A ⊗ B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsystemSplit {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl SubsystemSplit {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a < 2 || dim_b < 2 {
            return Err(Error::Dimension(format!("bipartite split needs both factors >= 2, got {dim_a} x {dim_b}")));
        }
        Ok(SubsystemSplit { dim_a, dim_b })
    }

    pub fn qubits() -> Self {
        SubsystemSplit { dim_a: 2, dim_b: 2 }
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if dim != self.total() {
            return Err(Error::Dimension(format!(
                "matrix of dimension {dim} does not factor as {} x {}",
                self.dim_a, self.dim_b
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of an arbitrary operator on A ⊗ B.
pub fn partial_trace_matrix(m: &CMat, split: SubsystemSplit, keep: Keep) -> Result<CMat> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    split.check(m.nrows())?;
    let (da, db) = (split.dim_a, split.dim_b);
    let out = match keep {
        Keep::A => CMat::from_fn(da, da, |i, k| (0..db).map(|j| m[(i * db + j, k * db + j)]).sum()),
        Keep::B => CMat::from_fn(db, db, |j, l| (0..da).map(|i| m[(i * db + j, i * db + l)]).sum()),
    };
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl HermitianEigen {
    /// V diag(λ) V†.
    pub fn reconstruct(&self) -> CMat {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= lam;
            }
        }
        scaled * self.vectors.adjoint()
    }
}

pub fn eig_hermitian(m: &CMat) -> Result<HermitianEigen> {
    let deviation = hermiticity_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(m.nrows(), m.ncols(), |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(m: &CMat) -> Result<Vec<f64>> {
    let deviation = hermiticity_deviation(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let mut values: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Column-stacking vectorisation: vec(ρ)[i + n·j] = ρ[i, j].
pub fn vec_col(m: &CMat) -> nalgebra::DVector<C64> {
    nalgebra::DVector::from_column_slice(m.as_slice())
}

pub fn unvec_col(v: &nalgebra::DVector<C64>, n: usize) -> CMat {
    assert_eq!(v.len(), n * n, "vector length is not a square");
    CMat::from_column_slice(n, n, v.as_slice())
}
