//! Entropies and correlation measures for bipartite (mostly two-qubit) states.
//!
//! Quantum discord is minimised over two-outcome orthogonal measurements
//! Π± = (I ± n̂·σ⃗)/2 on subsystem B, parametrised by the Bloch angles of n̂.
//! The degree of quantumness compares the mutual information of ρ with that
//! of its computational-basis diagonal.

use std::f64::consts::{PI, TAU};

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{
    self, c, eig_hermitian, kron, partial_trace_matrix, pauli, CMat, Keep, Pauli, SubsystemSplit, C64,
};
use crate::csvfmt;
use crate::error::{Error, Result};
use crate::optim::NelderMead;
use crate::state::{clamp_spectrum, DensityMatrix, STATE_TOL};

/// Measurement outcomes less likely than this are dropped.
pub const OUTCOME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyUnit {
    #[default]
    Bits,
    Nats,
}

impl EntropyUnit {
    pub fn log(self, x: f64) -> f64 {
        match self {
            EntropyUnit::Bits => x.log2(),
            EntropyUnit::Nats => x.ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EntropyUnit::Bits => "bits",
            EntropyUnit::Nats => "nats",
        }
    }
}

impl std::str::FromStr for EntropyUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bits" | "bit" => Ok(EntropyUnit::Bits),
            "nats" | "nat" => Ok(EntropyUnit::Nats),
            other => Err(Error::Parameter(format!("unknown entropy unit {other:?}"))),
        }
    }
}

/// −Σ λ log λ with 0·log 0 = 0.
pub fn shannon(probabilities: &[f64], unit: EntropyUnit) -> f64 {
    -probabilities.iter().filter(|&&p| p > 0.0).map(|&p| p * unit.log(p)).sum::<f64>()
}

pub fn von_neumann_entropy(rho: &DensityMatrix, unit: EntropyUnit) -> Result<f64> {
    Ok(shannon(&rho.eigenvalues()?, unit))
}

/// S(ρ‖σ) = tr ρ(log ρ − log σ); `f64::INFINITY` when supp ρ ⊄ supp σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix, unit: EntropyUnit) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    let neg_entropy = -von_neumann_entropy(rho, unit)?;
    let es = eig_hermitian(sigma.matrix())?;
    let values = clamp_spectrum(es.values.clone())?;
    let mut cross = 0.0;
    for (j, &mu) in values.iter().enumerate() {
        let v = es.vectors.column(j);
        let weight = (v.adjoint() * rho.matrix() * v)[(0, 0)].re;
        if mu < 1e-12 {
            if weight > 1e-10 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * unit.log(mu);
    }
    Ok((neg_entropy - cross).max(0.0))
}

fn reduced(rho: &DensityMatrix, split: SubsystemSplit) -> Result<(DensityMatrix, DensityMatrix)> {
    split.check(rho.dim())?;
    Ok((rho.partial_trace(split, Keep::A)?, rho.partial_trace(split, Keep::B)?))
}

/// I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB).
pub fn mutual_information(rho_ab: &DensityMatrix, split: SubsystemSplit, unit: EntropyUnit) -> Result<f64> {
    let (a, b) = reduced(rho_ab, split)?;
    let s = von_neumann_entropy(&a, unit)? + von_neumann_entropy(&b, unit)? - von_neumann_entropy(rho_ab, unit)?;
    Ok(s.max(0.0))
}

/// Bloch-sphere direction of a two-outcome projective measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    /// Normalises arbitrary angles to θ ∈ [0, π], φ ∈ [0, 2π) without changing the direction.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        MeasurementBasis { theta, phi }
    }

    pub fn z() -> Self {
        MeasurementBasis { theta: 0.0, phi: 0.0 }
    }

    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// (Π₊, Π₋) = ((I + n̂·σ⃗)/2, (I − n̂·σ⃗)/2).
    pub fn projectors(&self) -> [CMat; 2] {
        let [nx, ny, nz] = self.direction();
        let ns = pauli(Pauli::X) * c(nx, 0.0) + pauli(Pauli::Y) * c(ny, 0.0) + pauli(Pauli::Z) * c(nz, 0.0);
        let id = algebra::identity(2);
        [(&id + &ns) * c(0.5, 0.0), (&id - &ns) * c(0.5, 0.0)]
    }

    fn check(&self) -> Result<()> {
        let [p, m] = self.projectors();
        let id = algebra::identity(2);
        let bad = algebra::max_abs(&(&p + &m - id)) > 1e-12
            || algebra::max_abs(&(&p * &p - &p)) > 1e-12
            || algebra::max_abs(&(&m * &m - &m)) > 1e-12;
        if bad || !self.theta.is_finite() || !self.phi.is_finite() {
            return Err(Error::Parameter(format!("measurement basis {self:?} does not give orthogonal projectors")));
        }
        Ok(())
    }
}

/// One outcome of a measurement on B.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub probability: f64,
    pub conditional: DensityMatrix,
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::Dimension(format!("expected a two-qubit state, got dimension {}", rho.dim())));
    }
    Ok(())
}

/// Outcome probabilities and conditional states of A after measuring B.
pub fn measure_on_b(rho_ab: &DensityMatrix, basis: &MeasurementBasis) -> Result<Vec<Outcome>> {
    require_two_qubits(rho_ab)?;
    basis.check()?;
    let split = SubsystemSplit::qubits();
    let id = algebra::identity(2);
    let mut outcomes = Vec::with_capacity(2);
    for proj in basis.projectors() {
        let k = kron(&id, &proj);
        let post = &k * rho_ab.matrix() * k.adjoint();
        let p = post.trace().re;
        if p < OUTCOME_TOL {
            continue;
        }
        let cond = partial_trace_matrix(&post, split, Keep::A)?.unscale(p);
        outcomes.push(Outcome { probability: p, conditional: DensityMatrix::with_tolerance(cond, 1e-8)? });
    }
    Ok(outcomes)
}

/// S_Π(A|B) = Σ_k p_k S(ρ_{A|k}).
pub fn conditional_entropy(rho_ab: &DensityMatrix, basis: &MeasurementBasis, unit: EntropyUnit) -> Result<f64> {
    measure_on_b(rho_ab, basis)?.iter().map(|o| Ok(o.probability * von_neumann_entropy(&o.conditional, unit)?)).sum()
}

/// J_Π(A|B) = S(ρ_A) − S_Π(A|B).
pub fn classical_correlation(rho_ab: &DensityMatrix, basis: &MeasurementBasis, unit: EntropyUnit) -> Result<f64> {
    require_two_qubits(rho_ab)?;
    let a = rho_ab.partial_trace(SubsystemSplit::qubits(), Keep::A)?;
    Ok(von_neumann_entropy(&a, unit)? - conditional_entropy(rho_ab, basis, unit)?)
}

/// Conditional entropy as a closed-form function of the measurement direction.
///
/// With M_j = tr_B[(I ⊗ σ_j) ρ], the unnormalised conditional state of A for
/// outcome ± is (ρ_A ± n̂·M)/2, so every evaluation only needs 2×2 spectra.
#[derive(Debug, Clone)]
pub struct ConditionalEntropyObjective {
    rho_a: [C64; 4],
    moments: [[C64; 4]; 3],
    unit: EntropyUnit,
}

impl ConditionalEntropyObjective {
    pub fn new(rho_ab: &DensityMatrix, unit: EntropyUnit) -> Result<Self> {
        require_two_qubits(rho_ab)?;
        let split = SubsystemSplit::qubits();
        let flat = |m: &CMat| [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]];
        let rho_a = flat(&partial_trace_matrix(rho_ab.matrix(), split, Keep::A)?);
        let id = algebra::identity(2);
        let mut moments = [[algebra::ZERO; 4]; 3];
        for (slot, which) in moments.iter_mut().zip([Pauli::X, Pauli::Y, Pauli::Z]) {
            let weighted = kron(&id, &pauli(which)) * rho_ab.matrix();
            *slot = flat(&partial_trace_matrix(&weighted, split, Keep::A)?);
        }
        Ok(ConditionalEntropyObjective { rho_a, moments, unit })
    }

    pub fn eval(&self, theta: f64, phi: f64) -> f64 {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let n = [st * cp, st * sp, ct];
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let mut q = [algebra::ZERO; 4];
            for (k, qk) in q.iter_mut().enumerate() {
                let nm = n[0] * self.moments[0][k] + n[1] * self.moments[1][k] + n[2] * self.moments[2][k];
                *qk = (self.rho_a[k] + nm * sign) * 0.5;
            }
            let p = q[0].re + q[3].re;
            if p < OUTCOME_TOL {
                continue;
            }
            let half_gap = (0.25 * (q[0].re - q[3].re).powi(2) + q[1].norm_sqr()).sqrt();
            let mu = [(0.5 * p + half_gap), (0.5 * p - half_gap).max(0.0)];
            // p·S(q/p) = −Σ μ log μ + p log p
            total +=
                -mu.iter().filter(|&&m| m > 0.0).map(|&m| m * self.unit.log(m)).sum::<f64>() + p * self.unit.log(p);
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    pub discord: f64,
    pub classical_correlation: f64,
    pub optimal_basis: MeasurementBasis,
    pub mutual_information: f64,
}

/// Grid resolution (θ × φ) of the global stage of [`discord_min`].
pub const DISCORD_GRID: (usize, usize) = (64, 128);
/// Number of grid minima refined locally.
const REFINE_STARTS: usize = 4;

/// Discord D(A|B) = I(A:B) − max_Π J_Π(A|B) over orthogonal measurements on B.
pub fn discord_min(rho_ab: &DensityMatrix, unit: EntropyUnit) -> Result<DiscordResult> {
    require_two_qubits(rho_ab)?;
    let split = SubsystemSplit::qubits();
    let objective = ConditionalEntropyObjective::new(rho_ab, unit)?;
    let (n_theta, n_phi) = DISCORD_GRID;
    let d_theta = PI / (n_theta - 1) as f64;
    let d_phi = TAU / n_phi as f64;

    let grid: Vec<f64> = (0..n_theta)
        .flat_map(|i| (0..n_phi).map(move |j| (i, j)))
        .map(|(i, j)| objective.eval(i as f64 * d_theta, j as f64 * d_phi))
        .collect();
    let at = |i: usize, j: usize| grid[i * n_phi + j];
    // local minima of the grid (periodic in φ), best first
    let mut starts: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n_theta {
        for j in 0..n_phi {
            let v = at(i, j);
            let neighbours = [(i.wrapping_sub(1), j), (i + 1, j), (i, (j + n_phi - 1) % n_phi), (i, (j + 1) % n_phi)];
            let is_min = neighbours.iter().filter(|(a, _)| *a < n_theta).all(|&(a, b)| v <= at(a, b));
            if is_min {
                starts.push((v, i, j));
            }
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0));
    starts.truncate(REFINE_STARTS);

    let nm = NelderMead { initial_step: 0.5 * d_theta, x_tol: 1e-6, max_iter: 2_000 };
    let (mut best_value, mut best_angles) = (f64::INFINITY, (0.0, 0.0));
    for &(v, i, j) in &starts {
        if v < best_value {
            best_value = v;
            best_angles = (i as f64 * d_theta, j as f64 * d_phi);
        }
        let m = nm.minimize(|x| objective.eval(x[0], x[1]), &[i as f64 * d_theta, j as f64 * d_phi]);
        if m.value < best_value {
            best_value = m.value;
            best_angles = (m.x[0], m.x[1]);
        }
    }

    let a = rho_ab.partial_trace(split, Keep::A)?;
    let s_a = von_neumann_entropy(&a, unit)?;
    let mi = mutual_information(rho_ab, split, unit)?;
    let classical = s_a - best_value;
    Ok(DiscordResult {
        discord: (mi - classical).max(0.0),
        classical_correlation: classical,
        optimal_basis: MeasurementBasis::new(best_angles.0, best_angles.1),
        mutual_information: mi,
    })
}

/// Mutual information of the computational-basis diagonal of ρ.
pub fn classical_mutual_information(rho_ab: &DensityMatrix, split: SubsystemSplit, unit: EntropyUnit) -> Result<f64> {
    split.check(rho_ab.dim())?;
    mutual_information(&rho_ab.dephased(), split, unit)
}

/// D(A:B) = I(A:B) − I(Ã:B̃).
pub fn degree_of_quantumness(rho_ab: &DensityMatrix, split: SubsystemSplit, unit: EntropyUnit) -> Result<f64> {
    Ok(mutual_information(rho_ab, split, unit)? - classical_mutual_information(rho_ab, split, unit)?)
}

/// G G† / tr(G G†) with G a dim × rank matrix of standard complex Gaussians.
pub fn random_density_matrix(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::Parameter(format!("rank {rank} must lie in 1..={dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
        let g = CMat::from_fn(dim, rank, |_, _| c(gauss(), gauss()) * std::f64::consts::FRAC_1_SQRT_2);
        let m = &g * g.adjoint();
        let tr = m.trace().re;
        let m = algebra::hermitize(&m.unscale(tr));
        let rho = DensityMatrix::new(m)?;
        let numerical_rank = rho.eigenvalues()?.iter().filter(|&&x| x > STATE_TOL).count();
        if numerical_rank == rank {
            return Ok(rho);
        }
    }
}

/// Pure state from amplitudes (normalised internally).
pub fn pure_state(amplitudes: &[C64]) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(&DVector::from_column_slice(amplitudes))
}

/// Bell state (|00⟩ + |11⟩)/√2.
pub fn bell_state() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    pure_state(&[c(s, 0.0), algebra::ZERO, algebra::ZERO, c(s, 0.0)]).expect("normalised")
}

/// One row of the random-state discord benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub rank: usize,
    pub purity: f64,
    pub mutual_info: f64,
    pub discord: f64,
    pub classical_corr: f64,
    pub degree_of_quantumness: f64,
    pub theta_opt: f64,
    pub phi_opt: f64,
}

impl BenchRow {
    pub fn compute(seed: u64, rank: usize, unit: EntropyUnit) -> Result<Self> {
        let rho = random_density_matrix(4, rank, seed)?;
        let split = SubsystemSplit::qubits();
        let d = discord_min(&rho, unit)?;
        Ok(BenchRow {
            seed,
            rank,
            purity: rho.purity(),
            mutual_info: d.mutual_information,
            discord: d.discord,
            classical_corr: d.classical_correlation,
            degree_of_quantumness: degree_of_quantumness(&rho, split, unit)?,
            theta_opt: d.optimal_basis.theta,
            phi_opt: d.optimal_basis.phi,
        })
    }
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out =
        String::from("seed,rank,purity,mutual_info,discord,classical_corr,degree_of_quantumness,theta_opt,phi_opt\n");
    for r in rows {
        let reals =
            [r.purity, r.mutual_info, r.discord, r.classical_corr, r.degree_of_quantumness, r.theta_opt, r.phi_opt]
                .map(csvfmt::real);
        out.push_str(&format!("{},{},{}\n", r.seed, r.rank, reals.join(",")));
    }
    out
}
