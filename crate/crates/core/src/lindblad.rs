//! Two-qubit Lindblad dynamics with correlated environments.
//!
//! H = (Δ/2)(σ₁ᶻ + σ₂ᶻ) + (τ/2)(σ₁ˣ + σ₂ˣ) + J(σ₁⁺σ₂⁻ + σ₂⁺σ₁⁻)
//!
//! with collapse operators
//!
//! c_S = √(γ(1+ξ)) (σ₁ + σ₂)/√2,   c_A = √(γ(1−ξ)) (σ₁ − σ₂)/√2,
//!
//! where σᵢ is the channel operator acting on qubit i. Superoperators act on
//! column-stacked density matrices: vec(AρB) = (Bᵀ ⊗ A) vec(ρ).

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DVector;

use crate::algebra::{self, anticommutator, c, commutator, embed, kron, pauli, CMat, Pauli, C64, I};
use crate::csvfmt;
use crate::error::{Error, Result};
use crate::noise::check_xi;
use crate::state::{invariant_report, DensityMatrix};

const N_QUBITS: usize = 2;
const DIM: usize = 4;

/// Local operator entering the collapse operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Channel {
    /// σ⁺, the escapement kick |0⟩ → |1⟩.
    #[default]
    Raise,
    Lower,
    X,
    Z,
}

impl Channel {
    pub fn local_operator(self) -> CMat {
        pauli(match self {
            Channel::Raise => Pauli::Plus,
            Channel::Lower => Pauli::Minus,
            Channel::X => Pauli::X,
            Channel::Z => Pauli::Z,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::Raise => "raise",
            Channel::Lower => "lower",
            Channel::X => "x",
            Channel::Z => "z",
        }
    }
}

impl std::str::FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "raise" | "plus" | "sigma+" => Ok(Channel::Raise),
            "lower" | "minus" | "sigma-" => Ok(Channel::Lower),
            "x" => Ok(Channel::X),
            "z" => Ok(Channel::Z),
            other => Err(Error::Parameter(format!("unknown channel {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub delta: f64,
    pub tau: f64,
    pub j_xy: f64,
    pub gamma: f64,
    pub xi: f64,
    pub channel: Channel,
}

impl ModelParams {
    pub fn new(delta: f64, tau: f64, j_xy: f64, gamma: f64, xi: f64) -> Result<Self> {
        let p = ModelParams { delta, tau, j_xy, gamma, xi, channel: Channel::Raise };
        p.validate()?;
        Ok(p)
    }

    /// Δ = 1, τ = 1, J_xy = 0.25, γ = 0.05 with the given bath correlation.
    pub fn reference(xi: f64) -> Self {
        ModelParams { delta: 1.0, tau: 1.0, j_xy: 0.25, gamma: 0.05, xi, channel: Channel::Raise }
    }

    pub fn with_channel(mut self, channel: Channel) -> Self {
        self.channel = channel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("delta", self.delta), ("tau", self.tau), ("j_xy", self.j_xy)] {
            if !v.is_finite() {
                return Err(Error::Parameter(format!("{name} must be finite, got {v}")));
            }
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::Parameter(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        check_xi(self.xi)
    }
}

/// Channel operator embedded on qubit 1 and qubit 2.
pub fn site_operators(p: &ModelParams) -> (CMat, CMat) {
    let local = p.channel.local_operator();
    (embed(&local, 0, N_QUBITS), embed(&local, 1, N_QUBITS))
}

pub fn build_hamiltonian(p: &ModelParams) -> CMat {
    let z = |k| embed(&pauli(Pauli::Z), k, N_QUBITS);
    let x = |k| embed(&pauli(Pauli::X), k, N_QUBITS);
    let up = |k| embed(&pauli(Pauli::Plus), k, N_QUBITS);
    let down = |k| embed(&pauli(Pauli::Minus), k, N_QUBITS);
    (z(0) + z(1)) * c(p.delta / 2.0, 0.0)
        + (x(0) + x(1)) * c(p.tau / 2.0, 0.0)
        + (up(0) * down(1) + up(1) * down(0)) * c(p.j_xy, 0.0)
}

/// (c_S, c_A).
pub fn build_collapse_ops(p: &ModelParams) -> Result<(CMat, CMat)> {
    p.validate()?;
    let (s1, s2) = site_operators(p);
    let rate_s = (p.gamma * (1.0 + p.xi)).max(0.0).sqrt() * FRAC_1_SQRT_2;
    let rate_a = (p.gamma * (1.0 - p.xi)).max(0.0).sqrt() * FRAC_1_SQRT_2;
    Ok(((&s1 + &s2) * c(rate_s, 0.0), (&s1 - &s2) * c(rate_a, 0.0)))
}

fn check_same_dim(a: &CMat, b: &CMat) -> Result<()> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(Error::Dimension(format!("operator {:?} vs state {:?}", a.shape(), b.shape())));
    }
    Ok(())
}

/// cρc† − ½{c†c, ρ}.
pub fn dissipator_apply(cop: &CMat, rho: &CMat) -> Result<CMat> {
    check_same_dim(cop, rho)?;
    let cd = cop.adjoint();
    let cdc = &cd * cop;
    Ok(cop * rho * &cd - anticommutator(&cdc, rho) * c(0.5, 0.0))
}

/// Site-local dissipators γD[σ₁](ρ) and γD[σ₂](ρ).
pub fn local_dissipators_apply(p: &ModelParams, rho: &CMat) -> Result<(CMat, CMat)> {
    let (s1, s2) = site_operators(p);
    let g = c(p.gamma, 0.0);
    Ok((dissipator_apply(&s1, rho)? * g, dissipator_apply(&s2, rho)? * g))
}

/// D₁₂(ρ) = γ[σ₁ρσ₂† + σ₂ρσ₁† − ½{σ₁†σ₂ + σ₂†σ₁, ρ}].
pub fn cross_dissipator_apply(p: &ModelParams, rho: &CMat) -> Result<CMat> {
    let (s1, s2) = site_operators(p);
    check_same_dim(&s1, rho)?;
    let (d1, d2) = (s1.adjoint(), s2.adjoint());
    let jump = &s1 * rho * &d2 + &s2 * rho * &d1;
    let cross = &d1 * &s2 + &d2 * &s1;
    Ok((jump - anticommutator(&cross, rho) * c(0.5, 0.0)) * c(p.gamma, 0.0))
}

/// Right-hand side −i[H, ρ] + D_S(ρ) + D_A(ρ) evaluated directly on the matrix.
pub fn lindblad_rhs(p: &ModelParams, rho: &CMat) -> Result<CMat> {
    let h = build_hamiltonian(p);
    check_same_dim(&h, rho)?;
    let (cs, ca) = build_collapse_ops(p)?;
    Ok(commutator(&h, rho) * (-I) + dissipator_apply(&cs, rho)? + dissipator_apply(&ca, rho)?)
}

/// Superoperator of ρ ↦ AρB under column stacking.
pub fn sprepost(a: &CMat, b: &CMat) -> CMat {
    kron(&b.transpose(), a)
}

pub fn dissipator_superop(cop: &CMat) -> CMat {
    let n = cop.nrows();
    let id = CMat::identity(n, n);
    let cdc = cop.adjoint() * cop;
    sprepost(cop, &cop.adjoint()) - (sprepost(&cdc, &id) + sprepost(&id, &cdc)) * c(0.5, 0.0)
}

/// Superoperator of D₁ + D₂ + ξD₁₂ assembled from site-local and cross terms.
pub fn site_decomposition_superop(p: &ModelParams) -> CMat {
    let (s1, s2) = site_operators(p);
    let id = CMat::identity(DIM, DIM);
    let g = c(p.gamma, 0.0);
    let local = (dissipator_superop(&s1) + dissipator_superop(&s2)) * g;
    let cross_op = s1.adjoint() * &s2 + s2.adjoint() * &s1;
    let cross = (sprepost(&s1, &s2.adjoint()) + sprepost(&s2, &s1.adjoint())
        - (sprepost(&cross_op, &id) + sprepost(&id, &cross_op)) * c(0.5, 0.0))
        * g;
    local + cross * c(p.xi, 0.0)
}

/// Superoperator of D_S + D_A built from the collapse operators.
pub fn collapse_superop(p: &ModelParams) -> Result<CMat> {
    let (cs, ca) = build_collapse_ops(p)?;
    Ok(dissipator_superop(&cs) + dissipator_superop(&ca))
}

#[derive(Debug, Clone)]
pub struct Liouvillian {
    matrix: CMat,
    params: ModelParams,
}

pub fn build_liouvillian(p: &ModelParams) -> Result<Liouvillian> {
    p.validate()?;
    let h = build_hamiltonian(p);
    let id = CMat::identity(DIM, DIM);
    let unitary = (sprepost(&h, &id) - sprepost(&id, &h)) * (-I);
    Ok(Liouvillian { matrix: unitary + collapse_superop(p)?, params: *p })
}

impl Liouvillian {
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Hilbert-space dimension d (the superoperator is d² × d²).
    pub fn hilbert_dim(&self) -> usize {
        DIM
    }

    pub fn apply(&self, rho: &CMat) -> CMat {
        algebra::unvec_col(&(&self.matrix * algebra::vec_col(rho)), DIM)
    }

    /// Full complex spectrum from a Schur decomposition.
    pub fn eigenvalues(&self) -> Vec<C64> {
        let (_, t) = self.matrix.clone().schur().unpack();
        t.diagonal().iter().copied().collect()
    }

    /// Norm of L·vec(ρ).
    pub fn residual(&self, rho: &CMat) -> f64 {
        (&self.matrix * algebra::vec_col(rho)).norm()
    }

    /// exp(L·t).
    pub fn propagator(&self, t: f64) -> CMat {
        (&self.matrix * c(t, 0.0)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Propagator {
    /// One-step propagator exp(L·dt), computed once.
    #[default]
    Expm,
    /// Classical fourth-order Runge–Kutta on vec(ρ), for cross-validation.
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub propagator: Propagator,
    /// Tolerance on the density-matrix invariants of every recorded state.
    pub tolerance: f64,
    pub keep_states: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { propagator: Propagator::Expm, tolerance: 1e-8, keep_states: true }
    }
}

/// Observable traces recorded along a trajectory.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Observables {
    pub sz1: Vec<f64>,
    pub sz2: Vec<f64>,
    pub sx1: Vec<f64>,
    pub sx2: Vec<f64>,
    pub purity: Vec<f64>,
}

impl Observables {
    pub const NAMES: [&'static str; 5] = ["sz1", "sz2", "sx1", "sx2", "purity"];

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        match name {
            "sz1" => Some(&self.sz1),
            "sz2" => Some(&self.sz2),
            "sx1" => Some(&self.sx1),
            "sx2" => Some(&self.sx2),
            "purity" => Some(&self.purity),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub dt: f64,
    pub times: Vec<f64>,
    /// Empty unless states were kept.
    pub states: Vec<DensityMatrix>,
    pub observables: Observables,
    /// Worst invariant deviations seen along the trajectory.
    pub max_trace_error: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl EvolutionResult {
    pub fn final_state(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }

    pub fn to_csv(&self) -> String {
        let o = &self.observables;
        let mut out = String::from("t,sz1,sz2,sx1,sx2,purity\n");
        for k in 0..self.times.len() {
            let row = [self.times[k], o.sz1[k], o.sz2[k], o.sx1[k], o.sx2[k], o.purity[k]];
            out.push_str(&row.map(csvfmt::real).join(","));
            out.push('\n');
        }
        out
    }
}

type StepFn = dyn Fn(&DVector<C64>) -> DVector<C64>;

pub fn evolve(p: &ModelParams, rho0: &DensityMatrix, t_final: f64, dt: f64) -> Result<EvolutionResult> {
    evolve_with(p, rho0, t_final, dt, EvolveOptions::default())
}

pub fn evolve_with(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
    opts: EvolveOptions,
) -> Result<EvolutionResult> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Parameter(format!("dt must be > 0, got {dt}")));
    }
    if !(t_final >= dt && t_final.is_finite()) {
        return Err(Error::Parameter(format!("t_final = {t_final} must be >= dt = {dt}")));
    }
    if rho0.dim() != DIM {
        return Err(Error::Dimension(format!("initial state has dimension {}, expected {DIM}", rho0.dim())));
    }
    let liouvillian = build_liouvillian(p)?;
    let n_steps = (t_final / dt).round() as usize;

    let step: Box<StepFn> = match opts.propagator {
        Propagator::Expm => {
            let prop = liouvillian.propagator(dt);
            Box::new(move |v| &prop * v)
        }
        Propagator::Rk4 => {
            let l = liouvillian.matrix().clone();
            Box::new(move |v| rk4_step(&l, v, dt))
        }
    };

    let ops = [
        embed(&pauli(Pauli::Z), 0, N_QUBITS),
        embed(&pauli(Pauli::Z), 1, N_QUBITS),
        embed(&pauli(Pauli::X), 0, N_QUBITS),
        embed(&pauli(Pauli::X), 1, N_QUBITS),
    ];

    let mut result = EvolutionResult {
        dt,
        times: Vec::with_capacity(n_steps + 1),
        states: Vec::new(),
        observables: Observables::default(),
        max_trace_error: 0.0,
        max_hermiticity_error: 0.0,
        min_eigenvalue: f64::INFINITY,
    };
    let mut v = algebra::vec_col(rho0.matrix());
    for k in 0..=n_steps {
        if k > 0 {
            v = step(&v);
        }
        let t = k as f64 * dt;
        let m = algebra::unvec_col(&v, DIM);
        let report = invariant_report(&m)?;
        result.max_trace_error = result.max_trace_error.max(report.trace_error);
        result.max_hermiticity_error = result.max_hermiticity_error.max(report.hermiticity);
        result.min_eigenvalue = result.min_eigenvalue.min(report.min_eigenvalue);
        let state = DensityMatrix::with_tolerance(m, opts.tolerance).map_err(|e| Error::Propagation {
            step: k,
            time: t,
            source: Box::new(e),
        })?;

        let o = &mut result.observables;
        o.sz1.push(state.expectation(&ops[0]).re);
        o.sz2.push(state.expectation(&ops[1]).re);
        o.sx1.push(state.expectation(&ops[2]).re);
        o.sx2.push(state.expectation(&ops[3]).re);
        o.purity.push(state.purity());
        result.times.push(t);
        if opts.keep_states {
            result.states.push(state);
        }
    }
    Ok(result)
}

fn rk4_step(l: &CMat, v: &DVector<C64>, dt: f64) -> DVector<C64> {
    let h = c(dt, 0.0);
    let half = c(0.5 * dt, 0.0);
    let k1 = l * v;
    let k2 = l * (v + &k1 * half);
    let k3 = l * (v + &k2 * half);
    let k4 = l * (v + &k3 * h);
    v + (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(dt / 6.0, 0.0)
}

/// State at time `t` obtained by repeated application of exp(L·Δ) with Δ ≤ 1.
pub fn propagate_to(p: &ModelParams, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Parameter(format!("propagation time must be >= 0, got {t}")));
    }
    let liouvillian = build_liouvillian(p)?;
    let chunks = t.ceil().max(1.0) as usize;
    let prop = liouvillian.propagator(t / chunks as f64);
    let mut v = algebra::vec_col(rho0.matrix());
    for _ in 0..chunks {
        v = &prop * v;
    }
    let m = algebra::hermitize(&algebra::unvec_col(&v, DIM));
    let tr = m.trace();
    DensityMatrix::with_tolerance(m.unscale(tr.re), 1e-8)
}

/// Singular values of the Liouvillian below this count as null-space directions.
pub const NULL_TOL: f64 = 1e-10;
/// With no singular value below this there is no steady state at all.
pub const NO_STEADY_TOL: f64 = 1e-8;

/// Null-space steady state ρ_ss with L·vec(ρ_ss) = 0.
pub fn steady_state(p: &ModelParams) -> Result<DensityMatrix> {
    let liouvillian = build_liouvillian(p)?;
    steady_state_of(&liouvillian)
}

pub fn steady_state_of(liouvillian: &Liouvillian) -> Result<DensityMatrix> {
    let svd = liouvillian.matrix().clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    let smallest = svd.singular_values[order[0]];
    if smallest > NO_STEADY_TOL {
        return Err(Error::NoSteadyState { smallest });
    }
    let null: Vec<usize> = order.iter().copied().filter(|&k| svd.singular_values[k] <= NULL_TOL).collect();
    let candidate = |k: usize| -> CMat {
        let v: DVector<C64> = v_t.row(k).adjoint();
        let m = algebra::hermitize(&algebra::unvec_col(&v, DIM));
        let tr = m.trace();
        if tr.norm() > 1e-8 {
            m.unscale(tr.re)
        } else {
            m
        }
    };
    if null.len() > 1 {
        return Err(Error::DegenerateSteadyState { candidates: null.into_iter().map(candidate).collect() });
    }
    let m = candidate(order[0]);
    if m.trace().norm() <= 1e-8 {
        return Err(Error::NoSteadyState { smallest });
    }
    DensityMatrix::new(m)
}

/// How a steady state was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyStateSource {
    NullSpace,
    /// Null-space solution was degenerate or missing; the state was propagated instead.
    Propagated,
}

/// Null-space steady state, falling back to long-time propagation from `rho0`
/// when the null space is degenerate or empty.
pub fn steady_state_or_propagate(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_long: f64,
) -> Result<(DensityMatrix, SteadyStateSource)> {
    match steady_state(p) {
        Ok(rho) => Ok((rho, SteadyStateSource::NullSpace)),
        Err(Error::DegenerateSteadyState { .. } | Error::NoSteadyState { .. }) => {
            Ok((propagate_to(p, rho0, t_long)?, SteadyStateSource::Propagated))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{max_abs, ONE, ZERO};
    use nalgebra::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut ChaCha8Rng) -> CMat {
        let g = CMat::from_fn(DIM, DIM, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = &g * g.adjoint();
        let tr = m.trace().re;
        m.unscale(tr)
    }

    fn random_matrix(rng: &mut ChaCha8Rng) -> CMat {
        CMat::from_fn(DIM, DIM, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn hamiltonian_matches_hand_assembly() {
        // term-by-term in the |00⟩,|01⟩,|10⟩,|11⟩ basis:
        //   (Δ/2)(σ₁ᶻ+σ₂ᶻ) = diag(−1, 0, 0, 1)
        //   (τ/2)(σ₁ˣ+σ₂ˣ) flips one bit with weight 1/2
        //   J(σ₁⁺σ₂⁻ + h.c.) couples |01⟩ ↔ |10⟩ with weight J
        let expected = [[-1.0, 0.5, 0.5, 0.0], [0.5, 0.0, 0.25, 0.5], [0.5, 0.25, 0.0, 0.5], [0.0, 0.5, 0.5, 1.0]];
        let h = build_hamiltonian(&ModelParams::reference(0.0));
        for i in 0..4 {
            for j in 0..4 {
                assert!((h[(i, j)] - c(expected[i][j], 0.0)).norm() < 1e-15, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn hamiltonian_special_cases() {
        let p = ModelParams::new(2.0, 0.0, 0.0, 0.1, 0.0).unwrap();
        let h = build_hamiltonian(&p);
        let expected = CMat::from_diagonal(&nalgebra::dvector![c(-2.0, 0.0), ZERO, ZERO, c(2.0, 0.0)]);
        assert!(max_abs(&(h - expected)) < 1e-15);
        let zero = ModelParams::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(max_abs(&build_hamiltonian(&zero)), 0.0);
    }

    #[test]
    fn collapse_operators_at_extreme_correlation() {
        let (cs, ca) = build_collapse_ops(&ModelParams::reference(1.0)).unwrap();
        assert_eq!(max_abs(&ca), 0.0);
        assert!(max_abs(&cs) > 0.0);
        let (cs, ca) = build_collapse_ops(&ModelParams::reference(-1.0)).unwrap();
        assert_eq!(max_abs(&cs), 0.0);
        assert!(max_abs(&ca) > 0.0);
        assert!(build_collapse_ops(&ModelParams { xi: 1.5, ..ModelParams::reference(0.0) }).is_err());
    }

    #[test]
    fn collapse_operator_norms() {
        let p = ModelParams::reference(0.0);
        let (s1, s2) = site_operators(&p);
        let (cs, ca) = build_collapse_ops(&p).unwrap();
        for (cop, sum) in [(cs, &s1 + &s2), (ca, &s1 - &s2)] {
            let oracle = p.gamma * (sum.adjoint() * &sum).trace().re / 2.0;
            assert!((oracle - 0.1).abs() < 1e-15);
            assert!((cop.norm_squared() - oracle).abs() < 1e-15);
        }
    }

    #[test]
    fn dissipator_examples() {
        let rho = DensityMatrix::basis_state("1").unwrap();
        let zero = CMat::zeros(2, 2);
        assert_eq!(max_abs(&dissipator_apply(&zero, rho.matrix()).unwrap()), 0.0);
        let out = dissipator_apply(&pauli(Pauli::Minus), rho.matrix()).unwrap();
        let expected = CMat::from_diagonal(&nalgebra::dvector![ONE, -ONE]);
        assert!(max_abs(&(out - expected)) < 1e-15);
        assert!(dissipator_apply(&CMat::zeros(4, 4), rho.matrix()).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let cop = random_matrix(&mut rng);
            let r = random_state(&mut rng);
            assert!(dissipator_apply(&cop, &r).unwrap().trace().norm() < 1e-12);
        }
    }

    #[test]
    fn dissipator_decomposition_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &xi in &[-1.0, -0.4, 0.0, 0.4, 1.0] {
            for channel in [Channel::Raise, Channel::Lower, Channel::X, Channel::Z] {
                let p = ModelParams { xi, channel, ..ModelParams::reference(xi) };
                let rho = random_state(&mut rng);
                let (cs, ca) = build_collapse_ops(&p).unwrap();
                let lhs = dissipator_apply(&cs, &rho).unwrap() + dissipator_apply(&ca, &rho).unwrap();
                let (d1, d2) = local_dissipators_apply(&p, &rho).unwrap();
                let rhs = d1 + d2 + cross_dissipator_apply(&p, &rho).unwrap() * c(xi, 0.0);
                assert!(max_abs(&(lhs - rhs)) < 1e-12, "xi = {xi}, {channel:?}");
            }
        }
        let p = ModelParams { gamma: 0.0, ..ModelParams::reference(0.3) };
        assert_eq!(max_abs(&cross_dissipator_apply(&p, &random_state(&mut rng)).unwrap()), 0.0);
    }

    #[test]
    fn liouvillian_reproduces_direct_rhs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &xi in &[-1.0, -0.2, 0.0, 0.6, 1.0] {
            let p = ModelParams::reference(xi);
            let l = build_liouvillian(&p).unwrap();
            for _ in 0..5 {
                let rho = random_state(&mut rng);
                let direct = lindblad_rhs(&p, &rho).unwrap();
                assert!(max_abs(&(l.apply(&rho) - &direct)) < 1e-12);
                assert!(l.apply(&rho).trace().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn unitary_liouvillian_is_commutator() {
        let p = ModelParams { gamma: 0.0, ..ModelParams::reference(0.0) };
        let h = build_hamiltonian(&p);
        let id = CMat::identity(4, 4);
        let expected = (kron(&id, &h) - kron(&h.transpose(), &id)) * (-I);
        let l = build_liouvillian(&p).unwrap();
        assert!(max_abs(&(l.matrix() - expected)) < 1e-15);
        let zero = ModelParams::new(0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(max_abs(build_liouvillian(&zero).unwrap().matrix()), 0.0);
    }

    #[test]
    fn liouvillian_spectrum_is_contractive_with_zero_mode() {
        for &xi in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            let l = build_liouvillian(&ModelParams::reference(xi)).unwrap();
            let ev = l.eigenvalues();
            assert!(ev.iter().all(|z| z.re <= 1e-12), "xi = {xi}: {ev:?}");
            let smallest = ev.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
            assert!(smallest < 1e-10, "xi = {xi}: smallest |λ| = {smallest:e}");
        }
    }

    #[test]
    fn evolve_reads_initial_condition() {
        let rho0 = DensityMatrix::basis_state("10").unwrap();
        let r = evolve(&ModelParams::reference(0.0), &rho0, 1.0, 0.01).unwrap();
        assert_eq!(r.times.len(), 101);
        assert!((r.observables.sz1[0] - 1.0).abs() < 1e-15);
        assert!((r.observables.sz2[0] + 1.0).abs() < 1e-15);
        assert_eq!(r.states.len(), 101);
    }

    #[test]
    fn evolve_rejects_bad_grid() {
        let rho0 = DensityMatrix::basis_state("10").unwrap();
        let p = ModelParams::reference(0.0);
        assert!(evolve(&p, &rho0, 1.0, 0.0).is_err());
        assert!(evolve(&p, &rho0, 0.001, 0.01).is_err());
        assert!(evolve(&p, &DensityMatrix::basis_state("1").unwrap(), 1.0, 0.1).is_err());
    }

    #[test]
    fn unitary_evolution_conserves_purity() {
        let rho0 = DensityMatrix::basis_state("10").unwrap();
        let p = ModelParams { gamma: 0.0, ..ModelParams::reference(0.0) };
        let r = evolve(&p, &rho0, 50.0, 0.01).unwrap();
        assert!(r.observables.purity.iter().all(|&x| (x - 1.0).abs() < 1e-10));
    }

    #[test]
    fn rk4_agrees_with_exponential_propagator() {
        let rho0 = DensityMatrix::basis_state("10").unwrap();
        let p = ModelParams::reference(0.5);
        let opts = EvolveOptions { propagator: Propagator::Rk4, ..Default::default() };
        let a = evolve(&p, &rho0, 20.0, 0.01).unwrap();
        let b = evolve_with(&p, &rho0, 20.0, 0.01, opts).unwrap();
        let diff = a.final_state().unwrap().trace_distance(b.final_state().unwrap()).unwrap();
        // global RK4 error is O(dt⁴)
        assert!(diff < 1e-7, "{diff:e}");
    }

    #[test]
    fn propagator_composition() {
        let l = build_liouvillian(&ModelParams::reference(0.3)).unwrap();
        let one = l.propagator(0.01);
        let mut acc = CMat::identity(16, 16);
        for _ in 0..1000 {
            acc = &one * acc;
        }
        assert!(max_abs(&(acc - l.propagator(10.0))) < 1e-9);
    }

    #[test]
    fn pure_pumping_fills_both_qubits() {
        let p = ModelParams::new(1.0, 0.0, 0.0, 0.2, 0.0).unwrap();
        let rho = steady_state(&p).unwrap();
        let target = DensityMatrix::basis_state("11").unwrap();
        assert!(rho.trace_distance(&target).unwrap() < 1e-10);
    }

    #[test]
    fn steady_state_residual_and_invariants() {
        for &xi in &[-0.5, 0.0, 0.5] {
            let p = ModelParams::reference(xi);
            let l = build_liouvillian(&p).unwrap();
            let rho = steady_state_of(&l).unwrap();
            assert!(l.residual(rho.matrix()) < 1e-10);
            assert!((rho.matrix().trace() - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_and_missing_steady_states() {
        // ξ = +1: the singlet is dark and stationary alongside the triplet-sector fixed point.
        match steady_state(&ModelParams::reference(1.0)) {
            Err(Error::DegenerateSteadyState { candidates }) => assert!(candidates.len() >= 2),
            other => panic!("expected degeneracy, got {other:?}"),
        }
        let unitary = ModelParams { gamma: 0.0, ..ModelParams::reference(0.0) };
        assert!(matches!(steady_state(&unitary), Err(Error::DegenerateSteadyState { .. })));

        let rho0 = DensityMatrix::basis_state("10").unwrap();
        let (rho, source) = steady_state_or_propagate(&ModelParams::reference(1.0), &rho0, 500.0).unwrap();
        assert_eq!(source, SteadyStateSource::Propagated);
        // the singlet population of |10⟩ is 1/2 and is conserved
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = nalgebra::dvector![ZERO, c(s, 0.0), c(-s, 0.0), ZERO];
        let pop: Complex<f64> = (singlet.adjoint() * rho.matrix() * &singlet)[(0, 0)];
        assert!((pop.re - 0.5).abs() < 1e-8);
    }

    #[test]
    fn channel_names_parse() {
        for ch in [Channel::Raise, Channel::Lower, Channel::X, Channel::Z] {
            assert_eq!(ch.name().parse::<Channel>().unwrap(), ch);
        }
        assert!("y".parse::<Channel>().is_err());
    }
}
