use proptest::prelude::*;
use qsync_core::algebra::{hermiticity_deviation, kron, max_abs, pauli, Keep, Pauli};
use qsync_core::lindblad::{
    build_liouvillian, collapse_superop, evolve_with, site_decomposition_superop, EvolveOptions,
};
use qsync_core::noise::{correlation_matrix, correlation_transform, spectral_density, OuParams};
use qsync_core::qinfo::{
    classical_mutual_information, degree_of_quantumness, discord_min, measure_on_b, mutual_information,
    random_density_matrix, von_neumann_entropy, MeasurementBasis,
};
use qsync_core::sync::sync_metrics;
use qsync_core::{Channel, DensityMatrix, EntropyUnit, ModelParams, SubsystemSplit, TimeSeries};

const BITS: EntropyUnit = EntropyUnit::Bits;

fn channel() -> impl Strategy<Value = Channel> {
    prop_oneof![Just(Channel::Raise), Just(Channel::Lower), Just(Channel::X), Just(Channel::Z)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_states_satisfy_invariants(seed in any::<u64>(), rank in 1usize..=4) {
        let rho = random_density_matrix(4, rank, seed).unwrap();
        let m = rho.matrix();
        prop_assert!(hermiticity_deviation(m) <= 1e-10);
        prop_assert!((m.trace().re - 1.0).abs() <= 1e-10 && m.trace().im.abs() <= 1e-10);
        prop_assert!(rho.eigenvalues().unwrap().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn partial_trace_of_product(sa in any::<u64>(), sb in any::<u64>(), ra in 1usize..=2, rb in 1usize..=2) {
        let a = random_density_matrix(2, ra, sa).unwrap();
        let b = random_density_matrix(2, rb, sb).unwrap();
        let ab = a.tensor(&b);
        let split = SubsystemSplit::qubits();
        let back_a = ab.partial_trace(split, Keep::A).unwrap();
        let back_b = ab.partial_trace(split, Keep::B).unwrap();
        prop_assert!(max_abs(&(back_a.matrix() - a.matrix())) < 1e-12);
        prop_assert!(max_abs(&(back_b.matrix() - b.matrix())) < 1e-12);
    }

    #[test]
    fn correlation_transform_diagonalises(xi in -1.0..=1.0f64) {
        let t = correlation_transform(xi).unwrap();
        let d = t.matrix * correlation_matrix(xi) * t.matrix.transpose();
        prop_assert!(d[(0, 1)].abs() < 1e-14 && d[(1, 0)].abs() < 1e-14);
        prop_assert!((d[(0, 0)] - (1.0 + xi)).abs() < 1e-14 && (d[(1, 1)] - (1.0 - xi)).abs() < 1e-14);
    }

    #[test]
    fn spectral_density_is_hermitian_psd(
        xi in -1.0..=1.0f64, omega in -20.0..20.0f64,
        a1 in 0.1..5.0f64, a2 in 0.1..5.0f64, b1 in 0.1..3.0f64, b2 in 0.1..3.0f64,
    ) {
        let s = spectral_density(&OuParams::new([a1, a2], [b1, b2], xi).unwrap(), omega).unwrap();
        prop_assert!((s[(0, 1)] - s[(1, 0)].conj()).norm() < 1e-14);
        prop_assert!(s[(0, 0)].im.abs() < 1e-14 && s[(1, 1)].im.abs() < 1e-14);
        // 2×2 Hermitian PSD ⇔ non-negative diagonal and determinant
        let det = s[(0, 0)].re * s[(1, 1)].re - s[(0, 1)].norm_sqr();
        let scale = s[(0, 0)].re.max(s[(1, 1)].re).powi(2);
        prop_assert!(s[(0, 0)].re >= -1e-12 && s[(1, 1)].re >= -1e-12 && det >= -1e-12 * scale.max(1.0));
    }

    #[test]
    fn liouvillian_is_contractive(
        xi in -1.0..=1.0f64, gamma in 0.0..1.0f64, j in -1.0..1.0f64, delta in -2.0..2.0f64, ch in channel(),
    ) {
        let p = ModelParams { delta, j_xy: j, gamma, xi, ..ModelParams::reference(0.0) }.with_channel(ch);
        let l = build_liouvillian(&p).unwrap();
        prop_assert!(l.eigenvalues().iter().all(|z| z.re <= 1e-12));
        let diff = collapse_superop(&p).unwrap() - site_decomposition_superop(&p);
        prop_assert!(diff.norm() <= 1e-12);
    }

    #[test]
    fn short_trajectories_stay_physical(
        xi in -1.0..=1.0f64, gamma in 0.0..1.0f64, seed in any::<u64>(), ch in channel(),
    ) {
        let p = ModelParams { gamma, xi, ..ModelParams::reference(0.0) }.with_channel(ch);
        let rho0 = random_density_matrix(4, 2, seed).unwrap();
        let opts = EvolveOptions { keep_states: false, ..Default::default() };
        let r = evolve_with(&p, &rho0, 5.0, 0.01, opts).unwrap();
        prop_assert!(r.max_trace_error < 1e-10);
        prop_assert!(r.max_hermiticity_error < 1e-10);
        prop_assert!(r.min_eigenvalue > -1e-8);
    }

    #[test]
    fn sync_metrics_ranges(
        w1 in 0.5..3.0f64, w2 in 0.5..3.0f64, p1 in -3.0..3.0f64, p2 in -3.0..3.0f64, noise in 0.0..0.5f64,
    ) {
        let s1 = TimeSeries::sample(0.0, 0.05, 800, |t| (w1 * t + p1).cos()).unwrap();
        let s2 = TimeSeries::sample(0.0, 0.05, 800, |t| (w2 * t + p2).cos() + noise * (7.3 * t).sin()).unwrap();
        let m = sync_metrics(&s1, &s2, 0.5).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&m.plv));
        prop_assert!(m.delta_phi > -std::f64::consts::PI && m.delta_phi <= std::f64::consts::PI);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn discord_bounds_and_sum_rule(seed in any::<u64>(), rank in 1usize..=4) {
        let rho = random_density_matrix(4, rank, seed).unwrap();
        let split = SubsystemSplit::qubits();
        let d = discord_min(&rho, BITS).unwrap();
        let mi = mutual_information(&rho, split, BITS).unwrap();
        prop_assert!(d.discord >= -1e-8 && d.discord <= mi + 1e-8);
        prop_assert!((d.discord + d.classical_correlation - mi).abs() <= 1e-8);
        prop_assert!(classical_mutual_information(&rho, split, BITS).unwrap() <= mi + 1e-10);
    }

    #[test]
    fn pure_state_mutual_information(seed in any::<u64>()) {
        let rho = random_density_matrix(4, 1, seed).unwrap();
        let split = SubsystemSplit::qubits();
        let s_a = von_neumann_entropy(&rho.partial_trace(split, Keep::A).unwrap(), BITS).unwrap();
        prop_assert!((mutual_information(&rho, split, BITS).unwrap() - 2.0 * s_a).abs() <= 1e-8);
    }

    #[test]
    fn quantumness_invariant_under_local_relabelling(seed in any::<u64>(), rank in 1usize..=4, flip_a: bool, flip_b: bool) {
        // σx on a qubit permutes its basis order and maps diagonal states to diagonal states
        let id = qsync_core::algebra::identity(2);
        let x = pauli(Pauli::X);
        let u = kron(if flip_a { &x } else { &id }, if flip_b { &x } else { &id });
        let rho = random_density_matrix(4, rank, seed).unwrap();
        let relabelled = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
        let split = SubsystemSplit::qubits();
        let before = degree_of_quantumness(&rho, split, BITS).unwrap();
        let after = degree_of_quantumness(&relabelled, split, BITS).unwrap();
        prop_assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn measurement_outcomes_sum_to_one(seed in any::<u64>(), theta in 0.0..std::f64::consts::PI, phi in 0.0..std::f64::consts::TAU) {
        let rho = random_density_matrix(4, 3, seed).unwrap();
        let outcomes = measure_on_b(&rho, &MeasurementBasis::new(theta, phi)).unwrap();
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }
}
