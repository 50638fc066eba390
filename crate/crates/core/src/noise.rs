//! Correlated Ornstein–Uhlenbeck driving noise.
//!
//! Two processes obey dE = −A·E dt + B·dW with diagonal A and B and Wiener
//! increments correlated through Ξ = [[1, ξ], [ξ, 1]]. The rotation that
//! diagonalises Ξ turns them into two independent channels with weights
//! 1 ± ξ, which are the rates carried by the symmetric and antisymmetric
//! collapse operators of the master equation.
//!
//! Random numbers come from ChaCha8 seeded with `seed_from_u64`, with
//! standard normals drawn by `rand_distr::StandardNormal` (ziggurat).

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{Complex, Matrix2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::csvfmt;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuParams {
    /// Diagonal of A (relaxation rates).
    pub relaxation: [f64; 2],
    /// Diagonal of B (noise amplitudes).
    pub amplitude: [f64; 2],
    pub xi: f64,
}

impl OuParams {
    pub fn new(relaxation: [f64; 2], amplitude: [f64; 2], xi: f64) -> Result<Self> {
        let p = OuParams { relaxation, amplitude, xi };
        p.validate()?;
        Ok(p)
    }

    /// Identical channels: A = a·I, B = b·I.
    pub fn symmetric(a: f64, b: f64, xi: f64) -> Result<Self> {
        Self::new([a, a], [b, b], xi)
    }

    pub fn validate(&self) -> Result<()> {
        if self.relaxation.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::Parameter(format!("relaxation rates must be > 0, got {:?}", self.relaxation)));
        }
        if self.amplitude.iter().any(|&b| !(b >= 0.0 && b.is_finite())) {
            return Err(Error::Parameter(format!("noise amplitudes must be >= 0, got {:?}", self.amplitude)));
        }
        check_xi(self.xi)
    }

    fn a(&self) -> Matrix2<f64> {
        Matrix2::from_diagonal(&self.relaxation.into())
    }

    fn b(&self) -> Matrix2<f64> {
        Matrix2::from_diagonal(&self.amplitude.into())
    }
}

pub(crate) fn check_xi(xi: f64) -> Result<()> {
    if xi.is_nan() || xi.abs() > 1.0 {
        return Err(Error::Parameter(format!("bath correlation xi = {xi} outside [-1, 1]")));
    }
    Ok(())
}

pub fn correlation_matrix(xi: f64) -> Matrix2<f64> {
    Matrix2::new(1.0, xi, xi, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OuScheme {
    #[default]
    EulerMaruyama,
    /// Exponential decay plus the exact Gaussian increment over one step.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTrajectory {
    pub dt: f64,
    pub times: Vec<f64>,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
}

impl NoiseTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Applies a 2×2 mixing matrix sample by sample: Ẽ = T·E.
    pub fn transformed(&self, t: &Matrix2<f64>) -> (Vec<f64>, Vec<f64>) {
        self.e1
            .iter()
            .zip(&self.e2)
            .map(|(&x, &y)| (t[(0, 0)] * x + t[(0, 1)] * y, t[(1, 0)] * x + t[(1, 1)] * y))
            .unzip()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,E1,E2\n");
        for k in 0..self.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                csvfmt::real(self.times[k]),
                csvfmt::real(self.e1[k]),
                csvfmt::real(self.e2[k])
            ));
        }
        out
    }
}

/// Lower-triangular L with L·Lᵀ = m for a 2×2 positive semidefinite m.
fn psd_cholesky(m: &Matrix2<f64>) -> Matrix2<f64> {
    let l11 = m[(0, 0)].max(0.0).sqrt();
    let l21 = if l11 > 0.0 { m[(1, 0)] / l11 } else { 0.0 };
    let l22 = (m[(1, 1)] - l21 * l21).max(0.0).sqrt();
    Matrix2::new(l11, 0.0, l21, l22)
}

pub fn sample_ou(params: &OuParams, dt: f64, n_steps: usize, seed: u64) -> Result<NoiseTrajectory> {
    sample_ou_with(params, dt, n_steps, seed, OuScheme::EulerMaruyama)
}

/// Samples `n_steps` steps starting from E(0) = 0; the trajectory holds `n_steps + 1` points.
pub fn sample_ou_with(
    params: &OuParams,
    dt: f64,
    n_steps: usize,
    seed: u64,
    scheme: OuScheme,
) -> Result<NoiseTrajectory> {
    params.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Parameter(format!("dt must be > 0, got {dt}")));
    }
    if n_steps == 0 {
        return Err(Error::Parameter("n_steps must be >= 1".into()));
    }
    let [a1, a2] = params.relaxation;
    let (decay, mix) = match scheme {
        OuScheme::EulerMaruyama => {
            let chol = psd_cholesky(&correlation_matrix(params.xi));
            ([1.0 - a1 * dt, 1.0 - a2 * dt], params.b() * chol * dt.sqrt())
        }
        OuScheme::Exact => {
            let mut cov = Matrix2::zeros();
            for i in 0..2 {
                for j in 0..2 {
                    let rate = params.relaxation[i] + params.relaxation[j];
                    let xij = if i == j { 1.0 } else { params.xi };
                    cov[(i, j)] = params.amplitude[i] * params.amplitude[j] * xij * (-(-rate * dt).exp_m1()) / rate;
                }
            }
            ([(-a1 * dt).exp(), (-a2 * dt).exp()], psd_cholesky(&cov))
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut e1 = Vec::with_capacity(n_steps + 1);
    let mut e2 = Vec::with_capacity(n_steps + 1);
    let (mut x, mut y) = (0.0, 0.0);
    times.push(0.0);
    e1.push(x);
    e2.push(y);
    for k in 1..=n_steps {
        let z1: f64 = StandardNormal.sample(&mut rng);
        let z2: f64 = StandardNormal.sample(&mut rng);
        let w1 = mix[(0, 0)] * z1 + mix[(0, 1)] * z2;
        let w2 = mix[(1, 0)] * z1 + mix[(1, 1)] * z2;
        x = decay[0] * x + w1;
        y = decay[1] * y + w2;
        times.push(k as f64 * dt);
        e1.push(x);
        e2.push(y);
    }
    Ok(NoiseTrajectory { dt, times, e1, e2 })
}

/// Equal-time stationary covariance Σ, the solution of AΣ + ΣA = BΞBᵀ for diagonal A.
pub fn stationary_covariance(params: &OuParams) -> Result<Matrix2<f64>> {
    params.validate()?;
    let q = params.b() * correlation_matrix(params.xi) * params.b().transpose();
    Ok(Matrix2::from_fn(|i, j| q[(i, j)] / (params.relaxation[i] + params.relaxation[j])))
}

/// J(ω) = (1/2π)(A + iω)⁻¹ B Ξ Bᵀ (A − iω)⁻¹.
pub fn spectral_density(params: &OuParams, omega: f64) -> Result<Matrix2<Complex<f64>>> {
    params.validate()?;
    let q = (params.b() * correlation_matrix(params.xi) * params.b().transpose()).map(|x| Complex::new(x, 0.0));
    let a = params.a();
    let left = Matrix2::from_diagonal(&nalgebra::Vector2::new(
        Complex::new(a[(0, 0)], omega).inv(),
        Complex::new(a[(1, 1)], omega).inv(),
    ));
    let right = Matrix2::from_diagonal(&nalgebra::Vector2::new(
        Complex::new(a[(0, 0)], -omega).inv(),
        Complex::new(a[(1, 1)], -omega).inv(),
    ));
    Ok((left * q * right).unscale(2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTransform {
    /// Orthogonal T with T·Ξ·Tᵀ = diag(eigenvalues).
    pub matrix: Matrix2<f64>,
    /// (1 + ξ, 1 − ξ): weights of the symmetric and antisymmetric channels.
    pub eigenvalues: [f64; 2],
}

pub fn correlation_transform(xi: f64) -> Result<CorrelationTransform> {
    check_xi(xi)?;
    let s = FRAC_1_SQRT_2;
    Ok(CorrelationTransform { matrix: Matrix2::new(s, s, s, -s), eigenvalues: [1.0 + xi, 1.0 - xi] })
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample covariance (1/N normalisation).
pub fn covariance(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let (mx, my) = (mean(x), mean(y));
    x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / x.len() as f64
}

/// Normalised autocorrelation at integer `lag`.
pub fn autocorrelation(x: &[f64], lag: usize) -> f64 {
    let n = x.len();
    assert!(lag < n);
    covariance(&x[..n - lag], &x[lag..]) / covariance(x, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(OuParams::symmetric(1.0, 1.0, 1.2).is_err());
        assert!(OuParams::symmetric(0.0, 1.0, 0.0).is_err());
        assert!(OuParams::symmetric(1.0, -1.0, 0.0).is_err());
        let p = OuParams { relaxation: [1.0, 1.0], amplitude: [1.0, 1.0], xi: -1.5 };
        assert!(matches!(sample_ou(&p, 0.01, 10, 0), Err(Error::Parameter(_))));
        let ok = OuParams::symmetric(1.0, 1.0, 0.0).unwrap();
        assert!(sample_ou(&ok, 0.0, 10, 0).is_err());
        assert!(sample_ou(&ok, 0.01, 0, 0).is_err());
    }

    #[test]
    fn fully_correlated_channels_coincide() {
        let p = OuParams::symmetric(1.0, 1.0, 1.0).unwrap();
        for scheme in [OuScheme::EulerMaruyama, OuScheme::Exact] {
            let tr = sample_ou_with(&p, 0.01, 5_000, 42, scheme).unwrap();
            assert_eq!(tr.e1, tr.e2);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let p = OuParams::symmetric(1.0, 1.0, 0.3).unwrap();
        let a = sample_ou(&p, 0.01, 100, 9).unwrap();
        let b = sample_ou(&p, 0.01, 100, 9).unwrap();
        let c = sample_ou(&p, 0.01, 100, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.e1[0], 0.0);
        assert_eq!(a.len(), 101);
    }

    #[test]
    fn csv_header_and_rows() {
        let p = OuParams::symmetric(1.0, 1.0, 0.0).unwrap();
        let tr = sample_ou(&p, 0.5, 3, 1).unwrap();
        let csv = tr.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "t,E1,E2");
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("5.0000000000000000e-1,"));
    }

    #[test]
    fn stationary_covariance_examples() {
        let p = OuParams::symmetric(1.0, 1.0, 0.0).unwrap();
        assert_eq!(stationary_covariance(&p).unwrap(), Matrix2::new(0.5, 0.0, 0.0, 0.5));
        let p = OuParams::symmetric(1.0, 0.0, 0.7).unwrap();
        assert_eq!(stationary_covariance(&p).unwrap(), Matrix2::zeros());
        let p = OuParams::symmetric(1.0, 1.0, 0.5).unwrap();
        assert!((stationary_covariance(&p).unwrap()[(0, 1)] - 0.25).abs() < 1e-15);
        // unequal channels: Σ12 = b1 b2 ξ / (a1 + a2)
        let p = OuParams::new([1.0, 3.0], [2.0, 1.0], 0.5).unwrap();
        assert!((stationary_covariance(&p).unwrap()[(0, 1)] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn spectral_density_limits() {
        let p = OuParams::symmetric(2.0, 1.5, 0.4).unwrap();
        let j0 = spectral_density(&p, 0.0).unwrap();
        let expected = correlation_matrix(0.4) * (1.5 * 1.5 / (2.0 * PI * 4.0));
        for (z, e) in j0.iter().zip(expected.iter()) {
            assert!((z.re - e).abs() < 1e-12 && z.im.abs() < 1e-15);
        }
        let p0 = OuParams::symmetric(1.0, 1.0, 0.0).unwrap();
        for w in [0.0, 0.3, 5.0] {
            let j = spectral_density(&p0, w).unwrap();
            assert_eq!(j[(0, 1)].norm(), 0.0);
        }
        // 1/ω² tail
        let j_big = spectral_density(&p, 1e4).unwrap()[(0, 0)].re;
        let tail = 1.5 * 1.5 / (2.0 * PI * 1e8);
        assert!((j_big / tail - 1.0).abs() < 1e-6);
    }

    #[test]
    fn spectral_density_is_hermitian_psd() {
        for xi in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            let p = OuParams::new([0.7, 1.3], [1.0, 0.4], xi).unwrap();
            for k in 0..50 {
                let w = -10.0 + 0.4 * k as f64;
                let j = spectral_density(&p, w).unwrap();
                assert!((j[(0, 1)] - j[(1, 0)].conj()).norm() < 1e-15);
                let tr = (j[(0, 0)] + j[(1, 1)]).re;
                let det = (j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)]).re;
                let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
                assert!(tr / 2.0 - disc >= -1e-12);
            }
        }
    }

    #[test]
    fn transform_diagonalises_correlation() {
        for xi in [-1.0, -0.5, 0.0, 0.5, 1.0, -0.3] {
            let t = correlation_transform(xi).unwrap();
            let d = t.matrix * correlation_matrix(xi) * t.matrix.transpose();
            assert!(d[(0, 1)].abs() < 1e-14 && d[(1, 0)].abs() < 1e-14);
            assert!((d[(0, 0)] - t.eigenvalues[0]).abs() < 1e-14);
            assert!((d[(1, 1)] - t.eigenvalues[1]).abs() < 1e-14);
            assert!((t.matrix * t.matrix.transpose() - Matrix2::identity()).abs().max() < 1e-15);
        }
        assert_eq!(correlation_transform(0.0).unwrap().eigenvalues, [1.0, 1.0]);
        assert_eq!(correlation_transform(1.0).unwrap().eigenvalues, [2.0, 0.0]);
        let t = correlation_transform(-0.3).unwrap();
        assert!((t.eigenvalues[0] - 0.7).abs() < 1e-15 && (t.eigenvalues[1] - 1.3).abs() < 1e-15);
        assert!(correlation_transform(1.01).is_err());
    }
}
