//! Phase extraction and phase-locking order parameters.

use std::f64::consts::{PI, TAU};

use nalgebra::Complex;
use rustfft::FftPlanner;

use crate::csvfmt;
use crate::error::{Error, Result};

pub const MIN_SAMPLES: usize = 16;
/// Fraction trimmed from each end of an analysis window.
pub const EDGE_TRIM: f64 = 0.05;
pub const DEFAULT_WINDOW: f64 = 0.25;

/// Real samples on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Input(format!("{} times but {} values", times.len(), values.len())));
        }
        if times.len() < MIN_SAMPLES {
            return Err(Error::Input(format!("need at least {MIN_SAMPLES} samples, got {}", times.len())));
        }
        let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
        if dt.is_nan() || dt <= 0.0 {
            return Err(Error::Input("time grid is not increasing".into()));
        }
        if let Some(k) = times.windows(2).position(|w| ((w[1] - w[0]) - dt).abs() >= 1e-9 * dt) {
            return Err(Error::Input(format!("time grid is not uniform at sample {k}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("series contains non-finite values".into()));
        }
        Ok(TimeSeries { times, values })
    }

    /// Samples `f` on t = t0 + k·dt for k in 0..n.
    pub fn sample(t0: f64, dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let times: Vec<f64> = (0..n).map(|k| t0 + k as f64 * dt).collect();
        let values = times.iter().map(|&t| f(t)).collect();
        Self::new(times, values)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dt(&self) -> f64 {
        (self.times[self.len() - 1] - self.times[0]) / (self.len() - 1) as f64
    }

    /// Trailing `fraction` of the series.
    pub fn tail(&self, fraction: f64) -> Result<TimeSeries> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::Input(format!("window fraction {fraction} outside (0, 1]")));
        }
        let n = ((self.len() as f64) * fraction).round() as usize;
        let start = self.len() - n.min(self.len());
        TimeSeries::new(self.times[start..].to_vec(), self.values[start..].to_vec())
    }
}

/// Amplitude and unwrapped phase of the analytic signal.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignal {
    pub times: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub phase: Vec<f64>,
}

/// Analytic signal of the mean-subtracted series via the discrete Hilbert transform.
pub fn analytic_signal(s: &TimeSeries) -> Result<AnalyticSignal> {
    let n = s.len();
    let mean = s.values.iter().sum::<f64>() / n as f64;
    let spread = s.values.iter().fold(0.0_f64, |acc, v| acc.max((v - mean).abs()));
    if spread <= 1e-12 * mean.abs().max(1.0) {
        return Err(Error::Input("series has no oscillation (constant after baseline removal)".into()));
    }

    let mut buf: Vec<Complex<f64>> = s.values.iter().map(|&v| Complex::new(v - mean, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    // keep DC (and Nyquist for even n), double positive frequencies, zero negative ones
    let positive_end = n.div_ceil(2);
    for (k, z) in buf.iter_mut().enumerate() {
        if k == 0 || (n.is_multiple_of(2) && k == n / 2) {
            continue;
        }
        *z *= if k < positive_end { 2.0 } else { 0.0 };
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;

    let amplitude = buf.iter().map(|z| z.norm() * scale).collect();
    let wrapped: Vec<f64> = buf.iter().map(|z| z.arg()).collect();
    Ok(AnalyticSignal { times: s.times.clone(), amplitude, phase: unwrap_phase(&wrapped) })
}

pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    for (k, &p) in wrapped.iter().enumerate() {
        if k > 0 {
            let jump = p - wrapped[k - 1];
            if jump > PI {
                offset -= TAU;
            } else if jump < -PI {
                offset += TAU;
            }
        }
        out.push(p + offset);
    }
    out
}

/// Asymptotic phase relation between two observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncMetrics {
    /// Circular-mean phase difference φ₁ − φ₂ in (−π, π].
    pub delta_phi: f64,
    /// Phase-locking value in [0, 1].
    pub plv: f64,
}

pub fn sync_metrics(s1: &TimeSeries, s2: &TimeSeries, window_fraction: f64) -> Result<SyncMetrics> {
    if s1.len() != s2.len() {
        return Err(Error::Input(format!("series lengths differ: {} vs {}", s1.len(), s2.len())));
    }
    let tol = 1e-9 * s1.dt();
    if s1.times.iter().zip(&s2.times).any(|(a, b)| (a - b).abs() > tol) {
        return Err(Error::Input("series are sampled on different time grids".into()));
    }
    let w1 = analytic_signal(&s1.tail(window_fraction)?)?;
    let w2 = analytic_signal(&s2.tail(window_fraction)?)?;
    let n = w1.phase.len();
    let trim = (EDGE_TRIM * n as f64).floor() as usize;
    let range = trim..n - trim;
    let count = range.len() as f64;
    let sum: Complex<f64> = range.map(|k| Complex::from_polar(1.0, w1.phase[k] - w2.phase[k])).sum();
    let mean = sum / count;
    let mut delta_phi = mean.arg();
    if delta_phi <= -PI {
        delta_phi += TAU;
    }
    Ok(SyncMetrics { delta_phi, plv: mean.norm().min(1.0) })
}

/// One row of a synchronization sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncRow {
    pub xi: f64,
    pub gamma: f64,
    pub j_xy: f64,
    pub metrics: SyncMetrics,
}

pub fn metrics_csv(rows: &[SyncRow]) -> String {
    let mut out = String::from("xi,gamma,jxy,delta_phi,plv\n");
    for r in rows {
        let cells = [r.xi, r.gamma, r.j_xy, r.metrics.delta_phi, r.metrics.plv].map(csvfmt::real);
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
