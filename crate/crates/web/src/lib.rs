//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export has a plain-Rust twin so the numerics are testable natively.

use qsync_core::lindblad::{evolve_with, EvolveOptions};
use qsync_core::qinfo::BenchRow;
use qsync_core::sync::{sync_metrics, DEFAULT_WINDOW};
use qsync_core::{DensityMatrix, EntropyUnit, ModelParams, TimeSeries};
use wasm_bindgen::prelude::*;

const DT: f64 = 0.01;
/// Points handed to the canvas per curve.
const MAX_PLOT_POINTS: usize = 2000;

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    sz1: Vec<f64>,
    sz2: Vec<f64>,
    plv: f64,
    delta_phi: f64,
}

#[wasm_bindgen]
impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    pub fn sz1(&self) -> Vec<f64> {
        self.sz1.clone()
    }

    pub fn sz2(&self) -> Vec<f64> {
        self.sz2.clone()
    }

    pub fn plv(&self) -> f64 {
        self.plv
    }

    #[wasm_bindgen(js_name = deltaPhi)]
    pub fn delta_phi(&self) -> f64 {
        self.delta_phi
    }
}

fn model(xi: f64, gamma: f64, jxy: f64) -> Result<ModelParams, String> {
    let p = ModelParams { xi, gamma, j_xy: jxy, ..ModelParams::reference(0.0) };
    p.validate().map_err(|e| e.to_string())?;
    Ok(p)
}

fn thin(v: &[f64], stride: usize) -> Vec<f64> {
    v.iter().step_by(stride).copied().collect()
}

/// ⟨σz⟩ of both qubits from |10⟩ plus the trailing-window locking metrics.
pub fn trajectory(xi: f64, gamma: f64, jxy: f64, t_final: f64) -> Result<Trajectory, String> {
    let p = model(xi, gamma, jxy)?;
    let rho0 = DensityMatrix::basis_state("10").map_err(|e| e.to_string())?;
    let opts = EvolveOptions { keep_states: false, ..Default::default() };
    let r = evolve_with(&p, &rho0, t_final, DT, opts).map_err(|e| e.to_string())?;
    let s1 = TimeSeries::new(r.times.clone(), r.observables.sz1.clone()).map_err(|e| e.to_string())?;
    let s2 = TimeSeries::new(r.times.clone(), r.observables.sz2.clone()).map_err(|e| e.to_string())?;
    let m = sync_metrics(&s1, &s2, DEFAULT_WINDOW).map_err(|e| e.to_string())?;
    let stride = r.times.len().div_ceil(MAX_PLOT_POINTS).max(1);
    Ok(Trajectory {
        times: thin(&r.times, stride),
        sz1: thin(&r.observables.sz1, stride),
        sz2: thin(&r.observables.sz2, stride),
        plv: m.plv,
        delta_phi: m.delta_phi,
    })
}

/// Rows `[ξ, Δφ, PLV]` flattened, for `n_points` evenly spaced ξ in [−1, 1].
pub fn locking_sweep(gamma: f64, jxy: f64, n_points: usize, t_final: f64) -> Result<Vec<f64>, String> {
    if n_points < 2 {
        return Err("need at least two sweep points".into());
    }
    let mut out = Vec::with_capacity(3 * n_points);
    for k in 0..n_points {
        let xi = -1.0 + 2.0 * k as f64 / (n_points - 1) as f64;
        let t = trajectory(xi, gamma, jxy, t_final)?;
        out.extend([xi, t.delta_phi, t.plv]);
    }
    Ok(out)
}

/// Rows `[purity, discord, degree of quantumness, mutual information]` (bits) for random states.
pub fn discord_samples(seed: u64, rank: usize, count: usize) -> Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(4 * count);
    for k in 0..count as u64 {
        let r = BenchRow::compute(seed.wrapping_add(k), rank, EntropyUnit::Bits).map_err(|e| e.to_string())?;
        out.extend([r.purity, r.discord, r.degree_of_quantumness, r.mutual_info]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn simulate(xi: f64, gamma: f64, jxy: f64, t_final: f64) -> Result<Trajectory, JsError> {
    trajectory(xi, gamma, jxy, t_final).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = lockingSweep)]
pub fn locking_sweep_js(gamma: f64, jxy: f64, n_points: usize, t_final: f64) -> Result<Vec<f64>, JsError> {
    locking_sweep(gamma, jxy, n_points, t_final).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = randomDiscord)]
pub fn random_discord(seed: u32, rank: usize, count: usize) -> Result<Vec<f64>, JsError> {
    discord_samples(u64::from(seed), rank, count).map_err(|e| JsError::new(&e))
}
