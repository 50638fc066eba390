//! The four batch experiments. Each writes CSV datasets plus SVG plots into
//! the configured output directory and returns the paths it wrote.

use std::fs;
use std::path::{Path, PathBuf};

use qsync_core::algebra::{embed, pauli, Pauli};
use qsync_core::csvfmt;
use qsync_core::lindblad::{self, evolve_with, EvolveOptions, SteadyStateSource};
use qsync_core::qinfo::{self, bench_csv, BenchRow};
use qsync_core::sync::{metrics_csv, sync_metrics, SyncRow};
use qsync_core::{DensityMatrix, EntropyUnit, EvolutionResult, ModelParams, SubsystemSplit, TimeSeries};
use rayon::prelude::*;

use crate::config::{default_gamma_grid, default_jxy_grid, ExperimentConfig};
use crate::plot::{heatmap, Chart, Style, PALETTE};
use crate::CliError;

/// ξ grid used by `info-sweep` when none is configured.
pub fn default_info_xi_grid() -> Vec<f64> {
    (0..=10).map(|k| -1.0 + 0.2 * k as f64).collect()
}

fn tag(prefix: &str, x: f64) -> String {
    format!("{prefix}{x:.4}").replace('-', "m")
}

fn point_name(xi: f64, gamma: f64, jxy: f64) -> String {
    format!("xi={xi}, gamma={gamma}, jxy={jxy}")
}

fn write(dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    written.push(path);
    Ok(())
}

fn prepare_out_dir(cfg: &ExperimentConfig) -> Result<(), CliError> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::Output(format!("{}: {e}", cfg.out_dir.display())))
}

fn non_empty(name: &str, v: &[f64]) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(CliError::Config(crate::config::ConfigError::Invalid(format!("sweep axis `{name}` is empty"))));
    }
    Ok(())
}

fn sort_dedup(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn model_at(cfg: &ExperimentConfig, xi: f64, gamma: f64, jxy: f64) -> Result<ModelParams, CliError> {
    let p = ModelParams { xi, gamma, j_xy: jxy, ..cfg.model };
    p.validate().map_err(|e| CliError::Config(crate::config::ConfigError::Invalid(e.to_string())))?;
    Ok(p)
}

/// Every (ξ, γ, J) combination, ξ slowest.
fn grid(cfg: &ExperimentConfig, xis: &[f64], gammas: &[f64], jxys: &[f64]) -> Result<Vec<ModelParams>, CliError> {
    let mut points = Vec::with_capacity(xis.len() * gammas.len() * jxys.len());
    for &xi in xis {
        for &g in gammas {
            for &j in jxys {
                points.push(model_at(cfg, xi, g, j)?);
            }
        }
    }
    Ok(points)
}

fn run_trajectory(cfg: &ExperimentConfig, p: &ModelParams, keep_states: bool) -> qsync_core::Result<EvolutionResult> {
    let rho0 = cfg.initial_state()?;
    let opts = EvolveOptions { propagator: cfg.propagator, keep_states, ..Default::default() };
    evolve_with(p, &rho0, cfg.t_final, cfg.dt, opts)
}

fn trajectory_metrics(cfg: &ExperimentConfig, r: &EvolutionResult) -> qsync_core::Result<qsync_core::SyncMetrics> {
    let s1 = TimeSeries::new(r.times.clone(), r.observables.sz1.clone())?;
    let s2 = TimeSeries::new(r.times.clone(), r.observables.sz2.clone())?;
    sync_metrics(&s1, &s2, cfg.window_fraction)
}

fn bloch_csv(r: &EvolutionResult) -> String {
    let ops: Vec<_> =
        [0, 1].iter().flat_map(|&site| [Pauli::X, Pauli::Y, Pauli::Z].map(|w| embed(&pauli(w), site, 2))).collect();
    let mut out = String::from("t,x1,y1,z1,x2,y2,z2\n");
    for (t, rho) in r.times.iter().zip(&r.states) {
        let mut cells = vec![csvfmt::real(*t)];
        cells.extend(ops.iter().map(|op| csvfmt::real(rho.expectation(op).re)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Trajectory CSV, Bloch-vector CSV and ⟨σz⟩ plot for every ξ, plus a metrics summary.
pub fn cmd_evolve(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let xis = sort_dedup(cfg.xi_axis());
    non_empty("xi", &xis)?;
    prepare_out_dir(cfg)?;
    let params: Vec<ModelParams> =
        xis.iter().map(|&xi| model_at(cfg, xi, cfg.model.gamma, cfg.model.j_xy)).collect::<Result<_, _>>()?;

    let results: Vec<(EvolutionResult, qsync_core::SyncMetrics)> = params
        .par_iter()
        .map(|p| {
            let fail = |e| CliError::Numerical { point: point_name(p.xi, p.gamma, p.j_xy), source: e };
            let r = run_trajectory(cfg, p, true).map_err(fail)?;
            let m = trajectory_metrics(cfg, &r).map_err(fail)?;
            Ok((r, m))
        })
        .collect::<Result<_, CliError>>()?;

    let mut written = Vec::new();
    let mut rows = Vec::new();
    for (p, (r, m)) in params.iter().zip(&results) {
        let t = tag("xi", p.xi);
        write(&cfg.out_dir, &format!("evolve_{t}.csv"), &r.to_csv(), &mut written)?;
        write(&cfg.out_dir, &format!("bloch_{t}.csv"), &bloch_csv(r), &mut written)?;
        let svg = Chart::new(&format!("⟨σz⟩ trajectories, ξ = {}", p.xi), "t", "⟨σz⟩")
            .series("qubit 1", &r.times, &r.observables.sz1, PALETTE[0], Style::Solid)
            .series("qubit 2", &r.times, &r.observables.sz2, PALETTE[1], Style::Solid)
            .render();
        write(&cfg.out_dir, &format!("evolve_{t}.svg"), &svg, &mut written)?;
        // steady state is optional output: degenerate cases have none to report
        if let Ok(ss) = lindblad::steady_state(p) {
            write(&cfg.out_dir, &format!("steady_{t}.csv"), &csvfmt::matrix_to_csv(ss.matrix()), &mut written)?;
        }
        rows.push(SyncRow { xi: p.xi, gamma: p.gamma, j_xy: p.j_xy, metrics: *m });
    }
    write(&cfg.out_dir, "evolve_metrics.csv", &metrics_csv(&rows), &mut written)?;
    Ok(written)
}

/// Phase difference and PLV over the ξ × γ × J_xy grid.
pub fn sync_sweep_rows(cfg: &ExperimentConfig) -> Result<Vec<SyncRow>, CliError> {
    let xis = sort_dedup(cfg.xi_axis());
    let gammas = sort_dedup(cfg.gamma.clone().unwrap_or_else(|| vec![cfg.model.gamma]));
    let jxys = sort_dedup(cfg.jxy.clone().unwrap_or_else(|| vec![cfg.model.j_xy]));
    for (name, axis) in [("xi", &xis), ("gamma", &gammas), ("jxy", &jxys)] {
        non_empty(name, axis)?;
    }
    let points = grid(cfg, &xis, &gammas, &jxys)?;

    let mut rows: Vec<SyncRow> = points
        .par_iter()
        .map(|p| {
            let fail = |e| CliError::Numerical { point: point_name(p.xi, p.gamma, p.j_xy), source: e };
            let r = run_trajectory(cfg, p, false).map_err(fail)?;
            let metrics = trajectory_metrics(cfg, &r).map_err(fail)?;
            Ok(SyncRow { xi: p.xi, gamma: p.gamma, j_xy: p.j_xy, metrics })
        })
        .collect::<Result<_, CliError>>()?;
    rows.sort_by(|a, b| (a.xi, a.gamma, a.j_xy).partial_cmp(&(b.xi, b.gamma, b.j_xy)).expect("finite axes"));
    Ok(rows)
}

pub fn cmd_sync_sweep(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let rows = sync_sweep_rows(cfg)?;
    prepare_out_dir(cfg)?;
    let mut written = Vec::new();
    write(&cfg.out_dir, "sync_sweep.csv", &metrics_csv(&rows), &mut written)?;

    let mut curves: Vec<(f64, f64)> = rows.iter().map(|r| (r.gamma, r.j_xy)).collect();
    curves.sort_by(|a, b| a.partial_cmp(b).expect("finite axes"));
    curves.dedup();
    let mut phase = Chart::new("Asymptotic phase difference", "ξ", "Δφ (rad)");
    let mut plv = Chart::new("Phase-locking value", "ξ", "PLV");
    for (k, &(g, j)) in curves.iter().enumerate() {
        let sel: Vec<&SyncRow> = rows.iter().filter(|r| r.gamma == g && r.j_xy == j).collect();
        let xs: Vec<f64> = sel.iter().map(|r| r.xi).collect();
        let label = format!("γ={g}, J={j}");
        let color = PALETTE[k % PALETTE.len()];
        let style = if xs.len() == 1 { Style::Markers } else { Style::Solid };
        phase = phase.series(&label, &xs, &sel.iter().map(|r| r.metrics.delta_phi).collect::<Vec<_>>(), color, style);
        plv = plv.series(&label, &xs, &sel.iter().map(|r| r.metrics.plv).collect::<Vec<_>>(), color, style);
    }
    write(&cfg.out_dir, "sync_delta_phi.svg", &phase.render(), &mut written)?;
    write(&cfg.out_dir, "sync_plv.svg", &plv.render(), &mut written)?;
    Ok(written)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoRow {
    pub xi: f64,
    pub gamma: f64,
    pub j_xy: f64,
    pub mutual_info: f64,
    pub classical_mutual_info: f64,
    pub degree_of_quantumness: f64,
    pub source: SteadyStateSource,
}

pub fn info_csv(rows: &[InfoRow]) -> String {
    let mut out = String::from("xi,gamma,jxy,mutual_info,classical_mutual_info,degree_of_quantumness,steady_state\n");
    for r in rows {
        let cells =
            [r.xi, r.gamma, r.j_xy, r.mutual_info, r.classical_mutual_info, r.degree_of_quantumness].map(csvfmt::real);
        let flag = match r.source {
            SteadyStateSource::NullSpace => "nullspace",
            SteadyStateSource::Propagated => "propagated",
        };
        out.push_str(&format!("{},{flag}\n", cells.join(",")));
    }
    out
}

/// Steady-state correlation measures at one grid point.
pub fn info_point(
    p: &ModelParams,
    rho0: &DensityMatrix,
    t_long: f64,
    unit: EntropyUnit,
) -> qsync_core::Result<InfoRow> {
    let (rho, source) = lindblad::steady_state_or_propagate(p, rho0, t_long)?;
    let split = SubsystemSplit::qubits();
    let mutual_info = qinfo::mutual_information(&rho, split, unit)?;
    let classical_mutual_info = qinfo::classical_mutual_information(&rho, split, unit)?;
    Ok(InfoRow {
        xi: p.xi,
        gamma: p.gamma,
        j_xy: p.j_xy,
        mutual_info,
        classical_mutual_info,
        degree_of_quantumness: mutual_info - classical_mutual_info,
        source,
    })
}

pub fn info_sweep_rows(cfg: &ExperimentConfig) -> Result<Vec<InfoRow>, CliError> {
    let xis = sort_dedup(cfg.xi.clone().unwrap_or_else(default_info_xi_grid));
    let gammas = sort_dedup(cfg.gamma.clone().unwrap_or_else(default_gamma_grid));
    let jxys = sort_dedup(cfg.jxy.clone().unwrap_or_else(default_jxy_grid));
    for (name, axis) in [("xi", &xis), ("gamma", &gammas), ("jxy", &jxys)] {
        non_empty(name, axis)?;
    }
    let rho0 = cfg.initial_state().map_err(|e| CliError::Config(crate::config::ConfigError::Invalid(e.to_string())))?;
    let points = grid(cfg, &xis, &gammas, &jxys)?;
    let mut rows: Vec<InfoRow> = points
        .par_iter()
        .map(|p| {
            info_point(p, &rho0, cfg.t_long, cfg.unit)
                .map_err(|e| CliError::Numerical { point: point_name(p.xi, p.gamma, p.j_xy), source: e })
        })
        .collect::<Result<_, CliError>>()?;
    rows.sort_by(|a, b| (a.xi, a.gamma, a.j_xy).partial_cmp(&(b.xi, b.gamma, b.j_xy)).expect("finite axes"));
    Ok(rows)
}

/// ξ values drawn in the γ line plots: −1, 0, +1 when present, else the grid ends.
fn highlighted_xis(xis: &[f64]) -> Vec<f64> {
    let picked: Vec<f64> = [-1.0, 0.0, 1.0].into_iter().filter(|x| xis.contains(x)).collect();
    if !picked.is_empty() {
        return picked;
    }
    sort_dedup(vec![xis[0], xis[xis.len() - 1]])
}

pub fn cmd_info_sweep(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let rows = info_sweep_rows(cfg)?;
    prepare_out_dir(cfg)?;
    let mut written = Vec::new();
    write(&cfg.out_dir, "info_sweep.csv", &info_csv(&rows), &mut written)?;
    for r in rows.iter().filter(|r| r.source == SteadyStateSource::Propagated) {
        eprintln!(
            "warning: degenerate or missing steady state at {}; used long-time propagation",
            point_name(r.xi, r.gamma, r.j_xy)
        );
    }

    let axis = |f: fn(&InfoRow) -> f64| sort_dedup(rows.iter().map(f).collect());
    let xis = axis(|r| r.xi);
    let gammas = axis(|r| r.gamma);
    let jxys = axis(|r| r.j_xy);
    let unit = cfg.unit.name();
    let find =
        |xi: f64, g: f64, j: f64| rows.iter().find(|r| r.xi == xi && r.gamma == g && r.j_xy == j).expect("full grid");

    for &j in &jxys {
        let t = tag("jxy", j);
        let grid: Vec<Vec<f64>> =
            gammas.iter().map(|&g| xis.iter().map(|&xi| find(xi, g, j).mutual_info).collect()).collect();
        let svg = heatmap(&format!("Steady-state I(A:B) [{unit}], J = {j}"), "ξ", "γ", &xis, &gammas, &grid);
        write(&cfg.out_dir, &format!("info_heatmap_{t}.svg"), &svg, &mut written)?;

        let mut chart = Chart::new(&format!("I(A:B) (solid) and D(A:B) (dashed), J = {j}"), "γ", unit);
        if gammas.iter().all(|&g| g > 0.0) && gammas.len() > 1 {
            chart = chart.log_x();
        }
        for (k, &xi) in highlighted_xis(&xis).iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let total: Vec<f64> = gammas.iter().map(|&g| find(xi, g, j).mutual_info).collect();
            let quantum: Vec<f64> = gammas.iter().map(|&g| find(xi, g, j).degree_of_quantumness).collect();
            chart = chart
                .band(&gammas, &quantum, &total, color)
                .series(&format!("I, ξ={xi}"), &gammas, &total, color, Style::Solid)
                .series(&format!("D, ξ={xi}"), &gammas, &quantum, color, Style::Dashed);
        }
        write(&cfg.out_dir, &format!("info_lines_{t}.svg"), &chart.render(), &mut written)?;
    }
    Ok(written)
}

/// Benchmark rows sorted by (rank, seed); state k of each rank uses seed `seed + k`.
pub fn discord_bench_rows(
    n_states: usize,
    ranks: &[usize],
    seed: u64,
    unit: EntropyUnit,
) -> Result<Vec<BenchRow>, CliError> {
    if n_states == 0 {
        return Err(CliError::Config(crate::config::ConfigError::Invalid("n_states must be >= 1".into())));
    }
    let mut ranks = ranks.to_vec();
    ranks.sort_unstable();
    ranks.dedup();
    if ranks.is_empty() || ranks.iter().any(|r| !(1..=4).contains(r)) {
        return Err(CliError::Config(crate::config::ConfigError::Invalid(format!(
            "ranks {ranks:?} must lie in 1..=4"
        ))));
    }
    let jobs: Vec<(usize, u64)> =
        ranks.iter().flat_map(|&r| (0..n_states as u64).map(move |k| (r, seed.wrapping_add(k)))).collect();
    let rows: Vec<BenchRow> = jobs
        .par_iter()
        .map(|&(rank, s)| {
            BenchRow::compute(s, rank, unit)
                .map_err(|e| CliError::Numerical { point: format!("seed={s}, rank={rank}"), source: e })
        })
        .collect::<Result<_, _>>()?;
    Ok(rows)
}

pub fn cmd_discord_bench(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    let rows = discord_bench_rows(cfg.n_states, &cfg.ranks, cfg.seed, cfg.unit)?;
    prepare_out_dir(cfg)?;
    let mut written = Vec::new();
    write(&cfg.out_dir, "discord_bench.csv", &bench_csv(&rows), &mut written)?;
    let unit = cfg.unit.name();

    let ranks = {
        let mut r: Vec<usize> = rows.iter().map(|r| r.rank).collect();
        r.dedup();
        r
    };
    let pick =
        |rank: usize, f: fn(&BenchRow) -> f64| -> Vec<f64> { rows.iter().filter(|r| r.rank == rank).map(f).collect() };
    let focus = if ranks.contains(&2) { 2 } else { ranks[0] };

    let svg = Chart::new(&format!("Discord of random rank-{focus} states"), "purity", &format!("discord [{unit}]"))
        .series(
            &format!("rank {focus}"),
            &pick(focus, |r| r.purity),
            &pick(focus, |r| r.discord),
            PALETTE[0],
            Style::Markers,
        )
        .render();
    write(&cfg.out_dir, "bench_discord_vs_purity.svg", &svg, &mut written)?;

    let mut all = Chart::new("Discord across ranks", "purity", &format!("discord [{unit}]"));
    for (k, &rank) in ranks.iter().enumerate() {
        all = all.series(
            &format!("rank {rank}"),
            &pick(rank, |r| r.purity),
            &pick(rank, |r| r.discord),
            PALETTE[k % PALETTE.len()],
            Style::Markers,
        );
    }
    write(&cfg.out_dir, "bench_discord_all_ranks.svg", &all.render(), &mut written)?;

    let d: Vec<f64> = rows.iter().map(|r| r.discord).collect();
    let q: Vec<f64> = rows.iter().map(|r| r.degree_of_quantumness).collect();
    let hi = d.iter().chain(&q).copied().fold(0.0, f64::max);
    let svg = Chart::new("Degree of quantumness vs discord", &format!("discord [{unit}]"), &format!("D(A:B) [{unit}]"))
        .series("y = x", &[0.0, hi], &[0.0, hi], "#888888", Style::Dashed)
        .series("states", &d, &q, PALETTE[1], Style::Markers)
        .render();
    write(&cfg.out_dir, "bench_quantumness_vs_discord.svg", &svg, &mut written)?;
    Ok(written)
}
