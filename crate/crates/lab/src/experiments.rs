//! The experiments. Each one returns its results, the checks against
//! predicted values and the series to be written next to the report.

use blowup_core::data::{initial_data, ode_family_state, RadialDataPair, DATA_LENGTH};
use blowup_core::evolution::{
    evolve_nonlinear, verify_main_estimate, weighted_energy_series, EstimateSample, EvolveOptions, LpOptions,
    LpSolver, MainEstimateOptions, ModulationOptions, Modulator, NonlinearSystem, RunStatus,
};
use blowup_core::linop::{
    build_operators, envelope_constant, evolve_linear, fit_semigroup_bound, spectral_projection,
    OperatorMatrices, Propagator,
};
use blowup_core::norms::triple_norm;
use blowup_core::params::derive_params;
use blowup_core::spectral::{find_eigenvalues, SearchRegion};
use blowup_core::{gauge_mode, Complex64, DMatrix, Grid, PhysParams, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::artifacts::{Check, SeriesRow, SpectrumRow};
use crate::config::{DataSpec, Experiment, RunConfig};
use crate::fit::{fit_report, read_series};
use crate::LabError;

/// Spacing of the exact propagator used to sample linear flows.
pub const SAMPLING_STEP: f64 = 0.05;
/// Trapezoidal nodes of the contour integral for the projection.
pub const CONTOUR_NODES: usize = 32;
/// Points of the radial grid carrying the free data on `[0, 1.5]`.
pub const DATA_POINTS: usize = 48;
/// Radius of the eigenvalue search region.
pub const SEARCH_RADIUS: f64 = 20.0;

#[derive(Debug, Clone, Default)]
pub struct Output {
    pub results: Value,
    pub checks: Vec<Check>,
    pub series: Option<Vec<SeriesRow>>,
    pub spectrum: Option<Vec<SpectrumRow>>,
}

pub fn run_experiment(config: &RunConfig) -> Result<Output, LabError> {
    match config.experiment {
        Experiment::Spectrum => spectrum(config),
        Experiment::LinearDecay => linear_decay(config),
        Experiment::Projection => projection(config),
        Experiment::NonlinearRun => nonlinear_run(config),
        Experiment::Modulate => modulate(config),
        Experiment::MainTheorem => main_theorem(config),
        Experiment::Fit => fit(config),
        Experiment::FullSuite => Err(LabError::Usage("full-suite is not a single experiment".to_string())),
    }
}

fn setup(config: &RunConfig) -> Result<(PhysParams, Grid), LabError> {
    Ok((derive_params(config.p, config.eps)?, Grid::unit(config.grid_n)?))
}

fn complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn worst(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn spectrum(config: &RunConfig) -> Result<Output, LabError> {
    let (params, grid) = setup(config)?;
    let line = -params.free_decay() + 0.01;
    let report = find_eigenvalues(params.p, &SearchRegion::half_disc(line, SEARCH_RADIUS))?;
    let one = Complex64::new(1.0, 0.0);
    let remainder: Vec<Complex64> =
        report.eigenvalues.iter().copied().filter(|z| (z - one).norm() > 1e-8).collect();
    let root_error = report.eigenvalues.iter().map(|z| (z - one).norm()).fold(f64::INFINITY, f64::min);

    let ops = build_operators(&grid, &params);
    let mut discrete: Vec<Complex64> =
        ops.eigenvalues().into_iter().filter(|z| z.re > line && z.norm() <= SEARCH_RADIUS).collect();
    discrete.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let discrete_error = discrete.iter().map(|z| (z - one).norm()).fold(f64::INFINITY, f64::min);

    let checks = vec![
        Check::within("eigenvalue count", report.eigenvalues.len() as f64, 1.0, 0.0),
        Check::within("eigenvalue", root_error, 0.0, 1e-8),
        Check::within("discrete eigenvalue count", discrete.len() as f64, 1.0, 0.0),
        Check::within("discrete eigenvalue", discrete_error, 0.0, 1e-6),
    ];
    let results = json!({
        "region": { "re_min": line, "radius": SEARCH_RADIUS },
        "eigenvalues": report.eigenvalues.iter().copied().map(complex).collect::<Vec<_>>(),
        "predicted_eigenvalues": [[1.0, 0.0]],
        "remainder": remainder.into_iter().map(complex).collect::<Vec<_>>(),
        "residuals": report.residuals,
        "winding_number": report.winding_number,
        "discrete_eigenvalues": discrete.into_iter().map(complex).collect::<Vec<_>>(),
    });
    let rows = report
        .c0_samples
        .iter()
        .map(|s| SpectrumRow { re_lambda: s.lambda.re, im_lambda: s.lambda.im, abs_c0: s.abs_c0 })
        .collect();
    Ok(Output { results, checks, series: None, spectrum: Some(rows) })
}

/// Smooth random states: cosine series with decaying coefficients, scaled
/// to unit norm.
pub fn random_states(ops: &OperatorMatrices, grid: &Grid, samples: usize, seed: u64) -> Vec<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coefficients = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..6).map(|k| rng.gen_range(-1.0..1.0) / ((1 + k) * (1 + k)) as f64).collect()
    };
    (0..samples)
        .map(|_| {
            let c1 = coefficients(&mut rng);
            let c2 = coefficients(&mut rng);
            let u = StateVector::from_cosine_series(grid, &c1, &c2);
            let norm = ops.norm(u.as_vector());
            u.scale(1.0 / norm)
        })
        .collect()
}

/// Propagates all states with `e^{hA}` and calls `visit(step, sample, state)`
/// at every sample time. Returns the sample times.
fn propagate(
    a: &DMatrix<f64>,
    states: &[StateVector],
    tau_end: f64,
    mut visit: impl FnMut(usize, usize, &StateVector),
) -> Result<Vec<f64>, LabError> {
    let steps = ((tau_end / SAMPLING_STEP).round() as usize).max(1);
    let h = tau_end / steps as f64;
    let prop = Propagator::new(a, h);
    let columns: Vec<_> = states.iter().map(|s| s.as_vector().clone()).collect();
    let mut x = DMatrix::from_columns(&columns);
    for k in 0..=steps {
        if k > 0 {
            x = prop.apply_batch(&x);
        }
        for j in 0..x.ncols() {
            visit(k, j, &StateVector::from_stacked(x.column(j).into_owned())?);
        }
    }
    Ok((0..=steps).map(|k| k as f64 * h).collect())
}

fn slopes(taus: &[f64], norms: &[Vec<f64>], window: (f64, f64)) -> Result<Vec<f64>, LabError> {
    norms.iter().map(|n| Ok(fit_semigroup_bound(taus, n, window)?.omega)).collect()
}

fn linear_decay(config: &RunConfig) -> Result<Output, LabError> {
    let (params, grid) = setup(config)?;
    let ops = build_operators(&grid, &params);
    let states = random_states(&ops, &grid, config.samples, config.seed);
    let mut triple = vec![Vec::new(); states.len()];
    let mut energy = vec![Vec::new(); states.len()];
    let taus = propagate(&ops.l0, &states, config.tau_end, |_, j, u| {
        triple[j].push(triple_norm(u, &grid));
        energy[j].push(ops.norm(u.as_vector()));
    })?;
    let window = (config.tau_lo, config.tau_hi);
    let rate = -params.free_decay();
    let triple_slopes = slopes(&taus, &triple, window)?;
    let energy_slopes = slopes(&taus, &energy, window)?;
    let m = worst(&energy.iter().map(|n| envelope_constant(&taus, n, rate)).collect::<Vec<_>>());

    let checks = vec![
        Check::at_most("worst decay slope in the dissipative norm", worst(&triple_slopes), rate + 0.05),
        Check::at_least("semigroup constant M", m, 1.0),
    ];
    let results = json!({
        "predicted_rate": rate,
        "window": [window.0, window.1],
        "sampling_step": taus[1] - taus[0],
        "worst_slope_dissipative_norm": worst(&triple_slopes),
        "worst_slope_energy_norm": worst(&energy_slopes),
        "slopes_dissipative_norm": triple_slopes,
        "slopes_energy_norm": energy_slopes,
        "semigroup_constant": m,
    });
    let series = taus
        .iter()
        .enumerate()
        .map(|(k, &tau)| SeriesRow {
            tau,
            norm: worst(&energy.iter().map(|n| n[k]).collect::<Vec<_>>()),
            p_component: None,
            weighted_eh_norm: None,
        })
        .collect();
    Ok(Output { results, checks, series: Some(series), spectrum: None })
}

fn projection(config: &RunConfig) -> Result<Output, LabError> {
    let (params, grid) = setup(config)?;
    let ops = build_operators(&grid, &params);
    let proj = spectral_projection(&ops, CONTOUR_NODES)?;
    let d = proj.diagnostics();

    let g = gauge_mode(&params, &grid);
    let grown = evolve_linear(&ops.l, &g, 1.0, config.dt)?;
    let expected = g.scale(1f64.exp());
    let growth_error = ops.norm((&grown - &expected).as_vector()) / ops.norm(expected.as_vector());

    let states: Vec<StateVector> = random_states(&ops, &grid, config.samples, config.seed)
        .iter()
        .map(|u| proj.complement(u))
        .collect();
    let mut norms = vec![Vec::new(); states.len()];
    let mut gauge = vec![Vec::new(); states.len()];
    let taus = propagate(&ops.l, &states, config.tau_end, |_, j, u| {
        norms[j].push(ops.norm(u.as_vector()));
        gauge[j].push(proj.gauge_coefficient(u));
    })?;
    let window = (config.tau_lo, config.tau_hi);
    let stable_slopes = slopes(&taus, &norms, window)?;
    let rate = -params.mu_p;

    let checks = vec![
        Check::at_most("idempotency |P^2 - P|", d.idempotency, 1e-8),
        Check::at_most("gauge residual |Pg - g|", d.gauge_residual, 1e-8),
        Check::at_most("second singular value of P", d.second_singular_value, 1e-8),
        Check::at_most("relative error of S(1)g = e g", growth_error, 1e-6),
        Check::at_most("worst decay slope on the stable subspace", worst(&stable_slopes), rate + 0.05),
    ];
    let results = json!({
        "contour": { "center": proj.center, "radius": proj.radius, "nodes": proj.nodes },
        "idempotency": d.idempotency,
        "gauge_residual": d.gauge_residual,
        "complement_on_gauge": d.complement_on_gauge,
        "largest_singular_value": d.largest_singular_value,
        "second_singular_value": d.second_singular_value,
        "gauge_growth_relative_error": growth_error,
        "predicted_rate": rate,
        "window": [window.0, window.1],
        "worst_slope": worst(&stable_slopes),
        "slopes": stable_slopes,
    });
    let series = taus
        .iter()
        .enumerate()
        .map(|(k, &tau)| SeriesRow {
            tau,
            norm: worst(&norms.iter().map(|n| n[k]).collect::<Vec<_>>()),
            p_component: Some(worst(&gauge.iter().map(|c| c[k].abs()).collect::<Vec<_>>())),
            weighted_eh_norm: None,
        })
        .collect();
    Ok(Output { results, checks, series: Some(series), spectrum: None })
}

/// Free data at `t = 0` described by `kind`.
pub fn free_data(kind: DataSpec, params: &PhysParams) -> Result<RadialDataPair, LabError> {
    Ok(match kind {
        DataSpec::Zero => RadialDataPair::ode_family(params, 1.0, DATA_POINTS, DATA_LENGTH)?,
        DataSpec::Bump(amplitude) => RadialDataPair::bump_perturbation(params, amplitude, DATA_POINTS, DATA_LENGTH)?,
        DataSpec::Family(t) => RadialDataPair::ode_family(params, t, DATA_POINTS, DATA_LENGTH)?,
    })
}

/// Data relative to `ψ¹`; `v = 0` is kept exactly zero.
pub fn relative_data(kind: DataSpec, params: &PhysParams) -> Result<RadialDataPair, LabError> {
    match kind {
        DataSpec::Zero => Ok(RadialDataPair::zero(DATA_POINTS, DATA_LENGTH)?),
        _ => Ok(RadialDataPair::relative_from_free(&free_data(kind, params)?, params)),
    }
}

fn modulator(config: &RunConfig) -> Result<Modulator, LabError> {
    let (params, grid) = setup(config)?;
    let system = NonlinearSystem::new(&grid, &params)?;
    let solver = LpSolver::new(system, LpOptions::default())?;
    Ok(Modulator::new(solver, ModulationOptions::default()))
}

fn estimate_rows(samples: &[EstimateSample]) -> Vec<SeriesRow> {
    samples
        .iter()
        .map(|s| SeriesRow {
            tau: s.tau,
            norm: s.norm,
            p_component: Some(s.gauge_coefficient),
            weighted_eh_norm: Some(s.weighted_norm),
        })
        .collect()
}

fn nonlinear_run(config: &RunConfig) -> Result<Output, LabError> {
    let kind = config.data.unwrap_or(DataSpec::Bump(1e-3));
    let m = modulator(config)?;
    let sys = m.system();
    let v = relative_data(kind, &sys.params)?;
    let phi0 = initial_data(&v, 1.0, &sys.params, &sys.grid)?;
    let stride = ((0.01 / config.dt).round() as usize).max(1);
    let options = EvolveOptions { dt: config.dt, tau_end: config.tau_end, stride, ..Default::default() };
    let run = evolve_nonlinear(sys, &phi0, &options)?;
    let samples = weighted_energy_series(&m, &run.trajectory, 1.0, 1)?;
    let tr = &run.trajectory;

    let mut checks = Vec::new();
    match kind {
        DataSpec::Family(t) => {
            let error = tr
                .taus
                .iter()
                .zip(&tr.states)
                .map(|(&tau, s)| (s - &ode_family_state(&sys.params, 1.0, t, tau, &sys.grid)).max_abs())
                .fold(0.0, f64::max);
            checks.push(Check::at_most("sup distance to the exact family", error, 1e-4));
        }
        DataSpec::Zero => {
            let drift = tr.states.iter().map(StateVector::max_abs).fold(0.0, f64::max);
            checks.push(Check::at_most("sup drift of the equilibrium", drift, 0.0));
        }
        DataSpec::Bump(_) => {
            // Without modulation the gauge component is unstable and grows
            // like e^τ until the nonlinearity takes over.
            let hi = config.tau_end.min(4.0);
            if hi >= 2.0 {
                let magnitude: Vec<f64> = run.gauge.iter().map(|c| c.abs()).collect();
                let growth = fit_report(&tr.taus, &magnitude, None, (1.0, hi))?;
                checks.push(Check::relative("growth rate of the gauge component", growth.slope, 1.0, 0.05));
            }
        }
    }
    let status = match run.status {
        RunStatus::Completed => json!({ "kind": "completed" }),
        RunStatus::Escaped { tau, norm, gauge_coefficient } => {
            json!({ "kind": "escaped", "tau": tau, "norm": norm, "gauge_coefficient": gauge_coefficient })
        }
    };
    let results = json!({
        "data": kind.to_string(),
        "blowup_time": 1.0,
        "initial_norm": sys.norm(&phi0),
        "status": status,
        "final_tau": tr.taus.last(),
        "final_norm": tr.norms.last(),
        "final_gauge_coefficient": run.final_gauge_coefficient(),
        "max_weighted_norm": samples.iter().map(|s| s.weighted_norm).fold(0.0, f64::max),
        "stored_samples": tr.len(),
    });
    Ok(Output { results, checks, series: Some(estimate_rows(&samples)), spectrum: None })
}

fn modulate(config: &RunConfig) -> Result<Output, LabError> {
    let kind = config.data.unwrap_or(DataSpec::Zero);
    let m = modulator(config)?;
    let params = m.system().params;
    let v = relative_data(kind, &params)?;
    let result = m.find_blowup_time(&v)?;
    let fp = &result.correction.fixed_point;

    // Derivative of F(0, ·) at T = 1 against a κ^{1/(p−1)}.
    let zero = RadialDataPair::zero(DATA_POINTS, DATA_LENGTH)?;
    let h = 1e-3;
    let slope = (m.correction_f(&zero, 1.0 + h)?.f - m.correction_f(&zero, 1.0 - h)?.f) / (2.0 * h);
    let predicted_slope = params.free_decay() * params.amplitude();

    let predicted = match kind {
        DataSpec::Zero => Some((1.0, 1e-8)),
        DataSpec::Family(t) => Some((t, 1e-6)),
        DataSpec::Bump(_) => None,
    };
    let mut checks = Vec::new();
    if let Some((t, tolerance)) = predicted {
        checks.push(Check::within("blow-up time", result.t_star, t, tolerance));
    }
    checks.push(Check::relative("derivative of F(0, T) at T = 1", slope, predicted_slope, 0.05));
    checks.push(Check::at_most("contraction ratio of the fixed-point iteration", fp.max_ratio(), 0.5));

    let samples = weighted_energy_series(&m, &fp.trajectory, result.t_star, 10)?;
    let results = json!({
        "data": kind.to_string(),
        "t_star": result.t_star,
        "predicted_t_star": predicted.map(|p| p.0),
        "bracket": [result.bracket.0, result.bracket.1],
        "f_at_bracket": [result.f_values.0, result.f_values.1],
        "final_bracket": [result.final_bracket.0, result.final_bracket.1],
        "iterations": result.iterations,
        "f_at_t_star": result.f_star,
        "dt_f_at_one": slope,
        "predicted_dt_f_at_one": predicted_slope,
        "contraction_ratio": fp.max_ratio(),
        "fixed_point_iterations": fp.iterations,
    });
    Ok(Output { results, checks, series: Some(estimate_rows(&samples)), spectrum: None })
}

fn main_theorem(config: &RunConfig) -> Result<Output, LabError> {
    let kind = config.data.unwrap_or(DataSpec::Bump(1e-3));
    let m = modulator(config)?;
    let params = m.system().params;
    let free = free_data(kind, &params)?;
    let options = MainEstimateOptions { window: (1.0, config.tau_end.min(6.0)), ..Default::default() };
    let report = verify_main_estimate(&free, &m, &options)?;
    let target = params.mu_p;

    let check = match report.slope {
        Some(slope) => Check::at_least("decay exponent of the weighted norm", slope, target - 0.05),
        None => Check::at_most("weighted norm of a vanishing perturbation", report.max_weighted_norm, options.zero_level),
    };
    let results = json!({
        "data": kind.to_string(),
        "data_norm": report.data_norm,
        "t_star": report.t_star,
        "window": [options.window.0, options.window.1],
        "slope": report.slope,
        "predicted_slope": target,
        "intercept": report.intercept,
        "r_squared": report.r_squared,
        "c_eps": report.c_eps,
        "max_weighted_norm": report.max_weighted_norm,
    });
    Ok(Output { results, checks: vec![check], series: Some(estimate_rows(&report.samples)), spectrum: None })
}

fn fit(config: &RunConfig) -> Result<Output, LabError> {
    let input = config.input.as_deref().ok_or_else(|| LabError::Usage("fit needs --input".to_string()))?;
    let (taus, values) = read_series(input, &config.column)?;
    let report = fit_report(&taus, &values, None, (config.tau_lo, config.tau_hi))?;
    let results = json!({
        "input": input.display().to_string(),
        "column": config.column,
        "slope": report.slope,
        "intercept": report.intercept,
        "r_squared": report.r_squared,
        "rows": report.rows,
        "window": [report.window.0, report.window.1],
    });
    Ok(Output { results, ..Default::default() })
}
