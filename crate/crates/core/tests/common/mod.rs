//! Shared generators and property checks for the integration suites.
//!
//! Each check returns a summary on success and a message on failure so the
//! same code backs both the ordinary tests and the acceptance report.
#![allow(dead_code)]

use std::f64::consts::PI;

use blowup_core::data::{initial_data, RadialDataPair, DATA_LENGTH};
use blowup_core::linop::{build_operators, expm, spectral_projection};
use blowup_core::nonlin::{n_scalar, n_scalar_d1, n_scalar_d2, n_vector, Nonlinearity};
use blowup_core::norms::{h1_norm_sq, h_norm, k_op, triple_inner, triple_norm};
use blowup_core::params::derive_params;
use blowup_core::spectral::{gamma, hyp2f1};
use blowup_core::{Complex64, DMatrix, DVector, Grid, PhysParams, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<String, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random cosine coefficients with geometrically decaying size.
pub fn coefficients(rng: &mut ChaCha8Rng, terms: usize) -> Vec<f64> {
    (0..terms).map(|k| rng.gen_range(-1.0..1.0) / (1.0 + k as f64).powi(2)).collect()
}

/// Smooth random state with `u₁(0) = 0`, unit norm before scaling.
pub fn random_state(rng: &mut ChaCha8Rng, grid: &Grid, terms: usize) -> StateVector {
    let c1 = coefficients(rng, terms);
    let c2 = coefficients(rng, terms);
    let u = StateVector::from_cosine_series(grid, &c1, &c2);
    let norm = h_norm(&u, grid);
    u.scale(1.0 / norm)
}

fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// Log-spaced abscissae in `[−10³, 10³]`, both signs, plus zero.
pub fn log_spaced_x() -> Vec<f64> {
    let mut xs = vec![0.0];
    for k in 0..=240 {
        let x = 10f64.powf(-6.0 + 9.0 * k as f64 / 240.0);
        xs.push(x);
        xs.push(-x);
    }
    xs
}

/// Fitted constants `C` for the four pointwise bounds on `N`, over the
/// x-range `[−limit, limit]`.
pub fn nonlinearity_constants(p: f64, limit: f64) -> [f64; 4] {
    let params = derive_params(p, 0.1).unwrap();
    let mut c = [0.0f64; 4];
    for x in log_spaced_x().into_iter().filter(|x| x.abs() <= limit && *x != 0.0) {
        let bracket = japanese(x).powf(p - 2.0);
        for k in 0..=20 {
            let rho = 0.05 * k as f64;
            let n = n_scalar(x, rho, &params).abs();
            let d1 = n_scalar_d1(x, rho, &params).abs();
            let d2 = n_scalar_d2(x, rho, &params).abs();
            let dr = n_scalar(x, 1.0, &params).abs();
            if rho > 0.0 {
                c[0] = c[0].max(n / (rho * x * x * bracket));
                c[1] = c[1].max(d1 / (rho * x.abs() * bracket));
                c[2] = c[2].max(d2 / (rho * bracket));
            }
            c[3] = c[3].max(dr / (x * x * bracket));
        }
    }
    c
}

/// The bounds hold with one constant per `p`: the constants fitted on
/// `[−10², 10²]` already cover `[−10³, 10³]` up to 10%, so they are not
/// still growing with the range.
pub fn check_nonlinearity_bounds() -> Check {
    let mut out = Vec::new();
    for p in [3.5, 4.0, 5.0, 7.0] {
        let inner = nonlinearity_constants(p, 1e2);
        let outer = nonlinearity_constants(p, 1e3);
        for k in 0..4 {
            if !outer[k].is_finite() || outer[k] > 1.1 * inner[k] {
                return Err(format!("p={p}: bound {k} not uniform ({} vs {})", inner[k], outer[k]));
            }
        }
        // ∂_ρN = N/ρ identically.
        let params = derive_params(p, 0.1).unwrap();
        let nl = Nonlinearity::new(&params);
        for x in [-0.7, 0.3, 2.0, 50.0] {
            for rho in [0.1, 0.5, 1.0] {
                let lhs = nl.d_rho(x, rho);
                let rhs = nl.scalar(x, rho) / rho;
                if (lhs - rhs).abs() > 1e-12 * rhs.abs().max(1.0) {
                    return Err(format!("p={p}: ∂ρN ≠ N/ρ at x={x}, ρ={rho}"));
                }
            }
        }
        out.push(format!("p={p}: C=[{:.3}, {:.3}, {:.3}, {:.3}]", outer[0], outer[1], outer[2], outer[3]));
    }
    Ok(out.join("; "))
}

/// Largest `‖N(u)−N(v)‖ / ((‖u‖+‖v‖)‖u−v‖)` over random pairs in the unit
/// ball.
pub fn lipschitz_ratio(p: f64, pairs: usize, seed: u64) -> f64 {
    let params = derive_params(p, 0.1).unwrap();
    let grid = Grid::unit(32).unwrap();
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let ru: f64 = rng.gen_range(0.0..1.0);
        let rv: f64 = rng.gen_range(0.0..1.0);
        let u = random_state(&mut rng, &grid, 5).scale(ru);
        let v = random_state(&mut rng, &grid, 5).scale(rv);
        let diff = &u - &v;
        let dn = &n_vector(&u, &grid, &params) - &n_vector(&v, &grid, &params);
        let denom = (h_norm(&u, &grid) + h_norm(&v, &grid)) * h_norm(&diff, &grid);
        if denom > 1e-14 {
            worst = worst.max(h_norm(&dn, &grid) / denom);
        }
    }
    worst
}

/// Bounded Lipschitz ratio: doubling the number of pairs changes the
/// empirical constant by less than 25%.
pub fn check_lipschitz() -> Check {
    let mut out = Vec::new();
    for p in [3.5, 5.0, 7.0] {
        let half = lipschitz_ratio(p, 250, 17);
        let full = half.max(lipschitz_ratio(p, 250, 18));
        if !full.is_finite() || full > 1.25 * half {
            return Err(format!("p={p}: ratio not stable ({half} vs {full})"));
        }
        out.push(format!("p={p}: c={full:.3}"));
    }
    Ok(out.join("; "))
}

/// Log-log slope of `‖N(u)‖` against `‖u‖` for `‖u‖ = 2^{−k}`, `k = 1..20`.
///
/// The direction has `u₂ > 0`. Then `N(s·x)/s²` is increasing in `s > 0`
/// because the third derivative of `|c+x|^{p−1}(c+x)` is positive, so the
/// quadratic onset shows as a slope of at least 2 rather than only in the
/// limit.
pub fn frechet_slope(p: f64, seed: u64) -> f64 {
    let params = derive_params(p, 0.1).unwrap();
    let grid = Grid::unit(32).unwrap();
    let mut rng = rng(seed);
    let c1 = coefficients(&mut rng, 4);
    let mut c2 = coefficients(&mut rng, 4);
    c2[0] = 1.0 + c2[0].abs();
    let dir = StateVector::from_cosine_series(&grid, &c1, &c2);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for k in 1..=20 {
        let s = 2f64.powi(-k);
        let u = dir.scale(s);
        let n = h_norm(&n_vector(&u, &grid, &params), &grid);
        x.push(s.ln());
        y.push(n.ln());
    }
    blowup_core::linop::fit_line(&x, &y).unwrap().slope
}

pub fn check_frechet() -> Check {
    let mut worst = f64::INFINITY;
    for (i, p) in [3.5, 5.0, 7.0].into_iter().enumerate() {
        let s = frechet_slope(p, 40 + i as u64);
        if s.is_nan() || s < 2.0 - 1e-6 {
            return Err(format!("p={p}: slope {s}"));
        }
        worst = worst.min(s);
    }
    Ok(format!("min slope {worst:.4}"))
}

/// `[min, max]` of `‖u‖₁/‖u‖` over random states generated from the same
/// coefficients on the given grid.
pub fn equivalence_interval(n: usize, samples: usize, seed: u64) -> (f64, f64) {
    let grid = Grid::unit(n).unwrap();
    let mut rng = rng(seed);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for _ in 0..samples {
        let u = random_state(&mut rng, &grid, 6);
        let r = triple_norm(&u, &grid) / h_norm(&u, &grid);
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi)
}

pub fn check_norm_equivalence() -> Check {
    let coarse = equivalence_interval(64, 1000, 5);
    let fine = equivalence_interval(128, 1000, 5);
    let close = |a: f64, b: f64| (a - b).abs() <= 0.05 * a.abs().max(b.abs());
    if !(coarse.0 > 0.0 && coarse.1.is_finite()) {
        return Err(format!("degenerate interval {coarse:?}"));
    }
    if !(close(coarse.0, fine.0) && close(coarse.1, fine.1)) {
        return Err(format!("n=64 {coarse:?} vs n=128 {fine:?}"));
    }
    Ok(format!("[c1, c2] = [{:.4}, {:.4}] (n=64), [{:.4}, {:.4}] (n=128)", coarse.0, coarse.1, fine.0, fine.1))
}

/// Sharp constant of the embedding `H¹(0,1) ↪ L^∞`, `√coth 1`.
pub fn sobolev_constant() -> f64 {
    (1.0 / 1f64.tanh()).sqrt()
}

/// `‖Ku‖_∞ ≤ c‖u‖_{H¹}` on random trigonometric polynomials; since
/// `|Ku| ≤ ‖u‖_∞` the constant cannot exceed the embedding constant.
pub fn check_averaging_bound() -> Check {
    let grid = Grid::unit(48).unwrap();
    let mut rng = rng(23);
    let mut c = 0.0f64;
    for _ in 0..500 {
        let a = coefficients(&mut rng, 6);
        let b = coefficients(&mut rng, 6);
        let u = grid.sample(|x| {
            a.iter()
                .zip(&b)
                .enumerate()
                .map(|(k, (ak, bk))| ak * (PI * k as f64 * x).cos() + bk * (PI * k as f64 * x).sin())
                .sum()
        });
        let ku = k_op(&u, &grid);
        c = c.max(ku.amax() / h1_norm_sq(&u, &grid).sqrt());
    }
    let bound = sobolev_constant();
    if c > bound * (1.0 + 1e-9) {
        return Err(format!("c = {c} exceeds √coth 1 = {bound}"));
    }
    Ok(format!("c = {c:.4} ≤ √coth 1 = {bound:.4}"))
}

/// `Γ(z+1) = zΓ(z)` on random points of `|z| ≤ 20`.
pub fn check_gamma_recurrence(samples: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < samples {
        let r: f64 = 20.0 * rng.gen::<f64>().sqrt();
        let th: f64 = rng.gen_range(0.0..2.0 * PI);
        let z = Complex64::from_polar(r, th);
        // Stay away from the poles so both sides are well conditioned.
        if z.im.abs() < 1e-3 && z.re < 0.5 && (z.re - z.re.round()).abs() < 1e-3 {
            continue;
        }
        let (Ok(g1), Ok(g0)) = (gamma(z + 1.0), gamma(z)) else {
            return Err(format!("Γ failed at {z}"));
        };
        let rel = (g1 - z * g0).norm() / g1.norm();
        worst = worst.max(rel);
        done += 1;
    }
    if worst > 1e-11 {
        return Err(format!("worst relative residual {worst:e}"));
    }
    Ok(format!("worst relative residual {worst:.2e}"))
}

/// ₂F₁ against elementary closed forms.
pub fn check_hyp2f1_closed_forms() -> Check {
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut worst = 0.0f64;
    for k in 0..40 {
        let x = -0.95 + 1.9 * k as f64 / 39.0;
        let z = c(x);
        // ln(1−z) = −z ₂F₁(1,1;2;z)
        let log = -z * hyp2f1(c(1.0), c(1.0), c(2.0), z).map_err(|e| e.to_string())?;
        worst = worst.max((log - c((1.0 - x).ln())).norm());
        // (1−z)^{−a} = ₂F₁(a,b;b;z)
        let bin = hyp2f1(c(0.7), c(1.3), c(1.3), z).map_err(|e| e.to_string())?;
        worst = worst.max((bin - c((1.0 - x).powf(-0.7))).norm() / (1.0 - x).powf(-0.7));
        // arcsin √x / √x = ₂F₁(½,½;3/2;x) for x ≥ 0
        if x > 0.0 {
            let asin = hyp2f1(c(0.5), c(0.5), c(1.5), z).map_err(|e| e.to_string())?;
            worst = worst.max((asin - c(x.sqrt().asin() / x.sqrt())).norm());
        }
    }
    if worst > 1e-10 {
        return Err(format!("worst deviation {worst:e}"));
    }
    Ok(format!("worst deviation {worst:.2e}"))
}

/// `Re(L₀u, u)₁ ≤ −(2/(p−1))‖u‖₁²` for smooth random `u`.
pub fn check_dissipativity(p: f64, samples: usize, seed: u64) -> Check {
    let params = derive_params(p, 0.1).unwrap();
    let grid = Grid::unit(48).unwrap();
    let ops = build_operators(&grid, &params);
    let a = params.free_decay();
    let mut rng = rng(seed);
    let mut margin = f64::INFINITY;
    for _ in 0..samples {
        let u = random_state(&mut rng, &grid, 6);
        let lu = ops.apply_l0(&u);
        let form = triple_inner(&lu, &u, &grid);
        let bound = -a * triple_inner(&u, &u, &grid);
        let slack = bound - form;
        if slack < -1e-8 {
            return Err(format!("form {form} above {bound}"));
        }
        margin = margin.min(slack);
    }
    Ok(format!("smallest slack {margin:.3e}"))
}

/// Norm of `W^{1/2} A W^{−1/2}` for the H¹×H¹ Gram matrix `W`.
pub fn weighted_operator_norm(a: &DMatrix<f64>, gram: &DMatrix<f64>) -> f64 {
    let chol = gram.clone().cholesky().expect("Gram matrix is positive definite");
    let r = chol.l().transpose();
    let r_inv = r.clone().try_inverse().unwrap();
    let m = &r * a * r_inv;
    m.singular_values().max()
}

/// `‖P S(τ) − S(τ) P‖` in the operator norm of the state space.
pub fn commutator_norms(p: f64, n: usize, taus: &[f64]) -> Vec<f64> {
    let params = derive_params(p, 0.1).unwrap();
    let grid = Grid::unit(n).unwrap();
    let ops = build_operators(&grid, &params);
    let proj = spectral_projection(&ops, 32).unwrap();
    taus.iter()
        .map(|&t| {
            let s = expm(&(&ops.l * t));
            let c = &proj.p * &s - &s * &proj.p;
            weighted_operator_norm(&c, &ops.gram)
        })
        .collect()
}

/// `U(v_k, T_k) → U(v, T)` along a convergent sequence.
pub fn continuity_errors(params: &PhysParams, grid: &Grid) -> Vec<f64> {
    let v = RadialDataPair::bump_perturbation(params, 0.01, 40, DATA_LENGTH).unwrap();
    let v = RadialDataPair::relative_from_free(&v, params);
    let base = initial_data(&v, 1.0, params, grid).unwrap();
    let w = RadialDataPair::from_fn(40, DATA_LENGTH, |r| r * (1.0 - r).sin(), |r| (2.0 * r).cos()).unwrap();
    (1..=8)
        .map(|k| {
            let s = 4f64.powi(-k);
            let vk = v.difference(&w.scale(-s)).unwrap();
            let uk = initial_data(&vk, 1.0 + s, params, grid).unwrap();
            h_norm(&(&uk - &base), grid)
        })
        .collect()
}

pub fn identity_like(n: usize) -> DVector<f64> {
    DVector::from_element(n, 1.0)
}
