//! Selection of the blow-up time: the correction `F(v, T) = f(v, T) g`
//! vanishes exactly for the `T` whose solution converges to `ψ^T`.

#[allow(unused_imports)]
use num_traits::Float;

use super::lyapunov_perron::{FixedPoint, LpSolver};
use super::system::{evolve_nonlinear, EvolveOptions, NonlinearSystem};
use crate::data::{initial_data, RadialDataPair, BLOWUP_TIME_RANGE};
use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationOptions {
    pub bracket: (f64, f64),
    /// Distance kept from the ends of `(1/2, 3/2)` when widening.
    pub margin: f64,
    pub time_tolerance: f64,
    pub correction_tolerance: f64,
}

impl Default for ModulationOptions {
    fn default() -> Self {
        Self {
            bracket: (0.9, 1.1),
            margin: 0.02,
            time_tolerance: 1e-10,
            correction_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Correction {
    pub blowup_time: f64,
    /// Gauge coordinate `f(v, T)`.
    pub f: f64,
    pub initial: StateVector,
    pub fixed_point: FixedPoint,
}

#[derive(Debug, Clone)]
pub struct ModulationResult {
    pub t_star: f64,
    /// Sign-change bracket the bisection started from.
    pub bracket: (f64, f64),
    /// `f` at the ends of `bracket`.
    pub f_values: (f64, f64),
    pub final_bracket: (f64, f64),
    pub iterations: usize,
    pub f_star: f64,
    /// Fixed point at `T*`, which is the solution itself since `F = 0`.
    pub correction: Correction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingResult {
    pub t_star: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Drives fixed-point solves for varying blow-up time.
#[derive(Debug, Clone)]
pub struct Modulator {
    pub solver: LpSolver,
    pub options: ModulationOptions,
}

impl Modulator {
    pub fn new(solver: LpSolver, options: ModulationOptions) -> Self {
        Self { solver, options }
    }

    pub fn system(&self) -> &NonlinearSystem {
        &self.solver.system
    }

    pub fn correction_f(&self, v: &RadialDataPair, blowup_time: f64) -> Result<Correction> {
        let sys = self.system();
        let initial = initial_data(v, blowup_time, &sys.params, &sys.grid)?;
        let fixed_point = self.solver.solve_fixed_point(&initial)?;
        Ok(Correction { blowup_time, f: fixed_point.correction(), initial, fixed_point })
    }

    /// `F(v, T) = f(v, T) g` as a grid function.
    pub fn correction_vector(&self, v: &RadialDataPair, blowup_time: f64) -> Result<StateVector> {
        let f = self.correction_f(v, blowup_time)?.f;
        StateVector::from_stacked(&self.system().projection.gauge * f)
    }

    fn widen(&self, (lo, hi): (f64, f64)) -> Option<(f64, f64)> {
        let lower = BLOWUP_TIME_RANGE.0 + self.options.margin;
        let upper = BLOWUP_TIME_RANGE.1 - self.options.margin;
        if lo <= lower && hi >= upper {
            return None;
        }
        let new_lo = (1.0 - 2.0 * (1.0 - lo)).max(lower);
        let new_hi = (1.0 + 2.0 * (hi - 1.0)).min(upper);
        Some((new_lo, new_hi))
    }

    /// Bisection of `T ↦ f(v, T)` to `|T⁺ − T⁻| ≤ time_tolerance`.
    pub fn find_blowup_time(&self, v: &RadialDataPair) -> Result<ModulationResult> {
        let mut bracket = self.options.bracket;
        let (mut f_lo, mut f_hi);
        loop {
            f_lo = self.correction_f(v, bracket.0)?.f;
            f_hi = self.correction_f(v, bracket.1)?.f;
            if f_lo * f_hi <= 0.0 {
                break;
            }
            match self.widen(bracket) {
                Some(wider) => bracket = wider,
                None => {
                    return Err(Error::NoSignChange {
                        t_lo: bracket.0,
                        t_hi: bracket.1,
                        f_lo,
                        f_hi,
                    })
                }
            }
        }
        let initial = bracket;
        let initial_f = (f_lo, f_hi);
        let (mut lo, mut hi) = bracket;
        let mut iterations = 0;
        if f_lo == 0.0 {
            hi = lo;
        } else if f_hi == 0.0 {
            lo = hi;
        }
        while hi - lo > self.options.time_tolerance {
            let mid = 0.5 * (lo + hi);
            let f_mid = self.correction_f(v, mid)?.f;
            iterations += 1;
            if f_mid == 0.0 {
                lo = mid;
                hi = mid;
            } else if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        let t_star = 0.5 * (lo + hi);
        let correction = self.correction_f(v, t_star)?;
        if !(correction.f.abs() <= self.options.correction_tolerance) {
            return Err(Error::NoConvergence { iterations });
        }
        Ok(ModulationResult {
            t_star,
            bracket: initial,
            f_values: initial_f,
            final_bracket: (lo, hi),
            iterations,
            f_star: correction.f,
            correction,
        })
    }

    /// Sign of the unstable coordinate of the uncorrected flow from
    /// `U(v, T)`, either at the gauge threshold or at `tau_end`.
    pub fn escape_sign(&self, v: &RadialDataPair, blowup_time: f64, evolve: &EvolveOptions) -> Result<f64> {
        let sys = self.system();
        let initial = initial_data(v, blowup_time, &sys.params, &sys.grid)?;
        let run = evolve_nonlinear(sys, &initial, evolve)?;
        Ok(run.final_gauge_coefficient().signum())
    }

    /// Shooting: bisection on the escape sign of the direct solver, which
    /// agrees with the sign of `f(v, T)`.
    pub fn shooting_blowup_time(
        &self,
        v: &RadialDataPair,
        evolve: &EvolveOptions,
        time_tolerance: f64,
    ) -> Result<ShootingResult> {
        let bracket = self.options.bracket;
        let mut lo = bracket.0;
        let mut hi = bracket.1;
        let s_lo = self.escape_sign(v, lo, evolve)?;
        let s_hi = self.escape_sign(v, hi, evolve)?;
        if s_lo == s_hi {
            return Err(Error::NoSignChange { t_lo: lo, t_hi: hi, f_lo: s_lo, f_hi: s_hi });
        }
        let mut iterations = 0;
        while hi - lo > time_tolerance {
            let mid = 0.5 * (lo + hi);
            let s = self.escape_sign(v, mid, evolve)?;
            iterations += 1;
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(ShootingResult { t_star: 0.5 * (lo + hi), bracket, iterations })
    }
}
