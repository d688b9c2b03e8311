use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::connection::{connection_c0, pole_factor, HypGeomParams};
use crate::error::{Error, Result};

/// Axis-parallel rectangle of the complex λ-plane, optionally cut down to a
/// disc `|λ| ≤ max_modulus` when reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchRegion {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub max_modulus: Option<f64>,
}

impl SearchRegion {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Self {
        Self { re_min, re_max, im_min, im_max, max_modulus: None }
    }

    /// `{Re λ > re_min, |λ| ≤ modulus}`, enclosed by its bounding box.
    pub fn half_disc(re_min: f64, modulus: f64) -> Self {
        Self {
            re_min,
            re_max: modulus,
            im_min: -modulus,
            im_max: modulus,
            max_modulus: Some(modulus),
        }
    }

    fn is_valid(&self) -> bool {
        self.re_max > self.re_min && self.im_max > self.im_min
    }

    fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.re_min - slack
            && z.re <= self.re_max + slack
            && z.im >= self.im_min - slack
            && z.im <= self.im_max + slack
            && self.max_modulus.is_none_or(|m| z.norm() <= m + slack)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C0Sample {
    pub lambda: Complex64,
    pub abs_c0: f64,
}

/// Outcome of the closed-form eigenvalue search.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub p: f64,
    pub region: SearchRegion,
    /// Zeros of `c₀` in the region, sorted by decreasing real part.
    pub eigenvalues: Vec<Complex64>,
    /// `|c₀|` at each reported eigenvalue.
    pub residuals: Vec<f64>,
    /// `{0, c − a − b}` at each reported eigenvalue.
    pub indicial_exponents: Vec<[Complex64; 2]>,
    /// Zero count of the pole factor inside the bounding rectangle, from the
    /// argument principle.
    pub winding_number: i64,
    pub c0_samples: Vec<C0Sample>,
}

/// Options of the multi-start Newton search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSearch {
    /// Starting points per unit length along each axis.
    pub density: f64,
    pub max_newton: usize,
    /// Roots closer than this are merged.
    pub merge_radius: f64,
}

impl Default for RootSearch {
    fn default() -> Self {
        Self { density: 2.0, max_newton: 60, merge_radius: 1e-6 }
    }
}

fn newton(p: f64, start: Complex64, max_iter: usize) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..max_iter {
        let f = pole_factor(z, p);
        if f.norm() == 0.0 {
            return Some(z);
        }
        let h = 1e-6 * z.norm().max(1.0);
        let df = (pole_factor(z + h, p) - pole_factor(z - h, p)) / (2.0 * h);
        if df.norm() == 0.0 || !df.norm().is_finite() {
            return None;
        }
        let step = f / df;
        // Damping keeps far starts from jumping across the plane.
        let step = if step.norm() > 1.0 { step / step.norm() } else { step };
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return None;
        }
        if step.norm() <= 1e-14 * z.norm().max(1.0) {
            return Some(z);
        }
    }
    // Multiple zeros converge only linearly and stall at rounding level.
    (pole_factor(z, p).norm() <= 1e-12).then_some(z)
}

/// Zeros of `λ ↦ 1/(Γ((λ−1)/2) Γ(λ/2 + (p+1)/(p−1)))` in `region`, with no
/// restriction on where the region lies.
pub fn find_connection_zeros(p: f64, region: &SearchRegion, search: &RootSearch) -> Result<Vec<Complex64>> {
    if !region.is_valid() {
        return Err(Error::InvalidArgument("empty search region"));
    }
    let width = region.re_max - region.re_min;
    let height = region.im_max - region.im_min;
    let nx = ((width * search.density).ceil() as usize).max(4);
    // An odd row count keeps a row of starts on the real axis of symmetric
    // regions, where all zeros live.
    let ny = (((height * search.density).ceil() as usize).max(4)) | 1;
    let mut roots: Vec<Complex64> = Vec::new();
    for i in 0..=nx {
        for j in 0..ny {
            let start = Complex64::new(
                region.re_min + width * i as f64 / nx as f64,
                region.im_min + height * (j as f64 + 0.5) / ny as f64,
            );
            let Some(z) = newton(p, start, search.max_newton) else {
                continue;
            };
            if !region.contains(z, 1e-9) {
                continue;
            }
            if roots.iter().all(|r| (r - z).norm() > search.merge_radius) {
                roots.push(z);
            }
        }
    }
    // Zeros on the real axis are real; drop rounding noise in the imaginary part.
    for r in &mut roots {
        if r.im.abs() < 1e-12 {
            r.im = 0.0;
        }
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// Number of zeros of the pole factor inside the rectangle, by accumulating
/// the argument along the boundary with adaptive refinement.
pub fn winding_number(p: f64, region: &SearchRegion) -> i64 {
    let corners = [
        Complex64::new(region.re_min, region.im_min),
        Complex64::new(region.re_max, region.im_min),
        Complex64::new(region.re_max, region.im_max),
        Complex64::new(region.re_min, region.im_max),
    ];
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let pieces = (((b - a).norm() * 8.0).ceil() as usize).max(8);
        for m in 0..pieces {
            let z0 = a + (b - a) * (m as f64 / pieces as f64);
            let z1 = a + (b - a) * ((m + 1) as f64 / pieces as f64);
            total += arg_change(p, z0, z1, 0);
        }
    }
    (total / (2.0 * PI)).round() as i64
}

fn arg_change(p: f64, z0: Complex64, z1: Complex64, depth: usize) -> f64 {
    let f0 = pole_factor(z0, p);
    let f1 = pole_factor(z1, p);
    let delta = (f1 / f0).arg();
    if delta.abs() < 0.5 || depth >= 40 {
        return delta;
    }
    let mid = (z0 + z1) * 0.5;
    arg_change(p, z0, mid, depth + 1) + arg_change(p, mid, z1, depth + 1)
}

/// `|c₀|` on an `nx × ny` lattice covering the region. Points where the
/// numerator Γ has a pole are skipped.
pub fn sample_c0(p: f64, region: &SearchRegion, nx: usize, ny: usize) -> Vec<C0Sample> {
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let lambda = Complex64::new(
                region.re_min + (region.re_max - region.re_min) * i as f64 / (nx.max(2) - 1) as f64,
                region.im_min + (region.im_max - region.im_min) * j as f64 / (ny.max(2) - 1) as f64,
            );
            if let Ok(c0) = connection_c0(lambda, p) {
                out.push(C0Sample { lambda, abs_c0: c0.value.norm() });
            }
        }
    }
    out
}

/// Eigenvalue candidates right of `Re λ = −2/(p−1)`, where a zero of `c₀` is
/// equivalent to an eigenvalue.
pub fn find_eigenvalues(p: f64, region: &SearchRegion) -> Result<SpectralReport> {
    if !(p > 3.0) {
        return Err(Error::InvalidExponent { p });
    }
    let boundary = -2.0 / (p - 1.0);
    if !(region.re_min > boundary) {
        return Err(Error::InvalidRegion { boundary });
    }
    let eigenvalues = find_connection_zeros(p, region, &RootSearch::default())?;
    let mut residuals = Vec::with_capacity(eigenvalues.len());
    let mut indicial_exponents = Vec::with_capacity(eigenvalues.len());
    for &lambda in &eigenvalues {
        residuals.push(connection_c0(lambda, p)?.value.norm());
        indicial_exponents.push(HypGeomParams::new(lambda, p).indicial_exponents());
    }
    Ok(SpectralReport {
        p,
        region: *region,
        eigenvalues,
        residuals,
        indicial_exponents,
        winding_number: winding_number(p, region),
        c0_samples: sample_c0(p, region, 21, 21),
    })
}
