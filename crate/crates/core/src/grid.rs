//! Chebyshev–Lobatto collocation on an interval `[a, b]`.
//!
//! Nodes are stored in increasing order, `x_0 = a` and `x_{n−1} = b`. The grid
//! carries the spectral differentiation matrix, Clenshaw–Curtis weights, the
//! antiderivative matrix `(Vu)(x_i) = ∫_a^{x_i} u`, and barycentric weights for
//! off-grid evaluation.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Grid {
    lo: f64,
    hi: f64,
    nodes: DVector<f64>,
    diff: DMatrix<f64>,
    weights: DVector<f64>,
    antiderivative: DMatrix<f64>,
    barycentric: Vec<f64>,
}

impl Grid {
    /// `n` Chebyshev–Lobatto nodes on `[0, 1]`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::chebyshev(n, 0.0, 1.0)
    }

    pub fn chebyshev(n: usize, lo: f64, hi: f64) -> Result<Self> {
        if n < 3 || !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidGrid { n });
        }
        let intervals = n - 1;
        let half = 0.5 * (hi - lo);
        // theta_j = j π / N gives t_j = −cos(theta_j) increasing on [−1, 1].
        let theta: Vec<f64> = (0..n).map(|j| j as f64 * PI / intervals as f64).collect();
        let nodes = DVector::from_iterator(
            n,
            theta.iter().map(|&th| lo + half * (1.0 - th.cos())),
        );
        let mut nodes = nodes;
        nodes[0] = lo;
        nodes[n - 1] = hi;

        let barycentric: Vec<f64> = (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                if j == 0 || j == intervals {
                    0.5 * sign
                } else {
                    sign
                }
            })
            .collect();

        let diff = differentiation_matrix(&nodes, &barycentric);
        let weights = clenshaw_curtis(n) * half;
        let antiderivative = antiderivative_matrix(&theta) * half;

        Ok(Self {
            lo,
            hi,
            nodes,
            diff,
            weights,
            antiderivative,
            barycentric,
        })
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn nodes(&self) -> &DVector<f64> {
        &self.nodes
    }

    pub fn diff(&self) -> &DMatrix<f64> {
        &self.diff
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    pub fn antiderivative_matrix(&self) -> &DMatrix<f64> {
        &self.antiderivative
    }

    pub fn derivative(&self, values: &DVector<f64>) -> DVector<f64> {
        &self.diff * values
    }

    /// Values of `x ↦ ∫_lo^x u` at the nodes.
    pub fn antiderivative(&self, values: &DVector<f64>) -> DVector<f64> {
        &self.antiderivative * values
    }

    pub fn integrate(&self, values: &DVector<f64>) -> f64 {
        self.weights.dot(values)
    }

    /// Barycentric evaluation of the interpolant at `x`.
    pub fn interpolate(&self, values: &DVector<f64>, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, (&node, &w)) in self.nodes.iter().zip(&self.barycentric).enumerate() {
            let dx = x - node;
            if dx == 0.0 {
                return values[j];
            }
            let c = w / dx;
            num += c * values[j];
            den += c;
        }
        num / den
    }

    /// Matrix mapping nodal values to interpolant values at `targets`.
    pub fn interpolation_matrix(&self, targets: &[f64]) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(targets.len(), n);
        for (i, &x) in targets.iter().enumerate() {
            if let Some(j) = self.nodes.iter().position(|&node| node == x) {
                m[(i, j)] = 1.0;
                continue;
            }
            let mut den = 0.0;
            for j in 0..n {
                let c = self.barycentric[j] / (x - self.nodes[j]);
                m[(i, j)] = c;
                den += c;
            }
            for j in 0..n {
                m[(i, j)] /= den;
            }
        }
        m
    }

    /// Samples `f` at the nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> DVector<f64> {
        self.nodes.map(f)
    }
}

fn differentiation_matrix(nodes: &DVector<f64>, bary: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in 0..n {
            if i != j {
                let v = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
                d[(i, j)] = v;
                row_sum += v;
            }
        }
        // Negative sum trick keeps D·1 = 0 to rounding.
        d[(i, i)] = -row_sum;
    }
    d
}

/// Clenshaw–Curtis weights on `[−1, 1]` for the Lobatto nodes.
fn clenshaw_curtis(n: usize) -> DVector<f64> {
    let big_n = n - 1;
    let nf = big_n as f64;
    let mut w = DVector::zeros(n);
    let theta: Vec<f64> = (0..n).map(|j| j as f64 * PI / nf).collect();
    let mut v: Vec<f64> = alloc::vec![1.0; n.saturating_sub(2)];
    if big_n.is_multiple_of(2) {
        let end = 1.0 / (nf * nf - 1.0);
        w[0] = end;
        w[big_n] = end;
        for k in 1..big_n / 2 {
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * k as f64 * theta[i + 1]).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
        }
        for (i, vi) in v.iter_mut().enumerate() {
            *vi -= (nf * theta[i + 1]).cos() / (nf * nf - 1.0);
        }
    } else {
        let end = 1.0 / (nf * nf);
        w[0] = end;
        w[big_n] = end;
        for k in 1..=(big_n - 1) / 2 {
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * k as f64 * theta[i + 1]).cos() / (4.0 * (k * k) as f64 - 1.0);
            }
        }
    }
    for (i, vi) in v.iter().enumerate() {
        w[i + 1] = 2.0 * vi / nf;
    }
    w
}

/// Antiderivative from the left end on `[−1, 1]`, built through the Chebyshev
/// coefficients of the interpolant. `theta_j` are the node angles, with
/// `t_j = −cos(theta_j)`.
fn antiderivative_matrix(theta: &[f64]) -> DMatrix<f64> {
    let n = theta.len();
    let big_n = n - 1;
    let nf = big_n as f64;
    // t_j = −cos θ_j = cos(π − θ_j): T_k(t_j) = cos(k(π − θ_j)).
    let phi: Vec<f64> = theta.iter().map(|&th| PI - th).collect();

    // Coefficients a_k = (2/N) Σ'' f_j T_k(t_j), halved for k = 0 and k = N.
    let mut coeff = DMatrix::zeros(n, n);
    for k in 0..n {
        let scale = if k == 0 || k == big_n { 1.0 / nf } else { 2.0 / nf };
        for j in 0..n {
            let end = if j == 0 || j == big_n { 0.5 } else { 1.0 };
            coeff[(k, j)] = scale * end * (k as f64 * phi[j]).cos();
        }
    }

    // F_k(t) is an antiderivative of T_k, written via t = cos φ.
    let prim = |k: usize, ph: f64| -> f64 {
        let t = ph.cos();
        match k {
            0 => t,
            1 => 0.5 * t * t,
            _ => {
                let kf = k as f64;
                0.5 * (((kf + 1.0) * ph).cos() / (kf + 1.0) - ((kf - 1.0) * ph).cos() / (kf - 1.0))
            }
        }
    };
    let mut eval = DMatrix::zeros(n, n);
    for i in 0..n {
        for k in 0..n {
            // Left end t = −1 corresponds to φ = π.
            eval[(i, k)] = prim(k, phi[i]) - prim(k, PI);
        }
    }
    eval * coeff
}
