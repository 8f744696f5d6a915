use std::f64::consts::PI;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::linalg::C64;

use super::ContourDomain;

/// Nodes and weights on the boundary of a domain such that
/// `H(s) ~ sum_t w_t / (s - z_t) T(z_t)^{-1}` for `s` outside the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    domain: ContourDomain,
    nodes: Vec<C64>,
    weights: Vec<C64>,
}

/// Trapezoidal rule, uniform in the boundary parameter:
/// `z_t = gamma(2 pi t / N)`, `w_t = gamma'(2 pi t / N) / (N i)`.
pub fn build_trapezoid_rule(domain: &ContourDomain, n: usize) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::arg(format!("quadrature needs at least 2 nodes, got {n}")));
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    // gamma'(t) (2 pi / N) / (2 pi i)
    let scale = C64::new(0.0, -1.0 / n as f64);
    for t in 0..n {
        let angle = 2.0 * PI * t as f64 / n as f64;
        nodes.push(domain.gamma(angle));
        weights.push(domain.gamma_prime(angle) * scale);
    }
    Ok(QuadratureRule { domain: *domain, nodes, weights })
}

impl QuadratureRule {
    pub fn domain(&self) -> &ContourDomain {
        &self.domain
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[C64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Cauchy kernel `K[i, t] = w_t / (s_i - z_t)`.
    pub fn kernel(&self, points: &[C64]) -> Array2<C64> {
        Array2::from_shape_fn((points.len(), self.len()), |(i, t)| self.weights[t] / (points[i] - self.nodes[t]))
    }

    /// `sum_t w_t / (s - z_t) f(z_t)` for scalar `f`, in ascending `t`.
    pub fn apply_scalar(&self, s: C64, f: impl Fn(C64) -> C64) -> C64 {
        self.nodes.iter().zip(&self.weights).fold(C64::new(0.0, 0.0), |acc, (&z, &w)| acc + w / (s - z) * f(z))
    }
}
