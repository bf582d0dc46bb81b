//! Tensor-product Gauss-Legendre rule on rectangles.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, applied along both axes.
#[derive(Debug, Clone)]
pub struct GaussLegendre2d {
    rule: Vec<(f64, f64)>,
}

impl GaussLegendre2d {
    pub fn new(points: NonZeroUsize) -> Self {
        let rule = GaussLegendre::new(points).as_node_weight_pairs().to_vec();
        Self { rule }
    }

    pub fn points(&self) -> usize {
        self.rule.len()
    }

    /// Integrates `f(x, y)` over `[x0, x1] x [y0, y1]`.
    ///
    /// Rows are evaluated in parallel but summed in a fixed order, so the
    /// result does not depend on the thread count.
    pub fn integrate<F>(&self, x: (f64, f64), y: (f64, f64), f: F) -> f64
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let (hx, cx) = (0.5 * (x.1 - x.0), 0.5 * (x.1 + x.0));
        let (hy, cy) = (0.5 * (y.1 - y.0), 0.5 * (y.1 + y.0));
        let rows: Vec<f64> = self
            .rule
            .par_iter()
            .map(|&(nx, wx)| {
                let xv = cx + hx * nx;
                let row: f64 = self
                    .rule
                    .iter()
                    .map(|&(ny, wy)| wy * f(xv, cy + hy * ny))
                    .sum();
                wx * row
            })
            .collect();
        hx * hy * rows.iter().sum::<f64>()
    }
}
