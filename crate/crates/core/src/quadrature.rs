//! Gauss-Legendre rules.

use gauss_quad::legendre::GaussLegendre;
use std::num::NonZeroUsize;

/// Nodes (ascending) and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let degree = NonZeroUsize::new(n).expect("rule needs at least one node");
    let mut pairs = GaussLegendre::new(degree).as_node_weight_pairs().to_vec();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Composite rule: an `order`-point rule on each interval between
/// consecutive `breakpoints`.
pub fn composite(breakpoints: &[f64], order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let mut nodes = Vec::with_capacity(order * breakpoints.len());
    let mut weights = Vec::with_capacity(order * breakpoints.len());
    for pair in breakpoints.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let half = (b - a) / 2.0;
        let mid = (a + b) / 2.0;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + half * xi);
            weights.push(half * wi);
        }
    }
    (nodes, weights)
}
