//! Double-exponential quadrature on the real line.
//!
//! The sinh-sinh map `t = c + s sinh(pi/2 sinh u)` turns integrands with
//! (at least) exponential decay into doubly-exponentially decaying ones, so
//! the trapezoid rule in `u` converges geometrically in the node count. Nodes
//! beyond the window `|t - c| <= W` are dropped.

use std::f64::consts::FRAC_PI_2;

/// Nodes and weights of one level (`h = 2^{-level}`).
#[derive(Debug, Clone, PartialEq)]
pub struct DeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DeRule {
    pub fn new(center: f64, scale: f64, window: f64, level: u32) -> Self {
        let h = 0.5f64.powi(level as i32);
        let umax = ((window / scale).asinh() / FRAC_PI_2).asinh();
        let m = (umax / h).floor() as i64;
        let mut nodes = Vec::with_capacity(2 * m as usize + 1);
        let mut weights = Vec::with_capacity(2 * m as usize + 1);
        for j in -m..=m {
            let u = j as f64 * h;
            let inner = FRAC_PI_2 * u.sinh();
            nodes.push(center + scale * inner.sinh());
            weights.push(h * scale * FRAC_PI_2 * u.cosh() * inner.cosh());
        }
        DeRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let r = DeRule::new(0.3, 1.0, 30.0, 5);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(t, w)| w * (-(t - 0.3) * (t - 0.3)).exp()).sum();
        assert!((s - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn nodes_stay_in_window() {
        let r = DeRule::new(-1.0, 2.0, 10.0, 6);
        assert!(r.nodes.iter().all(|t| (t + 1.0).abs() <= 10.0 + 1e-12));
        assert_eq!(r.len() % 2, 1);
    }
}
