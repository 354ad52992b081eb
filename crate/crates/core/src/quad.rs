//! Composite Gauss-Legendre quadrature.

use crate::error::{IcecError, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Compute an `order`-point rule by Newton iteration on P_n.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Chebyshev-based initial guess for the i-th root.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // Legendre recurrence for P_n(x) and P'_n(x).
                let mut p0 = 1.0;
                let mut p1 = x;
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }
}

/// Composite Gauss-Legendre rule over (a, b] split into equal panels.
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub a: f64,
    pub b: f64,
    pub panels: usize,
    pub order: usize,
    /// Mapped nodes over all panels, ascending.
    pub nodes: Vec<f64>,
    /// Matching weights (include the panel Jacobian).
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, panels: usize, order: usize) -> Self {
        assert!(b > a && panels >= 1);
        let base = GaussLegendre::new(order);
        let h = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (x, w) in base.nodes.iter().zip(&base.weights) {
                nodes.push(mid + 0.5 * h * x);
                weights.push(0.5 * h * w);
            }
        }
        Self {
            a,
            b,
            panels,
            order,
            nodes,
            weights,
        }
    }

    /// Same interval and order with twice the panels.
    pub fn refined(&self) -> Self {
        Self::new(self.a, self.b, self.panels * 2, self.order)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Integrate with panel doubling until two successive estimates agree to
/// `rel_tol` relative or `abs_tol` absolute (the latter covers integrals
/// that are genuinely zero, e.g. orthogonality overlaps). Errors after
/// `max_refine` doublings, reporting the last two estimates.
#[allow(clippy::too_many_arguments)]
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    order: usize,
    start_panels: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_refine: usize,
) -> Result<f64> {
    let mut rule = CompositeRule::new(a, b, start_panels, order);
    let mut prev = rule.integrate(&mut f);
    for _ in 0..max_refine {
        rule = rule.refined();
        let cur = rule.integrate(&mut f);
        let scale = cur.abs().max(prev.abs());
        if (cur - prev).abs() <= rel_tol * scale + abs_tol {
            return Ok(cur);
        }
        prev = cur;
    }
    let cur = rule.refined().integrate(&mut f);
    if (cur - prev).abs() <= rel_tol * cur.abs().max(prev.abs()) + abs_tol {
        return Ok(cur);
    }
    Err(IcecError::Numerics(format!(
        "quadrature did not converge: last estimates {prev:.12e}, {cur:.12e}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // 8-point GL is exact for degree <= 15.
        let rule = CompositeRule::new(0.0, 1.0, 1, 8);
        let v = rule.integrate(|x| x.powi(15));
        assert!((v - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_integral() {
        let rule = CompositeRule::new(0.0, 10.0, 64, 8);
        let v = rule.integrate(|x| (20.0 * x).sin());
        let exact = (1.0 - (200.0f64).cos()) / 20.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn adaptive_converges() {
        let v = integrate_adaptive(|x: f64| x.exp(), 0.0, 1.0, 8, 2, 1e-10, 0.0, 10).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }
}
