//! Composite Gauss-Legendre quadrature with panel doubling.

use num_traits::Float;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Points per panel.
pub const PANEL_POINTS: usize = 20;

/// Nodes and weights on `[-1, 1]`, from Newton iteration on `P_n`.
pub fn gauss_legendre<T: Float>(n: usize) -> Vec<(T, T)> {
    let c = |x: f64| T::from(x).unwrap();
    let one = T::one();
    let two = c(2.0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi initial guess
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5);
        let mut x = c(theta.cos());
        let mut dp = T::zero();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * c(4.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != T::zero() {
            dp = d;
        }
        out.push((x, two / ((one - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

fn legendre_with_derivative<T: Float>(n: usize, x: T) -> (T, T) {
    let one = T::one();
    let mut p0 = one;
    let mut p1 = x;
    if n == 0 {
        return (one, T::zero());
    }
    for k in 2..=n {
        let kf = T::from(k).unwrap();
        let p2 = ((kf + kf - one) * x * p1 - (kf - one) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from(n).unwrap();
    (p1, nf * (x * p1 - p0) / (x * x - one))
}

/// Adaptive integrator: `panels` equal panels on `[a, b]`, doubled until two
/// successive estimates agree to `tol` (absolute, scaled by `max(1, |I|)`).
#[derive(Clone, Debug)]
pub struct Integrator {
    nodes: Vec<(f64, f64)>,
    pub tol: f64,
    pub start_panels: usize,
    pub max_panels: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator { nodes: gauss_legendre(PANEL_POINTS), tol: 1e-12, start_panels: 8, max_panels: 1 << 14 }
    }
}

impl Integrator {
    fn fixed<F: Fn(f64) -> f64 + Sync>(&self, f: &F, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let parts: Vec<f64> = (0..panels)
            .into_par_iter()
            .map(|j| {
                let lo = a + h * j as f64;
                let mid = lo + h / 2.0;
                self.nodes.iter().map(|&(x, w)| w * f(mid + h / 2.0 * x)).sum::<f64>() * h / 2.0
            })
            .collect();
        // summed in panel order so results do not depend on scheduling
        parts.iter().sum()
    }

    pub fn integrate<F: Fn(f64) -> f64 + Sync>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        let mut panels = self.start_panels;
        let mut prev = self.fixed(&f, a, b, panels);
        while panels < self.max_panels {
            panels *= 2;
            let cur = self.fixed(&f, a, b, panels);
            if !cur.is_finite() {
                return Err(Error::QuadratureNoConvergence(format!("non-finite estimate on [{a}, {b}]")));
            }
            if (cur - prev).abs() < self.tol * cur.abs().max(1.0) {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::QuadratureNoConvergence(format!("{panels} panels on [{a}, {b}]")))
    }
}

/// First point past which `bound` stays below `eps`, scanned in steps of
/// `step`; the bound must also be decreasing there.
pub fn tail_cutoff<F: Fn(f64) -> f64>(bound: F, eps: f64, step: f64, limit: f64) -> Result<f64> {
    let mut t = step;
    let mut prev = bound(0.0);
    while t <= limit {
        let b = bound(t);
        if b < eps && b <= prev {
            return Ok(t);
        }
        prev = b;
        t += step;
    }
    Err(Error::QuadratureNoConvergence(format!("integrand bound still above {eps} at {limit}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let nodes = gauss_legendre::<f64>(PANEL_POINTS);
        let wsum: f64 = nodes.iter().map(|p| p.1).sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // x^38 is the highest degree integrated exactly
        let i: f64 = nodes.iter().map(|&(x, w)| w * x.powi(38)).sum();
        assert!((i - 2.0 / 39.0).abs() < 1e-14);
        let n32 = gauss_legendre::<f32>(5);
        let s: f32 = n32.iter().map(|&(x, w)| w * x * x).sum();
        assert!((s - 2.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn gaussian_integral() {
        let q = Integrator::default();
        let v = q.integrate(|x| (-x * x).exp(), -10.0, 10.0).unwrap();
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn exponential_moment() {
        // int_0^inf r^2 4 e^{-2r} dr = 1
        let q = Integrator::default();
        let t = tail_cutoff(|r| 4.0 * r * r * (-2.0 * r).exp(), 1e-16, 0.5, 1e4).unwrap();
        let v = q.integrate(|r| 4.0 * r * r * (-2.0 * r).exp(), 0.0, t).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stalls_are_reported() {
        let q = Integrator { max_panels: 16, ..Integrator::default() };
        let r = q.integrate(|x| (1.0 / x).sin(), 1e-9, 1.0);
        assert!(matches!(r, Err(Error::QuadratureNoConvergence(_))));
    }
}
