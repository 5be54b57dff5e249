//! Gauss–Legendre panels: fixed composite rules and adaptive bisection.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values that can be integrated: a vector space with a magnitude for error control.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on P_n from the Tricomi initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<T: QuadValue>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * (w * half);
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// A composite rule: flat lists of absolute nodes and weights over one interval.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PanelRule {
    /// Gauss–Legendre of `order` on each consecutive pair of `breakpoints`.
    pub fn from_breakpoints(breakpoints: &[f64], order: usize) -> Self {
        let gl = GaussLegendre::new(order);
        let mut nodes = Vec::with_capacity(order * breakpoints.len());
        let mut weights = Vec::with_capacity(order * breakpoints.len());
        for pair in breakpoints.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                nodes.push(mid + half * x);
                weights.push(w * half);
            }
        }
        PanelRule { nodes, weights }
    }

    pub fn uniform(a: f64, b: f64, panels: usize, order: usize) -> Self {
        let panels = panels.max(1);
        let bps: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        Self::from_breakpoints(&bps, order)
    }

    /// Panels narrow enough that a phase varying at up to `max_rate` rad per unit advances
    /// at most `PHASE_PER_PANEL` across each one, with at least `min_panels`.
    pub fn oscillatory(a: f64, b: f64, max_rate: f64, min_panels: usize) -> Self {
        let width = b - a;
        let by_phase = (width * max_rate.abs() / PHASE_PER_PANEL).ceil() as usize;
        Self::uniform(a, b, by_phase.max(min_panels), PANEL_ORDER)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<T: QuadValue>(&self, f: impl Fn(f64) -> T) -> T {
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(*x) * *w;
        }
        acc
    }
}

/// Gauss–Legendre order used by every composite rule in the crate.
pub const PANEL_ORDER: usize = 16;
/// Largest phase advance (rad) allowed across one panel of a [`PanelRule::oscillatory`] rule.
pub const PHASE_PER_PANEL: f64 = 6.0;

/// Adaptive bisection: a panel is accepted when its 16-point estimate agrees with the sum of
/// its two halves within `tol` scaled by the panel's share of the interval.
pub fn integrate_adaptive<T: QuadValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<T> {
    integrate_adaptive_from(&f, &[a, b], tol)
}

/// As [`integrate_adaptive`] with initial panels given by `breakpoints`.
pub fn integrate_adaptive_from<T: QuadValue>(
    f: &impl Fn(f64) -> T,
    breakpoints: &[f64],
    tol: f64,
) -> Result<T> {
    let gl = GaussLegendre::new(PANEL_ORDER);
    let a = breakpoints[0];
    let b = *breakpoints.last().expect("at least two breakpoints");
    let total_width = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut stack: Vec<(f64, f64, T, usize)> = breakpoints
        .windows(2)
        .map(|w| (w[0], w[1], gl.integrate(w[0], w[1], f), 0))
        .collect();
    let mut result = T::zero();
    let mut error = 0.0;
    const MAX_DEPTH: usize = 40;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl.integrate(lo, mid, f);
        let right = gl.integrate(mid, hi, f);
        let refined = left + right;
        let diff = (refined - whole).magnitude();
        let budget = tol * ((hi - lo).abs() / total_width);
        if diff <= budget || depth >= MAX_DEPTH {
            result = result + refined;
            error += diff;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    if error > tol && error > 1e-15 * result.magnitude() {
        return Err(Error::Quadrature {
            estimate: result.magnitude(),
            error,
            tolerance: tol,
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_integrate_polynomials_exactly() {
        let gl = GaussLegendre::new(8);
        let w: f64 = gl.weights.iter().sum();
        assert!((w - 2.0).abs() < 1e-14);
        // Degree 15 is the highest exact degree.
        let v = gl.integrate(0.0, 1.0, |x| x.powi(15));
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
        for win in gl.nodes.windows(2) {
            assert!(win[0] < win[1]);
        }
    }

    #[test]
    fn composite_gaussian() {
        let rule = PanelRule::uniform(-10.0, 10.0, 8, PANEL_ORDER);
        let v = rule.integrate(|x: f64| (-x * x).exp());
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_rule_resolves_high_frequency() {
        let omega = 300.0;
        let rule = PanelRule::oscillatory(0.0, 2.0, omega, 4);
        let v = rule.integrate(|x: f64| (omega * x).cos());
        assert!((v - (2.0 * omega).sin() / omega).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_peaks_and_complex_values() {
        let v = integrate_adaptive(|x: f64| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0f64 / 1e-2).atan();
        assert!((v - exact).abs() < 1e-8 * exact);
        let c = integrate_adaptive(|x: f64| Complex64::from_polar(1.0, 5.0 * x), 0.0, 1.0, 1e-12)
            .unwrap();
        let want = (Complex64::from_polar(1.0, 5.0) - 1.0) / Complex64::new(0.0, 5.0);
        assert!((c - want).norm() < 1e-13);
    }

    #[test]
    fn adaptive_reports_non_convergence() {
        // 1/|x| is not integrable at the origin.
        let r = integrate_adaptive(|x: f64| if x == 0.0 { 0.0 } else { 1.0 / x.abs() }, -1.0, 1.0, 1e-12);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
