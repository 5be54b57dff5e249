//! Bessel functions of the first kind, orders 0 and 1, for non-negative arguments.
//!
//! Below `ASYMPTOTIC_FROM` the values come from Miller's backward recurrence normalized with
//! J₀ + 2ΣJ₂ₖ = 1; above it from Hankel's asymptotic expansion truncated at its smallest term.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

const ASYMPTOTIC_FROM: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BesselOrder {
    Zero,
    One,
}

/// J₀(x) or J₁(x). Negative arguments use the parity J_n(−x) = (−1)ⁿ J_n(x).
pub fn bessel_j(order: BesselOrder, x: f64) -> f64 {
    let (j0, j1) = bessel_j01(x.abs());
    match order {
        BesselOrder::Zero => j0,
        BesselOrder::One => {
            if x < 0.0 {
                -j1
            } else {
                j1
            }
        }
    }
}

pub fn j0(x: f64) -> f64 {
    bessel_j(BesselOrder::Zero, x)
}

pub fn j1(x: f64) -> f64 {
    bessel_j(BesselOrder::One, x)
}

/// (J₀(x), J₁(x)) for x ≥ 0.
pub fn bessel_j01(x: f64) -> (f64, f64) {
    if x == 0.0 {
        (1.0, 0.0)
    } else if x < ASYMPTOTIC_FROM {
        miller(x)
    } else {
        (hankel_asymptotic(0, x), hankel_asymptotic(1, x))
    }
}

fn miller(x: f64) -> (f64, f64) {
    // Start well above x so the seeded tail is negligible at double precision.
    let start = 2 * (((x + 30.0 + 6.0 * x.sqrt()) as usize) / 2 + 1);
    let two_over_x = 2.0 / x;
    let mut above = 0.0; // J_{k+1}
    let mut current = 1e-300; // J_k
    let mut even_sum = 0.0;
    let mut j0 = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let below = k as f64 * two_over_x * current - above; // J_{k-1}
        above = current;
        current = below;
        if current.abs() > 1e250 {
            above *= 1e-250;
            current *= 1e-250;
            even_sum *= 1e-250;
            j1 *= 1e-250;
        }
        let order = k - 1;
        if order == 1 {
            j1 = current;
        }
        if order == 0 {
            j0 = current;
        } else if order % 2 == 0 {
            even_sum += current;
        }
    }
    let norm = j0 + 2.0 * even_sum;
    (j0 / norm, j1 / norm)
}

fn hankel_asymptotic(order: u32, x: f64) -> f64 {
    let mu = 4.0 * (order * order) as f64;
    let eight_x = 8.0 * x;
    // a_k = Π_{j=1..k} (μ − (2j−1)²) / (k! (8x)^k); P takes even k with alternating sign, Q odd k.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * eight_x);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let chi = x - (order as f64 / 2.0 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Approximate positive zeros of J₀ (McMahon), enough to place quadrature breakpoints.
pub fn j0_zero_estimate(k: usize) -> f64 {
    let beta = (k as f64 - 0.25) * PI;
    beta + 1.0 / (8.0 * beta) - 31.0 / (384.0 * beta.powi(3))
}
