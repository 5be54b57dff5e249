//! Dirac-representation matrix algebra and the free-particle spinor basis.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const O: Complex64 = Complex64::new(0.0, 0.0);
const R: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Cartesian axis index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Four complex amplitudes, upper pair first.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Bispinor(pub [Complex64; 4]);

impl Bispinor {
    pub const ZERO: Bispinor = Bispinor([O; 4]);

    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64, c4: Complex64) -> Self {
        Bispinor([c1, c2, c3, c4])
    }

    pub fn from_real(c: [f64; 4]) -> Self {
        Bispinor(c.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn inner(&self, other: &Bispinor) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn conj(&self) -> Bispinor {
        Bispinor(self.0.map(|c| c.conj()))
    }

    pub fn scale(&self, s: Complex64) -> Bispinor {
        Bispinor(self.0.map(|c| c * s))
    }

    /// Returns the unit-norm copy, or an error for a (numerically) zero spinor.
    pub fn normalized(&self) -> Result<Bispinor> {
        let n = self.norm();
        if !n.is_finite() || n <= f64::MIN_POSITIVE {
            return Err(Error::InvalidInput(
                "polarization bispinor has zero norm".into(),
            ));
        }
        Ok(*self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Index<usize> for Bispinor {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Bispinor {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for Bispinor {
    type Output = Bispinor;
    fn add(self, rhs: Bispinor) -> Bispinor {
        Bispinor(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for Bispinor {
    fn add_assign(&mut self, rhs: Bispinor) {
        for i in 0..4 {
            self.0[i] += rhs.0[i];
        }
    }
}

impl Sub for Bispinor {
    type Output = Bispinor;
    fn sub(self, rhs: Bispinor) -> Bispinor {
        Bispinor(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Bispinor {
    type Output = Bispinor;
    fn neg(self) -> Bispinor {
        Bispinor(self.0.map(|c| -c))
    }
}

impl Mul<f64> for Bispinor {
    type Output = Bispinor;
    fn mul(self, s: f64) -> Bispinor {
        Bispinor(self.0.map(|c| c * s))
    }
}

impl Mul<Complex64> for Bispinor {
    type Output = Bispinor;
    fn mul(self, s: Complex64) -> Bispinor {
        self.scale(s)
    }
}

/// Momentum in units of mc.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Momentum3(pub [f64; 3]);

impl Momentum3 {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Self {
        Momentum3([p1, p2, p3])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn component(&self, axis: Axis) -> f64 {
        self.0[axis.index()]
    }
}

/// A 4×4 complex matrix acting on bispinors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrix(pub [[Complex64; 4]; 4]);

impl DiracMatrix {
    pub const IDENTITY: DiracMatrix =
        DiracMatrix([[R, O, O, O], [O, R, O, O], [O, O, R, O], [O, O, O, R]]);

    pub const ALPHA_X: DiracMatrix =
        DiracMatrix([[O, O, O, R], [O, O, R, O], [O, R, O, O], [R, O, O, O]]);

    pub const ALPHA_Y: DiracMatrix = DiracMatrix([
        [O, O, O, Complex64::new(0.0, -1.0)],
        [O, O, I, O],
        [O, Complex64::new(0.0, -1.0), O, O],
        [I, O, O, O],
    ]);

    pub const ALPHA_Z: DiracMatrix = DiracMatrix([
        [O, O, R, O],
        [O, O, O, Complex64::new(-1.0, 0.0)],
        [R, O, O, O],
        [O, Complex64::new(-1.0, 0.0), O, O],
    ]);

    pub const BETA: DiracMatrix = DiracMatrix([
        [R, O, O, O],
        [O, R, O, O],
        [O, O, Complex64::new(-1.0, 0.0), O],
        [O, O, O, Complex64::new(-1.0, 0.0)],
    ]);

    pub const SIGMA_X: DiracMatrix =
        DiracMatrix([[O, R, O, O], [R, O, O, O], [O, O, O, R], [O, O, R, O]]);

    pub const SIGMA_Y: DiracMatrix = DiracMatrix([
        [O, Complex64::new(0.0, -1.0), O, O],
        [I, O, O, O],
        [O, O, O, Complex64::new(0.0, -1.0)],
        [O, O, I, O],
    ]);

    pub const SIGMA_Z: DiracMatrix = DiracMatrix([
        [R, O, O, O],
        [O, Complex64::new(-1.0, 0.0), O, O],
        [O, O, R, O],
        [O, O, O, Complex64::new(-1.0, 0.0)],
    ]);

    pub fn alpha(axis: Axis) -> DiracMatrix {
        match axis {
            Axis::X => Self::ALPHA_X,
            Axis::Y => Self::ALPHA_Y,
            Axis::Z => Self::ALPHA_Z,
        }
    }

    pub fn sigma(axis: Axis) -> DiracMatrix {
        match axis {
            Axis::X => Self::SIGMA_X,
            Axis::Y => Self::SIGMA_Y,
            Axis::Z => Self::SIGMA_Z,
        }
    }

    /// Free Hamiltonian α·p + β.
    pub fn hamiltonian(p: Momentum3) -> DiracMatrix {
        let [p1, p2, p3] = p.0;
        Self::ALPHA_X * p1 + Self::ALPHA_Y * p2 + Self::ALPHA_Z * p3 + Self::BETA
    }

    pub fn dagger(&self) -> DiracMatrix {
        DiracMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i].conj())
        }))
    }

    /// Largest absolute entry; used as a matrix norm in checks.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Expectation ⟨s|M|s⟩.
    pub fn expectation(&self, s: &Bispinor) -> Complex64 {
        s.inner(&apply_matrix(self, s))
    }
}

impl Add for DiracMatrix {
    type Output = DiracMatrix;
    fn add(self, rhs: DiracMatrix) -> DiracMatrix {
        DiracMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Sub for DiracMatrix {
    type Output = DiracMatrix;
    fn sub(self, rhs: DiracMatrix) -> DiracMatrix {
        DiracMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])
        }))
    }
}

impl Mul<f64> for DiracMatrix {
    type Output = DiracMatrix;
    fn mul(self, s: f64) -> DiracMatrix {
        DiracMatrix(self.0.map(|row| row.map(|c| c * s)))
    }
}

impl Mul for DiracMatrix {
    type Output = DiracMatrix;
    fn mul(self, rhs: DiracMatrix) -> DiracMatrix {
        DiracMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum())
        }))
    }
}

/// Ordinary matrix–vector product.
pub fn apply_matrix(m: &DiracMatrix, s: &Bispinor) -> Bispinor {
    Bispinor(std::array::from_fn(|i| {
        (0..4).map(|k| m.0[i][k] * s.0[k]).sum()
    }))
}

/// Relativistic energy λ_p = √(p² + 1).
pub fn energy(p: Momentum3) -> f64 {
    (p.norm_sqr() + 1.0).sqrt()
}

/// Free Dirac spinor U_r(p) in the Dirac representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeSpinor {
    /// Branch index 1..=4; 1, 2 carry energy +λ_p and 3, 4 carry −λ_p.
    pub r: usize,
    pub p: Momentum3,
    pub u: Bispinor,
    /// γ = 1/(λ_p + 1).
    pub gamma_p: f64,
    /// N = √((λ_p + 1)/(2λ_p)).
    pub n_p: f64,
}

impl FreeSpinor {
    /// Energy of this branch, ±λ_p.
    pub fn energy(&self) -> f64 {
        if self.r <= 2 {
            energy(self.p)
        } else {
            -energy(self.p)
        }
    }
}

fn kinematic_factors(p: Momentum3) -> (f64, f64, f64) {
    let lam = energy(p);
    let gamma = 1.0 / (lam + 1.0);
    let n = ((lam + 1.0) / (2.0 * lam)).sqrt();
    (lam, gamma, n)
}

/// Builds U_r(p). Panics if `r` is outside 1..=4.
pub fn free_spinor(r: usize, p: Momentum3) -> FreeSpinor {
    let (_, g, n) = kinematic_factors(p);
    let [p1, p2, p3] = p.0;
    let plus = Complex64::new(p1, p2) * g;
    let minus = Complex64::new(p1, -p2) * g;
    let p3g = Complex64::new(p3 * g, 0.0);
    let u = match r {
        1 => Bispinor([R, O, p3g, plus]),
        2 => Bispinor([O, R, minus, -p3g]),
        3 => Bispinor([-p3g, -plus, R, O]),
        4 => Bispinor([-minus, p3g, O, R]),
        _ => panic!("free spinor branch index must be in 1..=4, got {r}"),
    };
    FreeSpinor {
        r,
        p,
        u: u * n,
        gamma_p: g,
        n_p: n,
    }
}

/// All four branches at momentum `p`.
pub fn free_spinors(p: Momentum3) -> [FreeSpinor; 4] {
    std::array::from_fn(|i| free_spinor(i + 1, p))
}

/// Expansion coefficients C_r of the normalized polarization in the free spinor basis at `p`,
/// with the envelope factor f(p) left out.
pub fn project_coefficients(phi: &Bispinor, p: Momentum3) -> Result<[Complex64; 4]> {
    let phi = phi.normalized()?;
    let (_, g, n) = kinematic_factors(p);
    let [p1, p2, p3] = p.0;
    let [f1, f2, f3, f4] = phi.0;
    let plus = Complex64::new(p1, p2) * g;
    let minus = Complex64::new(p1, -p2) * g;
    let p3g = p3 * g;
    Ok([
        (f1 + minus * f4 + f3 * p3g) * n,
        (f2 + plus * f3 - f4 * p3g) * n,
        (-f1 * p3g - minus * f2 + f3) * n,
        (-plus * f1 + f2 * p3g + f4) * n,
    ])
}

/// Matrix element U_i† α_μ U_j of the velocity operator, evaluated by explicit matrix algebra.
///
/// Within one energy branch this is ±p_μ/λ_p δ_ij; elements between branches are the
/// interference terms responsible for Zitterbewegung and are generally complex.
pub fn velocity_matrix_element(i: usize, j: usize, mu: Axis, p: Momentum3) -> Complex64 {
    let ui = free_spinor(i, p).u;
    let uj = free_spinor(j, p).u;
    ui.inner(&apply_matrix(&DiracMatrix::alpha(mu), &uj))
}
