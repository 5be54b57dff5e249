//! Leap-frog integration of the free Dirac equation with a central-difference Hamiltonian.
//!
//! The recurrence ψ_{n+1} = ψ_{n−1} − 2iΔt H ψ_n uses a hard-wall closure: neighbours outside the
//! grid read as zero. The state keeps two levels, `prev = ψ_{n−1}` and `curr = ψ_n`, so that
//! after construction `curr` is exactly the initial field and `prev` is obtained by a backward
//! bootstrap step.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::Fft3;
use crate::grid::{BispinorField, PositionGrid};
use crate::spectral::mode::{hamiltonian_mode, propagate};
use crate::spinor::{Bispinor, Momentum3};

/// Largest tolerated |norm − initial norm| before a run is aborted.
pub const DEFAULT_NORM_TOLERANCE: f64 = 1e-3;
/// Largest tolerated fraction of the norm in the outer node layer at t = 0.
pub const BOUNDARY_LIMIT: f64 = 1e-6;
/// Fraction of the bound below used when `dt = "auto"`.
pub const AUTO_DT_FACTOR: f64 = 0.5;

fn uniform_spacing(grid: &PositionGrid) -> Result<f64> {
    if !grid.is_uniform() {
        return Err(Error::Unsupported(format!(
            "the stability bound is defined for equal spacings only, got {:?}",
            grid.spacing
        )));
    }
    Ok(grid.spacing[0])
}

/// d⁴(1 − Δt²) − 2(dΔt)² − 4Δt² for bin size d; positive means stable by the plane-wave analysis.
pub fn stability_margin(grid: &PositionGrid, dt: f64) -> Result<f64> {
    let d = uniform_spacing(grid)?;
    Ok(margin(d, dt))
}

fn margin(d: f64, dt: f64) -> f64 {
    let d2 = d * d;
    d2 * d2 * (1.0 - dt * dt) - 2.0 * d2 * dt * dt - 4.0 * dt * dt
}

/// Δt at which the margin vanishes: √(d⁴ / (d⁴ + 2d² + 4)).
pub fn max_stable_dt(d: f64) -> f64 {
    let d2 = d * d;
    (d2 * d2 / (d2 * d2 + 2.0 * d2 + 4.0)).sqrt()
}

/// Default time step: half the bound above.
pub fn auto_dt(grid: &PositionGrid) -> Result<f64> {
    Ok(AUTO_DT_FACTOR * max_stable_dt(uniform_spacing(grid)?))
}

/// Largest |E| of the discrete operator, √(1 + Σ_a max_k sin²(k h_a)/h_a²), over the grid's modes.
pub fn lattice_max_energy(grid: &PositionGrid) -> f64 {
    let ks = grid.wavenumbers();
    let mut e2 = 1.0;
    for a in 0..3 {
        let h = grid.spacing[a];
        e2 += ks[a]
            .iter()
            .map(|k| ((k * h).sin() / h).powi(2))
            .fold(0.0, f64::max);
    }
    e2.sqrt()
}

/// Δt above which the leap-frog recurrence has growing modes on this grid: 1 / E_max.
pub fn lattice_critical_dt(grid: &PositionGrid) -> f64 {
    1.0 / lattice_max_energy(grid)
}

/// H acting on one node from its six neighbours (zero outside the grid).
#[inline]
fn stencil(src: &[Bispinor], grid: &PositionGrid, i: usize, j: usize, k: usize, inv2h: [f64; 3]) -> Bispinor {
    let [nx, ny, nz] = grid.n;
    let idx = grid.index(i, j, k);
    let diff = |plus: Option<usize>, minus: Option<usize>, s: f64| -> Bispinor {
        let p = plus.map(|q| src[q]).unwrap_or(Bispinor::ZERO);
        let m = minus.map(|q| src[q]).unwrap_or(Bispinor::ZERO);
        (p - m) * s
    };
    let sx = ny * nz;
    let dx = diff(
        (i + 1 < nx).then(|| idx + sx),
        (i > 0).then(|| idx - sx),
        inv2h[0],
    );
    let dy = diff(
        (j + 1 < ny).then(|| idx + nz),
        (j > 0).then(|| idx - nz),
        inv2h[1],
    );
    let dz = diff((k + 1 < nz).then(|| idx + 1), (k > 0).then(|| idx - 1), inv2h[2]);
    let i1 = Complex64::new(0.0, 1.0);
    // S = α_x Dx + α_y Dy + α_z Dz; H ψ = −i S + β ψ.
    let s = [
        dx.0[3] - i1 * dy.0[3] + dz.0[2],
        dx.0[2] + i1 * dy.0[2] - dz.0[3],
        dx.0[1] - i1 * dy.0[1] + dz.0[0],
        dx.0[0] + i1 * dy.0[0] - dz.0[1],
    ];
    let psi = src[idx];
    Bispinor([
        -i1 * s[0] + psi.0[0],
        -i1 * s[1] + psi.0[1],
        -i1 * s[2] - psi.0[2],
        -i1 * s[3] - psi.0[3],
    ])
}

fn half_inverse_spacing(grid: &PositionGrid) -> [f64; 3] {
    grid.spacing.map(|h| 0.5 / h)
}

/// Central-difference Dirac Hamiltonian with zero exterior values.
pub fn hamiltonian_apply(field: &BispinorField) -> BispinorField {
    let grid = field.grid;
    let [_, ny, nz] = grid.n;
    let inv2h = half_inverse_spacing(&grid);
    let mut out = BispinorField::zeros(grid, field.time);
    out.data
        .par_chunks_mut(ny * nz)
        .enumerate()
        .for_each(|(i, slab)| {
            for j in 0..ny {
                for k in 0..nz {
                    slab[j * nz + k] = stencil(&field.data, &grid, i, j, k, inv2h);
                }
            }
        });
    out
}

/// How Ψ(±Δt) is produced from Ψ(0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Bootstrap {
    /// ψ − iΔt Hψ − (Δt²/2) H²ψ with the stencil Hamiltonian.
    Taylor,
    /// Physical leap-frog mode of the discrete operator, (√(1 − Δt²E_h²) − iΔt H_h(k)) ψ(k),
    /// applied per Fourier mode. Starts the recurrence without a parasitic component.
    #[default]
    Lattice,
    /// Exact continuum evolution e^{−iH(k)Δt} per Fourier mode.
    Spectral,
}

/// Ψ(Δt) from Ψ(0); `dt` may be negative.
pub fn bootstrap_first_step(field0: &BispinorField, dt: f64, method: Bootstrap) -> BispinorField {
    let mut out = match method {
        Bootstrap::Taylor => {
            let h1 = hamiltonian_apply(field0);
            let h2 = hamiltonian_apply(&h1);
            let a = Complex64::new(0.0, -dt);
            let b = -0.5 * dt * dt;
            let data = field0
                .data
                .iter()
                .zip(h1.data.iter().zip(&h2.data))
                .map(|(p, (q, r))| *p + *q * a + *r * b)
                .collect();
            BispinorField {
                grid: field0.grid,
                time: field0.time,
                data,
            }
        }
        Bootstrap::Lattice => per_mode(field0, |s, k| {
            let hk = lattice_symbol(k, &field0.grid.spacing);
            let e2 = hk.norm_sqr() + 1.0;
            let c = (1.0 - dt * dt * e2).max(0.0).sqrt();
            let h = hamiltonian_mode(hk, s);
            Bispinor(std::array::from_fn(|i| s.0[i] * c + h.0[i] * Complex64::new(0.0, -dt)))
        }),
        Bootstrap::Spectral => per_mode(field0, |s, k| propagate(s, k, dt)),
    };
    out.time = field0.time + dt;
    out
}

fn lattice_symbol(k: Momentum3, h: &[f64; 3]) -> Momentum3 {
    Momentum3(std::array::from_fn(|a| (k.0[a] * h[a]).sin() / h[a]))
}

fn per_mode(field: &BispinorField, f: impl Fn(&Bispinor, Momentum3) -> Bispinor + Sync) -> BispinorField {
    let grid = field.grid;
    let fft = Fft3::new(grid.n);
    let ks = grid.wavenumbers();
    let mut buf = field.clone();
    for c in 0..4 {
        let mut comp = buf.component(c);
        fft.forward(&mut comp);
        buf.set_component(c, &comp);
    }
    let scale = 1.0 / grid.len() as f64;
    buf.data.par_iter_mut().enumerate().for_each(|(idx, s)| {
        let [i, j, k] = grid.unravel(idx);
        *s = f(s, Momentum3([ks[0][i], ks[1][j], ks[2][k]])) * scale;
    });
    for c in 0..4 {
        let mut comp = buf.component(c);
        fft.inverse(&mut comp);
        buf.set_component(c, &comp);
    }
    buf
}

/// Construction options for [`LeapFrogState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeapFrogOptions {
    pub bootstrap: Bootstrap,
    pub norm_tolerance: f64,
    /// Reject time steps with a non-positive stability margin (needs equal spacings).
    pub enforce_stability: bool,
}

impl Default for LeapFrogOptions {
    fn default() -> Self {
        LeapFrogOptions {
            bootstrap: Bootstrap::Lattice,
            norm_tolerance: DEFAULT_NORM_TOLERANCE,
            enforce_stability: true,
        }
    }
}

/// Two time levels plus bookkeeping.
#[derive(Debug, Clone)]
pub struct LeapFrogState {
    pub psi_prev: BispinorField,
    pub psi_curr: BispinorField,
    pub dt: f64,
    pub step_count: usize,
    /// Discrete norm of ψ_0, ψ_1, …, ψ_{step_count}.
    pub norm_history: Vec<f64>,
    pub norm_tolerance: f64,
}

impl LeapFrogState {
    pub fn new(field0: BispinorField, dt: f64, options: LeapFrogOptions) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidInput(format!("time step must be > 0, got {dt}")));
        }
        if options.enforce_stability {
            let m = stability_margin(&field0.grid, dt)?;
            if m <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "stability margin d^4(1-dt^2) - 2(d dt)^2 - 4 dt^2 = {m:.6} is not positive for dt = {dt}"
                )));
            }
        }
        let boundary = field0.boundary_mass(1);
        if boundary > BOUNDARY_LIMIT {
            return Err(Error::BoundaryMass {
                mass: boundary,
                limit: BOUNDARY_LIMIT,
            });
        }
        let mut prev = bootstrap_first_step(&field0, -dt, options.bootstrap);
        prev.time = field0.time - dt;
        let n0 = field0.norm();
        Ok(LeapFrogState {
            psi_prev: prev,
            psi_curr: field0,
            dt,
            step_count: 0,
            norm_history: vec![n0],
            norm_tolerance: options.norm_tolerance,
        })
    }

    pub fn time(&self) -> f64 {
        self.psi_curr.time
    }

    pub fn current(&self) -> &BispinorField {
        &self.psi_curr
    }

    /// Advances one level: ψ_{n+1} = ψ_{n−1} − 2iΔt H ψ_n.
    pub fn step(&mut self) -> Result<()> {
        let grid = self.psi_curr.grid;
        let [_, ny, nz] = grid.n;
        let inv2h = half_inverse_spacing(&grid);
        let k = Complex64::new(0.0, -2.0 * self.dt);
        let curr = &self.psi_curr.data;
        let slab_norms: Vec<f64> = self
            .psi_prev
            .data
            .par_chunks_mut(ny * nz)
            .enumerate()
            .map(|(i, slab)| {
                let mut acc = 0.0;
                for j in 0..ny {
                    for kk in 0..nz {
                        let o = j * nz + kk;
                        let v = slab[o] + stencil(curr, &grid, i, j, kk, inv2h) * k;
                        acc += v.norm_sqr();
                        slab[o] = v;
                    }
                }
                acc
            })
            .collect();
        let norm = slab_norms.iter().sum::<f64>() * grid.cell_volume();
        std::mem::swap(&mut self.psi_prev, &mut self.psi_curr);
        self.psi_curr.time = self.psi_prev.time + self.dt;
        self.step_count += 1;
        self.norm_history.push(norm);
        let deviation = (norm - self.norm_history[0]).abs();
        if !(deviation <= self.norm_tolerance) {
            return Err(Error::Instability {
                step: self.step_count,
                time: self.psi_curr.time,
                norm,
                deviation,
            });
        }
        Ok(())
    }

    /// Largest |norm − norm₀| recorded so far.
    pub fn max_norm_deviation(&self) -> f64 {
        let n0 = self.norm_history[0];
        self.norm_history.iter().map(|n| (n - n0).abs()).fold(0.0, f64::max)
    }
}

/// Output of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<BispinorField>,
    pub norms: Vec<f64>,
    /// First checked step at which the outer layer held more than [`BOUNDARY_LIMIT`] of the norm.
    pub boundary_reached: Option<usize>,
}

/// Steps `n_steps` times, copying out ψ at the listed step indices (0 = current state).
pub fn run(state: &mut LeapFrogState, n_steps: usize, schedule: &[usize]) -> Result<RunOutput> {
    let start = state.step_count;
    let mut snapshots = Vec::new();
    let mut boundary_reached = None;
    let check_every = 25;
    if schedule.contains(&0) {
        snapshots.push(state.psi_curr.clone());
    }
    for n in 1..=n_steps {
        state.step()?;
        let scheduled = schedule.contains(&n);
        if scheduled {
            snapshots.push(state.psi_curr.clone());
        }
        if boundary_reached.is_none()
            && (scheduled || n % check_every == 0 || n == n_steps)
            && state.psi_curr.boundary_mass(1) > BOUNDARY_LIMIT
        {
            boundary_reached = Some(start + n);
        }
    }
    Ok(RunOutput {
        snapshots,
        norms: state.norm_history.clone(),
        boundary_reached,
    })
}
