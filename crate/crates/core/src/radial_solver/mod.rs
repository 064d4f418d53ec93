//! Independent heat-flow oracles: radial Crank-Nicolson on Euclidean and
//! hyperbolic space, exact Fourier evolution on the circle and torus.
//!
//! The radial scheme is a cell-centred finite-volume discretization of
//! w u_t = (w u_r)_r with w the volume weight, zero flux at both ends.
//! It conserves the weighted mass exactly and is second order in dr and dt.

mod periodic;

pub use periodic::{evolve_periodic, PeriodicSolution};

use crate::error::{contract, numerical};
use crate::spaces::{volume_weight, ModelSpace};
use crate::tridiag::Tridiag;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub dr: f64,
    pub dt: f64,
}

impl RadialGrid {
    pub const DEFAULT_R_MIN: f64 = 1e-3;

    pub fn new(r_min: f64, r_max: f64, dr: f64, dt: f64) -> Result<Self> {
        let g = RadialGrid { r_min, r_max, dr, dt };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min) {
            return contract("need 0 < r_min < r_max");
        }
        if !(self.dr > 0.0 && self.dt > 0.0) {
            return contract("need dr > 0 and dt > 0");
        }
        if self.dt > self.dr {
            return contract("need dt <= dr");
        }
        if (self.r_max - self.r_min) / self.dr < 3.0 {
            return contract("grid needs at least 3 cells");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RadialSolution {
    /// Cell centres.
    pub r: Vec<f64>,
    /// Cell volumes (weighted).
    pub volumes: Vec<f64>,
    pub times: Vec<f64>,
    pub snapshots: Vec<Vec<f64>>,
    /// Weighted mass per snapshot.
    pub masses: Vec<f64>,
    /// Smallest value seen at any snapshot.
    pub min_value: f64,
}

impl RadialSolution {
    /// Index of the cell centre nearest to r.
    pub fn nearest(&self, r: f64) -> usize {
        let dr = self.r[1] - self.r[0];
        (((r - self.r[0]) / dr).round().max(0.0) as usize).min(self.r.len() - 1)
    }

    /// Linear interpolation between cell centres.
    pub fn value(&self, snapshot: usize, r: f64) -> f64 {
        let u = &self.snapshots[snapshot];
        let dr = self.r[1] - self.r[0];
        let x = ((r - self.r[0]) / dr).clamp(0.0, (self.r.len() - 1) as f64);
        let i = (x.floor() as usize).min(self.r.len() - 2);
        let a = x - i as f64;
        (1.0 - a) * u[i] + a * u[i + 1]
    }
}

/// Three-point Gauss-Legendre on [a, b].
fn cell_integral<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let x = h * (0.6f64).sqrt();
    h * (5.0 * f(c - x) + 8.0 * f(c) + 5.0 * f(c + x)) / 9.0
}

fn evolve_cells(
    space: &ModelSpace,
    init: &dyn Fn(f64) -> f64,
    grid: &RadialGrid,
    t_from: f64,
    t_to: f64,
    record: &[f64],
) -> Result<RadialSolution> {
    if !space.is_radial() {
        return contract("radial solver needs Euclidean or hyperbolic space");
    }
    grid.validate()?;
    if !(t_to >= t_from && t_from >= 0.0) {
        return contract("need 0 <= t_from <= t_to");
    }
    let mut stops: Vec<f64> = record.to_vec();
    if stops.windows(2).any(|w| w[1] < w[0]) || stops.iter().any(|&t| t < t_from || t > t_to) {
        return contract("record times must be sorted and inside [t_from, t_to]");
    }
    stops.push(t_to);

    let n = ((grid.r_max - grid.r_min) / grid.dr).round() as usize;
    let dr = (grid.r_max - grid.r_min) / n as f64;
    let face = |i: usize| grid.r_min + i as f64 * dr;
    let r: Vec<f64> = (0..n).map(|i| face(i) + 0.5 * dr).collect();
    let w = |x: f64| volume_weight(space, x).expect("radial space");
    let volumes: Vec<f64> = (0..n).map(|i| cell_integral(w, face(i), face(i + 1))).collect();
    // conductances on interior faces; the two boundary faces carry no flux
    let cond: Vec<f64> = (0..=n)
        .map(|i| if i == 0 || i == n { 0.0 } else { w(face(i)) / dr })
        .collect();

    let mut u: Vec<f64> = r.iter().map(|&x| init(x)).collect();
    if let Some(bad) = u.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return contract(format!("initial data must be positive and finite (r = {})", r[bad]));
    }

    let mass = |u: &[f64]| u.iter().zip(&volumes).map(|(a, b)| a * b).sum::<f64>();
    let mut sol = RadialSolution {
        r: r.clone(),
        volumes: volumes.clone(),
        times: vec![t_from],
        snapshots: vec![u.clone()],
        masses: vec![mass(&u)],
        min_value: u.iter().cloned().fold(f64::INFINITY, f64::min),
    };

    let mut t = t_from;
    let mut rhs = vec![0.0; n];
    let mut cached: Option<(f64, Tridiag)> = None;
    for &stop in &stops {
        let span = stop - t;
        if span > 0.0 {
            let steps = (span / grid.dt).ceil().max(1.0) as usize;
            let tau = span / steps as f64;
            let rebuild = cached.as_ref().is_none_or(|(c, _)| (c - tau).abs() > 1e-15 * tau);
            if rebuild {
                let sub: Vec<f64> = (0..n).map(|i| -0.5 * cond[i]).collect();
                let sup: Vec<f64> = (0..n).map(|i| -0.5 * cond[i + 1]).collect();
                let diag: Vec<f64> = (0..n)
                    .map(|i| volumes[i] / tau + 0.5 * (cond[i] + cond[i + 1]))
                    .collect();
                cached = Some((tau, Tridiag::new(&sub, &diag, &sup)));
            }
            let lu = &cached.as_ref().expect("factorized").1;
            for _ in 0..steps {
                for i in 0..n {
                    let left = if i > 0 { cond[i] * (u[i - 1] - u[i]) } else { 0.0 };
                    let right = if i + 1 < n { cond[i + 1] * (u[i + 1] - u[i]) } else { 0.0 };
                    rhs[i] = volumes[i] / tau * u[i] + 0.5 * (left + right);
                }
                lu.solve(&mut rhs);
                std::mem::swap(&mut u, &mut rhs);
            }
            t = stop;
        }
        sol.times.push(stop);
        sol.masses.push(mass(&u));
        sol.min_value = u.iter().cloned().fold(sol.min_value, f64::min);
        sol.snapshots.push(u.clone());
    }
    // the last snapshot duplicates t_to when it was also a record time
    if record.last() == Some(&t_to) {
        sol.times.pop();
        sol.masses.pop();
        sol.snapshots.pop();
    }

    Ok(sol)
}

/// Evolves radial initial data from `t_from` to `t_to`, recording the
/// solution at `t_from`, each of `record` (sorted, inside the interval) and
/// `t_to`. Fails if more than 1e-10 of the mass reaches the outer 2% of the
/// grid.
pub fn solve_radial(
    space: &ModelSpace,
    init: &dyn Fn(f64) -> f64,
    grid: &RadialGrid,
    t_from: f64,
    t_to: f64,
    record: &[f64],
) -> Result<RadialSolution> {
    let sol = evolve_cells(space, init, grid, t_from, t_to, record)?;
    let n = sol.r.len();
    let u = sol.snapshots.last().expect("nonempty");
    let edge = (n / 50).max(1);
    let total = *sol.masses.last().expect("nonempty");
    let tail: f64 = (n - edge..n).map(|i| u[i] * sol.volumes[i]).sum();
    if tail > 1e-10 * total.abs() {
        return numerical(format!(
            "mass {:.3e} (fraction {:.3e}) within the outer {} cells near r_max = {}; enlarge the domain",
            tail,
            tail / total,
            edge,
            grid.r_max
        ));
    }
    Ok(sol)
}
