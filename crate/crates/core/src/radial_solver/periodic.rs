//! Separable positive solutions on the circle and flat torus, evolved
//! exactly mode by mode.
//!
//! Each axis factor is u_i(x) = c_0 + 2 Re sum_{m >= 1} c_m e^(i xi_m x)
//! with xi_m = 2 pi m / L, and the solution is the product of the factors.
//! Products of axis solutions of the 1D heat equation solve the heat
//! equation on the torus.

use crate::error::{contract, numerical};
use crate::kernels::{Convention, KernelJet, LogJet1d};
use crate::Result;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// Modes with |c_m| (1 + xi_m)^4 below this fraction of |c_0| are skipped.
const MODE_CUT: f64 = 1e-17;
const POSITIVITY_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSolution {
    lengths: Vec<f64>,
    coeffs: Vec<Vec<Complex64>>,
    t0: f64,
}

impl PeriodicSolution {
    /// The heat kernel centred at the origin, at time t0 > 0.
    pub fn kernel(lengths: &[f64], t0: f64) -> Result<Self> {
        if !(t0 > 0.0 && t0.is_finite()) {
            return contract("kernel needs t0 > 0");
        }
        let coeffs = lengths
            .iter()
            .map(|&l| {
                let mut c = vec![Complex64::new(1.0 / l, 0.0)];
                for m in 1.. {
                    let xi = 2.0 * PI * m as f64 / l;
                    let a = (-xi * xi * t0).exp() / l;
                    if a * (1.0 + xi).powi(4) < MODE_CUT / l {
                        break;
                    }
                    c.push(Complex64::new(a, 0.0));
                }
                c
            })
            .collect();
        Self::from_modes(lengths, coeffs, t0)
    }

    /// 1 + a cos(2 pi x / L) on a circle, |a| < 1.
    pub fn cosine(length: f64, amplitude: f64, t0: f64) -> Result<Self> {
        if !(amplitude.abs() < 1.0) {
            return contract("cosine data needs |a| < 1 to stay positive");
        }
        let c = vec![Complex64::new(1.0, 0.0), Complex64::new(0.5 * amplitude, 0.0)];
        Self::from_modes(&[length], vec![c], t0)
    }

    /// Coefficients c_0..c_M per axis; the data must be positive.
    pub fn from_modes(lengths: &[f64], coeffs: Vec<Vec<Complex64>>, t0: f64) -> Result<Self> {
        if lengths.is_empty() || lengths.len() != coeffs.len() {
            return contract("need one coefficient vector per axis");
        }
        if lengths.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return contract("lengths must be positive");
        }
        if coeffs.iter().any(|c| c.is_empty() || c[0].im != 0.0) {
            return contract("each axis needs a real mean coefficient");
        }
        if !(t0 >= 0.0 && t0.is_finite()) {
            return contract("need t0 >= 0");
        }
        let s = PeriodicSolution {
            lengths: lengths.to_vec(),
            coeffs,
            t0,
        };
        s.check_positive()?;
        Ok(s)
    }

    /// Interpolates per-axis samples taken at x_j = j L / N, j = 0..N.
    pub fn from_samples(lengths: &[f64], samples: &[Vec<f64>], t0: f64) -> Result<Self> {
        if samples.len() != lengths.len() {
            return contract("need one sample vector per axis");
        }
        let mut planner = FftPlanner::<f64>::new();
        let mut coeffs = Vec::with_capacity(samples.len());
        for v in samples {
            let n = v.len();
            if n < 2 {
                return contract("need at least two samples per axis");
            }
            let fft = planner.plan_fft_forward(n);
            let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            fft.process(&mut buf);
            let mut c: Vec<Complex64> = buf[..=n / 2].iter().map(|z| z / n as f64).collect();
            c[0].im = 0.0;
            if n % 2 == 0 {
                // the Nyquist mode is shared between +m and -m
                c[n / 2] *= 0.5;
            }
            coeffs.push(c);
        }
        Self::from_modes(lengths, coeffs, t0)
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    /// Spatial mean, invariant under the flow.
    pub fn mean(&self) -> f64 {
        self.coeffs.iter().map(|c| c[0].re).product()
    }

    /// Multiplies the solution by a positive constant.
    pub fn scaled(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return contract("scale must be positive");
        }
        for z in self.coeffs[0].iter_mut() {
            *z *= c;
        }
        Ok(self)
    }

    /// The solution at a later time t.
    pub fn evolve(&self, t: f64) -> Result<Self> {
        if !(t >= self.t0 && t.is_finite()) {
            return contract(format!("cannot evolve backwards from {} to {}", self.t0, t));
        }
        let dt = t - self.t0;
        let coeffs = self
            .lengths
            .iter()
            .zip(&self.coeffs)
            .map(|(&l, c)| {
                c.iter()
                    .enumerate()
                    .map(|(m, z)| {
                        let xi = 2.0 * PI * m as f64 / l;
                        z * (-xi * xi * dt).exp()
                    })
                    .collect()
            })
            .collect();
        Ok(PeriodicSolution {
            lengths: self.lengths.clone(),
            coeffs,
            t0: t,
        })
    }

    /// Values of the axis factor and its first four x-derivatives.
    pub fn axis_derivs(&self, axis: usize, x: f64) -> [f64; 5] {
        let l = self.lengths[axis];
        let c = &self.coeffs[axis];
        let c0 = c[0].re;
        let mut d = [c0, 0.0, 0.0, 0.0, 0.0];
        for (m, z) in c.iter().enumerate().skip(1) {
            let xi = 2.0 * PI * m as f64 / l;
            if z.norm() * (1.0 + xi).powi(4) < MODE_CUT * c0.abs() {
                continue;
            }
            // 2 Re (i xi)^j z e^(i xi x)
            let e = z * Complex64::from_polar(1.0, xi * x);
            let mut p = Complex64::new(2.0, 0.0);
            for dj in d.iter_mut() {
                *dj += (p * e).re;
                p *= Complex64::new(0.0, xi);
            }
        }
        d
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (0..self.dim()).map(|i| self.axis_derivs(i, x[i])[0]).product()
    }

    /// Log jet of one axis factor; u_t/u equals u_xx/u for each factor.
    pub fn log_jet_1d(&self, axis: usize, x: f64) -> Result<LogJet1d> {
        let d = self.axis_derivs(axis, x);
        if !(d[0] > 0.0) {
            return numerical(format!("solution not positive at x = {x} on axis {axis}"));
        }
        let w = [1.0, d[1] / d[0], d[2] / d[0], d[3] / d[0], d[4] / d[0]];
        Ok(LogJet1d {
            ln_u: d[0].ln(),
            w,
            wt: w[2],
        })
    }

    /// Jet of ln u at x; f_r and f_rr refer to the first axis.
    pub fn jet(&self, x: &[f64]) -> Result<KernelJet> {
        if x.len() != self.dim() {
            return contract("need one coordinate per axis");
        }
        let (mut f, mut lap, mut grad, mut ft) = (0.0, 0.0, 0.0, 0.0);
        let (mut f_r, mut f_rr) = (0.0, 0.0);
        for (i, &xi) in x.iter().enumerate() {
            let j = self.log_jet_1d(i, xi)?;
            let [l1, l2, _, _] = j.log_derivs();
            f += j.ln_u;
            lap += l2;
            grad += l1 * l1;
            ft += j.wt;
            if i == 0 {
                f_r = l1;
                f_rr = l2;
            }
        }
        Ok(KernelJet {
            u: f.exp(),
            f,
            f_r,
            f_rr,
            f_t: ft,
            lap_f: lap,
            gradsq: grad,
            convention: Convention::LnU,
            n: self.dim(),
            t: self.t0,
        })
    }

    fn check_positive(&self) -> Result<()> {
        for (i, &l) in self.lengths.iter().enumerate() {
            for j in 0..POSITIVITY_SAMPLES {
                let x = l * j as f64 / POSITIVITY_SAMPLES as f64;
                let v = self.axis_derivs(i, x)[0];
                if !(v > 0.0 && v.is_finite()) {
                    return contract(format!("data not positive on axis {i} at x = {x} (value {v})"));
                }
            }
        }
        Ok(())
    }
}

/// `sol` evolved to time t.
pub fn evolve_periodic(sol: &PeriodicSolution, t: f64) -> Result<PeriodicSolution> {
    sol.evolve(t)
}
