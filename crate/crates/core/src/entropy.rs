//! Entropy functionals of positive unit-mass heat solutions and their
//! monotonicity, with the explicit time derivatives checked against finite
//! differences on the circle.

use crate::certify::{Field, SolutionKind};
use crate::error::{contract, numerical};
use crate::kernels::{Convention, KernelJet};
use crate::par::{try_map, Execution};
use crate::quad::{integrate, QuadratureSpec};
use crate::spaces::{volume_weight, ModelSpace, SpaceKind};
use crate::special::ln_sinhc;
use crate::bounds::{alpha_phi, Variant};
use crate::Result;
use std::cell::RefCell;

/// Allowed deviation of the integrated mass from 1.
pub const MASS_TOL: f64 = 1e-6;
/// Allowed mass beyond the radial cutoff.
pub const TRUNCATION_TOL: f64 = 1e-10;
/// Relative step of the local time difference used for identity residuals.
pub const FD_REL_STEP: f64 = 1e-3;
const MAX_TORUS_POINTS: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    WlyLinear,
    /// Scaled by 1/k^2, so that it tends to the linear form as k -> 0.
    WlySinh,
    Wp,
    NashTilde,
}

impl Functional {
    pub const ALL: [Functional; 4] = [Functional::WlyLinear, Functional::WlySinh, Functional::Wp, Functional::NashTilde];

    pub fn tag(&self) -> &'static str {
        match self {
            Functional::WlyLinear => "wly-linear",
            Functional::WlySinh => "wly-sinh",
            Functional::Wp => "wp",
            Functional::NashTilde => "nash",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Functional::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .map_or_else(|| contract(format!("unknown functional {s:?} (wp, wly-linear, wly-sinh, nash)")), Ok)
    }

    /// The convention its density consumes.
    pub fn convention(&self) -> Convention {
        match self {
            Functional::WlyLinear | Functional::WlySinh => Convention::LnU,
            Functional::Wp | Functional::NashTilde => Convention::MinusLnNormalized,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTrace {
    pub functional: Functional,
    pub t_values: Vec<f64>,
    pub values: Vec<f64>,
    /// Forward differences (W_{i+1} - W_i) / (t_{i+1} - t_i).
    pub discrete_derivatives: Vec<f64>,
    /// dW/dt from the explicit formula, where one is available.
    pub formula_derivatives: Option<Vec<f64>>,
    /// |dW/dt by local central difference - formula|.
    pub identity_residuals: Option<Vec<f64>>,
    pub normalization_checks: Vec<f64>,
}

/// sinh^2(kt) / k^2, t^2 at k = 0.
fn sinh_sq_over_k_sq(k: f64, t: f64) -> f64 {
    t * t * (2.0 * ln_sinhc(k * t)).exp()
}

/// Integrand of the functional (before multiplying by dmu), on a jet in the
/// functional's own convention. A jet in the other convention is rejected.
pub fn density(functional: Functional, jet: &KernelJet, k: f64) -> Result<f64> {
    jet.require(functional.convention())?;
    let n = jet.n as f64;
    let t = jet.t;
    Ok(match functional {
        Functional::WlyLinear => {
            let phi = alpha_phi(Variant::Linearized, jet.n, k, t).phi;
            -t * t * (jet.lap_f + phi) * jet.u
        }
        Functional::WlySinh => {
            let phi = alpha_phi(Variant::MainNonlinear, jet.n, k, t).phi;
            -sinh_sq_over_k_sq(k, t) * (jet.lap_f + phi) * jet.u
        }
        Functional::Wp => (t * jet.gradsq + jet.f - n * (1.0 + 0.5 * k * t).powi(2)) * jet.u,
        // -u ln u = (f + (n/2) ln(4 pi t)) u; the constant is added once after integrating
        Functional::NashTilde => jet.f * jet.u,
    })
}

fn nash_constant(n: usize, k: f64, t: f64) -> f64 {
    let n = n as f64;
    -0.5 * n * k * t * (1.0 + k * t / 6.0) - 0.5 * n
}

/// Integrand of the explicit dW/dt in one dimension with Ric = 0, on a LnU jet.
fn derivative_density(functional: Functional, jet: &KernelJet, k: f64) -> Result<Option<f64>> {
    jet.require(Convention::LnU)?;
    let t = jet.t;
    let (fx, fxx, u) = (jet.f_r, jet.f_rr, jet.u);
    Ok(match functional {
        // h = -ln u - ..., so h_xx - 1/2t - k/2 = -(f_xx + 1/2t + k/2)
        Functional::Wp => Some(-2.0 * t * ((fxx + 0.5 / t + 0.5 * k).powi(2) + k * fx * fx) * u),
        Functional::WlyLinear => Some(-2.0 * t * t * ((fxx + 0.5 / t + 0.5 * k).powi(2) + k * fx * fx) * u),
        Functional::WlySinh => {
            let phi = alpha_phi(Variant::MainNonlinear, 1, k, t).phi;
            Some(-2.0 * sinh_sq_over_k_sq(k, t) * ((fxx + phi).powi(2) + k * fx * fx) * u)
        }
        Functional::NashTilde => None,
    })
}

/// Evaluates functionals of one solution, normalized to unit mass.
struct Evaluator {
    field: Field,
    ln_mass: f64,
}

impl Evaluator {
    fn new(space: &ModelSpace, solution: SolutionKind, functional: Functional, t_first: f64) -> Result<Self> {
        let compact = space.is_periodic();
        if !compact && functional != Functional::Wp {
            return contract(format!("{} is defined on compact (periodic) spaces only", functional.tag()));
        }
        let field = Field::new(space, solution)?;
        let mut e = Evaluator { field, ln_mass: 0.0 };
        if compact {
            let (m, _) = e.integrate_periodic(t_first, |j| Ok(j.u))?;
            if !(m > 0.0) {
                return numerical("solution has nonpositive mass");
            }
            e.ln_mass = m.ln();
        }
        Ok(e)
    }

    /// LnU jet of the unit-mass solution.
    fn jet(&self, p: &[f64], t: f64) -> Result<KernelJet> {
        let mut j = self.field.jet_at(p, t)?;
        j.u = (j.f - self.ln_mass).exp();
        j.f -= self.ln_mass;
        Ok(j)
    }

    /// Trapezoid rule on a tensor grid fine enough for the kernel width at t;
    /// returns (integral, number of points).
    fn integrate_periodic<F: Fn(&KernelJet) -> Result<f64>>(&self, t: f64, g: F) -> Result<(f64, usize)> {
        let lengths = &self.field.space().lengths;
        let counts: Vec<usize> = lengths
            .iter()
            .map(|l| ((12.0 * l / t.sqrt()).max(256.0) as usize).next_power_of_two())
            .collect();
        let total: usize = counts.iter().product();
        if total > MAX_TORUS_POINTS {
            return contract(format!("t = {t} needs {total} quadrature points; use a larger t"));
        }
        let cell: f64 = lengths.iter().zip(&counts).map(|(l, &c)| l / c as f64).product();
        let mut sum = 0.0;
        let mut p = vec![0.0; lengths.len()];
        for idx in 0..total {
            let mut rest = idx;
            for (i, (&l, &c)) in lengths.iter().zip(&counts).enumerate() {
                p[i] = -0.5 * l + l * (rest % c) as f64 / c as f64;
                rest /= c;
            }
            sum += g(&self.jet(&p, t)?)?;
        }
        Ok((sum * cell, total))
    }

    /// Integral of a radial density over [0, R], R past the point where the
    /// weighted kernel drops below 1e-16; also returns the mass on [0, R].
    fn integrate_radial<F: Fn(&KernelJet) -> Result<f64>>(&self, t: f64, g: F) -> Result<(f64, f64)> {
        let space = self.field.space();
        let n = space.dim as f64;
        let weighted = |r: f64| -> Result<f64> { Ok(self.jet(&[r], t)?.u * volume_weight(space, r)?) };
        let mut r_cut = (2.0 * n * t).sqrt();
        while weighted(r_cut)? * (1.0 + r_cut * r_cut / t) >= 1e-16 {
            r_cut *= 1.25;
            if r_cut > 1e4 {
                return numerical("radial cutoff did not converge");
            }
        }
        // the Gaussian W_P integrand has zero integral, so an absolute floor is needed
        let q = QuadratureSpec::new(1e-12, 1e-14, 4000)?;
        let err = RefCell::new(None);
        let density = |r: f64| -> Result<f64> { Ok(g(&self.jet(&[r], t)?)? * volume_weight(space, r)?) };
        let (val, _) = integrate(
            |r| {
                density(r).unwrap_or_else(|e| {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                })
            },
            0.0,
            r_cut,
            &q,
        )?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        let (mass, _) = integrate(|r| weighted(r).unwrap_or(f64::NAN), 0.0, r_cut, &q)?;
        if !((1.0 - mass).abs() <= TRUNCATION_TOL) {
            return numerical(format!("radial mass on [0, {r_cut}] is {mass}, lost more than {TRUNCATION_TOL}"));
        }
        Ok((val, mass))
    }

    /// (value, mass) at time t.
    fn value(&self, functional: Functional, k: f64, t: f64) -> Result<(f64, f64)> {
        let c = functional.convention();
        let dens = |j: &KernelJet| density(functional, &j.to_convention(c), k);
        let (v, mass) = if self.field.space().is_periodic() {
            let (v, _) = self.integrate_periodic(t, dens)?;
            let (m, _) = self.integrate_periodic(t, |j| Ok(j.u))?;
            (v, m)
        } else {
            self.integrate_radial(t, dens)?
        };
        if !((mass - 1.0).abs() <= MASS_TOL) {
            return contract(format!("solution mass {mass} at t = {t} is not 1"));
        }
        let v = match functional {
            Functional::NashTilde => v + nash_constant(self.field.dim(), k, t),
            _ => v,
        };
        Ok((v, mass))
    }

    fn formula_derivative(&self, functional: Functional, k: f64, t: f64) -> Result<Option<f64>> {
        if self.field.space().kind != SpaceKind::Circle || functional == Functional::NashTilde {
            return Ok(None);
        }
        let (v, _) = self.integrate_periodic(t, |j| Ok(derivative_density(functional, j, k)?.unwrap_or(0.0)))?;
        Ok(Some(v))
    }
}

fn check_args(k: f64, t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) || !(k >= 0.0 && k.is_finite()) {
        return contract("need t > 0 and k >= 0");
    }
    Ok(())
}

/// W(t) for the unit-mass normalization of the solution.
pub fn entropy_value(functional: Functional, space: &ModelSpace, solution: SolutionKind, t: f64, k: f64) -> Result<f64> {
    check_args(k, t)?;
    Ok(Evaluator::new(space, solution, functional, t)?.value(functional, k, t)?.0)
}

/// Values along an increasing t grid, their forward differences and, on
/// the circle, the explicit derivative compared against a local
/// fourth-order difference with step `FD_REL_STEP * t`.
pub fn entropy_trace(
    functional: Functional,
    space: &ModelSpace,
    solution: SolutionKind,
    t_grid: &[f64],
    k: f64,
    exec: Execution,
) -> Result<EntropyTrace> {
    if t_grid.len() < 3 {
        return contract("entropy traces need at least three times");
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return contract("t grid must be strictly increasing");
    }
    for &t in t_grid {
        check_args(k, t)?;
    }
    let e = Evaluator::new(space, solution, functional, t_grid[0])?;
    let rows = try_map(exec, t_grid.len(), |i| {
        let t = t_grid[i];
        let (v, mass) = e.value(functional, k, t)?;
        let formula = e.formula_derivative(functional, k, t)?;
        let residual = match formula {
            Some(d) => {
                let h = FD_REL_STEP * t;
                let w = |s: f64| e.value(functional, k, s).map(|x| x.0);
                let fd = (w(t - 2.0 * h)? - 8.0 * w(t - h)? + 8.0 * w(t + h)? - w(t + 2.0 * h)?) / (12.0 * h);
                Some((fd - d).abs())
            }
            None => None,
        };
        Ok((v, mass, formula, residual))
    })?;
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let discrete_derivatives = values
        .windows(2)
        .zip(t_grid.windows(2))
        .map(|(w, t)| (w[1] - w[0]) / (t[1] - t[0]))
        .collect();
    let formula_derivatives: Option<Vec<f64>> = rows.iter().map(|r| r.2).collect();
    let identity_residuals: Option<Vec<f64>> = rows.iter().map(|r| r.3).collect();
    Ok(EntropyTrace {
        functional,
        t_values: t_grid.to_vec(),
        values,
        discrete_derivatives,
        formula_derivatives,
        identity_residuals,
        normalization_checks: rows.iter().map(|r| r.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle() -> ModelSpace {
        ModelSpace::circle(2.0 * PI).unwrap()
    }

    #[test]
    fn gaussian_wp_vanishes() {
        for n in 1..=3 {
            let e = ModelSpace::euclidean(n).unwrap();
            for t in [0.1, 1.0, 4.0] {
                let w = entropy_value(Functional::Wp, &e, SolutionKind::Kernel, t, 0.0).unwrap();
                assert!(w.abs() < 1e-9, "n={n} t={t}: {w}");
            }
        }
    }

    #[test]
    fn circle_kernel_signs_and_identity() {
        let ts: Vec<f64> = (0..6).map(|i| 0.2 * 1.5f64.powi(i)).collect();
        for f in [Functional::Wp, Functional::WlyLinear, Functional::WlySinh] {
            let tr = entropy_trace(f, &circle(), SolutionKind::Kernel, &ts, 0.0, Execution::default()).unwrap();
            assert!(tr.values.iter().all(|&v| v <= 1e-10), "{f:?} {:?}", tr.values);
            assert!(tr.discrete_derivatives.iter().all(|&d| d <= 1e-8));
            let res = tr.identity_residuals.unwrap();
            assert!(res.iter().all(|&r| r <= 1e-6), "{f:?} {res:?}");
        }
    }

    #[test]
    fn wly_sinh_tends_to_linear() {
        let a = entropy_value(Functional::WlySinh, &circle(), SolutionKind::Kernel, 0.7, 0.0).unwrap();
        let b = entropy_value(Functional::WlyLinear, &circle(), SolutionKind::Kernel, 0.7, 0.0).unwrap();
        let c = entropy_value(Functional::WlySinh, &circle(), SolutionKind::Kernel, 0.7, 1e-9).unwrap();
        assert!((a - b).abs() < 1e-14 && (a - c).abs() < 1e-8);
    }

    #[test]
    fn nash_vanishes_at_small_time() {
        let v = entropy_value(Functional::NashTilde, &circle(), SolutionKind::Kernel, 1e-3, 0.0).unwrap();
        assert!(v.abs() < 1e-6, "{v}");
    }

    #[test]
    fn cosine_data_is_normalized() {
        let ts = [0.2, 0.5, 1.0];
        let tr = entropy_trace(Functional::Wp, &circle(), SolutionKind::Cosine(0.5), &ts, 0.0, Execution::Sequential).unwrap();
        assert!(tr.normalization_checks.iter().all(|m| (m - 1.0).abs() < 1e-12));
        // W_P starts positive for smooth data; only its decay is asserted
        assert!(tr.discrete_derivatives.iter().all(|&d| d <= 0.0));
        assert!(tr.identity_residuals.unwrap().iter().all(|&r| r <= 1e-6));
    }

    #[test]
    fn conventions_are_guarded() {
        let j = Field::new(&circle(), SolutionKind::Kernel).unwrap().jet(0.3, 0.5).unwrap();
        assert!(density(Functional::Wp, &j, 0.0).is_err());
        assert!(density(Functional::WlyLinear, &j, 0.0).is_ok());
        let m = j.to_convention(Convention::MinusLnNormalized);
        assert!(density(Functional::WlyLinear, &m, 0.0).is_err());
    }

    #[test]
    fn noncompact_only_for_wp() {
        let h = ModelSpace::hyperbolic(3, 1.0).unwrap();
        assert!(entropy_value(Functional::NashTilde, &h, SolutionKind::Kernel, 1.0, 2.0).is_err());
        assert!(entropy_value(Functional::Wp, &h, SolutionKind::Kernel, 1.0, 2.0).unwrap() <= 0.0);
    }
}
