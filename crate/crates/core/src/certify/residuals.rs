//! Evolution identities of the quantities behind the gradient estimates,
//! checked on the circle. Spatial derivatives are exact (image sums or
//! Fourier modes); time derivatives use a fourth-order central difference.

use super::{nodes, Field, Sample, Section, SweepSpec, VerificationReport};
use crate::bounds::{alpha_phi, Variant};
use crate::error::contract;
use crate::par::{try_map, Execution};
use crate::spaces::SpaceKind;
use crate::special::{ln_sinhc, x_coth_minus_one, x_coth_minus_one_over_sq};
use crate::taylor::Jet2;
use crate::Result;
use std::f64::consts::PI;

/// Time step of the central difference.
pub const FD_STEP: f64 = 1e-4;
/// Tolerance on the log-form heat equation, which needs no differencing.
pub const HEAT_TOL: f64 = 1e-10;
/// The identities are also run at k + this, to exercise the k > 0 pairs.
pub const K_SHIFT: f64 = 0.5;

/// The solution at one space-time point in one dimension.
#[derive(Debug, Clone, Copy)]
struct State {
    t: f64,
    ln_u: f64,
    /// d^j ln u / dx^j for j = 1..4.
    l: [f64; 4],
}

impl State {
    fn at(field: &Field, x: f64, t: f64) -> Result<Self> {
        let j = field.log_jet_1d(x, t)?;
        Ok(State {
            t,
            ln_u: j.ln_u,
            l: j.log_derivs(),
        })
    }

    fn fx(&self) -> Jet2 {
        Jet2::new(self.l[0], self.l[1], self.l[2])
    }

    fn fxx(&self) -> Jet2 {
        Jet2::new(self.l[1], self.l[2], self.l[3])
    }

    fn ft(&self) -> Jet2 {
        self.fxx() + self.fx().sq()
    }

    fn u(&self) -> Jet2 {
        let u = self.ln_u.exp();
        Jet2::new(u, u * self.l[0], u * (self.l[1] + self.l[0] * self.l[0]))
    }

    /// F = f_x^2 - alpha f_t - phi with f = ln u.
    fn big_f(&self, v: Variant, k: f64) -> Jet2 {
        let ap = alpha_phi(v, 1, k, self.t);
        self.fx().sq() - self.ft().scale(ap.alpha) - Jet2::constant(ap.phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Identity {
    Lem1B,
    Lem1C,
    Lem1D,
    Lem2Linear,
    Lem2Main,
    TsqFu,
    SinhFu,
    PerelmanV,
}

impl Identity {
    const K_DEPENDENT: [Identity; 5] = [
        Identity::Lem1D,
        Identity::Lem2Linear,
        Identity::Lem2Main,
        Identity::TsqFu,
        Identity::SinhFu,
    ];

    fn name(&self) -> &'static str {
        match self {
            Identity::Lem1B => "f_t",
            Identity::Lem1C => "gradsq",
            Identity::Lem1D => "F-general",
            Identity::Lem2Linear => "F-linear",
            Identity::Lem2Main => "F-main",
            Identity::TsqFu => "t^2Fu",
            Identity::SinhFu => "sinh^2Fu",
            Identity::PerelmanV => "v",
        }
    }

    /// The quantity whose heat operator is taken.
    fn quantity(&self, s: &State, k: f64) -> Jet2 {
        let t = s.t;
        match self {
            Identity::Lem1B => s.ft(),
            Identity::Lem1C => s.fx().sq(),
            Identity::Lem1D | Identity::Lem2Main => s.big_f(Variant::MainNonlinear, k),
            Identity::Lem2Linear => s.big_f(Variant::Linearized, k),
            Identity::TsqFu => s.big_f(Variant::Linearized, k).scale(t * t) * s.u(),
            Identity::SinhFu => s.big_f(Variant::MainNonlinear, k).scale(sinh_sq_over_k_sq(k, t)) * s.u(),
            Identity::PerelmanV => {
                let h = Jet2::new(-s.ln_u - 0.5 * (4.0 * PI * t).ln(), -s.l[0], -s.l[1]);
                let hx = -s.fx();
                let hxx = -s.fxx();
                let c = (1.0 + 0.5 * k * t).powi(2);
                (hxx.scale(t) + (hxx - hx.sq()).scale(t * (1.0 + k * t)) + h - Jet2::constant(c)) * s.u()
            }
        }
    }

    /// What (Laplacian - d/dt) of the quantity should equal.
    fn rhs(&self, s: &State, k: f64, q: &Jet2) -> f64 {
        let t = s.t;
        let (fx, fxx) = (s.l[0], s.l[1]);
        let u = s.ln_u.exp();
        match self {
            Identity::Lem1B => -2.0 * fx * s.ft().d1,
            Identity::Lem1C => 2.0 * fxx * fxx - 2.0 * q.d1 * fx,
            Identity::Lem1D => {
                let (da, dp) = main_pair_rates(k, t);
                2.0 * fxx * fxx - 2.0 * q.d1 * fx + da * s.ft().v + dp
            }
            Identity::Lem2Linear => {
                2.0 * (fxx + 0.5 / t + 0.5 * k).powi(2) - 2.0 * q.d1 * fx + 2.0 / t * q.v + 2.0 * k * fx * fx
            }
            Identity::Lem2Main => {
                let phi = alpha_phi(Variant::MainNonlinear, 1, k, t).phi;
                // 2k coth(kt) = (2/t)(kt coth(kt))
                let c = 2.0 / t * (1.0 + x_coth_minus_one(k * t));
                2.0 * (fxx + phi).powi(2) - 2.0 * q.d1 * fx + c * q.v + 2.0 * k * fx * fx
            }
            Identity::TsqFu => 2.0 * t * t * ((fxx + 0.5 / t + 0.5 * k).powi(2) + k * fx * fx) * u,
            Identity::SinhFu => {
                let phi = alpha_phi(Variant::MainNonlinear, 1, k, t).phi;
                2.0 * sinh_sq_over_k_sq(k, t) * ((fxx + phi).powi(2) + k * fx * fx) * u
            }
            Identity::PerelmanV => {
                // h_xx = -f_xx, h_x = -f_x
                2.0 * t * ((-fxx - 0.5 / t - 0.5 * k).powi(2) + k * fx * fx) * u
            }
        }
    }
}

/// sinh^2(kt) / k^2, which is t^2 at k = 0.
fn sinh_sq_over_k_sq(k: f64, t: f64) -> f64 {
    t * t * (2.0 * ln_sinhc(k * t)).exp()
}

/// (alpha', phi') of the nonlinear pair in one dimension:
/// alpha' = 2k (x coth x - 1) / sinh^2 x and phi' = -k^2 / (2 sinh^2 x), x = kt.
fn main_pair_rates(k: f64, t: f64) -> (f64, f64) {
    let x = k * t;
    // (x / sinh x)^2
    let r = (-2.0 * ln_sinhc(x)).exp();
    (2.0 * k * x_coth_minus_one_over_sq(x) * r, -0.5 / (t * t) * r)
}

/// Fourth-order central difference of t -> q(t) from q at t-2h, t-h, t+h, t+2h.
fn central_difference(q: [f64; 4], h: f64) -> f64 {
    (q[0] - 8.0 * q[1] + 8.0 * q[2] - q[3]) / (12.0 * h)
}

/// The five states a node needs: t-2h, t-h, t, t+h, t+2h.
fn stencil(field: &Field, x: f64, t: f64) -> Result<[State; 5]> {
    let h = FD_STEP;
    Ok([
        State::at(field, x, t - 2.0 * h)?,
        State::at(field, x, t - h)?,
        State::at(field, x, t)?,
        State::at(field, x, t + h)?,
        State::at(field, x, t + 2.0 * h)?,
    ])
}

fn residual(id: Identity, st: &[State; 5], k: f64) -> f64 {
    let q = id.quantity(&st[2], k);
    let side = [0, 1, 3, 4].map(|i| id.quantity(&st[i], k).v);
    let dt = central_difference(side, FD_STEP);
    q.d2 - dt - id.rhs(&st[2], k, &q)
}

fn check_space(field: &Field) -> Result<()> {
    if field.space().kind != SpaceKind::Circle {
        return contract("evolution residuals are computed on the circle only");
    }
    Ok(())
}

/// |residual| of the v-evolution identity at each node.
pub(crate) fn v_evolution_samples(field: &Field, k: f64, nodes: &[(f64, f64)], exec: Execution) -> Result<Vec<Sample>> {
    check_space(field)?;
    try_map(exec, nodes.len(), |i| {
        let (x, t) = nodes[i];
        check_stencil_time(t)?;
        let st = stencil(field, x, t)?;
        Ok(Sample::new(vec![x, t], residual(Identity::PerelmanV, &st, k).abs(), 0.0))
    })
}

fn check_stencil_time(t: f64) -> Result<()> {
    if t <= 2.0 * FD_STEP {
        return contract(format!("t = {t} is too small for the time stencil (need t > {})", 2.0 * FD_STEP));
    }
    Ok(())
}

/// Residuals of the log-form heat equation and of the evolution identities
/// of f_t, |f_x|^2, F for both (alpha, phi) pairs, t^2 F u, sinh^2(kt) F u and v.
/// Each identity's sample is |residual|, asserted against `fd_tol`.
pub fn check_evolution_residuals(spec: &SweepSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let field = Field::new(&spec.space, spec.solution)?;
    check_space(&field)?;
    let k = spec.k();
    let ks = [k, k + K_SHIFT];
    let nodes = nodes(spec);
    let per_node = try_map(spec.execution, nodes.len(), |i| {
        let (x, t) = nodes[i];
        check_stencil_time(t)?;
        let st = stencil(&field, x, t)?;
        let j = field.log_jet_1d(x, t)?;
        let [l1, l2, ..] = j.log_derivs();
        let heat = j.wt - (l2 + l1 * l1);
        let mut row = vec![heat.abs()];
        for id in [Identity::Lem1B, Identity::Lem1C, Identity::PerelmanV] {
            row.push(residual(id, &st, k).abs());
        }
        for kk in ks {
            for id in Identity::K_DEPENDENT {
                row.push(residual(id, &st, kk).abs());
            }
        }
        Ok(row)
    })?;
    let column = |c: usize| -> Vec<Sample> {
        nodes
            .iter()
            .zip(&per_node)
            .map(|(&(x, t), row)| Sample::new(vec![x, t], row[c], 0.0))
            .collect()
    };
    let cols = ["x", "t"];
    let mut sections = vec![Section::new("heat", true, HEAT_TOL, &cols, column(0))?];
    for (c, id) in [Identity::Lem1B, Identity::Lem1C, Identity::PerelmanV].iter().enumerate() {
        sections.push(Section::new(id.name(), true, spec.fd_tol, &cols, column(1 + c))?);
    }
    for (a, kk) in ks.iter().enumerate() {
        for (b, id) in Identity::K_DEPENDENT.iter().enumerate() {
            let c = 4 + a * Identity::K_DEPENDENT.len() + b;
            let name = format!("{}@k={}", id.name(), kk);
            sections.push(Section::new(&name, true, spec.fd_tol, &cols, column(c))?);
        }
    }
    Ok(VerificationReport::new(&spec.check.tag(), spec.params(), spec.fd_tol, sections)
        .with_metric("fd_step", FD_STEP)
        .with_note("samples are |residual|; the heat section uses the termwise time derivative and no differencing"))
}
