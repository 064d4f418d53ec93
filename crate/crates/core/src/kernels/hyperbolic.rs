//! Hyperbolic kernels: closed form on H^3, McKean's integral on H^2.

use super::{check_time, Convention, KernelJet};
use crate::error::contract;
use crate::quad::{integrate, QuadratureSpec};
use crate::special::{
    coth, csch_sq_minus_inv_sq, ln_sinh, ln_sinhc, x_coth_minus_one_over_sq, x_coth_minus_one_over_x,
};
use crate::Result;
use std::f64::consts::{LN_2, PI};

/// H^3 kernel with curvature -K, as a jet in the LnU convention.
///
/// Computed at unit curvature and rescaled: d -> sqrt(K) d, t -> K t,
/// u -> K^(3/2) u.
pub fn h3_jet(d: f64, t: f64, curvature_scale: f64) -> Result<KernelJet> {
    check_time(t)?;
    if !(curvature_scale > 0.0 && curvature_scale.is_finite()) {
        return contract("H3 kernel needs K > 0");
    }
    let sk = curvature_scale.sqrt();
    let r = sk * d.abs();
    let tau = curvature_scale * t;

    let f1 = -1.5 * (4.0 * PI * tau).ln() - ln_sinhc(r) - tau - r * r / (4.0 * tau);
    let f1_r = -x_coth_minus_one_over_x(r) - r / (2.0 * tau);
    let f1_rr = csch_sq_minus_inv_sq(r) - 1.0 / (2.0 * tau);
    // r coth r = 1 + h, h/r^2 = hr2
    let hr2 = x_coth_minus_one_over_sq(r);
    let one_h = 1.0 + r * r * hr2;
    let lap1 = f1_rr - 2.0 * one_h * hr2 - one_h / tau;
    let f1_t = -1.5 / tau - 1.0 + r * r / (4.0 * tau * tau);

    let f = f1 + 1.5 * curvature_scale.ln();
    let f_r = sk * f1_r * d.signum();
    Ok(KernelJet {
        u: f.exp(),
        f,
        f_r,
        f_rr: curvature_scale * f1_rr,
        f_t: curvature_scale * f1_t,
        lap_f: curvature_scale * lap1,
        gradsq: f_r * f_r,
        convention: Convention::LnU,
        n: 3,
        t,
    })
}

const TAIL_EXPONENT: f64 = 80.0;

struct McKean {
    d: f64,
    t: f64,
    v_max: f64,
}

impl McKean {
    fn new(d: f64, t: f64) -> Self {
        let d = d.abs();
        let v2 = (d * d + 4.0 * t * TAIL_EXPONENT).sqrt() - d;
        McKean {
            d,
            t,
            v_max: v2.sqrt(),
        }
    }

    /// Integrand of the substituted McKean integral (s = d + v^2) with
    /// e^(-d^2/4t) factored out; returns (weight, s, a = d + v^2/2).
    fn base(&self, v: f64) -> (f64, f64, f64) {
        let (d, t) = (self.d, self.t);
        let v2 = v * v;
        let s = d + v2;
        let a = d + 0.5 * v2;
        // 2v / sqrt(2 sinh(v^2/2)) = 2 exp(-ln_sinhc(v^2/2)/2)
        let g = -0.5 * ln_sinhc(0.5 * v2) + LN_2;
        let e = -(2.0 * d * v2 + v2 * v2) / (4.0 * t) - 0.5 * ln_sinh(a);
        ((g + e).exp(), s, a)
    }

    fn ln_prefactor(&self) -> f64 {
        let (d, t) = (self.d, self.t);
        0.5 * LN_2 - 0.25 * t - 1.5 * (4.0 * PI * t).ln() - d * d / (4.0 * t)
    }

    fn integral<F: Fn(f64) -> f64>(&self, f: F, q: &QuadratureSpec) -> Result<f64> {
        // the integrand is peaked near v ~ sqrt(d) for small d
        let split = (4.0 * self.d.sqrt()).min(0.5 * self.v_max);
        let (a, _) = integrate(&f, 0.0, split, q)?;
        let (b, _) = integrate(&f, split, self.v_max, q)?;
        Ok(a + b)
    }
}

/// H^2 kernel (K = 1) by McKean's integral
/// sqrt(2) e^(-t/4) (4 pi t)^(-3/2) int_d^inf s e^(-s^2/4t) / sqrt(cosh s - cosh d) ds.
pub fn h2_kernel(d: f64, t: f64, q: &QuadratureSpec) -> Result<f64> {
    check_time(t)?;
    let m = McKean::new(d, t);
    let i = m.integral(
        |v| {
            let (w, s, _) = m.base(v);
            w * s
        },
        q,
    )?;
    Ok((m.ln_prefactor() + i.ln()).exp())
}

/// Below this distance the pole values are used (f_r = d f_rr, f_rr = f_t/2).
const H2_POLE: f64 = 1e-3;

/// H^2 jet (K = 1): every derivative is an integral of the differentiated
/// McKean integrand, so no finite differences enter.
pub fn h2_jet(d: f64, t: f64, q: &QuadratureSpec) -> Result<KernelJet> {
    check_time(t)?;
    let m = McKean::new(d, t);
    let ad = d.abs();
    let i0 = m.integral(
        |v| {
            let (w, s, _) = m.base(v);
            w * s
        },
        q,
    )?;
    let it = m.integral(
        |v| {
            let (w, s, _) = m.base(v);
            w * s * s * s / (4.0 * t * t)
        },
        q,
    )?;
    let f = m.ln_prefactor() + i0.ln();
    let f_t = -0.25 - 1.5 / t + it / i0;
    let (f_r, f_rr, lap_f) = if ad < H2_POLE {
        let c = 0.5 * f_t;
        (ad * c, c, 2.0 * c)
    } else {
        let id = m.integral(
            |v| {
                let (w, s, a) = m.base(v);
                w * (1.0 - s * s / (2.0 * t) - 0.5 * s * coth(a))
            },
            q,
        )?;
        let idd = m.integral(
            |v| {
                let (w, s, a) = m.base(v);
                let ca = coth(a);
                let p = 1.0 - s * s / (2.0 * t) - 0.5 * s * ca;
                let sh = a.sinh();
                let p_d = -s / t - 0.5 * ca + 0.5 * s / (sh * sh);
                w * ((-s / (2.0 * t) - 0.5 * ca) * p + p_d)
            },
            q,
        )?;
        let fr = id / i0;
        let frr = idd / i0 - fr * fr;
        (fr, frr, frr + coth(ad) * fr)
    };
    let f_r = f_r * if d < 0.0 { -1.0 } else { 1.0 };
    Ok(KernelJet {
        u: f.exp(),
        f,
        f_r,
        f_rr,
        f_t,
        lap_f,
        gradsq: f_r * f_r,
        convention: Convention::LnU,
        n: 2,
        t,
    })
}
