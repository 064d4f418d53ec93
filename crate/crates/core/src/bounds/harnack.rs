//! Harnack factors, kernel lower bounds, the Davies-Mandouvalos profile and
//! the monotone weight, all evaluated in log space.

use super::Variant;
use crate::error::contract;
use crate::special::{ln_expm1_minus_id_ratio, x_coth_minus_one, x_coth_minus_one_over_x};
use crate::Result;
use std::f64::consts::PI;

/// (t coth(kt) - 1/k), continuous through k = 0 where it vanishes.
fn t_coth_shifted(k: f64, t: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        x_coth_minus_one(k * t) / k
    }
}

pub fn ln_harnack_factor(variant: Variant, n: usize, k: f64, t1: f64, t2: f64, d: f64) -> Result<f64> {
    if !(t1 > 0.0 && t2 > t1) {
        return contract(format!("need 0 < t1 < t2, got t1={t1}, t2={t2}"));
    }
    if !(k >= 0.0 && d.is_finite()) {
        return contract("need k >= 0 and finite d");
    }
    let nf = n as f64;
    let dt = t2 - t1;
    let dist = d * d / (4.0 * dt);
    Ok(match variant {
        Variant::MainNonlinear => {
            // ln(e^(2kt) - 2kt - 1) = ln(2 k^2 t^2) + g(2kt)
            let ln_a1 = 0.25
                * nf
                * (2.0 * (t2 / t1).ln() + ln_expm1_minus_id_ratio(2.0 * k * t2)
                    - ln_expm1_minus_id_ratio(2.0 * k * t1));
            let a2 = (t_coth_shifted(k, t2) - t_coth_shifted(k, t1)) / dt;
            ln_a1 + dist * (1.0 + a2)
        }
        Variant::Linearized => {
            0.5 * nf * (t2 / t1).ln() - nf / 8.0 * ((2.0 * k * t2 / 3.0).ln_1p() - (2.0 * k * t1 / 3.0).ln_1p())
                + dist * (1.0 + k * (t1 + t2) / 3.0)
                + 0.25 * nf * k * dt
        }
    })
}

/// M with u(x1,t1) <= M u(x2,t2) for positive solutions, d = dist(x1, x2).
pub fn harnack_factor(variant: Variant, n: usize, k: f64, t1: f64, t2: f64, d: f64) -> Result<f64> {
    ln_harnack_factor(variant, n, k, t1, t2, d).map(f64::exp)
}

pub fn ln_kernel_lower_bound(variant: Variant, n: usize, k: f64, d: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && k >= 0.0) {
        return contract("need t > 0 and k >= 0");
    }
    let nf = n as f64;
    let x = k * t;
    let base = -0.5 * nf * (4.0 * PI * t).ln() - d * d / (4.0 * t);
    Ok(match variant {
        Variant::MainNonlinear => {
            base - 0.25 * nf * ln_expm1_minus_id_ratio(2.0 * x) - d * d / (4.0 * t) * x_coth_minus_one_over_x(x)
        }
        Variant::Linearized => base - d * d / (4.0 * t) * (x / 3.0) - 0.25 * nf * x,
    })
}

/// Lower bound for the heat kernel at distance d.
pub fn kernel_lower_bound(variant: Variant, n: usize, k: f64, d: f64, t: f64) -> Result<f64> {
    ln_kernel_lower_bound(variant, n, k, d, t).map(f64::exp)
}

pub fn ln_dm_h(n: usize, curvature_scale: f64, r: f64, t: f64) -> Result<f64> {
    if n < 2 || !(t > 0.0) || !(curvature_scale >= 0.0) {
        return contract("need n >= 2, t > 0, K >= 0");
    }
    let m = (n - 1) as f64;
    let s = curvature_scale.sqrt();
    Ok(-0.5 * n as f64 * (4.0 * PI * t).ln() - r * r / (4.0 * t) - m * m * curvature_scale * t / 4.0 - m * s * r / 2.0
        + (0.5 * m - 1.0) * (s * r + curvature_scale * t).ln_1p()
        + (s * r).ln_1p())
}

/// Davies-Mandouvalos comparison profile h(t, r) on the space form of
/// curvature -K.
pub fn dm_h(n: usize, curvature_scale: f64, r: f64, t: f64) -> Result<f64> {
    ln_dm_h(n, curvature_scale, r, t).map(f64::exp)
}

pub fn ln_monotone_weight(n: usize, k: f64, t: f64) -> f64 {
    let nf = n as f64;
    0.5 * nf * t.ln() - nf / 8.0 * (2.0 * k * t / 3.0).ln_1p() + 0.25 * nf * k * t
}

/// t^(n/2) (1 + 2kt/3)^(-n/8) e^(nkt/4).
pub fn monotone_weight(n: usize, k: f64, t: f64) -> f64 {
    ln_monotone_weight(n, k, t).exp()
}
