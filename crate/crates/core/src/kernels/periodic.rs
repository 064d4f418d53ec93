//! Image-sum kernels on the circle and the flat torus.

use super::{check_time, Convention, KernelJet};
use crate::error::{contract, numerical};
use crate::Result;
use std::f64::consts::PI;

const MAX_IMAGES: i64 = 200_000;

/// One axis of a periodic kernel: ln u, the ratios u^(j)/u for j = 0..4,
/// and u_t/u computed term by term in t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogJet1d {
    pub ln_u: f64,
    pub w: [f64; 5],
    pub wt: f64,
}

impl LogJet1d {
    /// Derivatives of ln u up to order 4.
    pub fn log_derivs(&self) -> [f64; 4] {
        let [_, w1, w2, w3, w4] = self.w;
        [
            w1,
            w2 - w1 * w1,
            w3 - 3.0 * w1 * w2 + 2.0 * w1.powi(3),
            w4 - 4.0 * w1 * w3 - 3.0 * w2 * w2 + 12.0 * w1 * w1 * w2 - 6.0 * w1.powi(4),
        ]
    }
}

/// Image sum on a circle of length `l` at displacement `x`, with each
/// derivative sum truncated once the next image falls below `tol` relative.
pub fn periodic_log_jet_1d(l: f64, x: f64, t: f64, tol: f64) -> Result<LogJet1d> {
    check_time(t)?;
    if !(l > 0.0 && tol > 0.0 && tol < 1.0) {
        return contract("need length > 0 and truncation tolerance in (0, 1)");
    }
    let m0 = -(x / l).round() as i64;
    let y0 = x + m0 as f64 * l;
    let e0 = -y0 * y0 / (4.0 * t);
    let it = 1.0 / (2.0 * t);

    let mut s = [0.0f64; 5];
    let mut st = 0.0;
    let add = |m: i64, s: &mut [f64; 5], st: &mut f64| -> (f64, f64) {
        let y = x + m as f64 * l;
        let w = (-y * y / (4.0 * t) - e0).exp();
        let z = -y * it;
        let z2 = z * z;
        s[0] += w;
        s[1] += w * z;
        s[2] += w * (z2 - it);
        s[3] += w * (z2 * z - 3.0 * z * it);
        s[4] += w * (z2 * z2 - 6.0 * z2 * it + 3.0 * it * it);
        *st += w * (-it + y * y * it * it);
        (w, z.abs())
    };
    add(m0, &mut s, &mut st);
    for dir in [1i64, -1] {
        let mut j = 1;
        loop {
            let (w, z) = add(m0 + dir * j, &mut s, &mut st);
            let reach = (1.0 + z + it.sqrt()).powi(4);
            if w * reach < tol * s[0] && j >= 2 {
                break;
            }
            j += 1;
            if j > MAX_IMAGES {
                return numerical(format!("image sum did not converge (L={l}, t={t})"));
            }
        }
    }
    let w = [1.0, s[1] / s[0], s[2] / s[0], s[3] / s[0], s[4] / s[0]];
    Ok(LogJet1d {
        ln_u: -0.5 * (4.0 * PI * t).ln() + e0 + s[0].ln(),
        w,
        wt: st / s[0],
    })
}

/// Periodic kernel at displacement `d` (one entry per axis); f_r and f_rr
/// refer to the first axis.
pub fn periodic_jet(lengths: &[f64], d: &[f64], t: f64, truncation_tol: f64) -> Result<KernelJet> {
    if lengths.is_empty() || lengths.len() != d.len() {
        return contract("need one displacement per axis");
    }
    let mut f = 0.0;
    let (mut lap, mut grad, mut ft) = (0.0, 0.0, 0.0);
    let (mut f_r, mut f_rr) = (0.0, 0.0);
    for (i, (&l, &x)) in lengths.iter().zip(d).enumerate() {
        if x.abs() > 0.5 * l * (1.0 + 1e-12) {
            return contract(format!("displacement {x} outside [-L/2, L/2] for L = {l}"));
        }
        let j = periodic_log_jet_1d(l, x, t, truncation_tol)?;
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
        n: lengths.len(),
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::euclid_jet;

    const TOL: f64 = 1e-15;

    #[test]
    fn reference_value() {
        // 2001-term image sum, mpmath 40 digits
        let j = periodic_jet(&[2.0 * PI], &[0.0], 1.0, TOL).unwrap();
        assert!((j.u / 0.28212397345676223943 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn equidistribution_for_large_time() {
        let j = periodic_jet(&[2.0 * PI], &[1.0], 200.0, TOL).unwrap();
        assert!((j.u * 2.0 * PI - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_image_for_large_length() {
        let j = periodic_jet(&[200.0], &[1.3], 0.7, TOL).unwrap();
        let g = euclid_jet(1, 1.3, 0.7).unwrap();
        assert!((j.u / g.u - 1.0).abs() < 1e-14);
        assert!((j.f_r - g.f_r).abs() < 1e-13);
    }

    #[test]
    fn heat_equation_and_symmetry() {
        for &x in &[0.0, 0.5, -2.0, PI] {
            for &t in &[0.01, 0.05, 1.0, 10.0] {
                let j = periodic_jet(&[2.0 * PI], &[x], t, TOL).unwrap();
                assert!(j.heat_residual().abs() < 1e-9 * (1.0 + j.f_t.abs() + j.gradsq));
                let m = periodic_jet(&[2.0 * PI], &[-x], t, TOL).unwrap();
                assert!((m.f_r + j.f_r).abs() < 1e-12 * (1.0 + j.f_r.abs()));
            }
        }
    }

    #[test]
    fn torus_is_a_product() {
        let ls = [2.0, 3.0];
        let j = periodic_jet(&ls, &[0.4, -1.1], 0.3, TOL).unwrap();
        let a = periodic_jet(&ls[..1], &[0.4], 0.3, TOL).unwrap();
        let b = periodic_jet(&ls[1..], &[-1.1], 0.3, TOL).unwrap();
        assert!((j.u / (a.u * b.u) - 1.0).abs() < 1e-14);
        assert!((j.lap_f - a.lap_f - b.lap_f).abs() < 1e-12);
        assert!(periodic_jet(&ls, &[1.5, 0.0], 0.3, TOL).is_err());
    }

    #[test]
    fn no_underflow_in_tails() {
        let j = periodic_jet(&[2.0 * PI], &[PI], 1e-3, TOL).unwrap();
        assert!(j.f.is_finite() && j.f < -2000.0);
    }
}
