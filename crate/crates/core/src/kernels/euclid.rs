use super::{check_time, Convention, KernelJet};
use crate::error::contract;
use crate::Result;
use std::f64::consts::PI;

/// Gaussian kernel (4 pi t)^(-n/2) exp(-d^2/4t) with analytic jet.
pub fn euclid_jet(n: usize, d: f64, t: f64) -> Result<KernelJet> {
    if n == 0 || n > crate::spaces::MAX_DIM {
        return contract(format!("dimension must lie in 1..=8, got {n}"));
    }
    check_time(t)?;
    let nf = n as f64;
    let f = -0.5 * nf * (4.0 * PI * t).ln() - d * d / (4.0 * t);
    let f_r = -d / (2.0 * t);
    Ok(KernelJet {
        u: f.exp(),
        f,
        f_r,
        f_rr: -1.0 / (2.0 * t),
        f_t: -0.5 * nf / t + d * d / (4.0 * t * t),
        lap_f: -0.5 * nf / t,
        gradsq: f_r * f_r,
        convention: Convention::LnU,
        n,
        t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_point() {
        let j = euclid_jet(1, 0.0, 1.0 / (4.0 * PI)).unwrap();
        assert!((j.u - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_form_value() {
        // (4 pi)^(-3/2) e^(-1/4), mpmath 40 digits
        let j = euclid_jet(3, 1.0, 1.0).unwrap();
        assert!((j.u / 0.01748282391757746713 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn li_yau_equality() {
        for n in 1..=8 {
            for &(d, t) in &[(0.0, 0.05), (2.0, 0.3), (5.0, 7.0)] {
                let j = euclid_jet(n, d, t).unwrap();
                assert!((j.gradsq - j.f_t - n as f64 / (2.0 * t)).abs() < 1e-10);
                assert!(j.heat_residual().abs() < 1e-10);
            }
        }
        assert!(euclid_jet(3, 1.0, 0.0).is_err());
        assert!(euclid_jet(9, 1.0, 1.0).is_err());
    }
}
