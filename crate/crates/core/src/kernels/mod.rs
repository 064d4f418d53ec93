//! Heat kernels on the model spaces as log-derivative jets.

mod euclid;
mod hyperbolic;
mod periodic;

pub use euclid::euclid_jet;
pub use hyperbolic::{h2_jet, h2_kernel, h3_jet};
pub use periodic::{periodic_jet, periodic_log_jet_1d, LogJet1d};

use crate::error::contract;
use crate::Result;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// f = ln u.
    LnU,
    /// u = e^(-f) / (4 pi t)^(n/2).
    MinusLnNormalized,
}

/// A kernel value with its log-derivatives at one space-time point.
///
/// `f_r`, `f_rr` are radial derivatives on Euclidean/hyperbolic space and
/// derivatives along the first axis on periodic spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelJet {
    pub u: f64,
    pub f: f64,
    pub f_r: f64,
    pub f_rr: f64,
    pub f_t: f64,
    pub lap_f: f64,
    pub gradsq: f64,
    pub convention: Convention,
    pub n: usize,
    pub t: f64,
}

impl KernelJet {
    pub fn to_convention(&self, c: Convention) -> KernelJet {
        if c == self.convention {
            return *self;
        }
        let n = self.n as f64;
        let shift = 0.5 * n * (4.0 * PI * self.t).ln();
        KernelJet {
            f: -self.f - shift,
            f_r: -self.f_r,
            f_rr: -self.f_rr,
            f_t: -self.f_t - 0.5 * n / self.t,
            lap_f: -self.lap_f,
            convention: c,
            ..*self
        }
    }

    /// f_t minus what the heat equation predicts in this convention.
    pub fn heat_residual(&self) -> f64 {
        match self.convention {
            Convention::LnU => self.f_t - self.lap_f - self.gradsq,
            Convention::MinusLnNormalized => {
                self.f_t - self.lap_f + self.gradsq + 0.5 * self.n as f64 / self.t
            }
        }
    }

    pub fn require(&self, c: Convention) -> Result<()> {
        if self.convention != c {
            return contract(format!("expected {c:?} jet, got {:?}", self.convention));
        }
        Ok(())
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return contract(format!("time must be positive and finite, got {t}"));
    }
    Ok(())
}
