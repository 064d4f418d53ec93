//! Time reparametrizations t~, s, Phi for the Li-Yau-Hamilton Harnack
//! inequality along the heat kernel.
//!
//! With q = sqrt(kt(kt+2)) (note asinh q = ln(1 + kt + q)):
//! - t~ = t / (2 + kt)
//! - Phi = k^(-1/2) (q - asinh q), so Phi' = k sqrt(t~)
//! - s is the path-length parameter. The Cauchy-Schwarz step of the path
//!   integral produces the weight sqrt(t(2+kt)), so the parameter that
//!   turns it into int |gamma'(s)|^2 ds satisfies s' = 1/sqrt(t(2+kt)),
//!   giving s = k^(-1/2) asinh q, and s = sqrt(2t) at k = 0.

use crate::special::{asinh_ratio, one_minus_asinh_ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SBranch {
    /// s' = 1/sqrt(t(2+kt)); continuous in k with s = sqrt(2t) at k = 0.
    #[default]
    PathLength,
    /// s = k^(-1/2)(q + asinh q), i.e. s' = 1/sqrt(t~); 2 sqrt(2t) at k = 0.
    ClosedForm,
    /// As `ClosedForm` for k > 0, but s = sqrt(t) at k = 0.
    LiteralK0,
}

impl SBranch {
    pub fn tag(&self) -> &'static str {
        match self {
            SBranch::PathLength => "path-length",
            SBranch::ClosedForm => "closed-form",
            SBranch::LiteralK0 => "literal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "path-length" => Some(SBranch::PathLength),
            "closed-form" => Some(SBranch::ClosedForm),
            "literal" => Some(SBranch::LiteralK0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyhKinematics {
    pub t_tilde: f64,
    pub s: f64,
    pub phi: f64,
}

pub fn lyh_kinematics(k: f64, t: f64) -> LyhKinematics {
    lyh_kinematics_with(k, t, SBranch::default())
}

pub fn lyh_kinematics_with(k: f64, t: f64, branch: SBranch) -> LyhKinematics {
    let x = k * t;
    let q = (x * (x + 2.0)).sqrt();
    // q / sqrt(k) without dividing by sqrt(k)
    let root = (t * (x + 2.0)).sqrt();
    let s = match branch {
        SBranch::PathLength => root * asinh_ratio(q),
        SBranch::LiteralK0 if k == 0.0 => t.sqrt(),
        _ => root * (1.0 + asinh_ratio(q)),
    };
    LyhKinematics {
        t_tilde: t / (2.0 + x),
        s,
        phi: root * one_minus_asinh_ratio(q),
    }
}
