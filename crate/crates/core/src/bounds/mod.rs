//! Every estimate, Harnack factor and kernel bound as a pure scalar function.
//!
//! Sign convention: slack = LHS - RHS, so a satisfied inequality has
//! slack <= 0.

mod harnack;
mod lyh;
mod technical;

pub use harnack::{
    dm_h, harnack_factor, kernel_lower_bound, ln_dm_h, ln_harnack_factor, ln_kernel_lower_bound,
    ln_monotone_weight, monotone_weight,
};
pub use lyh::{lyh_kinematics, lyh_kinematics_with, LyhKinematics, SBranch};
pub use technical::{lemma23_terms, technical_inequalities, TechnicalValues};

use crate::error::contract;
use crate::kernels::{Convention, KernelJet};
use crate::special::{alpha_minus_one, coth};
use crate::Result;

/// Below this kt the nonlinear pair uses its Taylor form.
pub const SMALL_KT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimateId {
    LiYauAlpha(f64),
    Davies(f64),
    MainNonlinear,
    Linearized,
    Yau,
    BakryQian,
    HamiltonExp,
    HamiltonLog,
    PerelmanLYH,
    NiK0,
}

impl EstimateId {
    /// All gradient-type estimates evaluated on a jet (HamiltonLog excluded:
    /// it needs the sup bound A).
    pub const COMPARABLE: [EstimateId; 9] = [
        EstimateId::MainNonlinear,
        EstimateId::Linearized,
        EstimateId::LiYauAlpha(2.0),
        EstimateId::Davies(2.0),
        EstimateId::Yau,
        EstimateId::BakryQian,
        EstimateId::HamiltonExp,
        EstimateId::PerelmanLYH,
        EstimateId::NiK0,
    ];

    pub fn tag(&self) -> String {
        match self {
            EstimateId::LiYauAlpha(a) => format!("li-yau:{a}"),
            EstimateId::Davies(a) => format!("davies:{a}"),
            EstimateId::MainNonlinear => "main".into(),
            EstimateId::Linearized => "linear".into(),
            EstimateId::Yau => "yau".into(),
            EstimateId::BakryQian => "bakry-qian".into(),
            EstimateId::HamiltonExp => "hamilton-exp".into(),
            EstimateId::HamiltonLog => "hamilton-log".into(),
            EstimateId::PerelmanLYH => "perelman".into(),
            EstimateId::NiK0 => "ni".into(),
        }
    }

    /// Parses `main`, `linear`, `li-yau[:alpha]`, `davies[:alpha]`, `yau`,
    /// `bakry-qian`, `hamilton-exp`, `hamilton-log`, `perelman`, `ni`.
    /// The default alpha is 2.
    pub fn parse(tag: &str) -> Result<Self> {
        let (head, arg) = match tag.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (tag, None),
        };
        let alpha = || -> Result<f64> {
            match arg {
                None => Ok(2.0),
                Some(a) => a
                    .parse::<f64>()
                    .map_err(|_| crate::Error::Contract(format!("bad alpha in '{tag}'"))),
            }
        };
        let id = match head {
            "li-yau" => EstimateId::LiYauAlpha(alpha()?),
            "davies" => EstimateId::Davies(alpha()?),
            _ if arg.is_some() => return contract(format!("estimate '{head}' takes no argument")),
            "main" => EstimateId::MainNonlinear,
            "linear" => EstimateId::Linearized,
            "yau" => EstimateId::Yau,
            "bakry-qian" => EstimateId::BakryQian,
            "hamilton-exp" => EstimateId::HamiltonExp,
            "hamilton-log" => EstimateId::HamiltonLog,
            "perelman" => EstimateId::PerelmanLYH,
            "ni" => EstimateId::NiK0,
            _ => return contract(format!("unknown estimate '{tag}'")),
        };
        id.validate()?;
        Ok(id)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EstimateId::LiYauAlpha(a) | EstimateId::Davies(a) if !(*a > 1.0 && a.is_finite()) => {
                contract(format!("alpha must exceed 1, got {a}"))
            }
            _ => Ok(()),
        }
    }

    pub fn convention(&self) -> Convention {
        match self {
            EstimateId::PerelmanLYH | EstimateId::NiK0 => Convention::MinusLnNormalized,
            _ => Convention::LnU,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    MainNonlinear,
    Linearized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaPhi {
    pub alpha: f64,
    pub phi: f64,
    pub variant: Variant,
}

/// The (alpha, phi) pairs of the nonlinear and the linearized estimate.
pub fn alpha_phi(variant: Variant, n: usize, k: f64, t: f64) -> AlphaPhi {
    let nf = n as f64;
    let x = k * t;
    let (alpha, phi) = match variant {
        Variant::Linearized => (1.0 + 2.0 * x / 3.0, 0.5 * nf / t + 0.5 * nf * k * (1.0 + x / 3.0)),
        Variant::MainNonlinear if x < SMALL_KT => {
            let x3 = x * x * x;
            (
                1.0 + 2.0 * x / 3.0 - 4.0 * x3 / 45.0,
                0.5 * nf / t + 0.5 * nf * k + nf * k * x / 6.0 - nf * k * x3 / 90.0,
            )
        }
        Variant::MainNonlinear => (1.0 + alpha_minus_one(x), 0.5 * nf * k * (coth(x) + 1.0)),
    };
    AlphaPhi { alpha, phi, variant }
}

/// The two sides of an estimate evaluated on a jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// LHS and RHS of `id` at the jet. `aux` is alpha for LiYauAlpha/Davies
/// (overriding the tag's value when given) and the sup bound A for HamiltonLog.
pub fn estimate_sides(id: EstimateId, jet: &KernelJet, n: usize, k: f64, t: f64, aux: Option<f64>) -> Result<Sides> {
    jet.require(id.convention())?;
    if !(k >= 0.0) || !(t > 0.0) {
        return contract("need k >= 0 and t > 0");
    }
    let nf = n as f64;
    let g = jet.gradsq;
    let ft = jet.f_t;
    let s = match id {
        EstimateId::LiYauAlpha(a0) | EstimateId::Davies(a0) => {
            let a = aux.unwrap_or(a0);
            if !(a > 1.0) {
                return contract(format!("alpha must exceed 1, got {a}"));
            }
            let c = if matches!(id, EstimateId::LiYauAlpha(_)) { 2.0 } else { 4.0 };
            Sides {
                lhs: g - a * ft,
                rhs: nf * a * a * k / (c * (a - 1.0)) + nf * a * a / (2.0 * t),
            }
        }
        EstimateId::MainNonlinear | EstimateId::Linearized => {
            let v = if id == EstimateId::MainNonlinear {
                Variant::MainNonlinear
            } else {
                Variant::Linearized
            };
            let ap = alpha_phi(v, n, k, t);
            Sides {
                lhs: g - ap.alpha * ft,
                rhs: ap.phi,
            }
        }
        EstimateId::Yau => Sides {
            lhs: g - ft,
            rhs: (2.0 * nf * k).sqrt() * (g + nf / (2.0 * t) + 2.0 * nf * k).sqrt() + nf / (2.0 * t),
        },
        EstimateId::BakryQian => Sides {
            lhs: g - ft,
            rhs: (nf * k).sqrt() * (g + nf / (2.0 * t) + nf * k / 4.0).sqrt() + nf / (2.0 * t),
        },
        EstimateId::HamiltonExp => Sides {
            lhs: g - (2.0 * k * t).exp() * ft,
            rhs: (4.0 * k * t).exp() * nf / (2.0 * t),
        },
        EstimateId::HamiltonLog => {
            let a = match aux {
                Some(a) if a > 0.0 => a,
                _ => return contract("HamiltonLog needs a positive sup bound A"),
            };
            let u2 = jet.u * jet.u;
            Sides {
                lhs: t * u2 * g,
                rhs: (1.0 + 2.0 * k * t) * u2 * (a / jet.u).ln(),
            }
        }
        EstimateId::PerelmanLYH | EstimateId::NiK0 => {
            let k = if id == EstimateId::NiK0 { 0.0 } else { k };
            let lap = jet.lap_f;
            Sides {
                lhs: t * lap + t * (1.0 + k * t) * (lap - g) + jet.f,
                rhs: nf * (1.0 + 0.5 * k * t).powi(2),
            }
        }
    };
    Ok(s)
}

pub fn estimate_slack(id: EstimateId, jet: &KernelJet, n: usize, k: f64, t: f64, aux: Option<f64>) -> Result<f64> {
    estimate_sides(id, jet, n, k, t, aux).map(|s| s.slack())
}
