//! Model geometries, their Ricci lower bounds, and radial calculus.

use crate::error::contract;
use crate::Result;
use libm::tgamma;
use std::f64::consts::PI;

pub const MAX_DIM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Euclidean,
    Hyperbolic,
    Circle,
    FlatTorus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpace {
    pub kind: SpaceKind,
    pub dim: usize,
    /// Sectional curvature is -K on hyperbolic space, 0 otherwise.
    pub curvature_scale: f64,
    /// Circumferences, periodic kinds only.
    pub lengths: Vec<f64>,
}

impl ModelSpace {
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::checked(SpaceKind::Euclidean, n, 0.0, vec![])
    }

    pub fn hyperbolic(n: usize, curvature_scale: f64) -> Result<Self> {
        Self::checked(SpaceKind::Hyperbolic, n, curvature_scale, vec![])
    }

    pub fn circle(length: f64) -> Result<Self> {
        Self::checked(SpaceKind::Circle, 1, 0.0, vec![length])
    }

    pub fn flat_torus(lengths: Vec<f64>) -> Result<Self> {
        Self::checked(SpaceKind::FlatTorus, lengths.len(), 0.0, lengths)
    }

    fn checked(kind: SpaceKind, dim: usize, k: f64, lengths: Vec<f64>) -> Result<Self> {
        let s = ModelSpace {
            kind,
            dim,
            curvature_scale: k,
            lengths,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return contract(format!("dimension must lie in 1..={MAX_DIM}, got {}", self.dim));
        }
        let k = self.curvature_scale;
        match self.kind {
            SpaceKind::Hyperbolic => {
                if !(k > 0.0 && k.is_finite()) {
                    return contract("hyperbolic space needs curvature scale K > 0");
                }
                if self.dim < 2 {
                    return contract("hyperbolic space needs dimension >= 2");
                }
            }
            _ if k != 0.0 => return contract("flat spaces need curvature scale 0"),
            _ => {}
        }
        match self.kind {
            SpaceKind::Circle | SpaceKind::FlatTorus => {
                if self.kind == SpaceKind::Circle && self.dim != 1 {
                    return contract("circle has dimension 1");
                }
                if self.lengths.len() != self.dim {
                    return contract("periodic space needs one length per axis");
                }
                if !self.lengths.iter().all(|&l| l > 0.0 && l.is_finite()) {
                    return contract("lengths must be positive");
                }
            }
            _ => {
                if !self.lengths.is_empty() {
                    return contract("lengths only apply to periodic spaces");
                }
            }
        }
        Ok(())
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.kind, SpaceKind::Euclidean | SpaceKind::Hyperbolic)
    }

    pub fn is_periodic(&self) -> bool {
        !self.is_radial()
    }

    /// Short identifier, e.g. `euclid:3`, `h3`, `h2:0.5`, `circle:6.283...`.
    pub fn id(&self) -> String {
        match self.kind {
            SpaceKind::Euclidean => format!("euclid:{}", self.dim),
            SpaceKind::Hyperbolic if self.curvature_scale == 1.0 => format!("h{}", self.dim),
            SpaceKind::Hyperbolic => format!("h{}:{}", self.dim, self.curvature_scale),
            SpaceKind::Circle => format!("circle:{}", self.lengths[0]),
            SpaceKind::FlatTorus => {
                let ls: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
                format!("torus:{}", ls.join(","))
            }
        }
    }
}

impl std::str::FromStr for ModelSpace {
    type Err = crate::Error;

    /// Inverse of [`ModelSpace::id`]; `circle` alone is the circle of length 2 pi.
    fn from_str(id: &str) -> Result<Self> {
        let (head, arg) = match id.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (id, None),
        };
        let num = |a: &str| -> Result<f64> {
            a.trim()
                .parse::<f64>()
                .map_err(|_| crate::Error::Contract(format!("bad number {a:?} in space id {id:?}")))
        };
        match (head, arg) {
            ("euclid", Some(n)) => ModelSpace::euclidean(n.parse().map_err(|_| crate::Error::Contract(format!("bad dimension in {id:?}")))?),
            ("circle", None) => ModelSpace::circle(2.0 * PI),
            ("circle", Some(l)) => ModelSpace::circle(num(l)?),
            ("torus", Some(ls)) => ModelSpace::flat_torus(ls.split(',').map(num).collect::<Result<_>>()?),
            (h, k) if h.len() > 1 && h.starts_with('h') => {
                let n = h[1..]
                    .parse()
                    .map_err(|_| crate::Error::Contract(format!("bad dimension in {id:?}")))?;
                ModelSpace::hyperbolic(n, k.map_or(Ok(1.0), num)?)
            }
            _ => contract(format!("unknown space {id:?} (euclid:N, hN[:K], circle[:L], torus:L1,L2,...)")),
        }
    }
}

/// Nonnegative k with Ricci >= -k g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciBound(f64);

impl RicciBound {
    pub fn new(k: f64) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return contract(format!("Ricci bound k must be finite and >= 0, got {k}"));
        }
        Ok(RicciBound(k))
    }

    pub fn k(self) -> f64 {
        self.0
    }
}

/// Sharp k: 0 for flat kinds, (n-1)K on hyperbolic space.
pub fn ricci_lower_bound(space: &ModelSpace) -> RicciBound {
    match space.kind {
        SpaceKind::Hyperbolic => RicciBound((space.dim - 1) as f64 * space.curvature_scale),
        _ => RicciBound(0.0),
    }
}

fn require_radial(space: &ModelSpace, r: f64) -> Result<()> {
    if !space.is_radial() {
        return contract("periodic spaces have no radial reduction");
    }
    if !(r > 0.0) {
        return contract(format!("radius must be positive, got {r}"));
    }
    Ok(())
}

/// a(r) with Delta u = u_rr + a(r) u_r for radial u.
pub fn radial_laplacian_coefficient(space: &ModelSpace, r: f64) -> Result<f64> {
    require_radial(space, r)?;
    let m = (space.dim - 1) as f64;
    Ok(match space.kind {
        SpaceKind::Euclidean => m / r,
        _ => {
            let s = space.curvature_scale.sqrt();
            m * s / (s * r).tanh()
        }
    })
}

/// Area of the unit m-sphere in R^(m+1).
pub fn sphere_area(m: usize) -> f64 {
    let h = 0.5 * (m as f64 + 1.0);
    2.0 * PI.powf(h) / tgamma(h)
}

/// Radial density w(r): the integral of a radial u is the integral of u(r) w(r) dr.
pub fn volume_weight(space: &ModelSpace, r: f64) -> Result<f64> {
    require_radial(space, r)?;
    let n = space.dim;
    let omega = sphere_area(n - 1);
    let m = (n - 1) as i32;
    Ok(match space.kind {
        SpaceKind::Euclidean => omega * r.powi(m),
        _ => {
            let s = space.curvature_scale.sqrt();
            omega * ((s * r).sinh() / s).powi(m)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for s in [
            ModelSpace::euclidean(4).unwrap(),
            ModelSpace::hyperbolic(3, 1.0).unwrap(),
            ModelSpace::hyperbolic(2, 0.25).unwrap(),
            ModelSpace::circle(2.0 * PI).unwrap(),
            ModelSpace::flat_torus(vec![1.5, 2.0]).unwrap(),
        ] {
            assert_eq!(s.id().parse::<ModelSpace>().unwrap(), s);
        }
        assert_eq!("circle".parse::<ModelSpace>().unwrap(), ModelSpace::circle(2.0 * PI).unwrap());
        for bad in ["euclid", "h", "hx", "sphere:2", "circle:-1", "h1"] {
            assert!(bad.parse::<ModelSpace>().is_err(), "{bad}");
        }
    }

    #[test]
    fn sharp_bounds() {
        assert_eq!(ricci_lower_bound(&ModelSpace::euclidean(3).unwrap()).k(), 0.0);
        assert_eq!(ricci_lower_bound(&ModelSpace::hyperbolic(3, 1.0).unwrap()).k(), 2.0);
        assert_eq!(ricci_lower_bound(&ModelSpace::circle(2.0 * PI).unwrap()).k(), 0.0);
    }

    #[test]
    fn radial_coefficients() {
        let e3 = ModelSpace::euclidean(3).unwrap();
        assert_eq!(radial_laplacian_coefficient(&e3, 2.0).unwrap(), 1.0);
        let h3 = ModelSpace::hyperbolic(3, 1.0).unwrap();
        assert!((radial_laplacian_coefficient(&h3, 40.0).unwrap() - 2.0).abs() < 1e-15);
        let h2 = ModelSpace::hyperbolic(2, 1.0).unwrap();
        // coth(1), mpmath
        assert!((radial_laplacian_coefficient(&h2, 1.0).unwrap() - 1.3130352854993313036).abs() < 1e-15);
        let c = ModelSpace::circle(1.0).unwrap();
        assert!(radial_laplacian_coefficient(&c, 1.0).is_err());
        assert!(volume_weight(&c, 1.0).is_err());
    }

    #[test]
    fn weights() {
        let e3 = ModelSpace::euclidean(3).unwrap();
        assert!((volume_weight(&e3, 1.0).unwrap() - 4.0 * PI).abs() < 1e-13);
        let h3 = ModelSpace::hyperbolic(3, 1.0).unwrap();
        let r = 1e-5;
        assert!((volume_weight(&h3, r).unwrap() / (4.0 * PI * r * r) - 1.0).abs() < 1e-9);
        assert!((sphere_area(0) - 2.0).abs() < 1e-15);
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn invalid_spaces() {
        assert!(ModelSpace::euclidean(0).is_err());
        assert!(ModelSpace::euclidean(9).is_err());
        assert!(ModelSpace::hyperbolic(3, 0.0).is_err());
        assert!(ModelSpace::circle(-1.0).is_err());
        assert!(ModelSpace::flat_torus(vec![]).is_err());
        let bad = ModelSpace {
            kind: SpaceKind::Circle,
            dim: 2,
            curvature_scale: 0.0,
            lengths: vec![1.0, 1.0],
        };
        assert!(bad.validate().is_err());
        assert!(RicciBound::new(-1.0).is_err());
    }
}
