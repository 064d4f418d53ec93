use super::SolutionKind;
use crate::error::contract;
use crate::kernels::{euclid_jet, h2_jet, h3_jet, periodic_jet, periodic_log_jet_1d, KernelJet, LogJet1d};
use crate::quad::QuadratureSpec;
use crate::radial_solver::PeriodicSolution;
use crate::spaces::{ModelSpace, SpaceKind};
use crate::Result;
use num_complex::Complex64;

const IMAGE_TOL: f64 = 1e-15;
const SUP_SAMPLES: usize = 4096;

#[derive(Debug, Clone)]
enum Source {
    Euclid(usize),
    H3(f64),
    H2(f64, QuadratureSpec),
    Images(Vec<f64>),
    Spectral(PeriodicSolution),
}

/// A positive heat solution on a model space, evaluated as LnU jets.
#[derive(Debug, Clone)]
pub struct Field {
    space: ModelSpace,
    source: Source,
}

impl Field {
    pub fn new(space: &ModelSpace, solution: SolutionKind) -> Result<Self> {
        space.validate()?;
        let source = match (space.kind, solution) {
            (SpaceKind::Euclidean, SolutionKind::Kernel) => Source::Euclid(space.dim),
            (SpaceKind::Hyperbolic, SolutionKind::Kernel) => match space.dim {
                3 => Source::H3(space.curvature_scale),
                2 => Source::H2(space.curvature_scale, QuadratureSpec::default()),
                n => return contract(format!("hyperbolic kernels are available for n = 2, 3, not {n}")),
            },
            (_, SolutionKind::Kernel) => Source::Images(space.lengths.clone()),
            (SpaceKind::Circle | SpaceKind::FlatTorus, SolutionKind::Cosine(a)) => {
                let coeffs = space
                    .lengths
                    .iter()
                    .map(|_| vec![Complex64::new(1.0, 0.0), Complex64::new(0.5 * a, 0.0)])
                    .collect();
                Source::Spectral(PeriodicSolution::from_modes(&space.lengths, coeffs, 0.0)?)
            }
            _ => return contract("cosine data needs a periodic space"),
        };
        Ok(Field {
            space: space.clone(),
            source,
        })
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    pub fn is_kernel(&self) -> bool {
        !matches!(self.source, Source::Spectral(_))
    }

    /// Jet at radius x (radial spaces) or at (x, 0, ..., 0) (periodic).
    pub fn jet(&self, x: f64, t: f64) -> Result<KernelJet> {
        let mut p = vec![0.0; self.dim()];
        p[0] = x;
        self.jet_at(&p, t)
    }

    /// Jet at a full point; radial spaces read only `p[0]` as the radius.
    pub fn jet_at(&self, p: &[f64], t: f64) -> Result<KernelJet> {
        match &self.source {
            Source::Euclid(n) => euclid_jet(*n, p[0], t),
            Source::H3(kk) => h3_jet(p[0], t, *kk),
            Source::H2(kk, q) => {
                let s = kk.sqrt();
                let j = h2_jet(s * p[0], kk * t, q)?;
                // u_K(d, t) = K u_1(sqrt(K) d, K t) in two dimensions
                Ok(KernelJet {
                    u: kk * j.u,
                    f: j.f + kk.ln(),
                    f_r: s * j.f_r,
                    f_rr: kk * j.f_rr,
                    f_t: kk * j.f_t,
                    lap_f: kk * j.lap_f,
                    gradsq: kk * j.gradsq,
                    t,
                    ..j
                })
            }
            Source::Images(l) => periodic_jet(l, p, t, IMAGE_TOL),
            Source::Spectral(s) => s.evolve(t)?.jet(p),
        }
    }

    /// The first-axis factor on periodic spaces, with derivatives to order 4.
    pub fn log_jet_1d(&self, x: f64, t: f64) -> Result<LogJet1d> {
        match &self.source {
            Source::Images(l) => periodic_log_jet_1d(l[0], x, t, IMAGE_TOL),
            Source::Spectral(s) => s.evolve(t)?.log_jet_1d(0, x),
            _ => contract("one-dimensional log jets exist on periodic spaces only"),
        }
    }

    /// sup over the space of u(., t).
    pub fn sup(&self, t: f64) -> Result<f64> {
        match &self.source {
            Source::Spectral(s) => {
                let s = s.evolve(t)?;
                Ok((0..s.dim())
                    .map(|i| {
                        let l = s.lengths()[i];
                        (0..SUP_SAMPLES)
                            .map(|j| s.axis_derivs(i, l * (j as f64 / SUP_SAMPLES as f64 - 0.5))[0])
                            .fold(f64::NEG_INFINITY, f64::max)
                    })
                    .product())
            }
            // kernels peak at the pole
            _ => Ok(self.jet_at(&vec![0.0; self.dim()], t)?.u),
        }
    }
}
