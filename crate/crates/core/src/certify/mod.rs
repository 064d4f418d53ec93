//! Grid and pair sweeps that evaluate every inequality against exact heat
//! kernels (or exact non-kernel solutions on periodic spaces) and reduce the
//! results into deterministic reports.

mod field;
mod kernel_bounds;
mod pairs;
mod report;
mod residuals;
mod sweeps;

pub use field::Field;
pub use kernel_bounds::check_kernel_bounds;
pub use pairs::{check_harnack_pairs, check_lyh_harnack};
pub use report::{Sample, Section, Table, VerificationReport};
pub use residuals::check_evolution_residuals;
pub use sweeps::{check_monotone_weight, compare_estimates, sweep_gradient_estimate, sweep_perelman};

use crate::bounds::{EstimateId, SBranch};
use crate::error::contract;
use crate::par::Execution;
use crate::spaces::{ricci_lower_bound, ModelSpace, SpaceKind};
use crate::Result;
use std::collections::BTreeMap;

/// Geometric t-grids advance by this ratio unless a point count is given.
pub const T_RATIO: f64 = 1.2;
pub const DEFAULT_TOL: f64 = 1e-7;
pub const DEFAULT_LYH_TOL: f64 = 1e-6;
pub const DEFAULT_FD_TOL: f64 = 1e-5;
pub const DEFAULT_PAIRS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Uniform { start: f64, end: f64, points: usize },
    Geometric { start: f64, end: f64, points: usize },
    Explicit(Vec<f64>),
}

impl Grid {
    pub fn uniform(start: f64, end: f64, points: usize) -> Self {
        Grid::Uniform { start, end, points }
    }

    pub fn geometric(start: f64, end: f64, points: usize) -> Self {
        Grid::Geometric { start, end, points }
    }

    /// Geometric grid with ratio close to `ratio`, both ends included.
    pub fn geometric_ratio(start: f64, end: f64, ratio: f64) -> Self {
        let points = ((end / start).ln() / ratio.ln()).ceil().max(1.0) as usize + 1;
        Grid::Geometric { start, end, points }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Grid::Uniform { start, end, points } => match points {
                0 => vec![],
                1 => vec![*start],
                &m => (0..m)
                    .map(|i| start + (end - start) * i as f64 / (m - 1) as f64)
                    .collect(),
            },
            Grid::Geometric { start, end, points } => match points {
                0 => vec![],
                1 => vec![*start],
                &m => {
                    let q = (end / start).ln() / (m - 1) as f64;
                    (0..m)
                        .map(|i| if i + 1 == m { *end } else { start * (q * i as f64).exp() })
                        .collect()
                }
            },
            Grid::Explicit(v) => v.clone(),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Grid::Uniform { start, end, points } => format!("uniform:{start}:{end}:{points}"),
            Grid::Geometric { start, end, points } => format!("geometric:{start}:{end}:{points}"),
            Grid::Explicit(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("explicit:{}", s.join(","))
            }
        }
    }

    /// Inverse of [`Grid::tag`].
    pub fn parse(tag: &str) -> Result<Self> {
        let bad = || crate::Error::Contract(format!("bad grid {tag:?} (uniform:a:b:n, geometric:a:b:n, explicit:x1,x2,...)"));
        let (kind, rest) = tag.split_once(':').ok_or_else(bad)?;
        if kind == "explicit" {
            let v = rest.split(',').map(|x| x.trim().parse::<f64>()).collect::<std::result::Result<_, _>>();
            return v.map(Grid::Explicit).map_err(|_| bad());
        }
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].parse::<f64>().map_err(|_| bad())?;
        let end = parts[1].parse::<f64>().map_err(|_| bad())?;
        let points = parts[2].parse::<usize>().map_err(|_| bad())?;
        match kind {
            "uniform" => Ok(Grid::uniform(start, end, points)),
            "geometric" => Ok(Grid::geometric(start, end, points)),
            _ => Err(bad()),
        }
    }

    pub fn range(&self) -> (f64, f64) {
        let v = self.values();
        (v[0], v[v.len() - 1])
    }

    fn validate(&self, what: &str, positive: bool) -> Result<()> {
        let v = self.values();
        if v.is_empty() {
            return contract(format!("{what} grid is empty"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return contract(format!("{what} grid has non-finite points"));
        }
        if v.windows(2).any(|w| !(w[1] > w[0])) {
            return contract(format!("{what} grid must be strictly increasing"));
        }
        if positive && !(v[0] > 0.0) {
            return contract(format!("{what} grid must be strictly positive"));
        }
        if let Grid::Geometric { start, .. } = self {
            if !(*start > 0.0) {
                return contract("geometric grids need a positive start");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CheckKind {
    Gradient(EstimateId),
    Perelman,
    HarnackPairs,
    LyhHarnack,
    KernelBounds,
    EvolutionResiduals,
    MonotoneWeight,
    /// Per-node slack of every comparable estimate plus the sharpness ordering.
    Compare,
}

impl CheckKind {
    pub fn tag(&self) -> String {
        match self {
            CheckKind::Gradient(_) => "gradient".into(),
            CheckKind::Perelman => "perelman".into(),
            CheckKind::HarnackPairs => "harnack".into(),
            CheckKind::LyhHarnack => "lyh".into(),
            CheckKind::KernelBounds => "kernel-bounds".into(),
            CheckKind::EvolutionResiduals => "residuals".into(),
            CheckKind::MonotoneWeight => "monotone".into(),
            CheckKind::Compare => "compare".into(),
        }
    }
}

/// The positive solution a sweep runs on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolutionKind {
    /// Heat kernel with pole at the origin.
    Kernel,
    /// prod_i (1 + a cos(2 pi x_i / L_i)) at t = 0, periodic spaces only.
    Cosine(f64),
}

impl SolutionKind {
    pub fn tag(&self) -> String {
        match self {
            SolutionKind::Kernel => "kernel".into(),
            SolutionKind::Cosine(a) => format!("cosine:{a}"),
        }
    }

    /// `kernel` or `cosine:a`.
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.split_once(':') {
            None if tag == "kernel" => Ok(SolutionKind::Kernel),
            Some(("cosine", a)) => a
                .parse()
                .map(SolutionKind::Cosine)
                .map_err(|_| crate::Error::Contract(format!("bad amplitude in {tag:?}"))),
            _ => contract(format!("unknown solution {tag:?} (kernel, cosine:a)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub space: ModelSpace,
    pub check: CheckKind,
    /// Radius on radial spaces, first coordinate on periodic ones.
    pub r_grid: Grid,
    pub t_grid: Grid,
    pub pair_count: usize,
    pub seed: u64,
    pub tol: f64,
    /// Tolerance for quantities with finite-difference time derivatives.
    pub fd_tol: f64,
    /// Ricci bound to use; the space's sharp value when `None`.
    pub k: Option<f64>,
    /// Multiplier on the sup bound A for HamiltonLog (1 is the true sup).
    pub hamilton_a_scale: f64,
    pub solution: SolutionKind,
    pub s_branch: SBranch,
    pub execution: Execution,
}

impl SweepSpec {
    /// A spec with the default grids and tolerances for this space and check.
    pub fn new(space: ModelSpace, check: CheckKind) -> Self {
        let periodic = space.is_periodic();
        let half = space.lengths.first().map_or(0.0, |l| 0.5 * l);
        let (r_grid, t_grid) = match (check, space.kind) {
            (CheckKind::KernelBounds, _) => (Grid::uniform(0.0, 5.0, 101), Grid::geometric_ratio(1e-3, 5.0, T_RATIO)),
            (CheckKind::HarnackPairs, _) if periodic => {
                (Grid::uniform(-half, half, 201), Grid::geometric_ratio(0.1, 5.0, T_RATIO))
            }
            (CheckKind::HarnackPairs, _) => (Grid::uniform(0.0, 8.0, 161), Grid::geometric_ratio(0.1, 5.0, T_RATIO)),
            (CheckKind::LyhHarnack, _) => (Grid::uniform(0.05, 6.0, 120), Grid::geometric_ratio(0.05, 6.0, T_RATIO)),
            (CheckKind::MonotoneWeight, _) if periodic => (
                Grid::Explicit((0..5).map(|i| -half + 0.5 * half * i as f64).collect()),
                Grid::geometric_ratio(0.05, 5.0, T_RATIO),
            ),
            (CheckKind::MonotoneWeight, _) => (
                Grid::Explicit(vec![0.0, 0.5, 1.0, 2.0, 4.0]),
                Grid::geometric_ratio(0.05, 5.0, T_RATIO),
            ),
            (_, SpaceKind::Euclidean) => (Grid::uniform(0.0, 5.0, 101), Grid::geometric_ratio(0.05, 5.0, T_RATIO)),
            (_, SpaceKind::Hyperbolic) => (Grid::uniform(0.05, 8.0, 400), Grid::geometric_ratio(0.05, 8.0, T_RATIO)),
            _ => (Grid::uniform(-half, half, 201), Grid::geometric_ratio(0.05, 5.0, T_RATIO)),
        };
        let tol = match check {
            CheckKind::LyhHarnack => DEFAULT_LYH_TOL,
            CheckKind::EvolutionResiduals => DEFAULT_FD_TOL,
            _ => DEFAULT_TOL,
        };
        SweepSpec {
            space,
            check,
            r_grid,
            t_grid,
            pair_count: DEFAULT_PAIRS,
            seed: DEFAULT_SEED,
            tol,
            fd_tol: DEFAULT_FD_TOL,
            k: None,
            hamilton_a_scale: 1.0,
            solution: SolutionKind::Kernel,
            s_branch: SBranch::default(),
            execution: Execution::default(),
        }
    }

    pub fn k(&self) -> f64 {
        self.k.unwrap_or_else(|| ricci_lower_bound(&self.space).k())
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        self.r_grid.validate("r", false)?;
        self.t_grid.validate("t", true)?;
        if !(self.tol > 0.0 && self.tol < 1.0) || !(self.fd_tol > 0.0 && self.fd_tol < 1.0) {
            return contract("tolerances must lie in (0, 1)");
        }
        if let Some(k) = self.k {
            if !(k >= 0.0 && k.is_finite()) {
                return contract("k must be a nonnegative real");
            }
        }
        if !(self.hamilton_a_scale > 0.0) {
            return contract("HamiltonLog A scale must be positive");
        }
        if matches!(self.check, CheckKind::HarnackPairs | CheckKind::LyhHarnack) && self.pair_count == 0 {
            return contract("pair checks need pair_count > 0");
        }
        if let CheckKind::Gradient(id) = self.check {
            id.validate()?;
        }
        if let SolutionKind::Cosine(a) = self.solution {
            if !self.space.is_periodic() {
                return contract("cosine data needs a periodic space");
            }
            if !(a.abs() < 1.0) {
                return contract("cosine amplitude must satisfy |a| < 1");
            }
        }
        if self.space.is_periodic() {
            let half = 0.5 * self.space.lengths[0];
            let (a, b) = self.r_grid.range();
            if a < -half * (1.0 + 1e-12) || b > half * (1.0 + 1e-12) {
                return contract(format!("x grid must lie in [-{half}, {half}]"));
            }
        } else {
            let (a, _) = self.r_grid.range();
            if a < 0.0 {
                return contract("radial grid must be nonnegative");
            }
        }
        Ok(())
    }

    /// The resolved configuration, echoed into every report.
    pub fn params(&self) -> BTreeMap<String, String> {
        let mut p = BTreeMap::new();
        p.insert("space".into(), self.space.id());
        p.insert("check".into(), self.check.tag());
        if let CheckKind::Gradient(id) = self.check {
            p.insert("estimate".into(), id.tag());
        }
        p.insert("r_grid".into(), self.r_grid.tag());
        p.insert("t_grid".into(), self.t_grid.tag());
        p.insert("k".into(), format!("{}", self.k()));
        p.insert("tol".into(), format!("{}", self.tol));
        p.insert("fd_tol".into(), format!("{}", self.fd_tol));
        p.insert("solution".into(), self.solution.tag());
        if matches!(self.check, CheckKind::HarnackPairs | CheckKind::LyhHarnack) {
            p.insert("pairs".into(), self.pair_count.to_string());
            p.insert("seed".into(), self.seed.to_string());
        }
        if matches!(self.check, CheckKind::LyhHarnack) {
            p.insert("s_branch".into(), self.s_branch.tag().into());
        }
        if matches!(self.check, CheckKind::Gradient(EstimateId::HamiltonLog)) {
            p.insert("hamilton_a_scale".into(), format!("{}", self.hamilton_a_scale));
        }
        p
    }
}

/// Runs the check named in the spec.
pub fn run(spec: &SweepSpec) -> Result<VerificationReport> {
    match spec.check {
        CheckKind::Gradient(_) => sweep_gradient_estimate(spec),
        CheckKind::Perelman => sweep_perelman(spec),
        CheckKind::HarnackPairs => check_harnack_pairs(spec),
        CheckKind::LyhHarnack => check_lyh_harnack(spec),
        CheckKind::KernelBounds => check_kernel_bounds(spec),
        CheckKind::EvolutionResiduals => check_evolution_residuals(spec),
        CheckKind::MonotoneWeight => check_monotone_weight(spec),
        CheckKind::Compare => compare_estimates(spec),
    }
}

/// Nodes in r-major order.
pub(crate) fn nodes(spec: &SweepSpec) -> Vec<(f64, f64)> {
    let rs = spec.r_grid.values();
    let ts = spec.t_grid.values();
    rs.iter().flat_map(|&r| ts.iter().map(move |&t| (r, t))).collect()
}
