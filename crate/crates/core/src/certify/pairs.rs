use super::{nodes, Field, Sample, Section, SweepSpec, VerificationReport};
use crate::bounds::{ln_harnack_factor, lyh_kinematics_with, SBranch, Variant};
use crate::error::contract;
use crate::kernels::Convention;
use crate::par::try_map;
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PAIR_COLUMNS: [&str; 4] = ["x1", "t1", "x2", "t2"];

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Pair {
    pub x1: Vec<f64>,
    pub t1: f64,
    pub x2: Vec<f64>,
    pub t2: f64,
    pub d: f64,
}

impl Pair {
    fn location(&self) -> Vec<f64> {
        vec![self.x1[0], self.t1, self.x2[0], self.t2]
    }
}

/// Seeded pairs with t1 < t2, log-uniform in t. Radial spaces draw both
/// points on one ray; periodic spaces use the flat (arc) distance.
pub(crate) fn draw_pairs(spec: &SweepSpec) -> Vec<Pair> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (ta, tb) = spec.t_grid.range();
    let (ra, rb) = spec.r_grid.range();
    let (la, lb) = (ta.ln(), tb.ln());
    let lengths = &spec.space.lengths;
    let periodic = spec.space.is_periodic();
    let point = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        if periodic {
            (0..lengths.len())
                .map(|i| {
                    if i == 0 {
                        rng.gen_range(ra..=rb)
                    } else {
                        rng.gen_range(-0.5 * lengths[i]..=0.5 * lengths[i])
                    }
                })
                .collect()
        } else {
            vec![rng.gen_range(ra..=rb)]
        }
    };
    let mut pairs = Vec::with_capacity(spec.pair_count);
    while pairs.len() < spec.pair_count {
        let a = rng.gen_range(la..=lb).exp();
        let b = rng.gen_range(la..=lb).exp();
        let x1 = point(&mut rng);
        let x2 = point(&mut rng);
        let (t1, t2) = if a < b { (a, b) } else { (b, a) };
        if !(t2 > t1 * (1.0 + 1e-12)) {
            continue;
        }
        let d = if periodic {
            x1.iter()
                .zip(&x2)
                .zip(lengths)
                .map(|((p, q), l)| {
                    let a = (p - q).abs() % l;
                    a.min(l - a).powi(2)
                })
                .sum::<f64>()
                .sqrt()
        } else {
            (x1[0] - x2[0]).abs()
        };
        pairs.push(Pair { x1, t1, x2, t2, d });
    }
    pairs
}

/// u(x1, t1) <= M u(x2, t2) for both (alpha, phi) variants, checked in log
/// space with relative tolerance `tol`.
pub fn check_harnack_pairs(spec: &SweepSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let field = Field::new(&spec.space, spec.solution)?;
    let n = field.dim();
    let k = spec.k();
    let pairs = draw_pairs(spec);
    let values = try_map(spec.execution, pairs.len(), |i| {
        let p = &pairs[i];
        Ok((field.jet_at(&p.x1, p.t1)?.f, field.jet_at(&p.x2, p.t2)?.f))
    })?;
    let tol = spec.tol.ln_1p();
    let mut sections = Vec::new();
    for (name, v) in [("main", Variant::MainNonlinear), ("linear", Variant::Linearized)] {
        let s = pairs
            .iter()
            .zip(&values)
            .map(|(p, (f1, f2))| {
                let m = ln_harnack_factor(v, n, k, p.t1, p.t2, p.d)?;
                Ok(Sample::new(p.location(), *f1, m + f2))
            })
            .collect::<Result<Vec<_>>>()?;
        sections.push(Section::new(name, true, tol, &PAIR_COLUMNS, s)?);
    }
    let mut r = VerificationReport::new(&spec.check.tag(), spec.params(), tol, sections)
        .with_note("slack = ln u(x1,t1) - ln M - ln u(x2,t2); tolerance ln(1 + tol)");
    if !spec.space.is_periodic() {
        r = r.with_note("pairs lie on one ray through the pole, so d = |r1 - r2| exactly");
    }
    Ok(r)
}

/// Li-Yau-Hamilton Harnack estimate along the kernel: pairs, its corollary
/// comparison and the Hamilton-Jacobi inequality, in the f = -ln((4 pi t)^(n/2) u)
/// convention.
pub fn check_lyh_harnack(spec: &SweepSpec) -> Result<VerificationReport> {
    if !spec.space.is_radial() {
        return contract("the LYH check needs a kernel with a pole (Euclidean or hyperbolic)");
    }
    spec.validate()?;
    let field = Field::new(&spec.space, spec.solution)?;
    let n = field.dim() as f64;
    let k = spec.k();
    let pairs = draw_pairs(spec);
    let fvals = try_map(spec.execution, pairs.len(), |i| {
        let p = &pairs[i];
        let f1 = field.jet_at(&p.x1, p.t1)?.to_convention(Convention::MinusLnNormalized).f;
        let f2 = field.jet_at(&p.x2, p.t2)?.to_convention(Convention::MinusLnNormalized).f;
        Ok((f1, f2))
    })?;
    let nodes = nodes(spec);
    let jets = try_map(spec.execution, nodes.len(), |i| {
        Ok(field.jet(nodes[i].0, nodes[i].1)?.to_convention(Convention::MinusLnNormalized))
    })?;

    let pair_samples = |b: SBranch| -> Vec<Sample> {
        pairs
            .iter()
            .zip(&fvals)
            .map(|(p, (f1, f2))| {
                let a = lyh_kinematics_with(k, p.t1, b);
                let c = lyh_kinematics_with(k, p.t2, b);
                let lhs = c.t_tilde.sqrt() * f2 - a.t_tilde.sqrt() * f1;
                let rhs = p.d * p.d / (4.0 * (c.s - a.s)) + 0.25 * n * (c.phi - a.phi);
                Sample::new(p.location(), lhs, rhs)
            })
            .collect()
    };
    let corollary = |b: SBranch| -> Vec<Sample> {
        nodes
            .iter()
            .zip(&jets)
            .map(|(&(r, t), j)| {
                let q = lyh_kinematics_with(k, t, b);
                let rt = q.t_tilde.sqrt();
                Sample::new(vec![r, t], j.f, r * r / (4.0 * rt * q.s) + 0.25 * n * q.phi / rt)
            })
            .collect()
    };
    let hji: Vec<Sample> = nodes
        .iter()
        .zip(&jets)
        .map(|(&(r, t), j)| {
            let lhs = j.gradsq + (2.0 + k * t) * j.f_t + j.f / t;
            Sample::new(vec![r, t], lhs, 0.25 * n * k * (2.0 + k * t))
        })
        .collect();

    let b = spec.s_branch;
    let mut sections = vec![
        Section::new("pairs", true, spec.tol, &PAIR_COLUMNS, pair_samples(b))?,
        Section::new("corollary", true, spec.tol, &["r", "t"], corollary(b))?,
        Section::new("hji", true, spec.tol, &["r", "t"], hji)?,
    ];
    for other in [SBranch::PathLength, SBranch::ClosedForm, SBranch::LiteralK0] {
        if other == b {
            continue;
        }
        sections.push(Section::new(&format!("pairs:{}", other.tag()), false, spec.tol, &PAIR_COLUMNS, pair_samples(other))?);
        sections.push(Section::new(&format!("corollary:{}", other.tag()), false, spec.tol, &["r", "t"], corollary(other))?);
    }
    let mut report = VerificationReport::new(&spec.check.tag(), spec.params(), spec.tol, sections);
    for s in report.sections.clone().iter().filter(|s| !s.asserted) {
        report = report.with_note(format!(
            "s-branch diagnostic {}: worst slack {:.6e}, {} of {} above tolerance (not asserted)",
            s.name,
            s.worst_slack,
            s.violations,
            s.count()
        ));
    }
    Ok(report)
}
