use super::{nodes, Field, Sample, Section, SweepSpec, VerificationReport};
use crate::bounds::{ln_dm_h, ln_kernel_lower_bound, Variant};
use crate::error::contract;
use crate::kernels::euclid_jet;
use crate::par::try_map;
use crate::spaces::SpaceKind;
use crate::special::expm1_minus_id;
use crate::Result;
use std::f64::consts::{LN_2, PI};

const NODE_COLUMNS: [&str; 2] = ["r", "t"];

/// ln of the on-diagonal lower bounds, written directly from the closed forms.
fn ln_diagonal_bounds(n: usize, k: f64, t: f64) -> (f64, f64) {
    let nf = n as f64;
    let base = -0.5 * nf * (4.0 * PI * t).ln();
    let y = 2.0 * k * t;
    let main = if y > 0.0 {
        base - 0.25 * nf * LN_2 + 0.5 * nf * y.ln() - 0.25 * nf * expm1_minus_id(y).ln()
    } else {
        base
    };
    (main, base - 0.25 * nf * k * t)
}

/// Both lower bounds against the exact kernel, their on-diagonal forms, the
/// Cheeger-Yau comparison with flat space and the Davies-Mandouvalos ratio
/// scan (hyperbolic only). Comparisons are in log space with tolerance ln(1 + tol).
pub fn check_kernel_bounds(spec: &SweepSpec) -> Result<VerificationReport> {
    if !spec.space.is_radial() {
        return contract("kernel bounds are checked on Euclidean and hyperbolic spaces");
    }
    spec.validate()?;
    let field = Field::new(&spec.space, spec.solution)?;
    let n = field.dim();
    let k = spec.k();
    let tol = spec.tol.ln_1p();
    let hyperbolic = spec.space.kind == SpaceKind::Hyperbolic;
    let nodes = nodes(spec);
    let ln_u = try_map(spec.execution, nodes.len(), |i| Ok(field.jet(nodes[i].0, nodes[i].1)?.f))?;

    let mut sections = Vec::new();
    for (name, v) in [("lower-main", Variant::MainNonlinear), ("lower-linear", Variant::Linearized)] {
        let s = nodes
            .iter()
            .zip(&ln_u)
            .map(|(&(r, t), &lu)| Ok(Sample::new(vec![r, t], ln_kernel_lower_bound(v, n, k, r, t)?, lu)))
            .collect::<Result<Vec<_>>>()?;
        sections.push(Section::new(name, true, tol, &NODE_COLUMNS, s)?);
    }

    let ts = spec.t_grid.values();
    let pole = try_map(spec.execution, ts.len(), |i| Ok(field.jet(0.0, ts[i])?.f))?;
    let (mut dm, mut dl) = (Vec::new(), Vec::new());
    for (&t, &lu) in ts.iter().zip(&pole) {
        let (m, l) = ln_diagonal_bounds(n, k, t);
        dm.push(Sample::new(vec![0.0, t], m, lu));
        dl.push(Sample::new(vec![0.0, t], l, lu));
    }
    sections.push(Section::new("diagonal-main", true, tol, &NODE_COLUMNS, dm)?);
    sections.push(Section::new("diagonal-linear", true, tol, &NODE_COLUMNS, dl)?);

    let mut report_metrics = Vec::new();
    if hyperbolic {
        let flat = try_map(spec.execution, nodes.len(), |i| Ok(euclid_jet(n, nodes[i].0, nodes[i].1)?.f))?;
        let s = nodes
            .iter()
            .zip(ln_u.iter().zip(&flat))
            .map(|(&(r, t), (&lu, &le))| Sample::new(vec![r, t], lu, le))
            .collect();
        sections.push(Section::new("cheeger-yau", true, tol, &NODE_COLUMNS, s)?);

        let kk = spec.space.curvature_scale;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (&(r, t), &lu) in nodes.iter().zip(&ln_u) {
            let q = lu - ln_dm_h(n, kk, r, t)?;
            lo = lo.min(q);
            hi = hi.max(q);
        }
        let c = hi.max(-lo).exp();
        report_metrics.push(("dm_c_lo", lo.exp()));
        report_metrics.push(("dm_c_hi", hi.exp()));
        report_metrics.push(("dm_c", c));
    }

    let mut report = VerificationReport::new(&spec.check.tag(), spec.params(), tol, sections)
        .with_note("slack = ln(bound) - ln(u); tolerance ln(1 + tol)");
    for (key, v) in report_metrics {
        report = report.with_metric(key, v);
    }
    if hyperbolic {
        report = report.with_note("Davies-Mandouvalos: u/h lies in [dm_c_lo, dm_c_hi] over the grid, c = max(dm_c_hi, 1/dm_c_lo)");
    }
    Ok(report)
}
