use super::residuals::v_evolution_samples;
use super::{nodes, CheckKind, Field, Sample, Section, SweepSpec, Table, VerificationReport};
use crate::bounds::{alpha_phi, estimate_sides, estimate_slack, ln_monotone_weight, EstimateId, Variant};
use crate::error::contract;
use crate::kernels::Convention;
use crate::par::try_map;
use crate::spaces::SpaceKind;
use crate::Result;

const NODE_COLUMNS: [&str; 2] = ["r", "t"];

/// Slack of a gradient estimate at every (r, t) node, at the chosen k and
/// at k + 1 (any larger k is also a valid Ricci bound).
pub fn sweep_gradient_estimate(spec: &SweepSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let CheckKind::Gradient(id) = spec.check else {
        return contract("sweep_gradient_estimate needs a gradient check");
    };
    let field = Field::new(&spec.space, spec.solution)?;
    let n = field.dim();
    let nodes = nodes(spec);
    let t0 = spec.t_grid.values()[0];
    let sup_a = if id == EstimateId::HamiltonLog {
        if !spec.space.is_periodic() {
            return contract("HamiltonLog is certified on compact (periodic) spaces only");
        }
        Some(field.sup(t0)? * spec.hamilton_a_scale)
    } else {
        None
    };
    let at_k = |k: f64| -> Result<Vec<Sample>> {
        try_map(spec.execution, nodes.len(), |i| {
            let (r, t) = nodes[i];
            let jet = field.jet(r, t)?.to_convention(id.convention());
            let s = match sup_a {
                Some(a) => {
                    let te = t - t0;
                    if te > 0.0 {
                        estimate_sides(id, &jet, n, k, te, Some(a))?
                    } else {
                        // no elapsed time: the inequality reads 0 <= u^2 ln(A/u)
                        crate::bounds::Sides {
                            lhs: 0.0,
                            rhs: jet.u * jet.u * (a / jet.u).ln(),
                        }
                    }
                }
                None => estimate_sides(id, &jet, n, k, t, None)?,
            };
            Ok(Sample::new(vec![r, t], s.lhs, s.rhs))
        })
    };
    let k = spec.k();
    let sharp = Section::new("sharp", true, spec.tol, &NODE_COLUMNS, at_k(k)?)?;
    let robust = Section::new("robust", true, spec.tol, &NODE_COLUMNS, at_k(k + 1.0)?)?;
    let mut report = VerificationReport::new(&spec.check.tag(), spec.params(), spec.tol, vec![sharp, robust])
        .with_metric("k_robust", k + 1.0);
    if let Some(a) = sup_a {
        report = report
            .with_metric("hamilton_a", a)
            .with_note(format!("HamiltonLog uses elapsed time t - {t0} and A = sup u(., {t0}) x scale"));
    }
    Ok(report)
}

/// Perelman-type quantity v on the grid; on the circle also the residual of
/// its evolution equation.
pub fn sweep_perelman(spec: &SweepSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let field = Field::new(&spec.space, spec.solution)?;
    let n = field.dim();
    let k = spec.k();
    let nodes = nodes(spec);
    let samples = try_map(spec.execution, nodes.len(), |i| {
        let (r, t) = nodes[i];
        let jet = field.jet(r, t)?.to_convention(Convention::MinusLnNormalized);
        let s = estimate_sides(EstimateId::PerelmanLYH, &jet, n, k, t, None)?;
        Ok(Sample::new(vec![r, t], s.lhs, s.rhs))
    })?;
    let mut sections = vec![Section::new("v", true, spec.tol, &NODE_COLUMNS, samples)?];
    if spec.space.kind == SpaceKind::Circle {
        let ev = v_evolution_samples(&field, k, &nodes, spec.execution)?;
        sections.push(Section::new("evolution", true, spec.fd_tol, &NODE_COLUMNS, ev)?);
    }
    Ok(VerificationReport::new(&spec.check.tag(), spec.params(), spec.tol, sections)
        .with_note("v is reported without its factor u; the sign is the same"))
}

/// t -> weight(t) u(x, t) nondecreasing at each sample point, and the
/// pointwise form -alpha f_t <= phi for both (alpha, phi) pairs.
pub fn check_monotone_weight(spec: &SweepSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let field = Field::new(&spec.space, spec.solution)?;
    let n = field.dim();
    let k = spec.k();
    let xs = spec.r_grid.values();
    let ts = spec.t_grid.values();
    if ts.len() < 2 {
        return contract("monotone check needs at least two times");
    }
    let nodes = nodes(spec);
    let jets = try_map(spec.execution, nodes.len(), |i| field.jet(nodes[i].0, nodes[i].1))?;
    let nt = ts.len();
    let mut weight = Vec::new();
    for (ix, &x) in xs.iter().enumerate() {
        for j in 0..nt - 1 {
            let a = ln_monotone_weight(n, k, ts[j]) + jets[ix * nt + j].f;
            let b = ln_monotone_weight(n, k, ts[j + 1]) + jets[ix * nt + j + 1].f;
            weight.push(Sample::new(vec![x, ts[j], ts[j + 1]], a, b));
        }
    }
    let pointwise = |v: Variant| -> Vec<Sample> {
        nodes
            .iter()
            .zip(&jets)
            .map(|(&(r, t), j)| {
                let ap = alpha_phi(v, n, k, t);
                Sample::new(vec![r, t], -ap.alpha * j.f_t, ap.phi)
            })
            .collect()
    };
    let sections = vec![
        Section::new("weight", true, spec.tol, &["x", "t1", "t2"], weight)?,
        Section::new("pointwise-linear", true, spec.tol, &NODE_COLUMNS, pointwise(Variant::Linearized))?,
        Section::new("pointwise-main", true, spec.tol, &NODE_COLUMNS, pointwise(Variant::MainNonlinear))?,
    ];
    Ok(VerificationReport::new(&spec.check.tag(), spec.params(), spec.tol, sections)
        .with_note("weight compares ln(weight u) at consecutive times; slack = earlier - later"))
}

/// Slack of every comparable estimate at each node, plus the claim that the
/// nonlinear estimate is at least as sharp as the linearized one and Davies'.
pub fn compare_estimates(spec: &SweepSpec) -> Result<VerificationReport> {
    spec.validate()?;
    let field = Field::new(&spec.space, spec.solution)?;
    let n = field.dim();
    let k = spec.k();
    let nodes = nodes(spec);
    let ids = EstimateId::COMPARABLE;
    let rows = try_map(spec.execution, nodes.len(), |i| {
        let (r, t) = nodes[i];
        let jet = field.jet(r, t)?;
        let mut row = vec![r, t];
        for id in ids {
            row.push(estimate_slack(id, &jet.to_convention(id.convention()), n, k, t, None)?);
        }
        Ok(row)
    })?;
    let col = |id: EstimateId| 2 + ids.iter().position(|x| *x == id).expect("comparable");
    let mut sections = Vec::new();
    for id in ids {
        let c = col(id);
        let s = rows.iter().map(|row| Sample::new(vec![row[0], row[1]], row[c], 0.0)).collect();
        // Ni's inequality is a k = 0 statement
        let asserted = !(id == EstimateId::NiK0 && k > 0.0);
        sections.push(Section::new(&id.tag(), asserted, spec.tol, &NODE_COLUMNS, s)?);
    }
    let main = col(EstimateId::MainNonlinear);
    for other in [EstimateId::Linearized, EstimateId::Davies(2.0)] {
        let c = col(other);
        let s = rows.iter().map(|row| Sample::new(vec![row[0], row[1]], row[c], row[main])).collect();
        sections.push(Section::new(&format!("main>={}", other.tag()), true, spec.tol, &NODE_COLUMNS, s)?);
    }
    let mut columns = vec!["r".to_string(), "t".to_string()];
    columns.extend(ids.iter().map(|id| id.tag()));
    let mut report = VerificationReport::new(&spec.check.tag(), spec.params(), spec.tol, sections)
        .with_note("ordering sections: slack = slack(other) - slack(main), claimed <= 0");
    report.table = Some(Table { columns, rows });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{Grid, SolutionKind};
    use crate::spaces::ModelSpace;

    fn small(space: ModelSpace, check: CheckKind) -> SweepSpec {
        let mut s = SweepSpec::new(space, check);
        s.r_grid = Grid::uniform(0.05, 4.0, 12);
        s.t_grid = Grid::geometric(0.05, 4.0, 8);
        s
    }

    #[test]
    fn euclidean_main_is_equality() {
        let s = small(ModelSpace::euclidean(3).unwrap(), CheckKind::Gradient(EstimateId::MainNonlinear));
        let r = sweep_gradient_estimate(&s).unwrap();
        let sharp = r.section("sharp").unwrap();
        assert!(sharp.samples.iter().all(|x| x.slack.abs() < 1e-10));
        assert!(r.pass);
    }

    #[test]
    fn understated_k_fails() {
        let mut s = small(ModelSpace::hyperbolic(3, 1.0).unwrap(), CheckKind::Gradient(EstimateId::MainNonlinear));
        assert!(sweep_gradient_estimate(&s).unwrap().pass);
        s.k = Some(1.0);
        let r = sweep_gradient_estimate(&s).unwrap();
        assert!(!r.pass && r.violations > 0);
    }

    #[test]
    fn hamilton_log_needs_true_sup() {
        let mut s = small(ModelSpace::circle(std::f64::consts::TAU).unwrap(), CheckKind::Gradient(EstimateId::HamiltonLog));
        s.r_grid = Grid::uniform(-3.0, 3.0, 13);
        s.solution = SolutionKind::Cosine(0.5);
        assert!(sweep_gradient_estimate(&s).unwrap().pass);
        s.hamilton_a_scale = 0.5;
        assert!(!sweep_gradient_estimate(&s).unwrap().pass);
        let h = small(ModelSpace::hyperbolic(3, 1.0).unwrap(), CheckKind::Gradient(EstimateId::HamiltonLog));
        assert!(sweep_gradient_estimate(&h).is_err());
    }

    #[test]
    fn worst_location_reproduces() {
        let s = small(ModelSpace::hyperbolic(3, 1.0).unwrap(), CheckKind::Gradient(EstimateId::Yau));
        let r = sweep_gradient_estimate(&s).unwrap();
        let sec = r.section("sharp").unwrap();
        let mut one = s.clone();
        one.r_grid = Grid::Explicit(vec![sec.worst_location[0]]);
        one.t_grid = Grid::Explicit(vec![sec.worst_location[1]]);
        let again = sweep_gradient_estimate(&one).unwrap();
        assert_eq!(again.section("sharp").unwrap().worst_slack, sec.worst_slack);
    }

    #[test]
    fn euclidean_weight_is_constant_at_pole() {
        let mut s = small(ModelSpace::euclidean(2).unwrap(), CheckKind::MonotoneWeight);
        s.r_grid = Grid::Explicit(vec![0.0]);
        let r = check_monotone_weight(&s).unwrap();
        assert!(r.pass);
        assert!(r.section("weight").unwrap().samples.iter().all(|x| x.slack.abs() < 1e-13));
    }

    #[test]
    fn compare_table_shape() {
        let s = small(ModelSpace::hyperbolic(3, 1.0).unwrap(), CheckKind::Compare);
        let r = compare_estimates(&s).unwrap();
        let t = r.table.as_ref().unwrap();
        assert_eq!(t.columns.len(), 2 + EstimateId::COMPARABLE.len());
        assert_eq!(t.rows.len(), 12 * 8);
        assert!(r.section("main>=davies:2").unwrap().pass());
    }
}
