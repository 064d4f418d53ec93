use crate::args::{BoundsEval, BoundsTable, CheckArg, Command, Compare, ConventionArg, Entropy, KernelEval, Output, SweepArgs, Verify};
use crate::render::{self, Doc, Verdict};
use harnack_core::bounds::{
    alpha_phi, estimate_sides, harnack_factor, kernel_lower_bound, monotone_weight, EstimateId, SBranch, Variant,
};
use harnack_core::certify::{self, CheckKind, Grid, SolutionKind, SweepSpec};
use harnack_core::entropy::{entropy_trace, Functional};
use harnack_core::kernels::{euclid_jet, Convention};
use harnack_core::par::Execution;
use harnack_core::spaces::ModelSpace;
use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

/// Largest discrete dW/dt accepted as nonincreasing.
pub const MONOTONE_TOL: f64 = 1e-8;
/// Largest accepted |dW/dt by differences - formula|.
pub const IDENTITY_TOL: f64 = 1e-4;
pub const SIGN_TOL: f64 = 1e-8;

#[derive(Debug)]
pub enum CliError {
    Core(harnack_core::Error),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Core(harnack_core::Error::Numerical(_)) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<harnack_core::Error> for CliError {
    fn from(e: harnack_core::Error) -> Self {
        CliError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage<T>(m: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(m.into()))
}

pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn code(&self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::BoundsEval(a) => emit(&a.output, bounds_eval(a)?),
        Command::BoundsTable(a) => emit(&a.output, bounds_table(a)?),
        Command::KernelEval(a) => emit(&a.output, kernel_eval(a)?),
        Command::Verify(a) => emit(&a.output, verify(a)?),
        Command::Entropy(a) => emit(&a.output, entropy(a)?),
        Command::Compare(a) => emit(&a.output, compare(a)?),
    }
}

fn emit(out: &Output, doc: Doc) -> Result<Outcome> {
    let text = render::render(&doc, out.format);
    match &out.out {
        Some(p) => std::fs::write(p, text).map_err(CliError::Io)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // a closed reader (`| head`) is not an error
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(CliError::Io(e)),
            _ => {}
        },
    }
    Ok(match doc.pass() {
        Some(false) => Outcome::Fail,
        _ => Outcome::Pass,
    })
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// a:b:steps, geometric, steps + 1 points.
fn t_range(s: &str) -> Result<Vec<f64>> {
    let p: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Usage(format!("bad t range {s:?}, expected a:b:steps"));
    if p.len() != 3 {
        return Err(bad());
    }
    let a: f64 = p[0].parse().map_err(|_| bad())?;
    let b: f64 = p[1].parse().map_err(|_| bad())?;
    let m: usize = p[2].parse().map_err(|_| bad())?;
    if !(a > 0.0 && b > a && m >= 1) {
        return usage(format!("t range {s:?} needs 0 < a < b and steps >= 1"));
    }
    Ok(Grid::geometric(a, b, m + 1).values())
}

fn bounds_eval(a: &BoundsEval) -> Result<Doc> {
    let (n, k, t, d) = (a.n, a.k, a.t, a.d);
    if n == 0 || !(t > 0.0) || !(k >= 0.0) || !(d >= 0.0) {
        return usage("need n >= 1, t > 0, k >= 0, d >= 0");
    }
    let variant = |s: &str| if s == "main" { Variant::MainNonlinear } else { Variant::Linearized };
    let value = match a.estimate.as_str() {
        e @ ("main-alpha" | "main-phi" | "linear-alpha" | "linear-phi") => {
            let (v, what) = e.split_once('-').expect("dash");
            let ap = alpha_phi(variant(v), n, k, t);
            if what == "alpha" {
                ap.alpha
            } else {
                ap.phi
            }
        }
        e @ ("lower-main" | "lower-linear") => kernel_lower_bound(variant(&e[6..]), n, k, d, t)?,
        e @ ("harnack-main" | "harnack-linear") => {
            let Some(t2) = a.t2 else {
                return usage(format!("{e} needs --t2"));
            };
            harnack_factor(variant(&e[8..]), n, k, t, t2, d)?
        }
        "weight" => monotone_weight(n, k, t),
        tag => {
            let id = EstimateId::parse(tag)?;
            let aux = if id == EstimateId::HamiltonLog { a.a } else { a.alpha };
            let jet = euclid_jet(n, d, t)?.to_convention(id.convention());
            estimate_sides(id, &jet, n, k, t, aux)?.rhs
        }
    };
    let mut p = params([
        ("estimate", a.estimate.clone()),
        ("n", n.to_string()),
        ("k", k.to_string()),
        ("t", t.to_string()),
        ("d", d.to_string()),
    ]);
    if let Some(t2) = a.t2 {
        p.insert("t2".into(), t2.to_string());
    }
    if let Some(x) = a.alpha {
        p.insert("alpha".into(), x.to_string());
    }
    if let Some(x) = a.a {
        p.insert("A".into(), x.to_string());
    }
    Ok(Doc::Value {
        command: "bounds-eval",
        params: p,
        name: a.estimate.clone(),
        value,
    })
}

fn bounds_table(a: &BoundsTable) -> Result<Doc> {
    let ts = t_range(&a.t_range)?;
    let ids = EstimateId::COMPARABLE;
    let mut columns = vec!["t".to_string()];
    columns.extend(ids.iter().map(|id| id.tag()));
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        let mut row = vec![t];
        for id in ids {
            let jet = euclid_jet(a.n, a.d, t)?.to_convention(id.convention());
            row.push(estimate_sides(id, &jet, a.n, a.k, t, None)?.rhs);
        }
        rows.push(row);
    }
    Ok(Doc::Table {
        command: "bounds-table",
        params: params([
            ("n", a.n.to_string()),
            ("k", a.k.to_string()),
            ("t_range", a.t_range.clone()),
            ("d", a.d.to_string()),
        ]),
        columns,
        rows,
    })
}

fn kernel_eval(a: &KernelEval) -> Result<Doc> {
    let space: ModelSpace = a.space.parse()?;
    let field = certify::Field::new(&space, SolutionKind::Kernel)?;
    let conv = match a.convention {
        ConventionArg::Lnu => Convention::LnU,
        ConventionArg::MinusLn => Convention::MinusLnNormalized,
    };
    let j = field.jet(a.d, a.t)?.to_convention(conv);
    let columns = ["d", "t", "u", "f", "f_r", "f_rr", "f_t", "lap_f", "gradsq", "heat_residual"];
    let row = vec![a.d, a.t, j.u, j.f, j.f_r, j.f_rr, j.f_t, j.lap_f, j.gradsq, j.heat_residual()];
    Ok(Doc::Table {
        command: "kernel-eval",
        params: params([
            ("space", space.id()),
            ("d", a.d.to_string()),
            ("t", a.t.to_string()),
            (
                "convention",
                match conv {
                    Convention::LnU => "lnu".into(),
                    Convention::MinusLnNormalized => "minus-ln".into(),
                },
            ),
        ]),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows: vec![row],
    })
}

fn sweep_spec(s: &SweepArgs, check: CheckKind) -> Result<SweepSpec> {
    let space: ModelSpace = s.space.parse()?;
    let mut spec = SweepSpec::new(space, check);
    if let Some(g) = &s.r_grid {
        spec.r_grid = Grid::parse(g)?;
    }
    if let Some(g) = &s.t_grid {
        spec.t_grid = Grid::parse(g)?;
    }
    if let Some(k) = s.k {
        spec.k = Some(k);
    }
    if let Some(t) = s.tol {
        spec.tol = t;
    }
    spec.solution = SolutionKind::parse(&s.solution)?;
    spec.execution = if s.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    Ok(spec)
}

fn verify(a: &Verify) -> Result<Doc> {
    let check = match (a.check, &a.estimate) {
        (CheckArg::Gradient, Some(e)) => CheckKind::Gradient(EstimateId::parse(e)?),
        (CheckArg::Gradient, None) => return usage("--check gradient needs --estimate"),
        (_, Some(_)) => return usage("--estimate only applies to --check gradient"),
        (CheckArg::Perelman, _) => CheckKind::Perelman,
        (CheckArg::Harnack, _) => CheckKind::HarnackPairs,
        (CheckArg::Lyh, _) => CheckKind::LyhHarnack,
        (CheckArg::KernelBounds, _) => CheckKind::KernelBounds,
        (CheckArg::Residuals, _) => CheckKind::EvolutionResiduals,
        (CheckArg::Monotone, _) => CheckKind::MonotoneWeight,
    };
    let mut spec = sweep_spec(&a.sweep, check)?;
    if let Some(p) = a.pairs {
        spec.pair_count = p;
    }
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    if let Some(t) = a.fd_tol {
        spec.fd_tol = t;
    }
    if let Some(b) = &a.s_branch {
        spec.s_branch = SBranch::parse(b)
            .ok_or_else(|| CliError::Usage(format!("unknown s-branch {b:?} (path-length, closed-form, literal)")))?;
    }
    if let Some(x) = a.hamilton_a_scale {
        spec.hamilton_a_scale = x;
    }
    let mut note = None;
    if a.negative_control {
        if check == CheckKind::Gradient(EstimateId::HamiltonLog) {
            spec.hamilton_a_scale *= 0.5;
            note = Some(format!("negative control: sup bound scaled to {}", spec.hamilton_a_scale));
        } else {
            let k = spec.k();
            if !(k > 0.0) {
                return usage("--negative-control needs a space with k > 0 or --estimate hamilton-log");
            }
            spec.k = Some(0.5 * k);
            note = Some(format!("negative control: k understated from {k} to {}", 0.5 * k));
        }
    }
    let mut report = certify::run(&spec)?;
    if let Some(n) = note {
        report = report.with_note(n);
    }
    Ok(Doc::Report {
        command: "verify",
        report,
        samples: a.sweep.samples,
    })
}

fn compare(a: &Compare) -> Result<Doc> {
    let spec = sweep_spec(&a.sweep, CheckKind::Compare)?;
    Ok(Doc::Report {
        command: "compare",
        report: certify::run(&spec)?,
        samples: a.sweep.samples,
    })
}

fn entropy(a: &Entropy) -> Result<Doc> {
    let functional = Functional::parse(&a.functional)?;
    let space: ModelSpace = a.space.parse()?;
    let solution = SolutionKind::parse(&a.solution)?;
    let k = a.k.unwrap_or_else(|| harnack_core::spaces::ricci_lower_bound(&space).k());
    let ts = t_range(&a.t_range)?;
    let exec = if a.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let tr = entropy_trace(functional, &space, solution, &ts, k, exec)?;

    let max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut checks = Vec::new();
    if functional == Functional::NashTilde {
        checks.push(("decreasing", max(&tr.discrete_derivatives), 0.0, true));
    } else {
        checks.push(("nonincreasing", max(&tr.discrete_derivatives), MONOTONE_TOL, false));
        if solution == SolutionKind::Kernel {
            checks.push(("nonpositive", max(&tr.values), SIGN_TOL, false));
        }
    }
    if let Some(r) = &tr.identity_residuals {
        checks.push(("identity", max(r), IDENTITY_TOL, false));
    }
    let masses: Vec<f64> = tr.normalization_checks.iter().map(|m| (m - 1.0).abs()).collect();
    checks.push(("unit-mass", max(&masses), harnack_core::entropy::MASS_TOL, false));
    let checks: Vec<render::Check> = checks
        .into_iter()
        .map(|(name, worst, tol, strict)| render::Check {
            name: name.to_string(),
            worst,
            tol,
            pass: if strict { worst < tol } else { worst <= tol },
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);

    let columns = ["t", "value", "discrete_derivative", "formula_derivative", "identity_residual", "mass"];
    let nt = ts.len();
    let rows = (0..nt)
        .map(|i| {
            vec![
                ts[i],
                tr.values[i],
                tr.discrete_derivatives.get(i).copied().unwrap_or(f64::NAN),
                tr.formula_derivatives.as_ref().map_or(f64::NAN, |v| v[i]),
                tr.identity_residuals.as_ref().map_or(f64::NAN, |v| v[i]),
                tr.normalization_checks[i],
            ]
        })
        .collect();
    Ok(Doc::Trace {
        command: "entropy",
        params: params([
            ("functional", functional.tag().to_string()),
            ("space", space.id()),
            ("solution", solution.tag()),
            ("t_range", a.t_range.clone()),
            ("k", k.to_string()),
        ]),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        rows,
        verdict: Verdict { pass, checks },
    })
}
