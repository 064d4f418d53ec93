use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use harnack_core::bounds::EstimateId;
use harnack_core::certify::{run, CheckKind, SolutionKind, SweepSpec};
use harnack_core::entropy::{entropy_trace, Functional};
use harnack_core::par::Execution;
use harnack_core::spaces::ModelSpace;
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn h3() -> ModelSpace {
    ModelSpace::hyperbolic(3, 1.0).unwrap()
}

fn sweeps(c: &mut Criterion) {
    let cases = [
        ("h3-main-grid", SweepSpec::new(h3(), CheckKind::Gradient(EstimateId::MainNonlinear))),
        ("h3-harnack-pairs", SweepSpec::new(h3(), CheckKind::HarnackPairs)),
        ("h2-mckean-grid", {
            let mut s = SweepSpec::new(ModelSpace::hyperbolic(2, 1.0).unwrap(), CheckKind::Gradient(EstimateId::Linearized));
            s.r_grid = harnack_core::certify::Grid::uniform(0.05, 6.0, 40);
            s
        }),
        ("circle-residuals", SweepSpec::new(ModelSpace::circle(2.0 * std::f64::consts::PI).unwrap(), CheckKind::EvolutionResiduals)),
    ];
    let mut g = c.benchmark_group("sweeps");
    g.sample_size(10);
    for (name, spec) in cases {
        for (mode, exec) in MODES {
            let mut s = spec.clone();
            s.execution = exec;
            g.bench_with_input(BenchmarkId::new(name, mode), &s, |b, s| b.iter(|| black_box(run(s).unwrap())));
        }
    }
    g.finish();
}

fn entropy(c: &mut Criterion) {
    let circle = ModelSpace::circle(2.0 * std::f64::consts::PI).unwrap();
    let ts: Vec<f64> = harnack_core::certify::Grid::geometric(0.2, 3.0, 31).values();
    let mut g = c.benchmark_group("entropy");
    g.sample_size(10);
    for (mode, exec) in MODES {
        g.bench_function(BenchmarkId::new("circle-wp", mode), |b| {
            b.iter(|| black_box(entropy_trace(Functional::Wp, &circle, SolutionKind::Kernel, &ts, 0.0, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, sweeps, entropy);
criterion_main!(benches);
