use criterion::{criterion_group, criterion_main, Criterion as Bench};

use rankci::inference::{Analysis, ZStyle};
use rankci::simulation::{coverage_experiment, generate_replication, Scenario};
use rankci::{CiMode, Criterion, Orientation, RankMatrix};
use rankci_cli::parse_input_str;

const NFL: &str = include_str!("../../cli/data/nfl.csv");

fn nfl_matrix() -> RankMatrix {
    parse_input_str(NFL, Orientation::LowerIsBetter, "nfl").unwrap()
}

fn bench_dominance(c: &mut Bench) {
    let matrix = nfl_matrix().canonicalize();
    c.bench_function("dominance_matrix_nfl", |b| {
        b.iter(|| rankci::dominance::dominance_matrix(&matrix).unwrap())
    });
}

fn bench_variances(c: &mut Bench) {
    let matrix = nfl_matrix();
    let analysis = Analysis::new(&matrix).unwrap();
    c.bench_function("var_cpdp_nfl", |b| {
        b.iter(|| analysis.variances(Criterion::Cpdp).unwrap())
    });
    c.bench_function("var_ctpdp_bound_nfl", |b| {
        b.iter(|| analysis.variances(Criterion::Ctpdp).unwrap())
    });
}

fn bench_ci_pipeline(c: &mut Bench) {
    let matrix = nfl_matrix();
    c.bench_function("simultaneous_ci_nfl", |b| {
        b.iter(|| {
            Analysis::new(&matrix)
                .unwrap()
                .simultaneous(Criterion::Cpdp, 0.95)
                .unwrap()
        })
    });
    c.bench_function("individual_ci_nfl", |b| {
        b.iter(|| {
            Analysis::new(&matrix)
                .unwrap()
                .individual(Criterion::Cpdp, 0.95, ZStyle::OneSided)
                .unwrap()
        })
    });
}

fn bench_simulation(c: &mut Bench) {
    let scenario = Scenario::case(1, 30, 7).unwrap();
    c.bench_function("generate_replication_case1_m30", |b| {
        let mut rep = 0u64;
        b.iter(|| {
            rep += 1;
            generate_replication(&scenario, rep).unwrap()
        })
    });
    c.bench_function("coverage_case1_m30_50reps", |b| {
        b.iter(|| {
            coverage_experiment(&scenario, 50, 0.95, CiMode::Simultaneous, Criterion::Cpdp).unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_dominance,
    bench_variances,
    bench_ci_pipeline,
    bench_simulation
);
criterion_main!(benches);
