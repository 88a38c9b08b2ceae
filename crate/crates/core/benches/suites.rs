use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use serreloc::abcat::Backend;
use serreloc::field::Field;
use serreloc::serre::SerreSpec;
use serreloc::verify::{run_suite_with, Execution, Suite};

fn configs() -> Vec<(&'static str, SerreSpec)> {
    let a2 = Backend::path_a2(Field::Prime(2));
    let mv = Backend::matvec(Field::Prime(2), vec![2, 1]).unwrap();
    vec![
        ("pathA2", SerreSpec::from_labels(&a2, &["S2"]).unwrap()),
        ("matvec21", SerreSpec::from_labels(&mv, &["E1_11", "E1_12", "E1_21", "E1_22"]).unwrap()),
    ]
}

fn bench_suites(c: &mut Criterion) {
    let suites = [Suite::Lemma2_4, Suite::ColimitOracle, Suite::Prop4_9];
    for (name, spec) in configs() {
        let mut group = c.benchmark_group(format!("suites/{name}"));
        group.sample_size(10);
        for suite in suites {
            if suite == Suite::Prop4_9 && !spec.backend().tensor_capable() {
                continue;
            }
            for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
                group.bench_with_input(BenchmarkId::new(suite.name(), label), &exec, |b, &exec| {
                    b.iter(|| run_suite_with(suite, &spec, 32, 1, exec).unwrap())
                });
            }
        }
        group.finish();
    }
}

criterion_group!(benches, bench_suites);
criterion_main!(benches);
