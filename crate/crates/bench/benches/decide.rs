use std::time::Duration;

use cnfbox_core::decider::k_satisfiable;
use cnfbox_core::spec::{basic_to_advanced, parse_rational};
use cnfbox_core::{Formula, GenParams, Generator, Method};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn formulas(vars: u32, clauses: usize, count: u64) -> Vec<Formula> {
    let (lengths, props) =
        basic_to_advanced(&parse_rational("3").unwrap(), &parse_rational("0.5").unwrap(), 1, Method::New).unwrap();
    let gp = GenParams { depth: 1, boxes: 1, clauses, vars, lengths, props, method: Method::New, seed: 0 };
    (0..count).map(|s| Generator::with_seed(&gp, s).generate_formula().unwrap()).collect()
}

fn decide(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide");
    for (vars, clauses) in [(3, 30), (3, 60), (4, 40)] {
        let batch = formulas(vars, clauses, 20);
        group.bench_with_input(BenchmarkId::new(format!("n{vars}"), clauses), &batch, |b, batch| {
            b.iter(|| {
                for f in batch {
                    black_box(k_satisfiable(f, Some(Duration::from_secs(10))).status);
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, decide);
criterion_main!(benches);
