//! Sequential and parallel execution on the kernels that fan out work.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cmapx_core::cmapprox::mcm_approx_cm;
use cmapx_core::exec::Exec;
use cmapx_core::field::{Field, PrimeField};
use cmapx_core::homalg::ExtSpace;
use cmapx_core::linalg::DenseMat;
use cmapx_core::module::Module;
use cmapx_core::ring::GradedRing;
use cmapx_core::suite;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn dense_rank(c: &mut Criterion) {
    let f = PrimeField::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut group = c.benchmark_group("dense rank");
    for n in [128usize, 256] {
        let rows: Vec<Vec<u32>> = (0..n).map(|_| (0..n).map(|_| f.random(&mut rng)).collect()).collect();
        let m = DenseMat::from_rows(rows, n);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &m, |b, m| b.iter(|| m.rank(&f, exec)));
        }
    }
    group.finish();
}

fn ext1_approximation(c: &mut Criterion) {
    let a = GradedRing::veronese(PrimeField::default(), 3).unwrap();
    let k = Module::residue_field(a, 0);
    let m = mcm_approx_cm(&k, 2, Exec::Sequential).unwrap().m;
    let mut group = c.benchmark_group("Ext1(M, M) over A(3)");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| ExtSpace::compute(1, &m, &m, exec).unwrap().dim()));
    }
    group.finish();
}

fn obstruction_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("obstruction suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| suite::obstruction_suite(8, exec).unwrap().passed()));
    }
    group.finish();
}

criterion_group!(benches, dense_rank, ext1_approximation, obstruction_suite);
criterion_main!(benches);
