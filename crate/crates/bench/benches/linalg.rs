use acyclica::exactla::{kernel_basis, rank, Field, SparseMatrix};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A `n×n` matrix with about `density` nonzero entries per row, small integer values,
/// and rank deficiency built in by repeating the last rows as sums of earlier ones.
fn random_matrix(field: Field, n: usize, density: usize, seed: u64) -> SparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<(usize, i64)>> = (0..n - n / 4)
        .map(|_| {
            (0..density)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(-9..=9)))
                .collect()
        })
        .collect();
    while rows.len() < n {
        let (i, j) = (rng.gen_range(0..rows.len()), rng.gen_range(0..rows.len()));
        let sum = rows[i].iter().chain(&rows[j]).copied().collect();
        rows.push(sum);
    }
    let trip = rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, field.from_i64(v))));
    SparseMatrix::from_triplets(field, n, n, trip)
}

fn bench_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank");
    for field in [Field::Rational, Field::Prime(101)] {
        for n in [40, 120] {
            let m = random_matrix(field, n, 4, 7);
            g.bench_with_input(BenchmarkId::new(field.to_string(), n), &m, |b, m| b.iter(|| rank(m)));
        }
    }
    g.finish();
}

fn bench_kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel");
    for field in [Field::Rational, Field::Prime(101)] {
        let m = random_matrix(field, 80, 4, 11);
        g.bench_with_input(BenchmarkId::new(field.to_string(), 80), &m, |b, m| {
            b.iter(|| kernel_basis(m))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_rank, bench_kernel);
criterion_main!(benches);
