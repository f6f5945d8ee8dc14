use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use levy_noise::par::{replicate, RandomSource};
use levy_noise::poisson_eq::{Domain, McSolver};
use levy_noise::prm::{low_order_indices, KAlphaEvaluator, PrmSampler, SampleBox};
use levy_noise::{LevyMeasureModel, OrthonormalJumpBasis};

fn pair() -> LevyMeasureModel {
    LevyMeasureModel::atoms(&[(-1.0, 1.0), (1.0, 1.0)]).unwrap()
}

fn poisson_mc(c: &mut Criterion) {
    let model = pair();
    let mut group = c.benchmark_group("poisson_mc");
    for (domain, x) in [(Domain::Interval, vec![0.5]), (Domain::Ball, vec![0.0; 3])] {
        let solver = McSolver::new(&domain, &model, &x, 0.0).unwrap();
        let source = RandomSource::new(7);
        let n = 20_000;
        group.bench_with_input(BenchmarkId::new("parallel", domain.name()), &n, |b, &n| {
            b.iter(|| black_box(solver.samples(n, &source)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", domain.name()), &n, |b, &n| {
            b.iter(|| {
                let v: Vec<f64> = (0..n as u64)
                    .map(|i| solver.eval(&solver.sampler().sample(&mut source.stream(i))))
                    .collect();
                black_box(v)
            })
        });
    }
    group.finish();
}

fn charlier_mc(c: &mut Criterion) {
    let model = pair();
    let bbox = SampleBox::centered(1, 8.0);
    let basis = OrthonormalJumpBasis::build(&model, 2).unwrap();
    let eval = KAlphaEvaluator::new(&model, &basis, &bbox, 0.0, 6).unwrap();
    let sampler = PrmSampler::new(&model, &bbox, 0.0).unwrap();
    let alphas = low_order_indices(6);
    let source = RandomSource::new(7);
    let n = 5_000;
    let one = |rng: &mut rand_chacha::ChaCha8Rng| {
        let sums = eval.sums(&sampler.sample(rng));
        alphas.iter().map(|a| eval.from_sums(&sums, a).unwrap()).sum::<f64>()
    };
    let mut group = c.benchmark_group("charlier_mc");
    group.bench_function("parallel", |b| b.iter(|| black_box(replicate(&source, n, |rng, _| one(rng)))));
    group.bench_function("sequential", |b| {
        b.iter(|| black_box((0..n as u64).map(|i| one(&mut source.stream(i))).collect::<Vec<_>>()))
    });
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = poisson_mc, charlier_mc
}
criterion_main!(benches);
