use branchgroups_core::{
    grigorchuk, gupta_sidki, is_finite_gs3, membership, quotient, Engine, SubgroupSpec, Word,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn words(e: &Engine, texts: &[&str]) -> Vec<Word> {
    texts.iter().map(|t| e.word(t).unwrap()).collect()
}

fn word_problem(c: &mut Criterion) {
    let e = Engine::new(gupta_sidki(3).unwrap());
    let g = e.word("[[b^-1, a], b1 b2]^(a b) (b0 b1^2 a)^9").unwrap();
    c.bench_function("gs3/is_trivial", |b| {
        b.iter(|| {
            // Fresh engine each time so the memo tables do not short-circuit.
            let fresh = Engine::new(gupta_sidki(3).unwrap());
            black_box(fresh.is_trivial(&g))
        })
    });
    let samples = words(&e, &["a b", "b0 b1^2 a", "b0 b1 b2^2 a^2", "(a b)^2 b1"]);
    c.bench_function("gs3/order", |b| {
        b.iter(|| {
            let fresh = Engine::new(gupta_sidki(3).unwrap());
            for g in &samples {
                black_box(fresh.order(g, 3u64.pow(7)).unwrap());
            }
        })
    });
    let gr = Engine::new(grigorchuk());
    let h = gr.word("(a b)^16 (a c)^8 (a d)^4").unwrap();
    c.bench_function("grigorchuk/is_trivial", |b| {
        b.iter(|| {
            let fresh = Engine::new(grigorchuk());
            black_box(fresh.is_trivial(&h))
        })
    });
}

fn quotients(c: &mut Criterion) {
    let e = Engine::new(gupta_sidki(3).unwrap());
    let gens = words(&e, &["a", "b"]);
    let mut group = c.benchmark_group("gs3/quotient");
    for n in [3usize, 4, 5] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| black_box(quotient(&e, &gens, n).unwrap().order()))
        });
    }
    group.finish();
}

fn subgroups(c: &mut Criterion) {
    let e = Engine::new(gupta_sidki(3).unwrap());
    let specs: Vec<SubgroupSpec> = [&["b0 b1", "b1 b2"][..], &["b0 b1^2", "b1 b0^2"], &["b0 b1 a", "b1 b2 a"]]
        .iter()
        .map(|g| SubgroupSpec::new(&e, words(&e, g)))
        .collect();
    c.bench_function("gs3/is_finite", |b| {
        b.iter(|| {
            let fresh = Engine::new(gupta_sidki(3).unwrap());
            for h in &specs {
                black_box(is_finite_gs3(&fresh, h).unwrap());
            }
        })
    });
    let k = SubgroupSpec::new(&e, words(&e, &["b0", "b1"]));
    let h = e.word("b0 b1^-1 b0^2 b1").unwrap();
    c.bench_function("gs3/membership", |b| {
        b.iter(|| black_box(membership(&e, &h, &k, 6, 4).unwrap()))
    });
}

criterion_group!(benches, word_problem, quotients, subgroups);
criterion_main!(benches);
