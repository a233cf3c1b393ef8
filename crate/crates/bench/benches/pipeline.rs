use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use swemls_bench::{chain_template, library, mini_kg, query_text};
use swemls_core::embed::{generate_walks, train, TrainConfig, WalkConfig};
use swemls_core::graph::{parse, serialize, Format};
use swemls_core::query::{evaluate, parse_query};
use swemls_core::{compile_template, find_mapping, parse_pattern, validate, vocab};

fn compile(c: &mut Criterion) {
    let mut group = c.benchmark_group("compile");
    group.bench_function("T3", |b| {
        b.iter(|| {
            let ast = parse_pattern(black_box("[{sym -> ML -> data / data} -> ML -> sym]")).unwrap();
            compile_template("T3", &ast).unwrap()
        })
    });
    for steps in [4, 16, 64] {
        group.bench_with_input(BenchmarkId::new("chain", steps), &steps, |b, &n| b.iter(|| chain_template(n)));
    }
    group.finish();
}

fn serialization(c: &mut Criterion) {
    let kg = mini_kg();
    let turtle = serialize(&kg, Format::Turtle);
    c.bench_function("serialize/turtle", |b| b.iter(|| serialize(black_box(&kg), Format::Turtle)));
    c.bench_function("parse/turtle", |b| b.iter(|| parse(black_box(&turtle), Format::Turtle).unwrap()));
}

fn query(c: &mut Criterion) {
    let kg = mini_kg();
    for name in ["listing-2-medical.rq", "listing-3-facebook.rq"] {
        let q = parse_query(&query_text(name)).unwrap();
        c.bench_function(&format!("query/{name}"), |b| b.iter(|| evaluate(black_box(&q), &kg)));
    }
}

fn conformance(c: &mut Criterion) {
    let kg = mini_kg();
    let lib = library();
    let systems = kg.subjects(&vocab::iri(vocab::RDF_TYPE), &vocab::term(vocab::SYSTEM));
    let t3 = lib.lookup("T3").unwrap();
    c.bench_function("mapping/all-systems-vs-T3", |b| {
        b.iter(|| systems.iter().filter(|s| find_mapping(&kg, s, t3).is_some()).count())
    });
    c.bench_function("validate/mini-kg", |b| b.iter(|| validate(black_box(&kg), &lib)));
}

fn embedding(c: &mut Criterion) {
    let kg = mini_kg();
    let mut group = c.benchmark_group("embed");
    group.sample_size(10);
    for parallel in [false, true] {
        let cfg = WalkConfig { parallel, ..WalkConfig::default() };
        group.bench_with_input(BenchmarkId::new("walks", if parallel { "parallel" } else { "sequential" }), &cfg, |b, cfg| {
            b.iter(|| generate_walks(&kg, cfg))
        });
    }
    let corpus = generate_walks(&kg, &WalkConfig::default());
    let cfg = TrainConfig { epochs: 1, ..TrainConfig::default() };
    group.bench_function("train/1-epoch", |b| b.iter(|| train(&corpus, &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, compile, serialization, query, conformance, embedding);
criterion_main!(benches);
