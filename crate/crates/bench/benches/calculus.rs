use criterion::{black_box, criterion_group, criterion_main, Criterion};
use stiso_bench::{iso_pairs, ISO_PAIRS};
use stiso_core::iso::{iso_decide, normalize, synthesize};
use stiso_core::semantics::{decide_correct, generate_typed};
use stiso_core::symbolic::{certify_iso_witnesses, SearchOptions};
use stiso_core::syntax::{parse_process, parse_type};
use stiso_core::typecheck::{check_process, InterfacePair, TypeEnv};

fn syntax(c: &mut Criterion) {
    let text = "l?(x:int).case r { inl: r!(x + 1).0, inr: if x == 0 then { l!(true).0 } else { l!(false).0 } }";
    c.bench_function("parse process", |b| b.iter(|| parse_process(black_box(text)).unwrap()));
    c.bench_function("parse type", |b| b.iter(|| parse_type(black_box(ISO_PAIRS[3].0)).unwrap()));
}

fn typing(c: &mut Criterion) {
    let pairs = iso_pairs();
    let adapters: Vec<_> = pairs.iter().map(|(t, s)| synthesize(t, s).unwrap()).collect();
    c.bench_function("check synthesized adapters", |b| {
        b.iter(|| {
            for a in &adapters {
                check_process(&TypeEnv::new(), &a.forward, &a.forward_iface()).unwrap();
            }
        })
    });
}

fn isomorphisms(c: &mut Criterion) {
    let pairs = iso_pairs();
    c.bench_function("normalize", |b| b.iter(|| pairs.iter().map(|(t, _)| normalize(t).0).collect::<Vec<_>>()));
    c.bench_function("iso_decide", |b| b.iter(|| pairs.iter().filter(|(t, s)| iso_decide(t, s).is_derivable()).count()));
    c.bench_function("synthesize", |b| b.iter(|| pairs.iter().map(|(t, s)| synthesize(t, s).unwrap()).collect::<Vec<_>>()));
    let mut g = c.benchmark_group("certify");
    g.sample_size(10);
    for (i, (t, s)) in pairs.iter().enumerate() {
        let a = synthesize(t, s).unwrap();
        g.bench_function(format!("pair {i}"), |b| {
            b.iter(|| certify_iso_witnesses(t, s, &a.forward, &a.backward, &SearchOptions::default()).unwrap())
        });
    }
    g.finish();
}

fn reduction(c: &mut Criterion) {
    let iface = InterfacePair::closed();
    let procs: Vec<_> = (0..50).map(|seed| generate_typed(&iface, seed, 8)).collect();
    c.bench_function("decide_correct generated", |b| {
        b.iter(|| procs.iter().filter(|p| decide_correct(p).is_correct()).count())
    });
}

criterion_group!(benches, syntax, typing, isomorphisms, reduction);
criterion_main!(benches);
