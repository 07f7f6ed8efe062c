use criterion::{black_box, criterion_group, criterion_main, Criterion};

use cubicl::constants::{main_term, Cutoffs};
use cubicl::family::default_shards;
use cubicl::{CharEvaluator, FamilySpec, Level, MomentEngine, MonicPoly};
use cubicl_bench::{base_monics, family, tower};

fn field_mul(c: &mut Criterion) {
    let t = tower();
    let xs: Vec<_> = t.elements(Level::Ext).collect();
    c.bench_function("ext_mul_all_pairs_q5", |b| {
        b.iter(|| {
            let mut acc = t.from_int(1);
            for &x in &xs {
                for &y in &xs {
                    acc = t.add(acc, t.mul(x, y));
                }
            }
            black_box(acc)
        })
    });
}

fn char_eval(c: &mut Criterion) {
    let t = tower();
    let fam = family(&t, 2);
    let f = fam.modulus(&t, 17);
    let ns = base_monics(&t, 3);
    c.bench_function("evaluator_build_deg2", |b| b.iter(|| black_box(CharEvaluator::new(&t, &f, 3))));
    let ev = CharEvaluator::new(&t, &f, 3);
    c.bench_function("evaluator_all_cubics", |b| {
        b.iter(|| ns.iter().filter(|n| !ev.value(n.coeffs()).is_zero()).count())
    });
}

fn moment(c: &mut Criterion) {
    let t = tower();
    let fam = family(&t, 2);
    let spec = FamilySpec::new(2, MonicPoly::t(Level::Base), MonicPoly::one(Level::Base)).unwrap();
    let engine = MomentEngine::new(&t, spec);
    let mut g = c.benchmark_group("moment");
    g.sample_size(20);
    g.bench_function("enumerate_g2", |b| b.iter(|| black_box(family(&t, 2).len())));
    g.bench_function("twisted_g2", |b| b.iter(|| black_box(engine.moment(&fam, default_shards()))));
    g.bench_function("main_term_g2", |b| {
        b.iter(|| main_term(&t, 2, &MonicPoly::t(Level::Base), &MonicPoly::one(Level::Base), Cutoffs::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, field_mul, char_eval, moment);
criterion_main!(benches);
