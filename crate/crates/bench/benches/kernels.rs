// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hkt_core::hopf::{build_hopf, verify_44};
use hkt_core::torus::flow::{gradient, perturb};
use hkt_core::torus::horizontal_slice;
use hkt_core::torus::spectral::Spectral;
use hkt_core::{rat, Connection, HopfSpec, HypercomplexFrame, LatticeField, TorusSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hopf(c: &mut Criterion) {
    let spec = HopfSpec::new(rat(2, 1)).unwrap();
    c.bench_function("hopf/build q=2", |b| b.iter(|| build_hopf(black_box(spec.clone())).unwrap()));
    let geo = build_hopf(spec).unwrap();
    c.bench_function("hopf/verify_44", |b| b.iter(|| verify_44(black_box(&geo)).unwrap()));
}

fn torus(c: &mut Criterion) {
    let mut g = c.benchmark_group("torus");
    g.sample_size(20);
    for rank in [2, 3] {
        let spec = TorusSpec::new(4, rank, HypercomplexFrame::left()).unwrap();
        let conn = Connection::trivial(&spec.lattice());
        let l = spec.frame.i.clone();
        g.bench_function(format!("slice N=4 n={rank}"), |b| {
            b.iter(|| horizontal_slice(&spec, black_box(&conn), &l, 1e-10).unwrap())
        });
    }
    let lat = TorusSpec::new(8, 2, HypercomplexFrame::left()).unwrap().lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = perturb(&Connection::trivial(&lat), 1e-2, &mut rng).unwrap();
    g.bench_function("flow gradient N=8 n=2", |b| b.iter(|| gradient(black_box(&a), 1.0).unwrap()));
    let x = LatticeField::random(&lat, 1, 1.0, &mut rng);
    let sp = Spectral::new(8);
    let channels = x.data().len() / sp.sites();
    g.bench_function("spectral derivative N=8", |b| {
        b.iter(|| sp.derivative(black_box(x.data()), channels, 2))
    });
    g.finish();
}

criterion_group!(benches, hopf, torus);
criterion_main!(benches);
