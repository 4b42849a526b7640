use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use edf_bench::verification_inputs;
use edf_core::constructions::m4_cedf;
use edf_core::diffcore::edf_multiset;
use edf_core::equivalence::{cedf_equivalent, EquivalenceOptions};
use edf_core::search::{search_h_edf, SearchOptions, SymmetryBreaking};
use edf_core::{FieldTable, Group, LabelledDigraph};

fn verification(c: &mut Criterion) {
    for (name, r) in verification_inputs() {
        c.bench_function(&format!("verify {name}"), |b| b.iter(|| black_box(r.verify().unwrap())));
        let h = r.digraph().clone();
        let map = &r.checks[0].vertex_map;
        let fam = r.family.reindexed(map);
        c.bench_function(&format!("tally {name}"), |b| {
            b.iter(|| black_box(edf_multiset(&r.group, &h, &fam).unwrap()))
        });
    }
}

fn fields(c: &mut Criterion) {
    c.bench_function("field table 243", |b| {
        b.iter(|| black_box(FieldTable::new(243).unwrap()))
    });
    c.bench_function("field table 4096", |b| {
        b.iter(|| black_box(FieldTable::new(4096).unwrap()))
    });
}

fn equivalence(c: &mut Criterion) {
    let a = m4_cedf(4, 1).unwrap();
    let b = m4_cedf(4, 2).unwrap();
    let full = EquivalenceOptions {
        prefilter: false,
        ..Default::default()
    };
    c.bench_function("equiv m4 d=1 vs d=2 full", |bn| {
        bn.iter(|| black_box(cedf_equivalent(&a.group, &a.family, &b.family, &full).unwrap()))
    });
}

fn search(c: &mut Criterion) {
    let d28 = Group::dihedral(28).unwrap();
    let c3 = LabelledDigraph::oriented_cycle(3).unwrap();
    let first = SearchOptions {
        max_solutions: Some(1),
        ..Default::default()
    };
    c.bench_function("search D28 first CEDF", |b| {
        b.iter(|| black_box(search_h_edf(&d28, &c3, 3, 1, &first).unwrap()))
    });

    let z13 = Group::cyclic(13).unwrap();
    let cyc = LabelledDigraph::cycle(3).unwrap();
    let open = SearchOptions {
        symmetry: SymmetryBreaking::None,
        ..Default::default()
    };
    c.bench_function("search Z13 C3 l=2 all", |b| {
        b.iter(|| black_box(search_h_edf(&z13, &cyc, 2, 2, &open).unwrap()))
    });

    let mut group = c.benchmark_group("exhaustive");
    group.sample_size(10);
    let z19 = Group::cyclic(19).unwrap();
    let c4 = LabelledDigraph::oriented_cycle(4).unwrap();
    let auts = SearchOptions {
        symmetry: SymmetryBreaking::TranslationAutomorphism,
        ..Default::default()
    };
    group.bench_function("Z19 C4* l=3 automorphism quotient", |b| {
        b.iter(|| black_box(search_h_edf(&z19, &c4, 3, 2, &auts).unwrap()))
    });
    group.finish();
}

criterion_group!(benches, verification, fields, equivalence, search);
criterion_main!(benches);
