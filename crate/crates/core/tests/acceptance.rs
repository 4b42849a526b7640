//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use edf_core::constructions::{self, ConstructionResult};
use edf_core::diffcore::{
    check_symmetric_pairs, decompose_c_cedf, double_to_undirected, edf_multiset, external_difference, orient_halving,
    subtraction_table, variant_digraphs, verify_variant,
};
use edf_core::equivalence::{cedf_equivalent, inequivalence_fingerprint, EquivalenceOptions, EquivalenceWitness};
use edf_core::groups::{automorphisms, cyclotomic_classes, divisors, minus_one_in_c0, prime_power};
use edf_core::search::{brute_force_oracle, counting_condition, search_h_edf, SearchOptions, SymmetryBreaking};
use edf_core::{
    verify_h_edf, DisjointMode, FieldTable, Group, GroupElement, LabelledDigraph as D, SetFamily, Variant,
    VerifyOptions,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------- independent oracles ----------

/// Counts of `b * a^-1` style differences along every edge, computed with
/// `compose` and `invert` only.
fn naive_counts(g: &Group, h: &D, sets: &[Vec<GroupElement>]) -> Vec<u32> {
    let mut counts = vec![0u32; g.order() as usize];
    for &(i, j) in h.edges() {
        for &x in &sets[j] {
            for &y in &sets[i] {
                counts[g.compose(x, g.invert(y)).index() as usize] += 1;
            }
        }
    }
    counts
}

/// The common non-identity count, if the family is an `H`-defined EDF with
/// pairwise disjoint sets.
fn naive_lambda(g: &Group, h: &D, sets: &[Vec<GroupElement>]) -> Option<u32> {
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].iter().any(|x| sets[j].contains(x)) {
                return None;
            }
        }
    }
    let c = naive_counts(g, h, sets);
    (c[0] == 0 && c[1..].iter().all(|&x| x == c[1])).then_some(c[1])
}

fn naive_lambda_of(r: &ConstructionResult) -> bool {
    r.checks.iter().all(|c| {
        let sets: Vec<Vec<GroupElement>> = c.vertex_map.iter().map(|&i| r.family.set(i).to_vec()).collect();
        naive_lambda(&r.group, &c.digraph, &sets) == Some(c.lambda)
    })
}

fn fam(g: &Group, sets: &[&[&str]]) -> SetFamily {
    SetFamily::parse(g, sets).unwrap()
}

fn lambda_on(g: &Group, h: &D, f: &SetFamily) -> Option<u32> {
    verify_h_edf(g, h, f, &VerifyOptions::default())
        .unwrap()
        .verified_lambda()
}

fn elapsed_ok(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t < limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

// ---------- criterion 1 ----------

struct Table {
    name: String,
    group: Group,
    cols: Vec<GroupElement>,
    rows: Vec<(GroupElement, Vec<GroupElement>)>,
}

fn load_tables() -> Vec<Table> {
    let text = include_str!("fixtures/subtraction_tables.txt");
    let tok = |g: &Group, t: &str| {
        g.parse_element(t.trim_start_matches('(').trim_end_matches(')'))
            .unwrap()
    };
    let mut out = Vec::new();
    let mut cur: Option<Table> = None;
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let (kw, rest) = line.split_once(' ').unwrap_or((line, ""));
        match kw {
            "table" => {
                cur = Some(Table {
                    name: rest.to_owned(),
                    group: Group::cyclic(1).unwrap(),
                    cols: vec![],
                    rows: vec![],
                })
            }
            "group" => cur.as_mut().unwrap().group = Group::new(edf_core::GroupSpec::parse(rest).unwrap()).unwrap(),
            "cols" => {
                let t = cur.as_mut().unwrap();
                t.cols = rest.split_whitespace().map(|x| tok(&t.group, x)).collect();
            }
            "row" => {
                let t = cur.as_mut().unwrap();
                let (label, entries) = rest.split_once(':').unwrap();
                let label = tok(&t.group, label.trim());
                let entries = entries.split_whitespace().map(|x| tok(&t.group, x)).collect();
                t.rows.push((label, entries));
            }
            "end" => out.push(cur.take().unwrap()),
            other => panic!("bad fixture keyword {other}"),
        }
    }
    out
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let z13 = Group::cyclic(13).unwrap();
    let ex = fam(
        &z13,
        &[&["1", "5", "8", "12"], &["2", "3", "10", "11"], &["4", "6", "7", "9"]],
    );
    ensure!(
        lambda_on(&z13, &D::oriented_cycle(3).unwrap(), &ex) == Some(4),
        "Z13 on C3*"
    );
    ensure!(lambda_on(&z13, &D::cycle(3).unwrap(), &ex) == Some(8), "Z13 on C3");
    ensure!(lambda_on(&z13, &D::complete(3).unwrap(), &ex) == Some(8), "Z13 on K3");
    for bits in 0..8u32 {
        let flips: Vec<bool> = (0..3).map(|t| bits >> t & 1 == 1).collect();
        let t = D::tournament_with(3, &flips).unwrap();
        ensure!(lambda_on(&z13, &t, &ex) == Some(4), "Z13 on tournament {t}");
    }

    let z17 = Group::cyclic(17).unwrap();
    let s17 = fam(
        &z17,
        &[
            &["1", "13", "16", "4"],
            &["3", "5", "14", "12"],
            &["9", "15", "8", "2"],
            &["10", "11", "7", "6"],
        ],
    );
    let reps = verify_variant(&z17, &s17, Variant::Cedf(2), Some(4)).unwrap();
    ensure!(reps.iter().all(|r| r.is_verified()), "Z17 as 2-CEDF");
    let edge = D::new(2, [(0, 1)]).unwrap();
    for i in 0..4 {
        let pair = s17.reindexed(&[i, (i + 2) % 4]);
        ensure!(lambda_on(&z17, &edge, &pair) == Some(1), "Z17 pair {i}");
    }

    let tables = load_tables();
    ensure!(tables.len() == 6, "expected 6 table blocks, got {}", tables.len());
    for t in &tables {
        let l = if t.name.starts_with("l3") { 3 } else { 7 };
        let r = constructions::noncyclic_cedf(l).unwrap();
        ensure!(r.group.spec() == t.group.spec(), "{}: group", t.name);
        let (row_set, col_set) = match &t.name[3..] {
            "a1_a0" => (1, 0),
            "a2_a1" => (2, 1),
            "a0_a2" => (0, 2),
            other => return Err(format!("unknown block {other}")),
        };
        let labels: Vec<GroupElement> = t.rows.iter().map(|r| r.0).collect();
        ensure!(r.family.set(row_set) == labels.as_slice(), "{}: row labels", t.name);
        ensure!(r.family.set(col_set) == t.cols.as_slice(), "{}: column labels", t.name);
        let computed = subtraction_table(&r.group, r.family.set(row_set), r.family.set(col_set));
        for (i, (_, entries)) in t.rows.iter().enumerate() {
            ensure!(&computed[i] == entries, "{}: row {i} differs", t.name);
        }
        let ms = external_difference(&r.group, r.family.set(row_set), r.family.set(col_set)).unwrap();
        ensure!(ms.total() == (l * l) as u64, "{}: size", t.name);
    }

    let d28 = Group::dihedral(28).unwrap();
    let fd = fam(
        &d28,
        &[&["id", "r11", "r8"], &["r4", "sr2", "sr6"], &["r3", "r5", "sr4"]],
    );
    ensure!(lambda_on(&d28, &D::oriented_cycle(3).unwrap(), &fd) == Some(1), "D28");
    let listed: [&[&str]; 3] = [
        &["r4", "r10", "r7", "sr2", "sr8", "sr5", "sr6", "sr12", "sr9"],
        &["r13", "sr13", "sr3", "r1", "sr11", "sr1", "s", "r12", "r2"],
        &["r11", "r9", "sr4", "r8", "r6", "sr7", "r5", "r3", "sr10"],
    ];
    for (k, (a, b)) in [(1, 0), (2, 1), (0, 2)].into_iter().enumerate() {
        let ms = external_difference(&d28, fd.set(a), fd.set(b)).unwrap();
        let mut expected = vec![0u32; 28];
        for t in listed[k] {
            expected[d28.parse_element(t).unwrap().index() as usize] += 1;
        }
        ensure!(ms.counts() == expected.as_slice(), "D28 Delta(A{a},A{b})");
    }

    let z65 = Group::cyclic(65).unwrap();
    for sets in [
        [
            &["0", "1", "2", "3"][..],
            &["20", "24", "28", "32"],
            &["16", "17", "18", "19"],
            &["52", "56", "60", "64"],
        ],
        [
            &["0", "1", "2", "3"][..],
            &["12", "16", "28", "32"],
            &["8", "9", "10", "11"],
            &["44", "48", "60", "64"],
        ],
    ] {
        ensure!(
            lambda_on(&z65, &D::oriented_cycle(4).unwrap(), &fam(&z65, &sets)) == Some(1),
            "Z65 family"
        );
    }

    let gf19 = Group::cyclic(19).unwrap();
    let f19 = fam(&gf19, &[&["1", "7", "11"], &["4", "9", "6"], &["16", "17", "5"]]);
    ensure!(lambda_on(&gf19, &D::cycle(3).unwrap(), &f19) == Some(3), "GF(19) on C3");
    let c3s = D::oriented_cycle(3).unwrap();
    ensure!(
        lambda_on(&gf19, &c3s, &f19).is_none() && lambda_on(&gf19, &c3s.reverse(), &f19).is_none(),
        "GF(19) CEDF"
    );

    let z37 = Group::cyclic(37).unwrap();
    let f37 = fam(
        &z37,
        &[
            &["0", "1"],
            &["2", "3"],
            &["4", "5"],
            &["6", "12"],
            &["18", "24"],
            &["30", "36"],
        ],
    );
    ensure!(
        lambda_on(&z37, &D::oriented_kab(3, 3).unwrap(), &f37) == Some(1),
        "Z37 K33*"
    );
    let f13 = fam(
        &z13,
        &[
            &["1", "3"],
            &["4", "9"],
            &["10", "12"],
            &["2", "5"],
            &["6", "7"],
            &["8", "11"],
        ],
    );
    ensure!(
        lambda_on(&z13, &D::oriented_kab(3, 3).unwrap(), &f13) == Some(3),
        "Z13 K33*"
    );

    let c13 = fam(&z13, &[&["0", "6"], &["1", "2"], &["9", "12"]]);
    ensure!(lambda_on(&z13, &D::cycle(3).unwrap(), &c13) == Some(2), "Z13 C3");
    ensure!(
        lambda_on(&z13, &c3s, &c13).is_none() && lambda_on(&z13, &c3s.reverse(), &c13).is_none(),
        "Z13 CEDF"
    );
    let z11 = Group::cyclic(11).unwrap();
    let c11 = fam(
        &z11,
        &[&["0", "7"], &["1", "2"], &["4", "9"], &["5", "8"], &["3", "10"]],
    );
    ensure!(lambda_on(&z11, &D::cycle(5).unwrap(), &c11) == Some(4), "Z11 C5");
    let c5s = D::oriented_cycle(5).unwrap();
    ensure!(
        lambda_on(&z11, &c5s, &c11).is_none() && lambda_on(&z11, &c5s.reverse(), &c11).is_none(),
        "Z11 CEDF"
    );

    let adj = fam(
        &gf19,
        &[
            &["1", "5", "16"],
            &["2", "8", "11"],
            &["4", "10", "17"],
            &["2", "8", "11"],
        ],
    );
    let opts = VerifyOptions {
        mode: DisjointMode::AdjacentDisjoint,
        ..VerifyOptions::expecting(2)
    };
    ensure!(
        verify_h_edf(&gf19, &D::oriented_cycle(4).unwrap(), &adj, &opts)
            .unwrap()
            .is_verified(),
        "Z19 adjacent"
    );
    let k21 = fam(&gf19, &[&["1", "5", "16"], &["4", "10", "17"], &["2", "8", "11"]]);
    ensure!(lambda_on(&gf19, &D::kab(2, 1).unwrap(), &k21) == Some(2), "Z19 as K21");

    elapsed_ok(start, Duration::from_secs(1), "corpus")?;
    Ok(format!("worked examples in {:?}", start.elapsed()))
}

// ---------- criterion 2 ----------

fn criterion_2() -> Check {
    let mut count = 0;
    for l in [3, 7, 11, 15, 19] {
        let t = Instant::now();
        let r = constructions::noncyclic_cedf(l).unwrap();
        ensure!(naive_lambda_of(&r), "noncyclic l={l}");
        elapsed_ok(t, Duration::from_secs(1), &format!("noncyclic l={l}"))?;
        count += 1;
    }
    for l in 1..=12u32 {
        for d in divisors(l as u64) {
            let r = constructions::m4_cedf(l, d as u32).map_err(|e| format!("m4 {l} {d}: {e}"))?;
            ensure!(naive_lambda_of(&r) && r.lambda() == 1, "m4 l={l} d={d}");
            count += 1;
        }
    }
    let t = Instant::now();
    let mut saw_243 = false;
    for q in 3..=250u32 {
        if prime_power(q as u64).is_none() {
            continue;
        }
        for e in divisors(q as u64 - 1).into_iter().map(|e| e as u32).filter(|&e| e >= 2) {
            let f = (q - 1) / e;
            let a = constructions::cyclotomic_edf(q, e).map_err(|x| format!("edf {q} {e}: {x}"))?;
            ensure!(a.lambda() == (e - 1) * f && naive_lambda_of(&a), "edf q={q} e={e}");
            let b = constructions::cyclotomic_cedf(q, e).map_err(|x| format!("cedf {q} {e}: {x}"))?;
            ensure!(b.lambda() == f && naive_lambda_of(&b), "cedf q={q} e={e}");
            saw_243 |= q == 243;
            count += 2;
        }
    }
    ensure!(saw_243, "243 not covered");
    elapsed_ok(t, Duration::from_secs(60), "cyclotomic grid")?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for q in 3..=100u32 {
        if prime_power(q as u64).is_none() {
            continue;
        }
        for e in divisors(q as u64 - 1).into_iter().map(|e| e as u32).filter(|&e| e >= 2) {
            if !minus_one_in_c0(q, e).unwrap() {
                ensure!(
                    constructions::tournament_edf(q, e, &D::tournament(e as usize).unwrap()).is_err(),
                    "{q} {e}"
                );
                continue;
            }
            let pairs = (e * (e - 1) / 2) as usize;
            for _ in 0..20 {
                let flips: Vec<bool> = (0..pairs).map(|_| rng.random()).collect();
                let t = D::tournament_with(e as usize, &flips).unwrap();
                let r = constructions::tournament_edf(q, e, &t).map_err(|x| format!("tournament {q} {e}: {x}"))?;
                ensure!(
                    r.lambda() == (e - 1) * ((q - 1) / e) / 2 && naive_lambda_of(&r),
                    "tournament {q} {e}"
                );
                count += 1;
            }
        }
    }
    for a in 1..=3 {
        for b in 1..=3 {
            for l in 1..=3 {
                let s = constructions::kab_star_edf(a, b, l, None).map_err(|x| format!("kab* {a} {b} {l}: {x}"))?;
                let u = constructions::kab_undirected_edf(a, b, l).map_err(|x| format!("kab {a} {b} {l}: {x}"))?;
                ensure!(naive_lambda_of(&s) && naive_lambda_of(&u), "kab {a} {b} {l}");
                count += 2;
            }
        }
    }
    for (a, b) in [(3, 3), (3, 5), (5, 3)] {
        let r = constructions::cycle_non_cedf(a, b).map_err(|x| format!("non-cedf {a} {b}: {x}"))?;
        ensure!(naive_lambda_of(&r) && r.lambda() == b, "non-cedf {a} {b}");
        let cert = r.non_cedf.as_ref().ok_or("missing certificate")?;
        let cyc = D::oriented_cycle(a as usize).unwrap();
        for (h, (x, cx, y, cy)) in [(cyc.clone(), cert.forward), (cyc.reverse(), cert.reverse)] {
            let counts = naive_counts(&r.group, &h, r.family.sets());
            ensure!(
                cx != cy && counts[x.index() as usize] == cx && counts[y.index() as usize] == cy,
                "certificate {a} {b}"
            );
        }
        count += 1;
    }
    Ok(format!("{count} constructions re-verified"))
}

// ---------- criterion 3 ----------

fn criterion_3() -> Check {
    let t = Instant::now();
    let ft = FieldTable::new(243).unwrap();
    let g = ft.additive_group();
    let fam = SetFamily::new(cyclotomic_classes(&ft, 11).unwrap()).unwrap();
    ensure!(fam.uniform_size() == Some(22), "set size");
    let checks = variant_digraphs(Variant::Sedf, 11).unwrap();
    ensure!(checks.len() == 11, "star count");
    for (h, map) in &checks {
        let sets: Vec<Vec<GroupElement>> = map.iter().map(|&i| fam.set(i).to_vec()).collect();
        ensure!(naive_lambda(&g, h, &sets) == Some(20), "star oracle");
    }
    let reps = verify_variant(&g, &fam, Variant::Sedf, Some(20)).unwrap();
    ensure!(reps.len() == 11 && reps.iter().all(|r| r.is_verified()), "SEDF checks");
    elapsed_ok(t, Duration::from_secs(5), "GF(243)")?;
    Ok(format!("(243,11,22,20)-SEDF via 11 stars in {:?}", t.elapsed()))
}

// ---------- criterion 4 ----------

fn apply_oracle(g: &Group, sigma: &[u32], beta: GroupElement, c: usize, f: &SetFamily) -> Vec<Vec<u32>> {
    let m = f.len();
    let mut out = vec![Vec::new(); m];
    for (i, s) in f.sets().iter().enumerate() {
        let mut v: Vec<u32> = s
            .iter()
            .map(|&x| g.compose(g.element(sigma[x.index() as usize]).unwrap(), beta).index())
            .collect();
        v.sort_unstable();
        out[(i + c) % m] = v;
    }
    out
}

fn criterion_4() -> Check {
    let t = Instant::now();
    let a = constructions::m4_cedf(4, 1).unwrap();
    let b = constructions::m4_cedf(4, 2).unwrap();
    let g = &a.group;
    let full = EquivalenceOptions {
        prefilter: false,
        ..Default::default()
    };
    let out = cedf_equivalent(g, &a.family, &b.family, &full).unwrap();
    ensure!(out.witness.is_none(), "d=1 and d=2 reported equivalent");
    ensure!(out.candidates == 48 * 65 * 4, "searched {} candidates", out.candidates);
    let fa = inequivalence_fingerprint(g, &a.family).unwrap();
    let fb = inequivalence_fingerprint(g, &b.family).unwrap();
    let max = |f: &Vec<Vec<u32>>| f.iter().filter_map(|p| p.first().copied()).min();
    ensure!(fa != fb, "fingerprints equal");
    ensure!(
        max(&fa) == Some(3) && max(&fb) == Some(2),
        "fingerprint maxima {fa:?} {fb:?}"
    );

    let me = cedf_equivalent(g, &a.family, &a.family, &EquivalenceOptions::default()).unwrap();
    ensure!(me.witness == Some(EquivalenceWitness::identity(g)), "self-equivalence");

    let auts = automorphisms(g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let sigma = auts.choose(&mut rng).unwrap();
        let beta = g.element(rng.random_range(0..65)).unwrap();
        let c = rng.random_range(0..4);
        let expected = apply_oracle(g, sigma.as_slice(), beta, c, &a.family);
        let w = EquivalenceWitness {
            sigma: sigma.clone(),
            beta,
            c,
            reversed: false,
        };
        let image = w.apply(g, &a.family).unwrap();
        ensure!(image.canonical() == expected, "image mismatch");
        let found = cedf_equivalent(g, &a.family, &image, &EquivalenceOptions::default()).unwrap();
        let fw = found.witness.ok_or("seeded image not recovered")?;
        ensure!(
            fw.apply(g, &a.family).unwrap().same_sets_as(&image),
            "witness does not map"
        );
        ensure!(
            fw.inverse(g, 4).apply(g, &image).unwrap().same_sets_as(&a.family),
            "inverse witness"
        );
    }
    elapsed_ok(t, Duration::from_secs(10), "inequivalence")?;
    Ok(format!(
        "none over 12480 candidates; fingerprints 3 vs 2; {:?}",
        t.elapsed()
    ))
}

// ---------- criterion 5 ----------

fn oracle_groups() -> Vec<Group> {
    let mut gs: Vec<Group> = (2..=13).map(|n| Group::cyclic(n).unwrap()).collect();
    for ns in [&[2, 2][..], &[2, 3], &[2, 4], &[2, 2, 2], &[3, 3], &[2, 6]] {
        gs.push(Group::product(ns).unwrap());
    }
    for q in [4, 8, 9] {
        gs.push(Group::field_additive(q).unwrap());
    }
    for n in [6, 8, 10, 12] {
        gs.push(Group::dihedral(n).unwrap());
    }
    gs
}

fn oracle_digraphs() -> Vec<D> {
    [
        "edges:0>1",
        "cycle*:2",
        "cycle*:3",
        "cycle:3",
        "complete:3",
        "tournament:3",
        "kab*:2,1",
        "kab:2,1",
        "cycle*:4",
        "cycle:4",
        "complete:4",
        "kab*:2,2",
        "cycle*:5",
        "complete:5",
        "cycle*:6",
        "star*:6",
    ]
    .iter()
    .map(|s| D::parse(s).unwrap())
    .collect()
}

fn canon_set(fams: &[SetFamily]) -> Vec<Vec<Vec<u32>>> {
    let mut v: Vec<_> = fams.iter().map(SetFamily::canonical).collect();
    v.sort();
    v
}

fn translate_family(g: &Group, f: &[Vec<u32>], beta: GroupElement) -> Vec<Vec<u32>> {
    f.iter()
        .map(|s| {
            let mut v: Vec<u32> = s
                .iter()
                .map(|&x| g.compose(g.element(x).unwrap(), beta).index())
                .collect();
            v.sort_unstable();
            v
        })
        .collect()
}

fn criterion_5() -> Check {
    let t = Instant::now();
    let d28 = Group::dihedral(28).unwrap();
    let c3 = D::oriented_cycle(3).unwrap();
    let found = search_h_edf(
        &d28,
        &c3,
        3,
        1,
        &SearchOptions {
            max_solutions: Some(1),
            ..Default::default()
        },
    )
    .unwrap();
    let sol = found.solutions.first().ok_or("no D28 CEDF found")?;
    ensure!(
        naive_lambda(&d28, &c3, sol.sets()) == Some(1),
        "D28 solution fails oracle"
    );
    elapsed_ok(t, Duration::from_secs(300), "D28 search")?;
    let d28_time = t.elapsed();

    let t = Instant::now();
    let z19 = Group::cyclic(19).unwrap();
    let c4 = D::oriented_cycle(4).unwrap();
    let s19 = search_h_edf(&z19, &c4, 3, 2, &SearchOptions::default()).unwrap();
    ensure!(
        s19.certificate.exhausted(),
        "Z19 search did not finish: {}",
        s19.certificate
    );
    elapsed_ok(t, Duration::from_secs(600), "Z19 search")?;
    println!("    Z19 (19,4,3,2;C4*) disjoint certificate: {}", s19.certificate);
    for f in &s19.solutions {
        println!("    Z19 solution {}", f.format(&z19));
    }

    let t = Instant::now();
    let mut instances = 0;
    for g in oracle_groups() {
        for h in oracle_digraphs() {
            let m = h.vertex_count();
            for l in 1..=6 / m {
                if l > g.order() as usize {
                    continue;
                }
                let cells = (h.edge_count() * l * l) as u32;
                let lambdas: Vec<u32> = (1..=cells).filter(|&lam| counting_condition(&g, &h, l, lam)).collect();
                for lam in lambdas {
                    for mode in [DisjointMode::Disjoint, DisjointMode::AdjacentDisjoint] {
                        let oracle = brute_force_oracle(&g, &h, l, lam, mode).unwrap();
                        let open = SearchOptions {
                            mode,
                            symmetry: SymmetryBreaking::None,
                            ..Default::default()
                        };
                        let full = search_h_edf(&g, &h, l, lam, &open).unwrap();
                        let tag = format!("{} {h} l={l} lambda={lam} {mode:?}", g.spec());
                        ensure!(
                            canon_set(&full.solutions) == canon_set(&oracle),
                            "oracle mismatch: {tag}"
                        );
                        let sym = SearchOptions {
                            mode,
                            ..Default::default()
                        };
                        let reps = canon_set(&search_h_edf(&g, &h, l, lam, &sym).unwrap().solutions);
                        let all = canon_set(&oracle);
                        for r in &reps {
                            ensure!(all.binary_search(r).is_ok(), "symmetry-broken extra solution: {tag}");
                        }
                        for f in &all {
                            let hit = g
                                .elements()
                                .any(|b| reps.binary_search(&translate_family(&g, f, b)).is_ok());
                            ensure!(hit, "oracle solution not a translate of an emitted one: {tag}");
                        }
                        instances += 1;
                    }
                }
            }
        }
    }
    // an infeasible instance does no work
    let none = search_h_edf(&Group::cyclic(20).unwrap(), &c3, 3, 1, &SearchOptions::default()).unwrap();
    ensure!(
        none.certificate.nodes == 0 && none.solutions.is_empty(),
        "infeasible instance expanded nodes"
    );
    Ok(format!(
        "D28 found in {d28_time:?}; Z19 {} solutions, {} nodes; {instances} oracle instances in {:?}",
        s19.certificate.solutions,
        s19.certificate.nodes,
        t.elapsed()
    ))
}

// ---------- criterion 6 ----------

fn random_group(rng: &mut ChaCha8Rng) -> Group {
    match rng.random_range(0..4) {
        0 => Group::cyclic(rng.random_range(2..=50)).unwrap(),
        1 => {
            let a = rng.random_range(2..=7);
            let b = rng.random_range(2..=50 / a);
            Group::product(&[a, b]).unwrap()
        }
        2 => Group::field_additive(*[4u32, 8, 9, 16, 25, 27, 32, 49, 5, 7, 11].choose(rng).unwrap()).unwrap(),
        _ => Group::dihedral(2 * rng.random_range(3..=25)).unwrap(),
    }
}

fn random_subset(rng: &mut ChaCha8Rng, n: u32, k: usize) -> Vec<u32> {
    let mut all: Vec<u32> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

fn random_digraph(rng: &mut ChaCha8Rng, m: usize) -> D {
    let mut edges = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j && rng.random_bool(0.4) {
                edges.push((i, j));
            }
        }
    }
    D::new(m, edges).unwrap()
}

fn oriented_instances() -> Vec<ConstructionResult> {
    let mut v = Vec::new();
    for (q, e) in [(13, 3), (19, 6), (31, 5), (37, 4), (41, 8), (49, 6), (64, 7), (81, 5)] {
        v.push(constructions::cyclotomic_cedf(q, e).unwrap());
    }
    for l in [3, 7] {
        v.push(constructions::noncyclic_cedf(l).unwrap());
    }
    for (l, d) in [(2, 1), (4, 2), (6, 3)] {
        v.push(constructions::m4_cedf(l, d).unwrap());
    }
    for (a, b, l) in [(2, 3, 2), (3, 3, 1), (1, 2, 3)] {
        v.push(constructions::kab_star_edf(a, b, l, None).unwrap());
    }
    v
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0u32;

    // multiset sizes and inversion
    for _ in 0..3000 {
        let g = random_group(&mut rng);
        let n = g.order();
        let (ka, kb) = (rng.random_range(1..=n.min(8)), rng.random_range(1..=n.min(8)));
        let a: Vec<GroupElement> = random_subset(&mut rng, n, ka as usize)
            .into_iter()
            .map(|x| g.element(x).unwrap())
            .collect();
        let b: Vec<GroupElement> = random_subset(&mut rng, n, kb as usize)
            .into_iter()
            .map(|x| g.element(x).unwrap())
            .collect();
        let ab = external_difference(&g, &a, &b).unwrap();
        let ba = external_difference(&g, &b, &a).unwrap();
        ensure!(ab.total() == (ka * kb) as u64, "|Delta(A,B)| in {}", g.spec());
        ensure!(ba == ab.inverted(&g), "Delta(B,A) inversion in {}", g.spec());
        cases += 1;
    }

    // tallying against the naive double loop
    for _ in 0..3000 {
        let g = random_group(&mut rng);
        let m = rng.random_range(2..=5.min(g.order() as usize));
        let h = random_digraph(&mut rng, m);
        let l = rng.random_range(1..=(g.order() as usize / m).clamp(1, 4));
        let pool = random_subset(&mut rng, g.order(), m * l);
        let sets: Vec<Vec<GroupElement>> = pool
            .chunks(l)
            .map(|c| c.iter().map(|&x| g.element(x).unwrap()).collect())
            .collect();
        let f = SetFamily::new(sets.clone()).unwrap();
        let fast = edf_multiset(&g, &h, &f).unwrap();
        ensure!(
            fast.counts() == naive_counts(&g, &h, &sets).as_slice(),
            "tally mismatch in {}",
            g.spec()
        );
        cases += 1;
    }

    // directed to undirected doubling
    let oriented = oriented_instances();
    for _ in 0..2000 {
        let r = oriented.choose(&mut rng).unwrap();
        let beta = r.group.element(rng.random_range(0..r.group.order())).unwrap();
        let shifted: Vec<Vec<GroupElement>> = r
            .family
            .sets()
            .iter()
            .map(|s| s.iter().map(|&x| r.group.translate(x, beta)).collect())
            .collect();
        let f = SetFamily::new(shifted).unwrap();
        let h = r.digraph();
        let lam = r.lambda();
        let rep = double_to_undirected(&r.group, h, &f, &VerifyOptions::default()).unwrap();
        ensure!(rep.verified_lambda() == Some(2 * lam), "doubling {}", r.label);
        ensure!(
            naive_lambda(&r.group, &h.underlying_undirected(), f.sets()) == Some(2 * lam),
            "doubling oracle"
        );
        cases += 1;
    }

    // symmetric-pairs halving on cyclotomic classes with -1 in C_0
    let mut admissible = Vec::new();
    for q in 5..=100u32 {
        if prime_power(q as u64).is_none() {
            continue;
        }
        for e in divisors(q as u64 - 1)
            .into_iter()
            .map(|e| e as u32)
            .filter(|&e| (3..=8).contains(&e))
        {
            if minus_one_in_c0(q, e).unwrap() {
                admissible.push((q, e));
            }
        }
    }
    let mut built: BTreeMap<(u32, u32), ConstructionResult> = BTreeMap::new();
    for _ in 0..2000 {
        let &(q, e) = admissible.choose(&mut rng).unwrap();
        let r = built
            .entry((q, e))
            .or_insert_with(|| constructions::cyclotomic_edf(q, e).unwrap());
        let k = D::complete(e as usize).unwrap();
        ensure!(
            check_symmetric_pairs(&r.group, &k, &r.family).unwrap(),
            "symmetric pairs q={q} e={e}"
        );
        let flips: Vec<bool> = (0..e * (e - 1) / 2).map(|_| rng.random()).collect();
        let t = D::tournament_with(e as usize, &flips).unwrap();
        let rep = orient_halving(&r.group, &k, &r.family, &t, &VerifyOptions::default()).unwrap();
        ensure!(rep.verified_lambda() == Some(r.lambda() / 2), "halving q={q} e={e}");
        cases += 1;
    }

    // cycle decomposition against permutation powers
    for m in 2..=24usize {
        for c in 1..m {
            let mut seen = vec![false; m];
            let mut cycles = Vec::new();
            for s in 0..m {
                let mut cyc = Vec::new();
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    cyc.push(x);
                    x = (x + c) % m;
                }
                if !cyc.is_empty() {
                    cycles.push(cyc);
                }
            }
            ensure!(decompose_c_cedf(m, c) == cycles, "decompose m={m} c={c}");
            cases += 1;
        }
    }
    ensure!(cases >= 10_000, "only {cases} cases");
    Ok(format!("{cases} randomized and exhaustive cases"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 worked-example corpus", criterion_1),
        ("2 construction grids", criterion_2),
        ("3 GF(243) SEDF", criterion_3),
        ("4 inequivalence", criterion_4),
        ("5 search", criterion_5),
        ("6 property suites", criterion_6),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => println!("criterion {name}: PASS ({detail}) [{:?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL ({why}) [{:?}]", start.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
