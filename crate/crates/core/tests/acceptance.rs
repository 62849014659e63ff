//! Acceptance criteria. Each test prints one `criterion N: pass|fail` line
//! with its measured time and pinned limit, then asserts.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigInt;
use ramikit::cohomology::inflation_check;
use ramikit::coset::{todd_coxeter, SubgroupSpec};
use ramikit::harness::{build_census, census_tables, CensusOptions, MAX_SHADOW_ORDER};
use ramikit::linalg::AbelianInvariants;
use ramikit::perm::{FiniteGroup, Perm};
use ramikit::presentation::KnotGroupData;
use ramikit::ramification::{
    disjoint_union, factoring_check, inertia_transport_check, isomorphism_table, quotient_image_of_ramification,
    regular_table, Cover, FactoringResult, FiniteQuotient, ShadowContext,
};
use ramikit::word::Word;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Prints the criterion line and fails the test when `ok` is false or the
/// time limit was exceeded.
fn report(n: usize, ok: bool, start: Instant, limit: Option<Duration>, detail: &str) {
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let status = if ok && in_time { "pass" } else { "fail" };
    let limit = limit.map_or("none".to_string(), |l| format!("{:.0}s", l.as_secs_f64()));
    // the stderr handle bypasses test output capture
    let line = format!(
        "criterion {n}: {status} ({detail}; {:.3}s, limit {limit})\n",
        elapsed.as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
    assert!(in_time, "criterion {n} exceeded its time limit");
}

fn cyclic_cover(k: &KnotGroupData, n: usize) -> Cover {
    Cover::new(
        k,
        todd_coxeter(&k.presentation, &SubgroupSpec::CyclicCover(n), 100_000).unwrap(),
    )
}

fn knots() -> [KnotGroupData; 2] {
    [trefoil(), figure_eight()]
}

#[test]
fn criterion_01_trivial_cover_collapse() {
    let start = Instant::now();
    let mut ok = true;
    for k in knots() {
        let cover = cyclic_cover(&k, 1);
        let t = todd_coxeter(&cover.quotient, &SubgroupSpec::GeneratorWords(vec![]), 10_000).unwrap();
        ok &= cover.index() == 1 && t.index() == 1;
        ok &= cover.quotient.abelianization().is_trivial();
    }
    report(
        1,
        ok,
        start,
        Some(Duration::from_secs(1)),
        "U = G: U/M_U enumerates to 1 coset",
    );
}

fn branched_homology(k: &KnotGroupData, n: usize, expected: AbelianInvariants) -> bool {
    let h1 = cyclic_cover(k, n).quotient.abelianization();
    let delta = alexander_two_generator(k);
    let (free, torsion) = branched_cover_torsion(&delta, n);
    let oracle = AbelianInvariants {
        free_rank: free,
        torsion: torsion.iter().map(|&d| BigInt::from(d)).collect(),
    };
    let order = resultant_order(&delta, n);
    h1 == expected && oracle == expected && h1.torsion_order() == BigInt::from(order)
}

#[test]
fn criterion_02_trefoil_branched_covers() {
    let start = Instant::now();
    let k = trefoil();
    let ok = alexander_two_generator(&k) == vec![1, -1, 1]
        && branched_homology(&k, 2, AbelianInvariants::new(0, vec![3]))
        && branched_homology(&k, 3, AbelianInvariants::new(0, vec![2, 2]));
    report(
        2,
        ok,
        start,
        Some(Duration::from_secs(5)),
        "n=2: Z/3, n=3: Z/2+Z/2, Alexander oracle agrees",
    );
}

#[test]
fn criterion_03_figure_eight_branched_cover() {
    let start = Instant::now();
    let k = figure_eight();
    let ok =
        alexander_two_generator(&k) == vec![1, -3, 1] && branched_homology(&k, 2, AbelianInvariants::new(0, vec![5]));
    report(
        3,
        ok,
        start,
        Some(Duration::from_secs(5)),
        "n=2: Z/5, Alexander oracle agrees",
    );
}

#[test]
fn criterion_04_unramified_cohomology() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = 0;
    for k in knots() {
        for t in census_tables(&k, 4).unwrap() {
            let c = Cover::new(&k, t);
            for p in PRIMES {
                let r = inflation_check(&c.subgroup, &c.quotient, &c.inertia, p).unwrap();
                checked += 1;
                if !(r.passed() && r.dim_unramified == r.dim_h1_quotient) {
                    failures += 1;
                }
            }
        }
    }
    report(
        4,
        failures == 0 && checked > 0,
        start,
        Some(Duration::from_secs(30)),
        &format!("{checked} (cover, p) pairs, {failures} failures"),
    );
}

/// Smallest subset of `elems` containing `seeds` and closed under products
/// and conjugation by every element; computed on raw permutations.
fn naive_normal_closure(elems: &[Perm], seeds: &[Perm]) -> BTreeSet<Perm> {
    let identity = Perm::identity(elems[0].degree());
    let mut set: BTreeSet<Perm> = seeds.iter().cloned().collect();
    set.insert(identity);
    loop {
        let current: Vec<Perm> = set.iter().cloned().collect();
        let mut grew = false;
        for a in &current {
            for x in elems {
                grew |= set.insert(x.inverse().then(a).then(x));
            }
            for b in &current {
                grew |= set.insert(a.then(b));
            }
        }
        if !grew {
            return set;
        }
    }
}

#[test]
fn criterion_05_ramification_image() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = 0;
    for k in knots() {
        let census = build_census(&k, &CensusOptions::new(4, 5)).unwrap();
        assert!(census.warnings.is_empty());
        for c in &census.covers {
            for q in &census.pool {
                let phi = q.restrict(&c.subgroup);
                let (f, image) = quotient_image_of_ramification(&c.subgroup.presentation, &phi, &c.inertia).unwrap();
                let elems: Vec<Perm> = f.all().map(|e| f.perm(e).clone()).collect();
                let seeds: Vec<Perm> = c.inertia.iter().map(|d| phi.image(&d.generator_in_u)).collect();
                let oracle = naive_normal_closure(&elems, &seeds);
                let lib: BTreeSet<Perm> = image.iter().map(|&e| f.perm(e).clone()).collect();
                checked += 1;
                if lib != oracle {
                    failures += 1;
                }
            }
        }
    }
    report(
        5,
        failures == 0 && checked > 0,
        start,
        Some(Duration::from_secs(60)),
        &format!("{checked} (cover, quotient) pairs over Sym(<=5), {failures} failures"),
    );
}

#[test]
fn criterion_06_factoring_biconditional() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = 0;
    for k in knots() {
        let census = build_census(&k, &CensusOptions::new(4, 5)).unwrap();
        for c in &census.covers {
            for q in &census.pool {
                let phi = q.restrict(&c.subgroup);
                let kills = c.inertia.iter().all(|d| q.image(&d.generator_in_g).is_identity());
                let r = factoring_check(&c.subgroup.presentation, &c.quotient, &phi, &c.inertia).unwrap();
                let witness = match &r {
                    FactoringResult::Factors(induced) => induced.check(&c.quotient).is_ok(),
                    FactoringResult::Violation { image, .. } => !image.is_identity(),
                };
                checked += 1;
                if r.factors() != kills || !witness {
                    failures += 1;
                }
            }
        }
    }
    report(
        6,
        failures == 0 && checked > 0,
        start,
        None,
        &format!("{checked} pool homomorphisms on U, {failures} failures"),
    );
}

#[test]
fn criterion_07_closure_shadow() {
    let start = Instant::now();
    let mut pairs = 0;
    let mut checked = 0;
    let mut failures = 0;
    let mut too_few = 0;
    for k in knots() {
        let census = build_census(&k, &CensusOptions::new(4, 5)).unwrap();
        let extra = ["a", "b", "ab", "aB", "abA", "bba", "abab", "Baab", "aabB", "bAbA"];
        for c in &census.covers {
            let cover_perms = c.table.generator_permutations();
            for q in &census.pool {
                // N = ker q ∩ core(U)
                let images: Vec<Perm> = q
                    .images
                    .iter()
                    .zip(&cover_perms)
                    .map(|(a, b)| disjoint_union(a, b))
                    .collect();
                let Some(f) = FiniteGroup::generate_bounded(q.degree + c.index(), &images, MAX_SHADOW_ORDER + 1) else {
                    continue;
                };
                pairs += 1;
                let ctx = ShadowContext::new(&k, c, &regular_table(&f)).unwrap();
                let closure = ctx.closure_of_local_inertia();
                let mut reps: Vec<Word> = ctx.f.all().map(|e| ctx.f.word_of(e)).collect();
                reps.extend(
                    extra
                        .iter()
                        .map(|w| ramikit::parse::parse_word(w, k.presentation.generator_names()).unwrap()),
                );
                if reps.len() < 10 {
                    too_few += 1;
                }
                for g in &reps {
                    checked += 1;
                    if !ctx.check(c, &closure, g).passed() {
                        failures += 1;
                    }
                }
            }
        }
    }
    report(
        7,
        failures == 0 && too_few == 0 && pairs > 0,
        start,
        Some(Duration::from_secs(120)),
        &format!("{pairs} normal subgroups N <= U, {checked} representatives, {failures} failures"),
    );
}

/// Every tuple of generator images in `f2` defining an isomorphism `f -> f2`.
fn isomorphisms(q: &FiniteQuotient, q2: &FiniteQuotient) -> Vec<Vec<Perm>> {
    let f = q.group();
    let f2 = q2.group();
    let elems: Vec<Perm> = f2.all().map(|e| f2.perm(e).clone()).collect();
    let mut out = Vec::new();
    for a in &elems {
        for b in &elems {
            let images = vec![a.clone(), b.clone()];
            if isomorphism_table(&f, &f2, &q.images, &images).is_ok() {
                out.push(images);
            }
        }
    }
    out
}

/// Conjugator `y` with `iso(<q(m)>) = y <q2(m2)> y⁻¹`, if there is one.
fn meridian_conjugator(q: &FiniteQuotient, q2: &FiniteQuotient, m: &Word, iso: &[Perm]) -> Option<Perm> {
    let f = q.group();
    let f2 = q2.group();
    let table = isomorphism_table(&f, &f2, &q.images, iso).unwrap();
    let moved: BTreeSet<usize> = f.cyclic(f.eval(m)).iter().map(|&e| table[e]).collect();
    let cyc2 = f2.cyclic(f2.eval(m));
    f2.all()
        .find(|&y| f2.conj_set(y, &cyc2) == moved)
        .map(|y| f2.perm(y).clone())
}

#[test]
fn criterion_08_transport() {
    let start = Instant::now();
    let k = trefoil();
    let t = |s: &str, d: usize| Perm::parse_cycles(s, d).unwrap();
    let s3 = FiniteQuotient::new(3, vec![t("(1 2)", 3), t("(2 3)", 3)]);
    let s3_other = FiniteQuotient::new(3, vec![t("(1 3)", 3), t("(1 2)", 3)]);
    s3.check(&k.presentation).unwrap();
    s3_other.check(&k.presentation).unwrap();

    let mut passed = 0;
    let mut failures = 0;
    for (q, q2) in [(&s3, &s3), (&s3, &s3_other)] {
        for iso in isomorphisms(q, q2) {
            match meridian_conjugator(q, q2, &k.meridian, &iso) {
                Some(y) => match inertia_transport_check(q, &k.meridian, q2, &k.meridian, &iso, &y) {
                    Ok(r) if r.passed() => passed += 1,
                    _ => failures += 1,
                },
                None => failures += 1,
            }
        }
    }

    // the trefoil group has no Klein-four quotient, so the rejection case
    // uses <a, b | a², b², [a, b]> with meridian a
    let klein_pres = ramikit::parse::parse_presentation("gens: a b\nrel: a a\nrel: b b\nrel: a b A B\nmeridian: a\n")
        .unwrap()
        .presentation;
    let klein = FiniteQuotient::new(4, vec![t("(1 2)(3 4)", 4), t("(1 3)(2 4)", 4)]);
    klein.check(&klein_pres).unwrap();
    let mut rejected = 0;
    let mut klein_passed = 0;
    for iso in isomorphisms(&klein, &klein) {
        match meridian_conjugator(&klein, &klein, &k.meridian, &iso) {
            Some(y) => match inertia_transport_check(&klein, &k.meridian, &klein, &k.meridian, &iso, &y) {
                Ok(r) if r.passed() => klein_passed += 1,
                _ => failures += 1,
            },
            None => {
                let y = Perm::identity(4);
                match inertia_transport_check(&klein, &k.meridian, &klein, &k.meridian, &iso, &y) {
                    Err(ramikit::Error::MeridianClassNotPreserved) => rejected += 1,
                    _ => failures += 1,
                }
            }
        }
    }
    report(
        8,
        failures == 0 && passed == 12 && klein_passed == 2 && rejected == 4,
        start,
        None,
        &format!(
            "S3: {passed} preserving isomorphisms transported; Klein four: {klein_passed} transported, \
             {rejected} rejected; {failures} failures"
        ),
    );
}

#[test]
fn criterion_09_structural_invariants() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in knots() {
        for t in census_tables(&k, 5).unwrap() {
            let c = Cover::new(&k, t);
            let sum: usize = c.ramification_indices().iter().sum();
            if sum != c.index() {
                failures.push(format!("{}: orbit sum {sum} != index {}", k.label, c.index()));
            }
            if c.subgroup.presentation.deficiency() != 1 {
                failures.push(format!(
                    "{}: deficiency {}",
                    k.label,
                    c.subgroup.presentation.deficiency()
                ));
            }
        }
        for n in 1..=8 {
            let e = cyclic_cover(&k, n).ramification_indices();
            if e != vec![n] {
                failures.push(format!("{}: cyclic({n}) has inertia {e:?}", k.label));
            }
        }
    }
    report(
        9,
        failures.is_empty(),
        start,
        None,
        &format!("{} failures {failures:?}", failures.len()),
    );
}

#[test]
fn criterion_10_verify_is_deterministic() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/data/trefoil.knot");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("run{i}.json"));
        let code = ramikit::cli::run([
            "ramikit",
            "verify",
            input,
            "--max-index",
            "3",
            "--max-sym",
            "4",
            "--seed",
            "42",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        outputs.push(std::fs::read(&out).unwrap());
    }
    let ok = outputs[0] == outputs[1] && !outputs[0].is_empty();
    report(
        10,
        ok,
        start,
        None,
        &format!("two verify runs, {} bytes each, identical", outputs[0].len()),
    );
}
