//! Census of covers and finite quotients of a knot group, and the suites that
//! check the ramification statements over every member of the census.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cohomology::{h1_basis, inflation_check, FpSubspace};
use crate::coset::{cyclic_cover_from_degrees, low_index_subgroups, CosetTable, SubgroupSpec};
use crate::error::{Error, Result};
use crate::linalg::check_prime;
use crate::perm::{FiniteGroup, Perm};
use crate::presentation::{KnotGroupData, Presentation};
use crate::ramification::{
    boundary_components, disjoint_union, factoring_check, inertia_transport_check, isomorphism_table,
    quotient_image_of_ramification, regular_table, smallest_normal_containing, Cover, FactoringResult, FiniteQuotient,
    ShadowContext,
};
use crate::schreier::rewrite;
use crate::word::{Letter, Word};

/// Largest symmetric-group degree searched for quotients.
pub const MAX_SYM_DEGREE: usize = 7;
/// Default number of generator-image tuples tried per degree.
pub const DEFAULT_SEARCH_BUDGET: u64 = 5_000_000;
/// Largest `|G/N|` used for the closure checks.
pub const MAX_SHADOW_ORDER: usize = 2000;
/// Largest quotient whose automorphisms are enumerated for the transport checks.
pub const MAX_TRANSPORT_ORDER: usize = 60;

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub max_index: usize,
    pub max_sym_degree: usize,
    pub search_budget: u64,
}

impl CensusOptions {
    pub fn new(max_index: usize, max_sym_degree: usize) -> Self {
        CensusOptions {
            max_index,
            max_sym_degree,
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

/// Covers from low-index enumeration and cyclic covers, plus a pool of
/// transitive permutation quotients of the knot group.
#[derive(Clone, Debug)]
pub struct Census {
    pub knot: KnotGroupData,
    pub covers: Vec<Cover>,
    pub pool: Vec<FiniteQuotient>,
    pub warnings: Vec<String>,
    /// Set when a search budget was hit and the pool is incomplete.
    pub partial: bool,
}

impl Census {
    pub fn empty(knot: KnotGroupData) -> Self {
        Census {
            knot,
            covers: Vec::new(),
            pool: Vec::new(),
            warnings: Vec::new(),
            partial: false,
        }
    }

    fn cover_label(&self, i: usize) -> String {
        format!(
            "#{} {}",
            i + 1,
            self.covers[i]
                .table
                .spec
                .describe(self.knot.presentation.generator_names())
        )
    }
}

/// Conjugacy classes of subgroups of index at most `max_index` (one table per
/// class) merged with the cyclic covers of those degrees, ordered by index.
pub fn census_tables(knot: &KnotGroupData, max_index: usize) -> Result<Vec<CosetTable>> {
    if max_index == 0 {
        return Err(Error::InvalidSpec("max_index must be at least 1".into()));
    }
    let mut tables = low_index_subgroups(&knot.presentation, max_index);
    let degrees = knot.degree_map()?;
    for n in 1..=max_index {
        let cyc = cyclic_cover_from_degrees(&degrees, n)?;
        match tables.iter_mut().find(|t| t.same_subgroup(&cyc)) {
            Some(t) => t.spec = SubgroupSpec::CyclicCover(n),
            None => tables.push(cyc),
        }
    }
    tables.sort_by_key(|t| t.index());
    Ok(tables)
}

pub fn build_census(knot: &KnotGroupData, opts: &CensusOptions) -> Result<Census> {
    let tables = census_tables(knot, opts.max_index)?;
    let (pool, warnings) = quotient_pool(&knot.presentation, opts.max_sym_degree, opts.search_budget)?;
    Ok(assemble(knot, tables, pool, warnings))
}

fn assemble(knot: &KnotGroupData, tables: Vec<CosetTable>, pool: Vec<FiniteQuotient>, warnings: Vec<String>) -> Census {
    Census {
        knot: knot.clone(),
        covers: tables.into_iter().map(|t| Cover::new(knot, t)).collect(),
        pool,
        partial: !warnings.is_empty(),
        warnings,
    }
}

#[derive(Serialize, Deserialize)]
struct CachedCensus {
    tables: Vec<CosetTable>,
    pool: Vec<FiniteQuotient>,
    warnings: Vec<String>,
}

/// Like [`build_census`], reusing `cache_dir/<hash>.json` when present. The
/// key hashes the knot data and the census options.
pub fn build_census_cached(knot: &KnotGroupData, opts: &CensusOptions, cache_dir: &Path) -> Result<Census> {
    let mut h = Sha256::new();
    h.update(knot.to_file_string());
    h.update(format!(
        "{}/{}/{}",
        opts.max_index, opts.max_sym_degree, opts.search_budget
    ));
    let key: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    let path = cache_dir.join(format!("{key}.json"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(c) = serde_json::from_str::<CachedCensus>(&text) {
            return Ok(assemble(knot, c.tables, c.pool, c.warnings));
        }
    }
    let tables = census_tables(knot, opts.max_index)?;
    let (pool, warnings) = quotient_pool(&knot.presentation, opts.max_sym_degree, opts.search_budget)?;
    std::fs::create_dir_all(cache_dir)?;
    let cached = CachedCensus { tables, pool, warnings };
    std::fs::write(&path, serde_json::to_string(&cached)?)?;
    Ok(assemble(knot, cached.tables, cached.pool, cached.warnings))
}

/// All permutations of `0..k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<u32> = (0..k as u32).collect();
    loop {
        out.push(Perm::from_images(cur.clone()).unwrap());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// One permutation of each cycle type on `0..k`, cycles on consecutive points.
fn cycle_type_representatives(k: usize) -> Vec<Perm> {
    fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            partitions(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    partitions(k, k, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|p| {
            let mut images: Vec<u32> = (0..k as u32).collect();
            let mut start = 0;
            for len in p {
                for i in 0..len {
                    images[start + i] = (start + (i + 1) % len) as u32;
                }
                start += len;
            }
            Perm::from_images(images).unwrap()
        })
        .collect()
}

/// Canonical representative of a transitive action under relabeling: the
/// least breadth-first relabeling over all starting points.
pub fn canonical_action(images: &[Perm], k: usize) -> Vec<Perm> {
    let inverses: Vec<Perm> = images.iter().map(|p| p.inverse()).collect();
    let cols: Vec<&Perm> = images.iter().zip(&inverses).flat_map(|(p, q)| [p, q]).collect();
    let mut best: Option<Vec<Vec<u32>>> = None;
    for start in 0..k {
        let mut label = vec![u32::MAX; k];
        let mut order = vec![start];
        label[start] = 0;
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for p in &cols {
                let y = p.apply(x);
                if label[y] == u32::MAX {
                    label[y] = order.len() as u32;
                    order.push(y);
                }
            }
            i += 1;
        }
        let relabeled: Vec<Vec<u32>> = images
            .iter()
            .map(|p| order.iter().map(|&x| label[p.apply(x)]).collect())
            .collect();
        if best.as_ref().is_none_or(|b| relabeled < *b) {
            best = Some(relabeled);
        }
    }
    best.unwrap_or_default()
        .into_iter()
        .map(|im| Perm::from_images(im).unwrap())
        .collect()
}

fn kills_relators(pres: &Presentation, images: &[Perm], k: usize) -> bool {
    pres.relators().iter().all(|r| {
        (0..k).all(|x| {
            r.letters().iter().fold(x, |y, l| {
                if l.inverse {
                    images[l.gen].images().iter().position(|&z| z as usize == y).unwrap()
                } else {
                    images[l.gen].apply(y)
                }
            }) == x
        })
    })
}

/// Transitive homomorphisms to `Sym(k)`, `1 ≤ k ≤ max_degree`, up to
/// conjugation, found by exhaustive search over generator images (the first
/// generator ranges over cycle-type representatives only). Degrees whose
/// search space exceeds `budget` are skipped with a warning.
pub fn quotient_pool(
    pres: &Presentation,
    max_degree: usize,
    budget: u64,
) -> Result<(Vec<FiniteQuotient>, Vec<String>)> {
    if max_degree > MAX_SYM_DEGREE {
        return Err(Error::InvalidSpec(format!(
            "symmetric degree {max_degree} exceeds the brute-force limit {MAX_SYM_DEGREE}"
        )));
    }
    let n = pres.n_gens();
    let mut pool = Vec::new();
    let mut warnings = Vec::new();
    for k in 1..=max_degree {
        if n == 0 {
            if k == 1 {
                pool.push(FiniteQuotient::new(1, Vec::new()));
            }
            continue;
        }
        let perms = all_permutations(k);
        let reps = cycle_type_representatives(k);
        let space = (reps.len() as u64).saturating_mul((perms.len() as u64).saturating_pow(n as u32 - 1));
        if space > budget {
            warnings.push(format!(
                "degree {k}: {space} generator-image tuples exceed the budget of {budget}; degree skipped"
            ));
            continue;
        }
        let mut found: BTreeSet<Vec<Perm>> = BTreeSet::new();
        let mut idx = vec![0usize; n - 1];
        for first in &reps {
            loop {
                let mut images = vec![first.clone()];
                images.extend(idx.iter().map(|&i| perms[i].clone()));
                if kills_relators(pres, &images, k) && Perm::orbits(k, &images).len() == 1 {
                    found.insert(canonical_action(&images, k));
                }
                // odometer over the remaining generators
                let mut pos = 0;
                while pos < idx.len() {
                    idx[pos] += 1;
                    if idx[pos] < perms.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
        }
        pool.extend(found.into_iter().map(|images| FiniteQuotient::new(k, images)));
    }
    Ok((pool, warnings))
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub theorem: String,
    pub status: String,
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<Value>,
}

impl SuiteResult {
    fn new(name: &str, theorem: &str) -> Self {
        SuiteResult {
            name: name.into(),
            theorem: theorem.into(),
            status: String::new(),
            checked: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, payload: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures.push(payload());
        }
    }

    fn finish(mut self) -> Self {
        self.status = if self.failures.is_empty() { "pass" } else { "fail" }.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub knot: String,
    pub covers: usize,
    pub quotients: usize,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub warnings: Vec<String>,
    pub suites: Vec<SuiteResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed())
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&serde_json::to_value(self).unwrap()).unwrap();
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "knot: {}\ncovers: {}, quotients: {}, primes: {:?}, seed: {}\n",
            self.knot, self.covers, self.quotients, self.primes, self.seed
        );
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        for r in &self.suites {
            s.push_str(&format!(
                "{:<24} {:<4} checked {:>6}  skipped {:>4}  failures {}\n",
                r.name,
                r.status,
                r.checked,
                r.skipped,
                r.failures.len()
            ));
        }
        s
    }
}

/// Suite names in report order.
pub const SUITES: [(&str, &str); 10] = [
    (
        "orbit_partition",
        "ramification indices of the inertia data sum to the index, each minimal",
    ),
    (
        "schreier_counts",
        "Reidemeister-Schreier generator and relator counts scale with the index",
    ),
    (
        "rewrite_consistency",
        "rewritten subgroup elements embed back to the original word",
    ),
    (
        "boundary_tori",
        "meridian and longitude orbits partition the cosets into boundary tori",
    ),
    (
        "unramified_cohomology",
        "unramified classes in H1(U;F_p) are exactly inflations from U/M_U, also for the profinite completion",
    ),
    (
        "factoring",
        "a homomorphism on U factors through U/M_U iff it kills all inertia",
    ),
    (
        "ramification_image",
        "q(M_U) is the smallest normal subgroup of F killing all inertia images",
    ),
    (
        "closure_shadow",
        "inertia and ramification commute with passage to finite quotients G/N, N <= U",
    ),
    (
        "transport",
        "isomorphisms preserving the meridian class transport inertia families and ramification closures",
    ),
    (
        "transport_rejection",
        "isomorphisms moving the meridian class are rejected",
    ),
];

fn suite(name: &str) -> SuiteResult {
    let theorem = SUITES.iter().find(|(n, _)| *n == name).map_or("", |(_, t)| t);
    SuiteResult::new(name, theorem)
}

/// Runs every suite over the census. Deterministic in `(census, primes, seed)`.
pub fn run_suites(census: &Census, primes: &[u64], seed: u64) -> Result<SuiteReport> {
    for &p in primes {
        check_prime(p)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let suites = vec![
        orbit_partition(census),
        schreier_counts(census),
        rewrite_consistency(census, &mut rng),
        boundary_tori(census),
        unramified_cohomology(census, primes),
        factoring(census, primes, &mut rng),
        ramification_image(census),
        closure_shadow(census, &mut rng),
    ];
    let (transport, rejection) = transport_suites(census);
    let mut suites = suites;
    suites.push(transport);
    suites.push(rejection);
    Ok(SuiteReport {
        knot: census.knot.label.clone(),
        covers: census.covers.len(),
        quotients: census.pool.len(),
        primes: primes.to_vec(),
        seed,
        warnings: census.warnings.clone(),
        suites,
    })
}

fn orbit_partition(census: &Census) -> SuiteResult {
    let mut s = suite("orbit_partition");
    let m = &census.knot.meridian;
    let degrees = census.knot.degree_map().ok();
    for (i, c) in census.covers.iter().enumerate() {
        let sum: usize = c.inertia.iter().map(|d| d.ramification_index).sum();
        s.record(
            sum == c.index(),
            || json!({"cover": census.cover_label(i), "sum": sum, "index": c.index()}),
        );
        for d in &c.inertia {
            let e = d.ramification_index;
            let closes = e > 0 && c.table.trace(d.rep_coset, &m.pow(e as i64)) == d.rep_coset;
            let minimal = (1..e).all(|k| c.table.trace(d.rep_coset, &m.pow(k as i64)) != d.rep_coset);
            let in_u = c.table.trace(1, &d.generator_in_g) == 1;
            let degree_ok = degrees
                .as_ref()
                .is_none_or(|deg| deg.degree(&d.generator_in_g) == e as i64);
            s.record(closes && minimal && in_u && degree_ok, || {
                json!({
                    "cover": census.cover_label(i),
                    "rep_coset": d.rep_coset,
                    "ramification_index": e,
                    "closes": closes,
                    "minimal": minimal,
                    "in_U": in_u,
                    "degree": degree_ok,
                })
            });
        }
    }
    s.finish()
}

fn schreier_counts(census: &Census) -> SuiteResult {
    let mut s = suite("schreier_counts");
    let pres = &census.knot.presentation;
    let one_relator_two_gen = pres.n_gens() == 2 && pres.relators().len() == 1;
    for (i, c) in census.covers.iter().enumerate() {
        let n = c.index();
        let gens = c.subgroup.presentation.n_gens();
        let expected_gens = n * pres.n_gens() - (n - 1);
        let raw = c.subgroup.raw_relator_count;
        let before_pruning = (n * pres.n_gens()) as i64 - raw as i64;
        let scaled = n as i64 * pres.deficiency();
        let mut ok = gens == expected_gens && raw == n * pres.relators().len() && before_pruning == scaled;
        if one_relator_two_gen {
            ok &= c.subgroup.presentation.deficiency() == 1;
        }
        s.record(ok, || {
            json!({
                "cover": census.cover_label(i),
                "generators": gens,
                "expected_generators": expected_gens,
                "raw_relators": raw,
                "deficiency": c.subgroup.presentation.deficiency(),
            })
        });
    }
    s.finish()
}

fn random_word(rng: &mut ChaCha8Rng, n_gens: usize, len: usize) -> Word {
    Word::from_letters((0..len).map(|_| Letter::from_column(rng.gen_range(0..2 * n_gens))))
}

fn rewrite_consistency(census: &Census, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = suite("rewrite_consistency");
    let n_gens = census.knot.presentation.n_gens();
    if n_gens == 0 {
        return s.finish();
    }
    for (i, c) in census.covers.iter().enumerate() {
        let u_images: Vec<FiniteQuotient> = census.pool.iter().map(|q| q.restrict(&c.subgroup)).collect();
        for _ in 0..8 {
            let w = random_word(rng, n_gens, 12);
            // move w into U
            let end = c.table.trace(1, &w);
            let w = w.mul(&c.schreier.representative(end).inverse());
            let u = match rewrite(&c.table, &c.schreier, &w) {
                Ok(u) => u,
                Err(e) => {
                    s.record(
                        false,
                        || json!({"cover": census.cover_label(i), "error": e.to_string()}),
                    );
                    continue;
                }
            };
            let back = c.subgroup.embed(&u);
            let free_ok = back == w;
            let ab_ok = back.exponent_sums(n_gens) == w.exponent_sums(n_gens);
            let quotients_ok = census
                .pool
                .iter()
                .zip(&u_images)
                .all(|(q, qu)| qu.image(&u) == q.image(&w));
            s.record(free_ok && ab_ok && quotients_ok, || {
                json!({
                    "cover": census.cover_label(i),
                    "word": w.display(census.knot.presentation.generator_names()).to_string(),
                })
            });
        }
    }
    s.finish()
}

fn boundary_tori(census: &Census) -> SuiteResult {
    let mut s = suite("boundary_tori");
    let Some(l) = census.knot.longitude.as_ref() else {
        s.skipped = census.covers.len();
        return s.finish();
    };
    let m = &census.knot.meridian;
    for (i, c) in census.covers.iter().enumerate() {
        let pm = c.table.word_permutation(m);
        let pl = c.table.word_permutation(l);
        let commute = pm.then(&pl) == pl.then(&pm);
        let comps = boundary_components(&c.table, m, Some(l)).unwrap_or_default();
        let total: usize = comps.iter().map(|b| b.cosets.len()).sum();
        let orbit_count: usize = comps.iter().map(|b| b.meridian_orbits.len()).sum();
        s.record(commute && total == c.index() && orbit_count == c.inertia.len(), || {
            json!({
                "cover": census.cover_label(i),
                "commute": commute,
                "components": comps.len(),
            })
        });
    }
    s.finish()
}

fn unramified_cohomology(census: &Census, primes: &[u64]) -> SuiteResult {
    let mut s = suite("unramified_cohomology");
    for (i, c) in census.covers.iter().enumerate() {
        for &p in primes {
            match inflation_check(&c.subgroup, &c.quotient, &c.inertia, p) {
                Ok(r) => s.record(r.passed(), || json!({"cover": census.cover_label(i), "report": r})),
                Err(e) => s.record(
                    false,
                    || json!({"cover": census.cover_label(i), "p": p, "error": e.to_string()}),
                ),
            }
        }
    }
    s.finish()
}

fn cyclic_perm(p: u64, power: u64) -> Perm {
    let p32 = p as u32;
    let power = (power % p) as u32;
    Perm::from_images((0..p32).map(|x| (x + power) % p32).collect()).unwrap()
}

fn factoring(census: &Census, primes: &[u64], rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = suite("factoring");
    for (i, c) in census.covers.iter().enumerate() {
        let upres = &c.subgroup.presentation;
        // pool quotients restricted to U; inertia images computed on the G side
        for (j, q) in census.pool.iter().enumerate() {
            let phi = q.restrict(&c.subgroup);
            let kills = c.inertia.iter().all(|d| q.image(&d.generator_in_g).is_identity());
            match factoring_check(upres, &c.quotient, &phi, &c.inertia) {
                Ok(r) => s.record(r.factors() == kills, || {
                    json!({"cover": census.cover_label(i), "quotient": j, "factors": r.factors(), "kills_inertia": kills})
                }),
                Err(e) => s.record(false, || json!({"cover": census.cover_label(i), "quotient": j, "error": e.to_string()})),
            }
        }
        // random characters U -> Z/p
        for &p in primes {
            let Ok(h1) = h1_basis(upres, p) else { continue };
            let mut samples: Vec<Vec<u64>> = vec![vec![0; h1.ambient_dim]];
            samples.extend(h1.basis.iter().cloned());
            for _ in 0..4 {
                let mut v = vec![0u64; h1.ambient_dim];
                for b in &h1.basis {
                    let coef = rng.gen_range(0..p);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = (*x + coef * y) % p;
                    }
                }
                samples.push(v);
            }
            for v in samples {
                let phi = FiniteQuotient::new(p as usize, v.iter().map(|&x| cyclic_perm(p, x)).collect());
                let kills = c
                    .inertia
                    .iter()
                    .all(|d| FpSubspace::evaluate(&v, &d.generator_in_u, p) == 0);
                match factoring_check(upres, &c.quotient, &phi, &c.inertia) {
                    Ok(r) => {
                        let witness_ok = match &r {
                            FactoringResult::Factors(f) => f.check(&c.quotient).is_ok(),
                            FactoringResult::Violation { datum, image } => {
                                !image.is_identity() && *datum < c.inertia.len()
                            }
                        };
                        s.record(
                            r.factors() == kills && witness_ok,
                            || json!({"cover": census.cover_label(i), "p": p, "character": v}),
                        )
                    }
                    Err(e) => s.record(
                        false,
                        || json!({"cover": census.cover_label(i), "p": p, "error": e.to_string()}),
                    ),
                }
            }
        }
    }
    s.finish()
}

fn ramification_image(census: &Census) -> SuiteResult {
    let mut s = suite("ramification_image");
    for (i, c) in census.covers.iter().enumerate() {
        for (j, q) in census.pool.iter().enumerate() {
            let qu = q.restrict(&c.subgroup);
            match quotient_image_of_ramification(&c.subgroup.presentation, &qu, &c.inertia) {
                Ok((f, closure)) => {
                    let images: Vec<usize> = c.inertia.iter().map(|d| f.eval(&d.generator_in_u)).collect();
                    let brute = smallest_normal_containing(&f, &images);
                    s.record(brute == closure, || {
                        json!({
                            "cover": census.cover_label(i),
                            "quotient": j,
                            "order": f.order(),
                            "closure": closure.len(),
                            "brute_force": brute.len(),
                        })
                    });
                }
                Err(e) => s.record(
                    false,
                    || json!({"cover": census.cover_label(i), "quotient": j, "error": e.to_string()}),
                ),
            }
        }
    }
    s.finish()
}

fn closure_shadow(census: &Census, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut s = suite("closure_shadow");
    let knot = &census.knot;
    for (i, c) in census.covers.iter().enumerate() {
        let cover_perms = c.table.generator_permutations();
        for (j, q) in census.pool.iter().enumerate() {
            // N = ker q ∩ core(U): kernel of the combined action
            let images: Vec<Perm> = q
                .images
                .iter()
                .zip(&cover_perms)
                .map(|(a, b)| disjoint_union(a, b))
                .collect();
            let degree = q.degree + c.index();
            let Some(f) = FiniteGroup::generate_bounded(degree, &images, MAX_SHADOW_ORDER + 1) else {
                s.skipped += 1;
                continue;
            };
            let table_n = regular_table(&f);
            let ctx = match ShadowContext::new(knot, c, &table_n) {
                Ok(ctx) => ctx,
                Err(e) => {
                    s.record(
                        false,
                        || json!({"cover": census.cover_label(i), "quotient": j, "error": e.to_string()}),
                    );
                    continue;
                }
            };
            let closure = ctx.closure_of_local_inertia();
            let mut reps: Vec<Word> = c.schreier.transversal.clone();
            let mut elems: Vec<usize> = ctx.f.all().collect();
            if elems.len() > 32 {
                elems.shuffle(rng);
                elems.truncate(16);
            }
            reps.extend(elems.into_iter().map(|e| ctx.f.word_of(e)));
            for g in &reps {
                let r = ctx.check(c, &closure, g);
                s.record(r.passed(), || {
                    json!({
                        "cover": census.cover_label(i),
                        "quotient": j,
                        "g": g.display(knot.presentation.generator_names()).to_string(),
                        "report": r,
                    })
                });
            }
        }
    }
    s.finish()
}

/// Automorphisms of `f` as generator-image tuples (enumerated when the
/// search space `|f|^gens` is at most `limit`).
pub fn automorphisms(f: &FiniteGroup, gens: &[Perm], limit: usize) -> Option<Vec<Vec<Perm>>> {
    let n = gens.len();
    let order = f.order();
    if (order as f64).powi(n as i32) > limit as f64 {
        return None;
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let images: Vec<Perm> = idx.iter().map(|&e| f.perm(e).clone()).collect();
        if isomorphism_table(f, f, gens, &images).is_ok() {
            out.push(images);
        }
        let mut pos = 0;
        while pos < n {
            idx[pos] += 1;
            if idx[pos] < order {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == n {
            return Some(out);
        }
    }
}

/// Runs the transport check for every automorphism of every small pool
/// quotient: it must pass when some conjugator matches the meridian
/// subgroups and be rejected otherwise.
fn transport_suites(census: &Census) -> (SuiteResult, SuiteResult) {
    let mut pass = suite("transport");
    let mut reject = suite("transport_rejection");
    let m = &census.knot.meridian;
    for (j, q) in census.pool.iter().enumerate() {
        let f = q.group();
        if f.order() > MAX_TRANSPORT_ORDER {
            pass.skipped += 1;
            continue;
        }
        let Some(autos) = automorphisms(&f, &q.images, 20_000) else {
            pass.skipped += 1;
            continue;
        };
        let cyc = f.cyclic(f.eval(m));
        for iso in autos {
            let phi = isomorphism_table(&f, &f, &q.images, &iso).expect("enumerated automorphism");
            let moved: BTreeSet<usize> = cyc.iter().map(|&e| phi[e]).collect();
            let y = f.all().find(|&y| f.conj_set(y, &cyc) == moved);
            match y {
                Some(y) => {
                    let res = inertia_transport_check(q, m, q, m, &iso, f.perm(y));
                    let ok = res.as_ref().is_ok_and(|r| r.passed());
                    pass.record(
                        ok,
                        || json!({"quotient": j, "iso": perms_json(&iso), "result": format!("{res:?}")}),
                    );
                }
                None => {
                    let res = inertia_transport_check(q, m, q, m, &iso, f.perm(0));
                    let ok = matches!(res, Err(Error::MeridianClassNotPreserved));
                    reject.record(
                        ok,
                        || json!({"quotient": j, "iso": perms_json(&iso), "result": format!("{res:?}")}),
                    );
                }
            }
        }
    }
    (pass.finish(), reject.finish())
}

fn perms_json(ps: &[Perm]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> KnotGroupData {
        crate::parse::parse_presentation("gens: a b\nrel: a b a B A B\nlongitude: (aba)^2 a^-6\n")
            .unwrap()
            .with_label("trefoil")
    }

    #[test]
    fn permutations_and_cycle_types() {
        assert_eq!(all_permutations(4).len(), 24);
        assert_eq!(cycle_type_representatives(5).len(), 7);
        assert_eq!(cycle_type_representatives(1).len(), 1);
    }

    #[test]
    fn canonical_form_is_conjugation_invariant() {
        let a = Perm::from_cycles(4, &[&[1, 2, 3, 4]]);
        let b = Perm::from_cycles(4, &[&[1, 3]]);
        let x = Perm::from_cycles(4, &[&[2, 4, 3]]);
        let c1 = canonical_action(&[a.clone(), b.clone()], 4);
        let c2 = canonical_action(&[a.conjugate_by(&x), b.conjugate_by(&x)], 4);
        assert_eq!(c1, c2);
    }

    #[test]
    fn small_census() {
        let k = trefoil();
        let c = build_census(&k, &CensusOptions::new(2, 3)).unwrap();
        assert_eq!(c.covers.len(), 2);
        assert!(c.pool.iter().any(|q| q.group().order() == 6));
        let r = run_suites(&c, &[2, 3], 0).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        let again = run_suites(&c, &[2, 3], 0).unwrap();
        assert_eq!(r.to_json_string(), again.to_json_string());
    }

    #[test]
    fn minimal_census() {
        let k = trefoil();
        let c = build_census(&k, &CensusOptions::new(1, 1)).unwrap();
        assert_eq!(c.covers.len(), 1);
        assert_eq!(c.pool.len(), 1);
        assert!(c.pool[0].is_trivial());
    }

    #[test]
    fn empty_census_passes() {
        let c = Census::empty(trefoil());
        let r = run_suites(&c, &[2], 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.suites.len(), SUITES.len());
    }

    #[test]
    fn corrupted_datum_is_caught() {
        let k = trefoil();
        let mut c = build_census(&k, &CensusOptions::new(2, 2)).unwrap();
        c.covers[1].inertia[0].ramification_index -= 1;
        let r = run_suites(&c, &[2], 0).unwrap();
        let s = r.suite("orbit_partition").unwrap();
        assert_eq!(s.status, "fail");
        assert!(s.failures.iter().any(|f| f["rep_coset"] == 1));
    }

    #[test]
    fn budget_warning() {
        let k = trefoil();
        let mut opts = CensusOptions::new(1, 4);
        opts.search_budget = 100;
        let c = build_census(&k, &opts).unwrap();
        assert!(c.partial);
        assert!(!c.warnings.is_empty());
    }
}
