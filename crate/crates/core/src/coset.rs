//! Coset tables: Todd–Coxeter enumeration (HLT with immediate coincidence
//! processing), direct constructions for cyclic covers and permutation
//! representations, and low-index subgroup enumeration.
//!
//! Cosets are numbered from 1; coset 1 is the subgroup itself.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::{word_image, Perm};
use crate::presentation::{DegreeMap, Presentation};
use crate::word::{inverse_name, Letter, Word};

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

/// How a finite-index subgroup is specified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubgroupSpec {
    /// Subgroup generated by the given words.
    GeneratorWords(Vec<Word>),
    /// Kernel of `G -> Z -> Z/n`, where `G -> Z` is the abelianization.
    CyclicCover(usize),
    /// Stabilizer of `point` (1-based) under the action given by one
    /// permutation per generator.
    PermRep { perms: Vec<Perm>, point: usize },
}

impl SubgroupSpec {
    pub fn describe(&self, names: &[String]) -> String {
        match self {
            SubgroupSpec::GeneratorWords(ws) => {
                let ws: Vec<String> = ws.iter().map(|w| w.display(names).to_string()).collect();
                format!("gens[{}]", ws.join(","))
            }
            SubgroupSpec::CyclicCover(n) => format!("cyclic({n})"),
            SubgroupSpec::PermRep { perms, point } => {
                let ps: Vec<String> = names.iter().zip(perms).map(|(n, p)| format!("{n}={p}")).collect();
                format!("perm[{}]@{point}", ps.join(";"))
            }
        }
    }
}

/// Complete right action of the generators on the cosets of a subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetTable {
    n_gens: usize,
    /// rows[c - 1][column] is the 1-based coset `c · letter(column)`.
    rows: Vec<Vec<usize>>,
    pub spec: SubgroupSpec,
}

impl CosetTable {
    /// Builds a table from generator permutations (0-based). Permutation `i`
    /// is the action of generator `i`; coset 1 is point 0.
    pub fn from_permutations(perms: &[Perm], degree: usize, spec: SubgroupSpec) -> Self {
        let inverses: Vec<Perm> = perms.iter().map(|p| p.inverse()).collect();
        let rows = (0..degree)
            .map(|c| {
                perms
                    .iter()
                    .zip(&inverses)
                    .flat_map(|(p, q)| [p.apply(c) + 1, q.apply(c) + 1])
                    .collect()
            })
            .collect();
        CosetTable {
            n_gens: perms.len(),
            rows,
            spec,
        }
    }

    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    /// `c · letter`.
    pub fn act(&self, c: usize, l: Letter) -> usize {
        self.rows[c - 1][l.column()]
    }

    /// Right action of `w` on coset `start`, letter by letter.
    pub fn trace(&self, start: usize, w: &Word) -> usize {
        w.letters().iter().fold(start, |c, &l| self.act(c, l))
    }

    /// 0-based permutation of each generator on the cosets.
    pub fn generator_permutations(&self) -> Vec<Perm> {
        (0..self.n_gens)
            .map(|g| {
                Perm::from_images(self.rows.iter().map(|r| (r[2 * g] - 1) as u32).collect())
                    .expect("coset table column is a permutation")
            })
            .collect()
    }

    pub fn word_permutation(&self, w: &Word) -> Perm {
        word_image(w, &self.generator_permutations(), self.index())
    }

    /// Checks the structural invariants: every column is a permutation with the
    /// inverse column as its inverse, every relator closes at every coset, and
    /// the subgroup generators (if any) fix coset 1.
    pub fn check(&self, pres: &Presentation) -> std::result::Result<(), String> {
        let n = self.index();
        for col in 0..2 * self.n_gens {
            let mut seen = vec![false; n + 1];
            for c in 1..=n {
                let d = self.rows[c - 1][col];
                if d == 0 || d > n {
                    return Err(format!("entry ({c}, {col}) out of range"));
                }
                if std::mem::replace(&mut seen[d], true) {
                    return Err(format!("column {col} is not a permutation"));
                }
                if self.rows[d - 1][col ^ 1] != c {
                    return Err(format!("inverse column mismatch at ({c}, {col})"));
                }
            }
        }
        for (i, r) in pres.relators().iter().enumerate() {
            for c in 1..=n {
                if self.trace(c, r) != c {
                    return Err(format!("relator {i} does not close at coset {c}"));
                }
            }
        }
        if let SubgroupSpec::GeneratorWords(ws) = &self.spec {
            for (i, w) in ws.iter().enumerate() {
                if self.trace(1, w) != 1 {
                    return Err(format!("subgroup generator {i} does not fix coset 1"));
                }
            }
        }
        Ok(())
    }

    /// `{"index": n, "action": {"a": [..], "A": [..], ...}}` with 1-based cosets.
    pub fn to_json(&self, names: &[String]) -> Value {
        let mut action = BTreeMap::new();
        for (g, name) in names.iter().enumerate().take(self.n_gens) {
            for (col, key) in [(2 * g, name.clone()), (2 * g + 1, inverse_name(name))] {
                let v: Vec<usize> = self.rows.iter().map(|r| r[col]).collect();
                action.insert(key, v);
            }
        }
        json!({ "index": self.index(), "action": action })
    }

    /// Whether both tables describe the same subgroup.
    pub fn same_subgroup(&self, other: &CosetTable) -> bool {
        self.n_gens == other.n_gens && self.standardized().rows == other.standardized().rows
    }

    /// Renumbers cosets in breadth-first order from coset 1, scanning columns
    /// in order. Two tables for the same subgroup standardize identically.
    pub fn standardized(&self) -> CosetTable {
        let n = self.index();
        let mut new_of = vec![0usize; n + 1];
        let mut order = vec![1usize];
        new_of[1] = 1;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            for col in 0..2 * self.n_gens {
                let d = self.rows[c - 1][col];
                if new_of[d] == 0 {
                    order.push(d);
                    new_of[d] = order.len();
                }
            }
            i += 1;
        }
        let rows = order
            .iter()
            .map(|&c| self.rows[c - 1].iter().map(|&d| new_of[d]).collect())
            .collect();
        CosetTable {
            n_gens: self.n_gens,
            rows,
            spec: self.spec.clone(),
        }
    }
}

/// Enumerates the cosets of the subgroup described by `spec`.
///
/// `CyclicCover` needs the abelianization to be infinite cyclic; the degree map
/// is normalized so that the first generator of nonzero degree has positive
/// degree. `PermRep` tables are read off the action directly, with points 1
/// and `point` swapped so that the stabilized point becomes coset 1.
pub fn todd_coxeter(pres: &Presentation, spec: &SubgroupSpec, max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::InvalidSpec("max_cosets must be at least 1".into()));
    }
    let table = match spec {
        SubgroupSpec::GeneratorWords(words) => enumerate(pres, words, max_cosets, spec.clone())?,
        SubgroupSpec::CyclicCover(n) => cyclic_cover_table(pres, *n, max_cosets)?,
        SubgroupSpec::PermRep { perms, point } => perm_rep_table(pres, perms, *point)?,
    };
    debug_assert_eq!(table.check(pres), Ok(()));
    Ok(table)
}

/// Degree map normalized by the first generator of nonzero degree.
pub fn presentation_degree_map(pres: &Presentation) -> Result<DegreeMap> {
    let map = pres.abelian_map();
    if !map.invariants.is_infinite_cyclic() {
        return Err(Error::InvalidSpec(format!(
            "cyclic covers need abelianization Z, found {}",
            map.invariants
        )));
    }
    let n = pres.n_gens();
    let degs: Vec<i64> = (0..n)
        .map(|g| {
            let mut e = vec![0; n];
            e[g] = 1;
            num_traits::ToPrimitive::to_i64(&map.free_part(&e)[0]).expect("degree exceeds i64")
        })
        .collect();
    let sign = degs.iter().find(|&&d| d != 0).map_or(1, |d| d.signum());
    Ok(DegreeMap {
        generator_degrees: degs.into_iter().map(|d| d * sign).collect(),
    })
}

fn cyclic_cover_table(pres: &Presentation, n: usize, max_cosets: usize) -> Result<CosetTable> {
    if n == 0 {
        return Err(Error::InvalidSpec("cyclic cover degree must be at least 1".into()));
    }
    if n > max_cosets {
        return Err(Error::CosetLimitExceeded(max_cosets));
    }
    let deg = presentation_degree_map(pres)?;
    cyclic_cover_from_degrees(&deg, n)
}

/// Cyclic-cover table for an explicit degree map (e.g. one normalized by a
/// meridian).
pub fn cyclic_cover_from_degrees(deg: &DegreeMap, n: usize) -> Result<CosetTable> {
    if n == 0 {
        return Err(Error::InvalidSpec("cyclic cover degree must be at least 1".into()));
    }
    let ni = n as i64;
    let perms: Vec<Perm> = deg
        .generator_degrees
        .iter()
        .map(|&d| Perm::from_images((0..ni).map(|k| (k + d).rem_euclid(ni) as u32).collect()).unwrap())
        .collect();
    Ok(CosetTable::from_permutations(&perms, n, SubgroupSpec::CyclicCover(n)))
}

fn perm_rep_table(pres: &Presentation, perms: &[Perm], point: usize) -> Result<CosetTable> {
    if perms.len() != pres.n_gens() {
        return Err(Error::InvalidSpec(format!(
            "{} permutations given for {} generators",
            perms.len(),
            pres.n_gens()
        )));
    }
    let degree = perms.first().map_or(1, |p| p.degree());
    if perms.iter().any(|p| p.degree() != degree) {
        return Err(Error::InvalidSpec("permutations have different degrees".into()));
    }
    if point == 0 || point > degree {
        return Err(Error::InvalidSpec(format!("point {point} outside 1..={degree}")));
    }
    for (i, r) in pres.relators().iter().enumerate() {
        let img = word_image(r, perms, degree);
        if !img.is_identity() {
            return Err(Error::IncompatiblePermRep(format!("relator {} maps to {img}", i + 1)));
        }
    }
    if Perm::orbits(degree, perms).len() != 1 {
        return Err(Error::IncompatiblePermRep("action is not transitive".into()));
    }
    let pair = [1, point];
    let swap = if point == 1 {
        Perm::identity(degree)
    } else {
        Perm::from_cycles(degree, &[&pair])
    };
    let relabeled: Vec<Perm> = perms.iter().map(|p| p.conjugate_by(&swap)).collect();
    Ok(CosetTable::from_permutations(
        &relabeled,
        degree,
        SubgroupSpec::PermRep {
            perms: perms.to_vec(),
            point,
        },
    ))
}

const NONE: usize = usize::MAX;

/// HLT coset enumeration state (0-based cosets).
struct Enumerator {
    ncols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    live: usize,
    max: usize,
}

impl Enumerator {
    fn new(n_gens: usize, max: usize) -> Self {
        Enumerator {
            ncols: 2 * n_gens,
            table: vec![vec![NONE; 2 * n_gens]],
            parent: vec![0],
            queue: Vec::new(),
            live: 1,
            max,
        }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.live >= self.max {
            return Err(Error::CosetLimitExceeded(self.max));
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.ncols]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        self.live += 1;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = c;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = (a.min(b), a.max(b));
        self.parent[kill] = keep;
        self.queue.push(kill);
        self.live -= 1;
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                self.table[d][x ^ 1] = NONE;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][x ^ 1] != NONE {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        // w[i..j] is the part not yet traced from either end
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.table[b][w[j - 1] ^ 1] != NONE {
                b = self.table[b][w[j - 1] ^ 1];
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            } else if j == i + 1 {
                self.table[f][w[i]] = b;
                self.table[b][w[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

fn enumerate(pres: &Presentation, subgroup_gens: &[Word], max_cosets: usize, spec: SubgroupSpec) -> Result<CosetTable> {
    let n_gens = pres.n_gens();
    let cols = |w: &Word| -> Vec<usize> { w.letters().iter().map(|l| l.column()).collect() };
    let relators: Vec<Vec<usize>> = pres.relators().iter().map(cols).collect();
    let subgens: Vec<Vec<usize>> = subgroup_gens.iter().map(|w| cols(&w.free_reduce())).collect();
    if let Some(g) = subgroup_gens.iter().filter_map(|w| w.max_gen()).max() {
        if g >= n_gens {
            return Err(Error::InvalidSpec(format!(
                "subgroup generator uses generator index {g}"
            )));
        }
    }

    let mut e = Enumerator::new(n_gens, max_cosets);
    for w in &subgens {
        e.scan_and_fill(0, w)?;
    }
    let mut c = 0;
    while c < e.table.len() {
        if e.is_live(c) {
            for r in &relators {
                e.scan_and_fill(c, r)?;
                if !e.is_live(c) {
                    break;
                }
            }
            if e.is_live(c) {
                for x in 0..e.ncols {
                    if e.table[c][x] == NONE {
                        e.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }

    // compact, preserving discovery order
    let mut new_of = vec![0usize; e.table.len()];
    let mut k = 0;
    for (c, slot) in new_of.iter_mut().enumerate() {
        if e.parent[c] == c {
            k += 1;
            *slot = k;
        }
    }
    let rows = (0..e.table.len())
        .filter(|&c| e.parent[c] == c)
        .map(|c| e.table[c].iter().map(|&d| new_of[d]).collect())
        .collect();
    Ok(CosetTable { n_gens, rows, spec })
}

/// One coset table per conjugacy class of subgroups of index at most
/// `max_index`, ordered by index and then by canonical table.
///
/// Backtracking over partial standardized coset tables; a branch is kept only
/// if its table is minimal among the tables obtained by re-basing at every
/// other coset.
pub fn low_index_subgroups(pres: &Presentation, max_index: usize) -> Vec<CosetTable> {
    let n_gens = pres.n_gens();
    let relators: Vec<Vec<usize>> = pres
        .relators()
        .iter()
        .map(|w| w.letters().iter().map(|l| l.column()).collect())
        .collect();
    let mut search = LowIndex {
        ncols: 2 * n_gens,
        max_index,
        relators,
        found: Vec::new(),
    };
    if max_index >= 1 {
        let mut t = PartialTable {
            rows: vec![vec![NONE; 2 * n_gens]],
        };
        search.descend(&mut t);
    }
    let mut tables: Vec<CosetTable> = search
        .found
        .into_iter()
        .map(|rows| {
            let n = rows.len();
            let rows: Vec<Vec<usize>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(|d| d + 1).collect())
                .collect();
            let mut t = CosetTable {
                n_gens,
                rows,
                spec: SubgroupSpec::CyclicCover(0),
            };
            let perms = t.generator_permutations();
            t.spec = SubgroupSpec::PermRep { perms, point: 1 };
            debug_assert_eq!(t.index(), n);
            t
        })
        .collect();
    tables.sort_by(|a, b| a.index().cmp(&b.index()).then_with(|| a.rows.cmp(&b.rows)));
    tables
}

#[derive(Clone)]
struct PartialTable {
    rows: Vec<Vec<usize>>,
}

struct LowIndex {
    ncols: usize,
    max_index: usize,
    relators: Vec<Vec<usize>>,
    found: Vec<Vec<Vec<usize>>>,
}

impl LowIndex {
    fn first_gap(&self, t: &PartialTable) -> Option<(usize, usize)> {
        for (c, row) in t.rows.iter().enumerate() {
            if let Some(x) = row.iter().position(|&d| d == NONE) {
                return Some((c, x));
            }
        }
        None
    }

    fn descend(&mut self, t: &mut PartialTable) {
        let Some((c, x)) = self.first_gap(t) else {
            self.found.push(t.rows.clone());
            return;
        };
        let n = t.rows.len();
        // existing cosets whose inverse slot is free
        for d in 0..n {
            if t.rows[d][x ^ 1] != NONE {
                continue;
            }
            let mut next = t.clone();
            next.rows[c][x] = d;
            next.rows[d][x ^ 1] = c;
            if self.deduce(&mut next) && self.is_canonical(&next) {
                self.descend(&mut next);
            }
        }
        if n < self.max_index {
            let mut next = t.clone();
            next.rows.push(vec![NONE; self.ncols]);
            next.rows[c][x] = n;
            next.rows[n][x ^ 1] = c;
            if self.deduce(&mut next) && self.is_canonical(&next) {
                self.descend(&mut next);
            }
        }
    }

    /// Scans every relator at every coset, filling single gaps, until nothing
    /// changes. Returns false on a contradiction.
    fn deduce(&self, t: &mut PartialTable) -> bool {
        loop {
            let mut changed = false;
            for c in 0..t.rows.len() {
                for r in &self.relators {
                    match scan(t, c, r) {
                        Scan::Closed | Scan::Open => {}
                        Scan::Conflict => return false,
                        Scan::Deduce(f, x, b) => {
                            if t.rows[f][x] != NONE || t.rows[b][x ^ 1] != NONE {
                                return false;
                            }
                            t.rows[f][x] = b;
                            t.rows[b][x ^ 1] = f;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// The table is canonical if no other base coset yields a smaller
    /// standardized table (compared row-major as far as both are defined).
    fn is_canonical(&self, t: &PartialTable) -> bool {
        let n = t.rows.len();
        for base in 1..n {
            let mut new_of = vec![NONE; n];
            let mut old_of = vec![base];
            new_of[base] = 0;
            'cmp: for i in 0..n {
                if i >= old_of.len() {
                    break;
                }
                for x in 0..self.ncols {
                    let orig = t.rows[i][x];
                    let img = t.rows[old_of[i]][x];
                    if orig == NONE || img == NONE {
                        break 'cmp;
                    }
                    let relabeled = if new_of[img] == NONE {
                        new_of[img] = old_of.len();
                        old_of.push(img);
                        old_of.len() - 1
                    } else {
                        new_of[img]
                    };
                    if relabeled < orig {
                        return false;
                    }
                    if relabeled > orig {
                        break 'cmp;
                    }
                }
            }
        }
        true
    }
}

enum Scan {
    Closed,
    Open,
    Conflict,
    Deduce(usize, usize, usize),
}

fn scan(t: &PartialTable, c: usize, w: &[usize]) -> Scan {
    let mut f = c;
    let mut i = 0;
    while i < w.len() && t.rows[f][w[i]] != NONE {
        f = t.rows[f][w[i]];
        i += 1;
    }
    if i == w.len() {
        return if f == c { Scan::Closed } else { Scan::Conflict };
    }
    let mut b = c;
    let mut j = w.len();
    while j > i && t.rows[b][w[j - 1] ^ 1] != NONE {
        b = t.rows[b][w[j - 1] ^ 1];
        j -= 1;
    }
    if j == i {
        return if f == b { Scan::Closed } else { Scan::Conflict };
    }
    if j == i + 1 {
        return Scan::Deduce(f, w[i], b);
    }
    Scan::Open
}
