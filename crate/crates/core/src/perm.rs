//! Permutations and small finite groups given by faithful permutation actions.
//!
//! [`FiniteGroup`] enumerates all elements once and then works with element
//! indices; products are computed by walking right-multiplication tables.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::Word;

/// A permutation of `{0, .., n-1}`. Displayed and parsed 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// From 0-based images; `None` if not a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return None;
            }
        }
        Some(Perm(images))
    }

    /// From 1-based cycles, e.g. `&[&[1, 2], &[3, 4, 5]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Self {
        let mut p = Perm::identity(n);
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                let y = cyc[(i + 1) % cyc.len()];
                p.0[x - 1] = (y - 1) as u32;
            }
        }
        p
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)` or `()`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidSpec(format!("bad permutation '{text}': {msg}"));
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut rest = text.trim();
        let mut seen = vec![false; degree];
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(bad("expected '('"));
            }
            let close = rest.find(')').ok_or_else(|| bad("missing ')'"))?;
            let points: Vec<usize> = rest[1..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad("non-numeric point")))
                .collect::<Result<_>>()?;
            for (i, &x) in points.iter().enumerate() {
                if x == 0 || x > degree {
                    return Err(bad("point out of range"));
                }
                if std::mem::replace(&mut seen[x - 1], true) {
                    return Err(bad("point repeated"));
                }
                images[x - 1] = (points[(i + 1) % points.len()] - 1) as u32;
            }
            rest = rest[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    /// Largest point mentioned in cycle notation.
    pub fn max_point_in(text: &str) -> usize {
        text.split(|c: char| !c.is_ascii_digit())
            .filter_map(|s| s.parse::<usize>().ok())
            .max()
            .unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self` followed by `other` (right action: `i^(self*other) = (i^self)^other`).
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `x⁻¹ · self · x`, i.e. relabel points through `x`.
    pub fn conjugate_by(&self, x: &Perm) -> Perm {
        x.inverse().then(self).then(x)
    }

    /// 1-based cycle decomposition including fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.0[s] as usize == s {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x + 1);
                x = self.0[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    /// Orbits of `{0..n}` under the group generated by `gens`, each sorted,
    /// listed by smallest point.
    pub fn orbits(n: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut orb = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < orb.len() {
                let x = orb[i];
                for g in gens {
                    let y = g.apply(x);
                    if !seen[y] {
                        seen[y] = true;
                        orb.push(y);
                    }
                }
                i += 1;
            }
            orb.sort_unstable();
            orbits.push(orb);
        }
        orbits
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Image of a word under generator images, multiplying left to right.
pub fn word_image(w: &Word, images: &[Perm], degree: usize) -> Perm {
    let inverses: Vec<Perm> = images.iter().map(|p| p.inverse()).collect();
    let mut acc = Perm::identity(degree);
    for l in w.letters() {
        let p = if l.inverse { &inverses[l.gen] } else { &images[l.gen] };
        acc = acc.then(p);
    }
    acc
}

/// Index of an element of a [`FiniteGroup`].
pub type Elem = usize;

/// Set of element indices.
pub type ElemSet = BTreeSet<Elem>;

/// A finite group generated by permutations, with elements enumerated.
///
/// Element 0 is the identity. Generator `i` of the group is the `i`-th
/// permutation passed to [`FiniteGroup::generate`], so words over those
/// generators can be evaluated directly with [`FiniteGroup::eval`].
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Perm>,
    index: HashMap<Perm, Elem>,
    /// right[e][col] = e * letter(col)
    right: Vec<Vec<Elem>>,
    /// shortest word (as columns) reaching each element
    words: Vec<Vec<usize>>,
    n_gens: usize,
}

impl FiniteGroup {
    /// Enumerates `<gens>`. Returns `None` if the order would exceed `limit`.
    pub fn generate_bounded(degree: usize, gens: &[Perm], limit: usize) -> Option<Self> {
        assert!(gens.iter().all(|g| g.degree() == degree));
        let cols: Vec<Perm> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0)]);
        let mut words = vec![Vec::new()];
        let mut right: Vec<Vec<Elem>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            let mut row = Vec::with_capacity(cols.len());
            for (c, g) in cols.iter().enumerate() {
                let prod = elements[e].then(g);
                let idx = match index.get(&prod) {
                    Some(&i) => i,
                    None => {
                        let i = elements.len();
                        if i >= limit {
                            return None;
                        }
                        index.insert(prod.clone(), i);
                        elements.push(prod);
                        let mut w = words[e].clone();
                        w.push(c);
                        words.push(w);
                        queue.push_back(i);
                        i
                    }
                };
                row.push(idx);
            }
            if right.len() <= e {
                right.resize(e + 1, Vec::new());
            }
            right[e] = row;
        }
        Some(FiniteGroup {
            degree,
            elements,
            index,
            right,
            words,
            n_gens: gens.len(),
        })
    }

    pub fn generate(degree: usize, gens: &[Perm]) -> Self {
        Self::generate_bounded(degree, gens, usize::MAX).unwrap()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn perm(&self, e: Elem) -> &Perm {
        &self.elements[e]
    }

    pub fn lookup(&self, p: &Perm) -> Option<Elem> {
        self.index.get(p).copied()
    }

    pub fn generator(&self, i: usize) -> Elem {
        self.right[0][2 * i]
    }

    pub fn generators(&self) -> Vec<Elem> {
        (0..self.n_gens).map(|i| self.generator(i)).collect()
    }

    pub fn all(&self) -> impl Iterator<Item = Elem> {
        0..self.elements.len()
    }

    fn walk(&self, mut e: Elem, cols: impl IntoIterator<Item = usize>) -> Elem {
        for c in cols {
            e = self.right[e][c];
        }
        e
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.walk(a, self.words[b].iter().copied())
    }

    pub fn inv(&self, a: Elem) -> Elem {
        self.walk(0, self.words[a].iter().rev().map(|c| c ^ 1))
    }

    /// `x · h · x⁻¹`
    pub fn conj(&self, x: Elem, h: Elem) -> Elem {
        self.mul(self.mul(x, h), self.inv(x))
    }

    /// Evaluates a word over the group's generators.
    pub fn eval(&self, w: &Word) -> Elem {
        self.walk(0, w.letters().iter().map(|l| l.column()))
    }

    /// A word over the generators representing `e`.
    pub fn word_of(&self, e: Elem) -> Word {
        Word::from_letters(self.words[e].iter().map(|&c| crate::word::Letter::from_column(c)))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// `{1, a, a², ...}`
    pub fn cyclic(&self, a: Elem) -> ElemSet {
        let mut s = ElemSet::from([0]);
        let mut x = a;
        while x != 0 {
            s.insert(x);
            x = self.mul(x, a);
        }
        s
    }

    /// Subgroup generated by `gens`.
    pub fn subgroup(&self, gens: impl IntoIterator<Item = Elem>) -> ElemSet {
        let mut set = ElemSet::from([0]);
        let mut kept = Vec::new();
        for g in gens {
            self.extend_subgroup(&mut set, &mut kept, g);
        }
        set
    }

    /// Replaces `set = <kept>` by `<kept, g>`; returns false if `g` was
    /// already in it.
    fn extend_subgroup(&self, set: &mut ElemSet, kept: &mut Vec<Elem>, g: Elem) -> bool {
        if set.contains(&g) {
            return false;
        }
        kept.push(g);
        let mut queue: Vec<Elem> = set.iter().copied().collect();
        while let Some(e) = queue.pop() {
            for &h in kept.iter() {
                let p = self.mul(e, h);
                if set.insert(p) {
                    queue.push(p);
                }
            }
        }
        true
    }

    /// `x S x⁻¹`
    pub fn conj_set(&self, x: Elem, s: &ElemSet) -> ElemSet {
        let xi = self.inv(x);
        s.iter().map(|&h| self.mul(self.mul(x, h), xi)).collect()
    }

    /// Smallest subgroup containing `seeds` and normalized by every element of
    /// `ambient_gens`. Only conjugates of the generators actually kept need
    /// to be tested: in a finite group `t⁻¹St ⊆ S` forces equality.
    pub fn normal_closure(&self, seeds: impl IntoIterator<Item = Elem>, ambient_gens: &[Elem]) -> ElemSet {
        let inverses: Vec<Elem> = ambient_gens.iter().map(|&t| self.inv(t)).collect();
        let mut set = ElemSet::from([0]);
        let mut kept = Vec::new();
        let mut pending: Vec<Elem> = seeds.into_iter().collect();
        pending.reverse();
        while let Some(g) = pending.pop() {
            if self.extend_subgroup(&mut set, &mut kept, g) {
                for (&t, &ti) in ambient_gens.iter().zip(&inverses) {
                    pending.push(self.mul(self.mul(ti, g), t));
                }
            }
        }
        set
    }

    pub fn is_normal_in(&self, sub: &ElemSet, ambient_gens: &[Elem]) -> bool {
        ambient_gens.iter().all(|&t| {
            let ti = self.inv(t);
            sub.iter().all(|&h| sub.contains(&self.mul(self.mul(ti, h), t)))
        })
    }

    pub fn is_subgroup(&self, s: &ElemSet) -> bool {
        s.contains(&0) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&self.mul(a, b))))
    }

    /// Every subgroup of the group (or of the subgroup `within`), built as
    /// joins of cyclic subgroups. Intended for small groups.
    pub fn all_subgroups(&self, within: Option<&ElemSet>) -> Vec<ElemSet> {
        let universe: Vec<Elem> = match within {
            Some(w) => w.iter().copied().collect(),
            None => self.all().collect(),
        };
        let mut cyclics: Vec<ElemSet> = Vec::new();
        for &a in &universe {
            let c = self.cyclic(a);
            if !cyclics.contains(&c) {
                cyclics.push(c);
            }
        }
        self.join_closure(cyclics.clone(), &cyclics)
    }

    /// Every normal subgroup of the whole group.
    pub fn normal_subgroups(&self) -> Vec<ElemSet> {
        let gens = self.generators();
        let mut seeds: Vec<ElemSet> = Vec::new();
        for a in self.all() {
            let n = self.normal_closure([a], &gens);
            if !seeds.contains(&n) {
                seeds.push(n);
            }
        }
        self.join_closure(seeds.clone(), &seeds)
    }

    fn join_closure(&self, mut found: Vec<ElemSet>, atoms: &[ElemSet]) -> Vec<ElemSet> {
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in atoms {
                    if c.is_subset(h) {
                        continue;
                    }
                    let j = self.subgroup(h.iter().chain(c.iter()).copied());
                    if !found.contains(&j) {
                        found.push(j.clone());
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
    }
}
