//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's linear algebra, enumeration or group code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ramikit::parse::parse_presentation;
use ramikit::presentation::KnotGroupData;
use ramikit::word::Word;

pub const TREFOIL: &str = include_str!("../../data/trefoil.knot");
pub const FIGURE_EIGHT: &str = include_str!("../../data/figure_eight.knot");

pub fn trefoil() -> KnotGroupData {
    parse_presentation(TREFOIL).unwrap().with_label("trefoil")
}

pub fn figure_eight() -> KnotGroupData {
    parse_presentation(FIGURE_EIGHT).unwrap().with_label("figure_eight")
}

/// Laurent polynomial in `t`: exponent -> coefficient, no zero coefficients.
pub type Laurent = BTreeMap<i64, i64>;

fn add_term(p: &mut Laurent, e: i64, c: i64) {
    let v = p.entry(e).or_insert(0);
    *v += c;
    if *v == 0 {
        p.remove(&e);
    }
}

/// Fox derivative `∂r/∂x_j`, abelianized by sending every generator to `t`.
pub fn fox_derivative(r: &Word, j: usize) -> Laurent {
    let mut out = Laurent::new();
    let mut prefix = 0i64;
    for l in r.letters() {
        if l.inverse {
            prefix -= 1;
            if l.gen == j {
                add_term(&mut out, prefix, -1);
            }
        } else {
            if l.gen == j {
                add_term(&mut out, prefix, 1);
            }
            prefix += 1;
        }
    }
    out
}

/// Coefficients `c_0..c_d` of a Laurent polynomial normalized up to `±t^k`
/// so the lowest term has exponent 0 and the leading coefficient is positive.
pub fn normalize(p: &Laurent) -> Vec<i64> {
    let Some((&lo, _)) = p.iter().next() else {
        return vec![];
    };
    let hi = *p.keys().last().unwrap();
    let mut c: Vec<i64> = (lo..=hi).map(|e| *p.get(&e).unwrap_or(&0)).collect();
    if *c.last().unwrap() < 0 {
        c.iter_mut().for_each(|x| *x = -*x);
    }
    c
}

/// Alexander polynomial of a two-generator one-relator knot group whose
/// generators are both meridians: the minor `∂r/∂x_1`.
pub fn alexander_two_generator(k: &KnotGroupData) -> Vec<i64> {
    let p = &k.presentation;
    assert_eq!((p.n_gens(), p.relators().len()), (2, 1));
    normalize(&fox_derivative(&p.relators()[0], 1))
}

pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * det(&minor);
    }
    total
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `D_k`, the gcd of all `k × k` minors, for `k = 1..=min(rows, cols)`.
pub fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    (1..=rows.min(cols))
        .map(|k| {
            let mut g = 0i128;
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let minor: Vec<Vec<i128>> = rs
                        .iter()
                        .map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect())
                        .collect();
                    g = gcd(g, det(&minor));
                }
            }
            g
        })
        .collect()
}

/// Nonzero invariant factors `D_k / D_{k-1}`, with the units dropped.
pub fn invariant_factors_by_minors(m: &[Vec<i64>]) -> (usize, Vec<i128>) {
    let d = determinantal_divisors(m);
    let mut factors = Vec::new();
    let mut prev = 1i128;
    for &dk in &d {
        if dk == 0 {
            break;
        }
        factors.push(dk / prev);
        prev = dk;
    }
    let rank = factors.len();
    (rank, factors.into_iter().filter(|&x| x != 1).collect())
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Torsion of `H_1` of the `n`-fold cyclic branched cover for a monic
/// Alexander polynomial: the cokernel of `1 + C + ... + C^{n-1}` with `C` the
/// companion matrix of `Δ`.
pub fn branched_cover_torsion(delta: &[i64], n: usize) -> (usize, Vec<i128>) {
    let d = delta.len() - 1;
    assert_eq!(delta[d], 1, "monic Alexander polynomial expected");
    let mut c = vec![vec![0i64; d]; d];
    for i in 1..d {
        c[i][i - 1] = 1;
    }
    for i in 0..d {
        c[i][d - 1] = -delta[i];
    }
    let mut power: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    let mut sum = vec![vec![0i64; d]; d];
    for _ in 0..n {
        for i in 0..d {
            for j in 0..d {
                sum[i][j] += power[i][j];
            }
        }
        power = mat_mul(&power, &c);
    }
    let (rank, torsion) = invariant_factors_by_minors(&sum);
    (d - rank, torsion)
}

/// `|Res(Δ, 1 + t + ... + t^{n-1})| = ∏ |Δ(ζ)|` over the nontrivial `n`-th
/// roots of unity, by a Sylvester determinant.
pub fn resultant_order(delta: &[i64], n: usize) -> i128 {
    let f = delta;
    let g = vec![1i64; n];
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let size = df + dg;
    if size == 0 {
        return 1;
    }
    let mut s = vec![vec![0i128; size]; size];
    // rows hold coefficients from the highest degree down
    for r in 0..dg {
        for (k, &c) in f.iter().rev().enumerate() {
            s[r][r + k] = c as i128;
        }
    }
    for r in 0..df {
        for (k, &c) in g.iter().rev().enumerate() {
            s[dg + r][r + k] = c as i128;
        }
    }
    det(&s).abs()
}

/// Every permutation of `0..k`, as image vectors.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q: Vec<usize> = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // apply p, then q
    p.iter().map(|&i| q[i]).collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn word_action(w: &Word, images: &[Vec<usize>], k: usize) -> Vec<usize> {
    let mut acc: Vec<usize> = (0..k).collect();
    for l in w.letters() {
        let p = if l.inverse {
            invert(&images[l.gen])
        } else {
            images[l.gen].clone()
        };
        acc = compose(&acc, &p);
    }
    acc
}

fn transitive(images: &[Vec<usize>], k: usize) -> bool {
    let mut seen = BTreeSet::from([0usize]);
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for p in images {
            if seen.insert(p[x]) {
                stack.push(p[x]);
            }
        }
    }
    seen.len() == k
}

/// All transitive homomorphisms from the presented group to `Sym(k)`, by
/// trying every tuple of generator images.
pub fn transitive_homs(k: &KnotGroupData, degree: usize) -> Vec<Vec<Vec<usize>>> {
    let p = &k.presentation;
    let perms = permutations(degree);
    let identity: Vec<usize> = (0..degree).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; p.n_gens()];
    loop {
        let images: Vec<Vec<usize>> = idx.iter().map(|&i| perms[i].clone()).collect();
        if p.relators().iter().all(|r| word_action(r, &images, degree) == identity) && transitive(&images, degree) {
            out.push(images);
        }
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
            return out;
        }
    }
}

/// Transitive actions of degree `k` up to relabelling, i.e. conjugacy
/// classes of subgroups of index `k`.
pub fn action_classes(k: &KnotGroupData, degree: usize) -> usize {
    let homs = transitive_homs(k, degree);
    let perms = permutations(degree);
    let mut remaining: BTreeSet<Vec<Vec<usize>>> = homs.into_iter().collect();
    let mut classes = 0;
    while let Some(h) = remaining.iter().next().cloned() {
        classes += 1;
        for s in &perms {
            let si = invert(s);
            let conj: Vec<Vec<usize>> = h.iter().map(|p| compose(&compose(&si, p), s)).collect();
            remaining.remove(&conj);
        }
    }
    classes
}

/// Number of subgroups of index `k`: transitive actions with a marked point
/// fixed to 0, that is `#transitive homs / (k-1)!`.
pub fn subgroup_count(k: &KnotGroupData, degree: usize) -> usize {
    let fact: usize = (1..degree).product();
    transitive_homs(k, degree).len() / fact.max(1)
}
