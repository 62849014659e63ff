//! Exact integer and mod-p linear algebra.
//!
//! All integer work uses arbitrary-precision arithmetic; exponent matrices of
//! subgroup presentations can grow during elimination.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have
    /// length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * factor;
            self[(dst, c)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * factor;
            self[(r, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    /// Entries as nested machine-integer arrays, for reports. Panics if an
    /// entry does not fit in `i64`.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_i64().expect("matrix entry exceeds i64"))
                    .collect()
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`smith_normal_form`]: `left * M * right == diagonal`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_r`, all positive.
    pub invariant_factors: Vec<BigInt>,
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }
}

/// Smith normal form with unimodular transforms. Pivots are chosen by minimal
/// absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t, rows, t, cols) else {
            break;
        };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        loop {
            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(a[(i, t)].div_floor(&pivot));
                a.add_row(i, t, &q);
                left.add_row(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(a[(t, j)].div_floor(&pivot));
                a.add_col(j, t, &q);
                right.add_col(j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                // a remainder survived in row or column t: bring the smallest
                // entry of that row/column to the pivot and repeat
                let (mut bi, mut bj) = (t, t);
                let mut best = a[(t, t)].abs();
                for i in t + 1..rows {
                    let v = a[(i, t)].abs();
                    if !v.is_zero() && v < best {
                        best = v;
                        (bi, bj) = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let v = a[(t, j)].abs();
                    if !v.is_zero() && v < best {
                        best = v;
                        (bi, bj) = (t, j);
                    }
                }
                a.swap_rows(t, bi);
                left.swap_rows(t, bi);
                a.swap_cols(t, bj);
                right.swap_cols(t, bj);
                continue;
            }
            // row and column cleared; enforce divisibility of the remaining block
            let pivot = a[(t, t)].clone();
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    left.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    let invariant_factors = (0..t).map(|i| a[(i, i)].clone()).collect();
    debug_assert!(a.is_diagonal());
    SmithForm {
        invariant_factors,
        diagonal: a,
        left,
        right,
    }
}

fn min_abs_entry(a: &IntMatrix, r0: usize, r1: usize, c0: usize, c1: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in r0..r1 {
        for j in c0..c1 {
            let v = a[(i, j)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(b, _, _)| &v < b) {
                best = Some((v, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with
/// `1 < d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(with = "bigint_list")]
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Self {
        AbelianInvariants {
            free_rank,
            torsion: torsion.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn trivial() -> Self {
        AbelianInvariants::new(0, vec![])
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Group order, or `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion_order())
    }

    /// `dim Hom(A, F_p)`.
    pub fn fp_dimension(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.free_rank + self.torsion.iter().filter(|d| d.is_multiple_of(&p)).count()
    }

    pub fn divisibility_chain_holds(&self) -> bool {
        self.torsion.iter().all(|d| d > &BigInt::one()) && self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

mod bigint_list {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Small(u64),
        Big(String),
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| match x.to_u64() {
                Some(u) => Entry::Small(u),
                None => Entry::Big(x.to_string()),
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| match e {
                Entry::Small(u) => Ok(BigInt::from(u)),
                Entry::Big(s) => s.parse().map_err(D::Error::custom),
            })
            .collect()
    }
}

/// Cokernel invariants of a relation matrix whose rows are relations among
/// the columns.
pub fn cokernel_invariants(m: &IntMatrix) -> AbelianInvariants {
    let snf = smith_normal_form(m);
    invariants_from_smith(&snf, m.cols())
}

fn invariants_from_smith(snf: &SmithForm, cols: usize) -> AbelianInvariants {
    AbelianInvariants {
        free_rank: cols - snf.rank(),
        torsion: snf.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect(),
    }
}

/// Explicit map from `Z^cols` onto the cokernel of a relation matrix, in
/// coordinates `Z/d_1 ⊕ ... ⊕ Z/d_k ⊕ Z^f` (torsion first, then free).
#[derive(Clone, Debug)]
pub struct AbelianMap {
    pub invariants: AbelianInvariants,
    right: IntMatrix,
    /// (column of `right`, modulus or None for free coordinates)
    coords: Vec<(usize, Option<BigInt>)>,
}

impl AbelianMap {
    pub fn new(relations: &IntMatrix) -> Self {
        let snf = smith_normal_form(relations);
        let invariants = invariants_from_smith(&snf, relations.cols());
        let mut coords = Vec::new();
        for (i, d) in snf.invariant_factors.iter().enumerate() {
            if !d.is_one() {
                coords.push((i, Some(d.clone())));
            }
        }
        for i in snf.rank()..relations.cols() {
            coords.push((i, None));
        }
        AbelianMap {
            invariants,
            right: snf.right,
            coords,
        }
    }

    pub fn image(&self, v: &[i64]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.right.rows());
        self.coords
            .iter()
            .map(|(c, modulus)| {
                let mut x = BigInt::zero();
                for (k, &vk) in v.iter().enumerate() {
                    if vk != 0 {
                        x += &self.right[(k, *c)] * vk;
                    }
                }
                match modulus {
                    Some(d) => x.mod_floor(d),
                    None => x,
                }
            })
            .collect()
    }

    /// Free coordinates only (the last `free_rank` entries of [`Self::image`]).
    pub fn free_part(&self, v: &[i64]) -> Vec<BigInt> {
        let img = self.image(v);
        img[img.len() - self.invariants.free_rank..].to_vec()
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Vector over F_p, entries in `0..p`.
pub type FpVector = Vec<u64>;

fn reduce_mod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime and small
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    r
}

/// Row-reduces in place; returns the pivot columns.
fn rref_mod(rows: &mut [FpVector], p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..ncols {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn matrix_mod_p(m: &IntMatrix, p: u64) -> Vec<FpVector> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| reduce_mod(x, p)).collect())
        .collect()
}

/// Rank of a list of equal-length vectors over F_p.
pub fn rank_vectors_mod_p(vectors: &[FpVector], p: u64) -> usize {
    let mut rows = vectors.to_vec();
    rref_mod(&mut rows, p).len()
}

pub fn rank_mod_p(m: &IntMatrix, p: u64) -> Result<usize> {
    check_prime(p)?;
    Ok(rank_vectors_mod_p(&matrix_mod_p(m, p), p))
}

/// Basis of `{v ∈ F_p^cols : M v ≡ 0 (mod p)}`. With `M` the relator-by-generator
/// exponent matrix this is `Hom(group, F_p)` in generator coordinates.
pub fn fp_nullspace(m: &IntMatrix, p: u64) -> Result<Vec<FpVector>> {
    check_prime(p)?;
    Ok(nullspace_rows(matrix_mod_p(m, p), m.cols(), p))
}

/// Basis of the vectors of length `ncols` annihilated by every row.
pub fn nullspace_rows(mut rows: Vec<FpVector>, ncols: usize, p: u64) -> Vec<FpVector> {
    let pivots = rref_mod(&mut rows, p);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; ncols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - rows[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

pub fn dot_mod(a: &[u64], b: &[i64], p: u64) -> u64 {
    let pi = p as i64;
    a.iter()
        .zip(b)
        .fold(0i64, |acc, (&x, &y)| (acc + (x as i64) * y.rem_euclid(pi)) % pi) as u64
}
