//! Randomized properties of words, exact linear algebra and rewriting.

mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use ramikit::coset::{todd_coxeter, SubgroupSpec};
use ramikit::linalg::{fp_nullspace, rank_mod_p, smith_normal_form, IntMatrix};
use ramikit::schreier::{reidemeister_schreier, rewrite, schreier_transversal};
use ramikit::word::{Letter, Word};

fn word(n_gens: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..n_gens, any::<bool>()), 0..max_len).prop_map(|ls| {
        Word::from_letters(
            ls.into_iter()
                .map(|(g, inv)| if inv { Letter::neg(g) } else { Letter::pos(g) }),
        )
    })
}

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

proptest! {
    #[test]
    fn word_group_laws(a in word(3, 12), b in word(3, 12), c in word(3, 12)) {
        prop_assert!(a.is_reduced());
        prop_assert!(a.mul(&a.inverse()).is_empty());
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
        let sums: Vec<i64> = a.exponent_sums(3).iter().zip(b.exponent_sums(3)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(a.mul(&b).exponent_sums(3), sums);
    }

    #[test]
    fn cyclic_reduction_is_a_conjugate(a in word(2, 16)) {
        let r = a.cyclic_reduce();
        prop_assert_eq!(r.exponent_sums(2), a.exponent_sums(2));
        prop_assert!(r.len() <= a.len());
        if let (Some(f), Some(l)) = (r.letters().first(), r.letters().last()) {
            prop_assert!(*f != l.inv() || r.len() == 1);
        }
    }

    #[test]
    fn smith_form_matches_determinantal_divisors(m in matrix(4, 4)) {
        let cols = m[0].len();
        let im = IntMatrix::from_rows(cols, &m);
        let s = smith_normal_form(&im);
        prop_assert_eq!(s.left.mul(&im).mul(&s.right), s.diagonal.clone());
        prop_assert!(s.diagonal.is_diagonal());
        prop_assert_eq!(s.left.determinant().abs(), BigInt::from(1));
        prop_assert_eq!(s.right.determinant().abs(), BigInt::from(1));
        let (rank, nonunit) = invariant_factors_by_minors(&m);
        prop_assert_eq!(s.rank(), rank);
        let lib: Vec<BigInt> = s.invariant_factors.iter().filter(|d| **d != BigInt::from(1)).cloned().collect();
        let oracle: Vec<BigInt> = nonunit.iter().map(|&d| BigInt::from(d)).collect();
        prop_assert_eq!(lib, oracle);
    }

    #[test]
    fn nullspace_mod_p(m in matrix(4, 5), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let cols = m[0].len();
        let im = IntMatrix::from_rows(cols, &m);
        let basis = fp_nullspace(&im, p).unwrap();
        prop_assert_eq!(basis.len() + rank_mod_p(&im, p).unwrap(), cols);
        for v in &basis {
            for row in &m {
                let dot: i64 = row.iter().zip(v).map(|(a, &b)| a * b as i64).sum();
                prop_assert_eq!(dot.rem_euclid(p as i64), 0);
            }
        }
        // rank over F_p from the determinantal divisors
        let d = determinantal_divisors(&m);
        let rank_oracle = d.iter().take_while(|&&x| x % p as i128 != 0).count();
        prop_assert_eq!(rank_mod_p(&im, p).unwrap(), rank_oracle);
    }

    #[test]
    fn rewriting_round_trips(w in word(2, 20), n in 1usize..=5) {
        let k = figure_eight();
        let table = todd_coxeter(&k.presentation, &SubgroupSpec::CyclicCover(n), 1000).unwrap();
        let sd = schreier_transversal(&table);
        let sub = reidemeister_schreier(&k.presentation, &table, &sd);
        let end = table.trace(1, &w);
        let h = w.mul(&sd.representative(end).inverse());
        let u = rewrite(&table, &sd, &h).unwrap();
        prop_assert_eq!(sub.embed(&u), h);
        // a word of exponent sum s lies in the degree-n cyclic cover iff n | s
        let s = w.exponent_sums(2).iter().sum::<i64>();
        prop_assert_eq!(end == 1, s.rem_euclid(n as i64) == 0);
    }
}
