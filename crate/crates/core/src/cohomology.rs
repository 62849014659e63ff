//! `H¹(-; F_p) = Hom(-, F_p)` as linear algebra on exponent matrices, the
//! meridionally unramified classes of a subgroup, and inflation from the
//! unramified quotient.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::linalg::{check_prime, fp_nullspace, nullspace_rows, rank_vectors_mod_p, FpVector};
use crate::presentation::Presentation;
use crate::ramification::InertiaDatum;
use crate::schreier::SubgroupPresentation;
use crate::word::Word;

/// A subspace of `F_p^n`, `n` the number of generators, given by a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpSubspace {
    pub p: u64,
    pub ambient_dim: usize,
    pub basis: Vec<FpVector>,
}

impl FpSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Value of the homomorphism `v` on a word.
    pub fn evaluate(v: &[u64], w: &Word, p: u64) -> u64 {
        crate::linalg::dot_mod(v, &w.exponent_sums(v.len()), p)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        let r = rank_vectors_mod_p(&rows, self.p);
        rows.push(v.to_vec());
        rank_vectors_mod_p(&rows, self.p) == r
    }
}

/// `Hom(group, F_p)` in generator coordinates.
pub fn h1_basis(pres: &Presentation, p: u64) -> Result<FpSubspace> {
    Ok(FpSubspace {
        p,
        ambient_dim: pres.n_gens(),
        basis: fp_nullspace(&pres.exponent_matrix(), p)?,
    })
}

pub fn h1_dim(pres: &Presentation, p: u64) -> Result<usize> {
    Ok(h1_basis(pres, p)?.dim())
}

/// Classes in `H¹(U; F_p)` vanishing on every inertia generator.
///
/// Computed by restriction: the kernel of `H¹(U) -> ⊕ F_p`, `β ↦ (β(s_i))`,
/// over the inertia generators `s_i`. Vanishing on a generator of a cyclic
/// subgroup is vanishing on the subgroup, and conjugation acts trivially on
/// `Hom(U, F_p)`, so the listed representatives suffice.
pub fn unramified_subspace(upres: &SubgroupPresentation, inertia: &[InertiaDatum], p: u64) -> Result<FpSubspace> {
    let h1 = h1_basis(&upres.presentation, p)?;
    let n = h1.ambient_dim;
    // restriction[i][j] = value of basis vector j on inertia generator i
    let restriction: Vec<FpVector> = inertia
        .iter()
        .map(|d| {
            h1.basis
                .iter()
                .map(|b| FpSubspace::evaluate(b, &d.generator_in_u, p))
                .collect()
        })
        .collect();
    let kernel = nullspace_rows(restriction, h1.dim(), p);
    let basis = kernel
        .iter()
        .map(|coeffs| {
            let mut v = vec![0u64; n];
            for (c, b) in coeffs.iter().zip(&h1.basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x = (*x + c * y) % p;
                }
            }
            v
        })
        .collect();
    Ok(FpSubspace {
        p,
        ambient_dim: n,
        basis,
    })
}

/// How the same dimension count reads for the profinite completion. This is
/// an identification from outside the ramification argument itself.
pub const PROFINITE_NOTE: &str = "U is finitely generated, so continuous Hom(completion of U, F_p) = Hom(U, F_p): \
the counts above also compare classes vanishing on the closed inertia subgroups with H1 of the completed quotient";

/// Comparison of unramified classes on `U` with classes on `U/M_U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub p: u64,
    #[serde(rename = "dim_h1_U")]
    pub dim_h1_u: usize,
    pub dim_unramified: usize,
    pub dim_h1_quotient: usize,
    pub inflation_bijective: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.inflation_bijective && self.dim_unramified == self.dim_h1_quotient
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p = {}: dim H1(U) = {}, unramified = {}, dim H1(U/M_U) = {}, inflation {}",
            self.p,
            self.dim_h1_u,
            self.dim_unramified,
            self.dim_h1_quotient,
            if self.inflation_bijective {
                "bijective"
            } else {
                "NOT bijective"
            }
        )
    }
}

/// Inflation `H¹(U/M_U) -> H¹(U)` is precomposition with the quotient map,
/// which is the identity on generator labels. It is injective when the images
/// of a basis stay independent, and onto the unramified classes when every
/// image is unramified and the dimensions agree.
pub fn inflation_check(
    upres: &SubgroupPresentation,
    quotient: &Presentation,
    inertia: &[InertiaDatum],
    p: u64,
) -> Result<CheckReport> {
    check_prime(p)?;
    let h1_u = h1_basis(&upres.presentation, p)?;
    let unram = unramified_subspace(upres, inertia, p)?;
    let h1_q = h1_basis(quotient, p)?;
    let images = &h1_q.basis;
    let injective = rank_vectors_mod_p(images, p) == images.len();
    let into_unramified = images.iter().all(|v| unram.contains(v));
    let onto = into_unramified && rank_vectors_mod_p(images, p) == unram.dim();
    Ok(CheckReport {
        p,
        dim_h1_u: h1_u.dim(),
        dim_unramified: unram.dim(),
        dim_h1_quotient: h1_q.dim(),
        inflation_bijective: injective && onto,
    })
}
