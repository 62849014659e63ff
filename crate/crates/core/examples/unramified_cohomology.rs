//! Unramified classes in H1(U; F_p) against H1 of the unramified quotient.

use ramikit::cohomology::{inflation_check, unramified_subspace};
use ramikit::coset::{todd_coxeter, SubgroupSpec};
use ramikit::parse::parse_presentation;
use ramikit::ramification::Cover;

fn main() -> ramikit::Result<()> {
    let knot = parse_presentation(include_str!("../data/trefoil.knot"))?;
    for n in [2, 3] {
        let cover = Cover::new(
            &knot,
            todd_coxeter(&knot.presentation, &SubgroupSpec::CyclicCover(n), 100)?,
        );
        println!("cyclic cover of degree {n}");
        for p in [2, 3, 5, 7] {
            println!(
                "  {}",
                inflation_check(&cover.subgroup, &cover.quotient, &cover.inertia, p)?
            );
        }
        let unram = unramified_subspace(&cover.subgroup, &cover.inertia, if n == 2 { 3 } else { 2 })?;
        println!("  unramified basis: {:?}", unram.basis);
    }
    Ok(())
}
