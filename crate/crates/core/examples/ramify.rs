//! Inertia data and unramified quotients of cyclic covers. H1 of the
//! quotient is the homology of the cyclic branched cover.

use ramikit::coset::{todd_coxeter, SubgroupSpec};
use ramikit::parse::parse_presentation;
use ramikit::ramification::Cover;

fn main() -> ramikit::Result<()> {
    for text in [
        include_str!("../data/trefoil.knot"),
        include_str!("../data/figure_eight.knot"),
    ] {
        let knot = parse_presentation(text)?.with_label("knot");
        for n in 1..=5 {
            let table = todd_coxeter(&knot.presentation, &SubgroupSpec::CyclicCover(n), 10_000)?;
            let cover = Cover::new(&knot, table);
            let report = cover.report(&knot);
            println!(
                "n = {n}: e = {:?}, H1(U) = {}, H1(U/M_U) = {}",
                cover.ramification_indices(),
                report.h1_u,
                report.h1_quotient
            );
        }
        println!();
    }

    let knot = parse_presentation(include_str!("../data/trefoil.knot"))?;
    let spec = ramikit::cli::parse_perm_spec("a=(1 2);b=(2 3)", &knot, 1)?;
    let cover = Cover::new(&knot, todd_coxeter(&knot.presentation, &spec, 100)?);
    print!("{}", cover.report(&knot).to_text());
    Ok(())
}
