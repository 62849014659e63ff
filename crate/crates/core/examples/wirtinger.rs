//! Wirtinger presentations from planar-diagram codes.

use ramikit::wirtinger::{wirtinger_from_pd, PdCode};

fn main() -> ramikit::Result<()> {
    for text in [
        include_str!("../data/trefoil.pd"),
        include_str!("../data/figure_eight.pd"),
    ] {
        let pd = PdCode::parse(text)?;
        let knot = wirtinger_from_pd(&pd)?;
        print!("{}", knot.to_file_string());
        println!(
            "# H1 = {}, all checks pass: {}\n",
            knot.presentation.abelianization(),
            knot.validate().all_pass()
        );
    }
    Ok(())
}
