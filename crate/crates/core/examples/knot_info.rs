//! Parse a knot group, check it, and print its invariants.

use ramikit::parse::parse_presentation;

fn main() -> ramikit::Result<()> {
    for (name, text) in [
        ("trefoil", include_str!("../data/trefoil.knot")),
        ("figure eight", include_str!("../data/figure_eight.knot")),
    ] {
        let knot = parse_presentation(text)?;
        let pres = &knot.presentation;
        println!("{name}");
        println!("  generators: {}", pres.generator_names().join(" "));
        for r in pres.relators() {
            println!("  relator:    {}", pres.format_word(r));
        }
        println!("  deficiency: {}", pres.deficiency());
        println!("  H1:         {}", pres.abelianization());
        println!("  checks:     {}", knot.validate());
    }
    Ok(())
}
