//! Reidemeister–Schreier presentation of a cover and rewriting into it.

use ramikit::coset::{todd_coxeter, SubgroupSpec};
use ramikit::parse::{parse_presentation, parse_word};
use ramikit::schreier::{reidemeister_schreier, rewrite, schreier_transversal};

fn main() -> ramikit::Result<()> {
    let knot = parse_presentation(include_str!("../data/figure_eight.knot"))?;
    let pres = &knot.presentation;
    let names = pres.generator_names();
    let table = todd_coxeter(pres, &SubgroupSpec::CyclicCover(3), 1000)?;
    let sd = schreier_transversal(&table);
    for (c, t) in sd.transversal.iter().enumerate() {
        println!("coset {}: {}", c + 1, t.display(names));
    }
    let sub = reidemeister_schreier(pres, &table, &sd);
    print!("{}", sub.to_file_string(names));
    println!("H1(U) = {}", sub.presentation.abelianization());

    let w = parse_word("a b a^-2 b^-1 a", names)?;
    let u = rewrite(&table, &sd, &w)?;
    println!(
        "{} rewrites to {} and embeds back as {}",
        w.display(names),
        u.display(sub.presentation.generator_names()),
        sub.embed(&u).display(names)
    );
    Ok(())
}
