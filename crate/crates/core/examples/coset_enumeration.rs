//! Todd–Coxeter enumeration for the three kinds of subgroup description, and
//! the low-index search.

use ramikit::coset::{low_index_subgroups, todd_coxeter, SubgroupSpec, DEFAULT_MAX_COSETS};
use ramikit::parse::{parse_presentation, parse_word};
use ramikit::perm::Perm;

fn main() -> ramikit::Result<()> {
    let knot = parse_presentation(include_str!("../data/trefoil.knot"))?;
    let pres = &knot.presentation;
    let names = pres.generator_names();

    let specs = [
        SubgroupSpec::CyclicCover(4),
        SubgroupSpec::PermRep {
            perms: vec![Perm::parse_cycles("(1 2)", 3)?, Perm::parse_cycles("(2 3)", 3)?],
            point: 1,
        },
        SubgroupSpec::GeneratorWords(vec![parse_word("b", names)?, parse_word("a^2", names)?]),
    ];
    for spec in &specs {
        let table = todd_coxeter(pres, spec, DEFAULT_MAX_COSETS)?;
        println!("{}: index {}", spec.describe(names), table.index());
        for (name, p) in names.iter().zip(table.generator_permutations()) {
            println!("  {name} acts as {p}");
        }
    }

    // one table per conjugacy class of subgroups
    for t in low_index_subgroups(pres, 4) {
        let p: Vec<String> = t.generator_permutations().iter().map(|p| p.to_string()).collect();
        println!("index {}: {}", t.index(), p.join(", "));
    }
    Ok(())
}
