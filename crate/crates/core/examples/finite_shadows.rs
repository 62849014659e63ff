//! Ramification seen in finite quotients: the image of M_U, the factoring
//! criterion, the closure identities in G/N, and transport along an
//! automorphism.

use ramikit::coset::{todd_coxeter, SubgroupSpec};
use ramikit::parse::parse_presentation;
use ramikit::perm::{FiniteGroup, Perm};
use ramikit::ramification::{
    closure_shadow_check, disjoint_union, factoring_check, inertia_transport_check, quotient_image_of_ramification,
    regular_table, smallest_normal_containing, Cover, FiniteQuotient,
};

fn main() -> ramikit::Result<()> {
    let knot = parse_presentation(include_str!("../data/trefoil.knot"))?;
    let pres = &knot.presentation;
    let s3 = FiniteQuotient::new(
        3,
        vec![Perm::parse_cycles("(1 2)", 3)?, Perm::parse_cycles("(2 3)", 3)?],
    );
    s3.check(pres)?;
    let cover = Cover::new(&knot, todd_coxeter(pres, &SubgroupSpec::CyclicCover(2), 100)?);

    let phi = s3.restrict(&cover.subgroup);
    let (f, image) = quotient_image_of_ramification(&cover.subgroup.presentation, &phi, &cover.inertia)?;
    let inertia_images: Vec<usize> = cover.inertia.iter().map(|d| f.eval(&d.generator_in_u)).collect();
    println!(
        "q(U) has order {}, q(M_U) has order {}, brute force agrees: {}",
        f.order(),
        image.len(),
        smallest_normal_containing(&f, &inertia_images) == image
    );
    let r = factoring_check(&cover.subgroup.presentation, &cover.quotient, &phi, &cover.inertia)?;
    println!("S3 restricted to U factors through U/M_U: {}", r.factors());

    // N = ker(S3) ∩ core(U), with G/N acting regularly on itself
    let images: Vec<Perm> = s3
        .images
        .iter()
        .zip(cover.table.generator_permutations())
        .map(|(a, b)| disjoint_union(a, &b))
        .collect();
    let g_mod_n = FiniteGroup::generate(3 + cover.index(), &images);
    let table_n = regular_table(&g_mod_n);
    for e in g_mod_n.all() {
        let g = g_mod_n.word_of(e);
        let r = closure_shadow_check(&knot, &cover, &table_n, &g)?;
        println!("g = {:<8} {:?}", g.display(pres.generator_names()).to_string(), r);
    }

    // swapping a and b carries <a> to <b> = (1 3)<a>(1 3)
    let swap = vec![s3.images[1].clone(), s3.images[0].clone()];
    let y = Perm::parse_cycles("(1 3)", 3)?;
    let t = inertia_transport_check(&s3, &knot.meridian, &s3, &knot.meridian, &swap, &y)?;
    println!("transport along a <-> b: {t:?}");
    Ok(())
}
