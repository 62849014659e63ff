//! Build a census of covers and quotients and run every verification suite.

use ramikit::harness::{build_census, run_suites, CensusOptions};
use ramikit::parse::parse_presentation;
use ramikit::ramification::RamificationReport;

fn main() -> ramikit::Result<()> {
    let knot = parse_presentation(include_str!("../data/figure_eight.knot"))?.with_label("figure_eight");
    let census = build_census(&knot, &CensusOptions::new(4, 4))?;
    println!("{}", RamificationReport::CSV_HEADER);
    for c in &census.covers {
        println!("{}", c.report(&knot).csv_row(&knot.label));
    }
    println!();
    print!("{}", run_suites(&census, &[2, 3, 5, 7], 0)?.to_text());
    Ok(())
}
