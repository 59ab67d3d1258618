//! Legendre and Lucas criteria for small fractions near √2, and the
//! statement-by-statement predicate report for one of them.

use num_bigint::BigInt;
use second_best::cf::AlphaSpec;
use second_best::legendre::{
    equivalence_sweep, farey_neighbors, legendre_test, lucas_test, predicate_suite,
    ParityConvention, PredicateOptions,
};
use second_best::spectra::{spectrum_estimates, Options};

fn main() -> second_best::Result<()> {
    let alpha: AlphaSpec = "sqrt:2".parse()?;
    let b = BigInt::from;

    for (p, q) in [(7, 5), (10, 7), (17, 12), (24, 17)] {
        let c = legendre_test(&alpha, &b(p), &b(q), ParityConvention::Swapped)?;
        let n = farey_neighbors(&b(p), &b(q))?;
        println!(
            "{p}/{q}: theta {}  bound {}  convergent {}  neighbors {:?}",
            c.theta.decimal(6),
            c.bound,
            c.verdict,
            n
        );
    }
    println!("lucas 1/1 -> 3/2: {}", lucas_test(&alpha, &b(1), &b(1), &b(3), &b(2))?);

    let sweep = equivalence_sweep(&alpha, 500, ParityConvention::Swapped, 0, false)?;
    println!("sweep q <= 500: {} checked, {} disagreements", sweep.checked, sweep.disagreements.len());

    let report = spectrum_estimates(&alpha, 200, &Options::default())?;
    let r = predicate_suite(&alpha, &b(41), &b(29), &report, &PredicateOptions::default())?;
    println!("{}", r.to_json());
    Ok(())
}
