//! Digits, convergents and the nearest-integer error of a few constants.

use second_best::cf::{convergents, digits, quad_to_cf, AlphaSpec};

fn main() -> second_best::Result<()> {
    let alphas: Vec<AlphaSpec> = vec![
        AlphaSpec::golden(),
        "sqrt:2".parse()?,
        quad_to_cf(1, 1, 17, 2)?,
        AlphaSpec::e(),
    ];
    for a in &alphas {
        println!("{a}: digits {:?}", digits(a, 12)?);
        for c in convergents(a, 8)? {
            println!("  n={:>2}  {}/{}  sign {:+}", c.n, c.p, c.q, c.sign);
        }
    }
    Ok(())
}
