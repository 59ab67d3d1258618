//! κ¹..κ⁴ along the expansion of e, by products and by tails.

use second_best::cf::{ten_pow_neg, AlphaSpec, Expansion};
use second_best::spectra::{kappa, kappa_table_tsv};

fn main() -> second_best::Result<()> {
    let mut exp = Expansion::new(&AlphaSpec::e());
    let goal = ten_pow_neg(20);
    let mut rows = Vec::new();
    for n in 1..=12 {
        for j in 1..=4 {
            let k = kappa(&mut exp, n, j, &goal)?;
            assert!(k.consistent());
            rows.push(k);
        }
    }
    print!("{}", kappa_table_tsv(&rows));
    Ok(())
}
