//! Constructions from Hall's sum of Cantor sets.

use second_best::cf::{rat, ten_pow_neg};
use second_best::spectra::{hall_construct, witness_l2, witness_l2star_min};

fn main() -> second_best::Result<()> {
    let tol = ten_pow_neg(6);
    for (n, d) in [(1, 2), (3, 5), (2, 3)] {
        let h = hall_construct(&rat(n, d), 30, &tol)?;
        println!(
            "k = {}: x = [0;{:?}] y = [0;{:?}] H = {}",
            h.k,
            &h.x_digits[..8],
            &h.y_digits[..8],
            h.value.decimal(8)
        );
    }
    let w = witness_l2(&rat(1, 10), 30, &tol)?;
    println!("L2 witness for 1/10: center {}, x + y = {}", w.center, w.sum.decimal(8));
    println!("minimum of L2*: {}", witness_l2star_min());
    Ok(())
}
