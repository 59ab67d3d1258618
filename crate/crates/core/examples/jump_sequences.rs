//! Jump points of ψ^[2] from the digit rules, checked against a direct scan.

use num_bigint::BigInt;
use second_best::cf::AlphaSpec;
use second_best::psi::{jump_scan, PsiVariant};
use second_best::rules::{build_q, build_x, rule_provenance};

fn main() -> second_best::Result<()> {
    let alpha: AlphaSpec = "cf:[0;3,1,1,1,2,(4,1)]".parse()?;
    let t = BigInt::from(5000);

    let q = build_q(&alpha, &t)?;
    println!("pair variant, q <= {t}:");
    for p in &q.points {
        println!("  {:>5}  {:?}", p.q, rule_provenance(&q, &p.q)?);
    }
    let scanned: Vec<BigInt> = jump_scan(&alpha, 5000, PsiVariant::SecondPair)?
        .into_iter()
        .map(|j| j.q)
        .collect();
    println!("  scan agrees: {}", scanned == q.qs());

    let x = build_x(&alpha, &t)?;
    println!("fraction variant: {:?}", x.qs());
    for c in &x.dedup_log {
        println!("  {} generated twice: kept {:?}, dropped {:?}", c.q, c.kept, c.dropped);
    }
    Ok(())
}
