//! Independent brute-force oracles for the scan, ψ values and digit expansions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use second_best::cf::{quad_to_cf, rat, ten_pow_neg, AlphaSpec};
use second_best::psi::{jump_scan, psi, psi_second, PsiVariant};

/// Convergents `(p_n, q_n)` from digits, and a rational within `1e-60` of `α`.
fn model(a0: i64, digits: &[u64]) -> (Vec<(BigInt, BigInt)>, BigRational) {
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::from(a0), BigInt::from(1));
    let mut conv = vec![(p1.clone(), q1.clone())];
    for &d in digits {
        let (p2, q2) = (BigInt::from(d) * &p1 + &p0, BigInt::from(d) * &q1 + &q0);
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        conv.push((p1.clone(), q1.clone()));
        if &q0 * &q1 > BigInt::from(10).pow(60) {
            break;
        }
    }
    (conv, BigRational::new(p1, q1))
}

fn brute_jumps(a0: i64, digits: &[u64], t: i64, fraction: bool) -> Vec<(i64, i64)> {
    let (conv, x) = model(a0, digits);
    let excluded = |q: i64, p: i64| {
        conv.iter().any(|(cp, cq)| {
            if fraction {
                let g = q.gcd(&p).max(1);
                BigInt::from(p / g) == *cp && BigInt::from(q / g) == *cq
            } else {
                BigInt::from(p) == *cp && BigInt::from(q) == *cq
            }
        })
    };
    let mut best: Option<BigRational> = None;
    let mut out = Vec::new();
    for q in 1..=t {
        let c = (BigRational::from_integer(q.into()) * &x).floor().to_integer().to_i64().unwrap();
        let mut here: Option<(BigRational, i64)> = None;
        for p in c - 2..=c + 3 {
            if excluded(q, p) {
                continue;
            }
            let v = (BigRational::from_integer(q.into()) * &x - BigRational::from_integer(p.into())).abs();
            if here.as_ref().is_none_or(|(b, _)| &v < b) {
                here = Some((v, p));
            }
        }
        let (v, p) = here.unwrap();
        if best.as_ref().is_none_or(|b| &v < b) {
            best = Some(v);
            out.push((q, p));
        }
    }
    out
}

fn scanned(spec: &str, t: u64, v: PsiVariant) -> Vec<(i64, i64)> {
    let a: AlphaSpec = spec.parse().unwrap();
    jump_scan(&a, t, v)
        .unwrap()
        .iter()
        .map(|j| (j.q.to_i64().unwrap(), j.p.to_i64().unwrap()))
        .collect()
}

#[test]
fn scan_matches_brute_force() {
    let cases: Vec<(&str, i64, Vec<u64>)> = vec![
        ("golden", 0, vec![1; 200]),
        ("sqrt:2", 1, vec![2; 200]),
        ("cf:[0;(3)]", 0, vec![3; 200]),
        ("cf:[2;(1,1,3)]", 2, [1, 1, 3].repeat(70)),
        ("cf:[0;5,1,1,2,7,(1,4)]", 0, [vec![5, 1, 1, 2, 7], [1, 4].repeat(80)].concat()),
    ];
    for (spec, a0, d) in cases {
        for (v, frac) in [(PsiVariant::SecondPair, false), (PsiVariant::SecondFraction, true)] {
            assert_eq!(scanned(spec, 400, v), brute_jumps(a0, &d, 400, frac), "{spec} {v}");
        }
    }
}

#[test]
fn psi_values_against_closed_forms() {
    let g = ten_pow_neg(20);
    let r2: AlphaSpec = "sqrt:2".parse().unwrap();
    let f = psi(&r2, &rat(10, 1), &g).unwrap();
    assert_eq!((f.q.to_i64(), f.p.to_i64()), (Some(5), Some(7)));
    assert!((f.value.to_f64() - (5.0 * 2f64.sqrt() - 7.0)).abs() < 1e-14, "{}", f.value.to_f64());

    let gold = AlphaSpec::golden();
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = psi_second(&gold, &rat(7, 1), PsiVariant::SecondPair, &g).unwrap();
    assert_eq!((f.q.to_i64(), f.p.to_i64()), (Some(6), Some(4)));
    assert!((f.value.to_f64() - (4.0 - 6.0 * phi)).abs() < 1e-12);
    let f = psi_second(&gold, &rat(10, 1), PsiVariant::SecondFraction, &g).unwrap();
    assert_eq!((f.q.to_i64(), f.p.to_i64()), (Some(7), Some(4)));
    assert!((f.value.to_f64() - (7.0 * phi - 4.0)).abs() < 1e-12);

    let e = AlphaSpec::e();
    let f = psi(&e, &rat(32, 1), &g).unwrap();
    assert_eq!((f.q.to_i64(), f.p.to_i64()), (Some(32), Some(87)));
}

#[test]
fn quadratic_digits_against_floating_point() {
    for (a, b, d, c) in [(0, 1, 2, 1), (1, 1, 17, 2), (3, -1, 7, 2), (-5, 2, 13, 3), (1, 1, 5, 2)] {
        let spec = quad_to_cf(a, b, d, c).unwrap();
        let mut x = (a as f64 + b as f64 * (d as f64).sqrt()) / c as f64;
        let a0 = x.floor();
        assert_eq!(BigInt::from(a0 as i64), *spec.a0(), "({a}+{b}√{d})/{c}");
        x -= a0;
        for n in 1..=8 {
            x = 1.0 / x;
            let dgt = x.floor();
            assert_eq!(spec.digit(n).unwrap(), dgt as u64, "({a}+{b}√{d})/{c} digit {n}");
            x -= dgt;
        }
    }
}
