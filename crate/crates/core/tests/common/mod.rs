#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use second_best::cf::{rat, ten_pow_neg, AlphaSpec, Expansion};
use second_best::spectra::{kappa, kappa_via_products, kappa_via_tails, lemma13_implications, spectrum_estimates, Options};

use std::io::Write;

/// Writes a line past the test harness's output capture.
pub fn report(line: &str) {
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "{line}");
}

pub fn verdict(name: &str, ok: bool, detail: &str) {
    report(&format!("[acceptance] {:<4} {name}: {detail}", if ok { "PASS" } else { "FAIL" }));
}

pub fn prefix_alpha() -> impl Strategy<Value = AlphaSpec> {
    prop::collection::vec(1u64..=9, 60..80).prop_map(|d| AlphaSpec::prefix(0, &d).unwrap())
}

pub fn periodic_alpha() -> impl Strategy<Value = AlphaSpec> {
    (
        prop::collection::vec(1u64..=9, 0..3),
        prop::collection::vec(1u64..=9, 1..6),
    )
        .prop_map(|(pre, per)| AlphaSpec::periodic(0, &pre, &per).unwrap())
}

fn g() -> BigRational {
    ten_pow_neg(15)
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// `1 < κ³_n < 6`.
pub fn kappa3_bounds(a: &AlphaSpec, n: usize) -> Result<(), TestCaseError> {
    let mut exp = Expansion::new(a);
    let v = kappa_via_tails(&mut exp, n, 3, &g()).unwrap();
    if v.lo() <= &rat(1, 1) || v.hi() >= &rat(6, 1) {
        return Err(fail(format!("{a}: kappa3_{n} = {v}")));
    }
    Ok(())
}

/// `a_n >= 2` implies `(a-1)/a <= κ¹_n, κ²_n <= 2a/(a+2)`.
pub fn kappa12_digit_bounds(a: &AlphaSpec, n: usize) -> Result<(), TestCaseError> {
    let mut exp = Expansion::new(a);
    let d = exp.digit(n).unwrap() as i64;
    if d < 2 {
        return Ok(());
    }
    for j in [1u8, 2] {
        let v = kappa_via_tails(&mut exp, n, j, &g()).unwrap();
        if v.hi() < &rat(d - 1, d) || v.lo() > &rat(2 * d, d + 2) {
            return Err(fail(format!("{a}: kappa{j}_{n} = {v}, a_n = {d}")));
        }
    }
    Ok(())
}

/// Both routes agree at width `10^-12`.
pub fn dual_route(a: &AlphaSpec, n: usize, j: u8) -> Result<(), TestCaseError> {
    let mut exp = Expansion::new(a);
    let w = ten_pow_neg(12);
    let p = kappa_via_products(&mut exp, n, j, &w).unwrap();
    let t = kappa_via_tails(&mut exp, n, j, &w).unwrap();
    if !p.intersects(&t) || p.width() > w || t.width() > w {
        return Err(fail(format!("{a}: kappa{j}_{n}: {p} vs {t}")));
    }
    Ok(())
}

/// `p_{n-1} q_n - p_n q_{n-1} = (-1)^n`.
pub fn determinant(a: &AlphaSpec, n: usize) -> Result<(), TestCaseError> {
    let mut exp = Expansion::new(a);
    let (q0, p0) = exp.point(n as isize - 1).unwrap();
    let (q1, p1) = exp.point(n as isize).unwrap();
    let want = BigInt::from(if n % 2 == 0 { 1 } else { -1 });
    if p0 * q1 - p1 * q0 != want {
        return Err(fail(format!("{a}: determinant at {n}")));
    }
    Ok(())
}

/// `q_{n+1} ξ_n + q_n ξ_{n+1} = 1`, with the enclosure shrinking around 1.
pub fn unit_identity(a: &AlphaSpec, n: usize) -> Result<(), TestCaseError> {
    let mut exp = Expansion::new(a);
    let n = n as isize;
    for k in [10u32, 20] {
        let goal = ten_pow_neg(k);
        let x0 = exp.xi(n, &goal).unwrap();
        let x1 = exp.xi(n + 1, &goal).unwrap();
        let q0 = BigRational::from_integer(exp.q(n).unwrap());
        let q1 = BigRational::from_integer(exp.q(n + 1).unwrap());
        let lo = &q1 * x0.lo() + &q0 * x1.lo();
        let hi = &q1 * x0.hi() + &q0 * x1.hi();
        let one = BigRational::one();
        if lo > one || hi < one || &hi - &lo > &(&q1 + &q0) * &goal * rat(2, 1) {
            return Err(fail(format!("{a}: unit identity at n={n}, goal 1e-{k}")));
        }
    }
    Ok(())
}

/// `a_n = 1`: `2q_{n-2} + q_{n-1} = q_{n-2} + q_n`; `a_n = 2`: `q_n - q_{n-1} = q_{n-1} + q_{n-2}`.
pub fn digit_identities(a: &AlphaSpec, n: usize) -> Result<(), TestCaseError> {
    let mut exp = Expansion::new(a);
    let d = exp.digit(n).unwrap();
    let n = n as isize;
    let (qm2, qm1, q) = (exp.q(n - 2).unwrap(), exp.q(n - 1).unwrap(), exp.q(n).unwrap());
    if d == 1 && &qm2 * 2 + &qm1 != &qm2 + &q {
        return Err(fail(format!("{a}: digit-one identity at {n}")));
    }
    if d == 2 && &q - &qm1 != &qm1 + &qm2 {
        return Err(fail(format!("{a}: digit-two identity at {n}")));
    }
    Ok(())
}

/// `κ¹` at `(1/y, 1/x)` equals `κ²` at `(x, y)`, exactly.
pub fn swap_symmetry(xn: u32, xd: u32, yn: u32, yd: u32) -> Result<(), TestCaseError> {
    let x = rat(xn as i64, (xn + xd) as i64);
    let y = rat((yn + yd) as i64, yd as i64);
    if !second_best::verify::swap_symmetry(&x, &y) {
        return Err(fail(format!("swap symmetry at x={x}, y={y}")));
    }
    Ok(())
}

/// `𝔨* >= 𝔨 >= 2λ`, `𝔧 <= 𝔨`, `𝔧* <= 𝔨*` for periodic `α`.
pub fn spectrum_order(a: &AlphaSpec) -> Result<(), TestCaseError> {
    let r = spectrum_estimates(a, 40, &Options::default()).unwrap();
    let slack = ten_pow_neg(15);
    let le = |x: &BigRational, y: &BigRational| x <= &(y + &slack);
    let two = BigRational::from_integer(2.into());
    let checks = [
        le(r.k.value.lo(), r.k_star.value.hi()),
        le(&(r.lambda.value.lo() * &two), r.k.value.hi()),
        le(r.j.value.lo(), r.k.value.hi()),
        le(r.j_star.value.lo(), r.k_star.value.hi()),
    ];
    if checks.iter().any(|c| !c) {
        return Err(fail(format!("{a}: order {checks:?}")));
    }
    Ok(())
}

/// The three digit-pattern implications hold on `2 <= n < 30`.
pub fn digit_implications(a: &AlphaSpec) -> Result<(), TestCaseError> {
    let v = lemma13_implications(a, 30).unwrap();
    if !v.is_empty() {
        return Err(fail(format!("{a}: {v:?}")));
    }
    Ok(())
}

/// Sample used by the κ table example and the CLI.
pub fn kappa_sample_consistent(a: &AlphaSpec, n: usize, j: u8) -> bool {
    let mut exp = Expansion::new(a);
    kappa(&mut exp, n, j, &g()).unwrap().consistent()
}

/// Runs one property over `cases` generated inputs; returns the failure, if any.
pub fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}
