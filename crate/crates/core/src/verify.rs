//! Verification sweeps shared by the command line and the test suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::Rng;

use crate::cf::{ten_pow_neg, AlphaSpec, Expansion};
use crate::error::Result;
use crate::psi::{jump_scan, t_threshold, JumpPoint, PsiVariant};
use crate::rules::{build_q, build_x};
use crate::spectra::{kappa, lemma13_implications, spectrum_estimates, Options};

/// `[0; a_1, ..., a_len]` with digits uniform in `lo..=hi`.
pub fn random_prefix(rng: &mut impl Rng, len: usize, lo: u64, hi: u64) -> AlphaSpec {
    let d: Vec<u64> = (0..len).map(|_| rng.gen_range(lo..=hi)).collect();
    AlphaSpec::prefix(0, &d).expect("nonempty prefix")
}

/// A periodic `α` with short random preperiod and period, digits in `lo..=hi`.
pub fn random_periodic(rng: &mut impl Rng, lo: u64, hi: u64) -> AlphaSpec {
    let pre: Vec<u64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(lo..=hi)).collect();
    let per: Vec<u64> = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(lo..=hi)).collect();
    AlphaSpec::periodic(0, &pre, &per).expect("nonempty period")
}

/// First disagreement between the rule-generated and scanned jump lists on `[𝔱, T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleMismatch {
    pub variant: PsiVariant,
    pub rules_only: Vec<BigInt>,
    pub scan_only: Vec<BigInt>,
}

/// Compares rules and scan for both variants; empty when they agree.
pub fn rules_vs_scan(alpha: &AlphaSpec, max_q: u64) -> Result<Vec<RuleMismatch>> {
    let t = BigInt::from(t_threshold(alpha)?);
    let tb = BigInt::from(max_q);
    let mut out = Vec::new();
    for variant in [PsiVariant::SecondPair, PsiVariant::SecondFraction] {
        let rules = match variant {
            PsiVariant::SecondPair => build_q(alpha, &tb)?,
            _ => build_x(alpha, &tb)?,
        };
        let scan = jump_scan(alpha, max_q, variant)?;
        let window = |v: &[JumpPoint]| -> Vec<BigInt> {
            v.iter().map(|p| p.q.clone()).filter(|q| q >= &t).collect()
        };
        let r = window(&rules.points);
        let s = window(&scan);
        if r != s {
            out.push(RuleMismatch {
                variant,
                rules_only: r.iter().filter(|q| !s.contains(q)).cloned().collect(),
                scan_only: s.iter().filter(|q| !r.contains(q)).cloned().collect(),
            });
        }
    }
    Ok(out)
}

/// Structural identities and κ bounds at indices `1..=n_max`; returns failure descriptions.
pub fn check_invariants(alpha: &AlphaSpec, n_max: usize) -> Result<Vec<String>> {
    let mut exp = Expansion::new(alpha);
    let mut bad = Vec::new();
    let goal = ten_pow_neg(12);
    let one = BigRational::one();
    for n in 1..=n_max {
        let a = exp.digit(n)?;
        let ni = n as isize;
        let (q0, p0) = exp.point(ni - 1)?;
        let (q1, p1) = exp.point(ni)?;
        let det = &p0 * &q1 - &p1 * &q0;
        let want = if n % 2 == 0 { 1 } else { -1 };
        if det != BigInt::from(want) {
            bad.push(format!("determinant at n={n} is {det}"));
        }
        // q_{n+1} ξ_n + q_n ξ_{n+1} = 1
        let x0 = exp.xi(ni, &goal)?;
        let x1 = exp.xi(ni + 1, &goal)?;
        let q2 = BigRational::from_integer(exp.q(ni + 1)?);
        let lhs_lo = &q2 * x0.lo() + BigRational::from_integer(q1.clone()) * x1.lo();
        let lhs_hi = &q2 * x0.hi() + BigRational::from_integer(q1.clone()) * x1.hi();
        if lhs_lo > one || lhs_hi < one {
            bad.push(format!("unit identity fails at n={n}"));
        }
        if n >= 2 {
            let qm2 = exp.q(ni - 2)?;
            if a == 1 && &qm2 * 2 + &q0 != &qm2 + &q1 {
                bad.push(format!("run-of-one identity fails at n={n}"));
            }
            if a == 2 && &q1 - &q0 != &q0 + &qm2 {
                bad.push(format!("digit-two identity fails at n={n}"));
            }
        }
        for j in 1..=4u8 {
            let s = kappa(&mut exp, n, j, &goal)?;
            if !s.consistent() {
                bad.push(format!("kappa{j}_{n}: product and tail routes disagree"));
            }
            let v = &s.via_tails;
            if j == 3 && (v.hi() <= &one || v.lo() >= &BigRational::from_integer(6.into())) {
                bad.push(format!("kappa3_{n} = {v} outside (1, 6)"));
            }
            if (j == 1 || j == 2) && a >= 2 {
                let lo = BigRational::new((a - 1).into(), a.into());
                let hi = BigRational::new((2 * a).into(), (a + 2).into());
                if v.hi() < &lo || v.lo() > &hi {
                    bad.push(format!("kappa{j}_{n} = {v} outside [{lo}, {hi}]"));
                }
            }
        }
    }
    Ok(bad)
}

/// `𝔨* >= 𝔨 >= 2λ`, `𝔧 <= 𝔨`, `𝔧* <= 𝔨*` for a periodic `α` (exact limits).
pub fn check_spectrum_order(alpha: &AlphaSpec) -> Result<Vec<String>> {
    let r = spectrum_estimates(alpha, 40, &Options::default())?;
    let slack = ten_pow_neg(15);
    let le = |a: &crate::cf::Enclosure, b: &crate::cf::Enclosure| a.lo() <= &(b.hi() + &slack);
    let two_l = r.lambda.value.scale(&BigRational::from_integer(2.into()));
    let mut bad = Vec::new();
    for (ok, what) in [
        (le(&r.k.value, &r.k_star.value), "k <= k*"),
        (le(&two_l, &r.k.value), "2 lambda <= k"),
        (le(&r.j.value, &r.k.value), "j <= k"),
        (le(&r.j_star.value, &r.k_star.value), "j* <= k*"),
    ] {
        if !ok {
            bad.push(format!("{alpha}: {what} fails"));
        }
    }
    Ok(bad)
}

/// The digit-pattern implications on `2 <= n < horizon`.
pub fn check_implications(alpha: &AlphaSpec, horizon: usize) -> Result<Vec<String>> {
    Ok(lemma13_implications(alpha, horizon)?
        .into_iter()
        .map(|v| format!("{alpha}: statement {} at n={}: {}", v.statement, v.n, v.detail))
        .collect())
}

/// Swap symmetry `κ¹(1/y, 1/x) = κ²(x, y)` on exact rationals.
pub fn swap_symmetry(x: &BigRational, y: &BigRational) -> bool {
    use crate::spectra::kappa::kappa_formula_point;
    if !x.is_positive() || !y.is_positive() {
        return false;
    }
    kappa_formula_point(1, &y.recip(), &x.recip()) == kappa_formula_point(2, x, y)
}
