//! The functionals `κ¹..κ⁴`, `𝔩*_n`, finite-horizon estimates of `λ`, `𝔧`, `𝔨`,
//! `𝔧*`, `𝔨*`, the digit-≥2 filter, and constructive spectrum witnesses.

pub mod hall;
pub mod kappa;
pub mod report;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cf::expansion::cf_enclosure;
use crate::cf::{ten_pow_neg, AlphaSpec, Enclosure, Expansion};
use crate::error::{Error, Result};
use crate::psi::{t_threshold, PsiVariant, Scanner};
use crate::rules::{rule_items, Limit};

pub use hall::{
    hall_construct, hall_h, witness_l2, witness_l2star_min, CantorSearch, HallPoint, L2Witness,
};
pub use kappa::{ell_star, kappa, kappa_formula, kappa_via_products, kappa_via_tails, KappaSample};
pub use report::{kappa_json, kappa_table_tsv, report_human, report_json, report_tsv};

/// Where an estimate was attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `κ^j_n` (for periodic limits, `n` is the representative index of its phase).
    Kappa { j: u8, n: usize },
    /// A jump point `q` whose product is `κ^j_n`.
    Jump { q: BigInt, j: u8, n: usize },
    /// A digit index, as for `𝔩*_n` or `q_n ξ_n`.
    Index(usize),
}

#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: Enclosure,
    pub witness: Witness,
}

fn take_min(best: &mut Option<Estimate>, value: Enclosure, witness: Witness) {
    match best {
        Some(b) if b.value.lo() <= value.lo() => {
            b.value = b.value.min(&value);
        }
        _ => {
            let value = match best {
                Some(b) => value.min(&b.value),
                None => value,
            };
            *best = Some(Estimate { value, witness });
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exact limits over one period of a periodic tail.
    PeriodicExact,
    /// Minimum over the index window `[start, N]`.
    TailWindow,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::PeriodicExact => "periodic-exact",
            Method::TailWindow => "tail-window",
        }
    }
}

/// Estimation options.
#[derive(Clone, Debug)]
pub struct Options {
    /// Width goal for each evaluated quantity.
    pub goal: BigRational,
    /// Use exact period limits for periodic tails.
    pub periodic_exact: bool,
    /// Window start as a fraction of the horizon.
    pub window_fraction: BigRational,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            goal: ten_pow_neg(20),
            periodic_exact: true,
            window_fraction: BigRational::new(3.into(), 4.into()),
        }
    }
}

impl Options {
    fn window(&self, horizon: usize) -> (usize, usize) {
        let start = (BigRational::from_integer(horizon.into()) * &self.window_fraction)
            .ceil()
            .to_integer();
        let start: usize = start.try_into().unwrap_or(horizon);
        (start.clamp(1, horizon), horizon)
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub alpha: AlphaSpec,
    pub horizon: usize,
    pub window: (usize, usize),
    pub method: Method,
    pub threshold: u64,
    pub lambda: Estimate,
    pub j: Estimate,
    pub k: Estimate,
    pub j_star: Estimate,
    pub k_star: Estimate,
}

/// Exact limits along one residue class of indices in a periodic tail.
struct PeriodicLimits {
    pre: usize,
    period: Vec<u64>,
}

impl PeriodicLimits {
    fn of(alpha: &AlphaSpec) -> Option<Self> {
        alpha
            .eventual_period()
            .map(|(pre, period)| PeriodicLimits { pre, period })
    }

    fn len(&self) -> usize {
        self.period.len()
    }

    /// Representative indices, one per phase, far enough in that `n - 1` is periodic.
    fn window(&self) -> (usize, usize) {
        let l = self.len();
        (self.pre + l + 2, self.pre + 2 * l + 1)
    }

    fn digit(&self, idx: isize) -> u64 {
        let l = self.len() as isize;
        self.period[(idx - self.pre as isize - 1).rem_euclid(l) as usize]
    }

    /// `lim α*_m` along `m + kℓ`: `[0; a_m, a_{m-1}, ...]` with the period continued backwards.
    fn dual(&self, m: usize, goal: &BigRational) -> Result<Enclosure> {
        cf_enclosure(BigInt::from(0), |i| Ok(self.digit(m as isize + 1 - i as isize)), goal)
    }

    fn kappa(&self, exp: &mut Expansion, n: usize, j: u8, goal: &BigRational) -> Result<Enclosure> {
        let g = goal / BigRational::from_integer(BigInt::from(64));
        let (x, y) = if j == 2 {
            (self.dual(n, &g)?, exp.tail(n + 1, &g)?)
        } else {
            (self.dual(n - 1, &g)?, exp.tail(n, &g)?)
        };
        Ok(kappa::kappa_formula(j, &x, &y))
    }

    fn ell_star(&self, exp: &mut Expansion, n: usize, goal: &BigRational) -> Result<Enclosure> {
        if exp.digit(n)? == 1 {
            self.kappa(exp, n, 3, goal)
        } else {
            Ok(self.kappa(exp, n, 1, goal)?.min(&self.kappa(exp, n, 2, goal)?))
        }
    }

    fn lagrange(&self, exp: &mut Expansion, n: usize, goal: &BigRational) -> Result<Enclosure> {
        let g = goal / BigRational::from_integer(BigInt::from(4));
        let x = self.dual(n, &g)?;
        let y = exp.tail(n + 1, &g)?;
        let one = BigRational::from_integer(1.into());
        Ok(Enclosure::new(&one / (x.lo() + y.lo()), &one / (x.hi() + y.hi())))
    }
}

/// `κ`-tagged rule items `(q, j, n)` with source horizon `max_index`.
fn kappa_items(exp: &mut Expansion, max_index: usize, variant: PsiVariant) -> Result<Vec<(BigInt, u8, usize)>> {
    let items = rule_items(exp, Limit::Index(max_index), variant)?;
    let alpha = exp.alpha().clone();
    let mut out = Vec::new();
    for it in items {
        let digit_at = |n: usize| alpha.digit(n).unwrap_or(0);
        if let Some((j, n)) = it.case.kappa(digit_at) {
            out.push((it.q, j, n));
        }
    }
    Ok(out)
}

/// `λ` estimate: minimum of `q_n ξ_n = 1/(α_{n+1} + α*_n)` over the tail window,
/// or the exact minimum over one period for periodic tails.
pub fn lagrange_constant(alpha: &AlphaSpec, horizon: usize, opts: &Options) -> Result<Estimate> {
    if horizon < 2 {
        return Err(Error::InvalidArgument("horizon must be at least 2".into()));
    }
    let mut exp = Expansion::new(alpha);
    let mut best = None;
    match PeriodicLimits::of(alpha).filter(|_| opts.periodic_exact) {
        Some(pl) => {
            let (a, b) = pl.window();
            for n in a..=b {
                let v = pl.lagrange(&mut exp, n, &opts.goal)?;
                take_min(&mut best, v, Witness::Index(n));
            }
        }
        None => {
            let (a, b) = opts.window(horizon);
            for n in a..=b {
                let v = kappa::lagrange_term(&mut exp, n, &opts.goal)?;
                take_min(&mut best, v, Witness::Index(n));
            }
        }
    }
    Ok(best.expect("nonempty window"))
}

/// All five estimates at horizon `N` (digit index).
pub fn spectrum_estimates(alpha: &AlphaSpec, horizon: usize, opts: &Options) -> Result<SpectrumReport> {
    let mut exp = Expansion::new(alpha);
    let threshold = t_threshold(alpha)?;
    if exp.q(horizon as isize)? < BigInt::from(threshold) {
        return Err(Error::InsufficientHorizon(format!(
            "q_{horizon} is below the threshold {threshold}"
        )));
    }
    let goal = &opts.goal;
    let periodic = PeriodicLimits::of(alpha).filter(|_| opts.periodic_exact);
    let lambda = lagrange_constant(alpha, horizon, opts)?;
    let t_big = BigInt::from(threshold);

    let mut out = Vec::new();
    for variant in [PsiVariant::SecondPair, PsiVariant::SecondFraction] {
        // running infimum over the whole admissible range
        let mut inf = None;
        for (q, j, n) in kappa_items(&mut exp, horizon, variant)? {
            if q < t_big {
                continue;
            }
            let v = kappa_via_tails(&mut exp, n, j, goal)?;
            take_min(&mut inf, v, Witness::Jump { q, j, n });
        }
        // liminf
        let mut lim = None;
        match &periodic {
            Some(pl) => {
                let (a, b) = pl.window();
                let l = pl.len();
                if variant == PsiVariant::SecondPair {
                    for (_, j, n) in kappa_items(&mut exp, pl.pre + 3 * l + 3, variant)? {
                        if (a..=b).contains(&n) {
                            let v = pl.kappa(&mut exp, n, j, goal)?;
                            take_min(&mut lim, v, Witness::Kappa { j, n });
                        }
                    }
                } else {
                    for n in a..=b {
                        let v = pl.ell_star(&mut exp, n, goal)?;
                        take_min(&mut lim, v, Witness::Index(n));
                    }
                }
            }
            None => {
                let (a, b) = opts.window(horizon);
                if variant == PsiVariant::SecondPair {
                    for (_, j, n) in kappa_items(&mut exp, horizon, variant)? {
                        if (a..=b).contains(&n) {
                            let v = kappa_via_tails(&mut exp, n, j, goal)?;
                            take_min(&mut lim, v, Witness::Kappa { j, n });
                        }
                    }
                } else {
                    for n in a..=b {
                        let v = ell_star(&mut exp, n, goal)?;
                        take_min(&mut lim, v, Witness::Index(n));
                    }
                }
            }
        }
        let lim = lim.ok_or_else(|| Error::InsufficientHorizon("empty window".into()))?;
        let mut inf = inf.ok_or_else(|| Error::InsufficientHorizon("no jump point above the threshold".into()))?;
        if periodic.is_some() && lim.value.lo() < inf.value.lo() {
            // the limit is approached by later jump points
            inf = Estimate {
                value: lim.value.min(&inf.value),
                witness: lim.witness.clone(),
            };
        }
        out.push((inf, lim));
    }
    let (j_star, k_star) = out.pop().expect("two variants");
    let (j, k) = out.pop().expect("two variants");
    Ok(SpectrumReport {
        alpha: alpha.clone(),
        horizon,
        window: match &periodic {
            Some(pl) => pl.window(),
            None => opts.window(horizon),
        },
        method: if periodic.is_some() {
            Method::PeriodicExact
        } else {
            Method::TailWindow
        },
        threshold,
        lambda,
        j,
        k,
        j_star,
        k_star,
    })
}

/// `𝔨` from the digits `a_n >= 2` only: minimum of `min(κ¹_n, κ²_n, κ⁴_n)`.
pub fn lemma13_filter(alpha: &AlphaSpec, horizon: usize, opts: &Options) -> Result<Estimate> {
    if alpha.is_golden_equivalent() {
        return Err(Error::GoldenEquivalent);
    }
    let mut exp = Expansion::new(alpha);
    let mut best = None;
    let periodic = PeriodicLimits::of(alpha).filter(|_| opts.periodic_exact);
    let (a, b) = match &periodic {
        Some(pl) => pl.window(),
        None => opts.window(horizon),
    };
    for n in a..=b {
        if exp.digit(n)? < 2 {
            continue;
        }
        for j in [1u8, 2, 4] {
            let v = match &periodic {
                Some(pl) => pl.kappa(&mut exp, n, j, &opts.goal)?,
                None => kappa_via_tails(&mut exp, n, j, &opts.goal)?,
            };
            take_min(&mut best, v, Witness::Kappa { j, n });
        }
    }
    best.ok_or(Error::GoldenEquivalent)
}

/// A failed implication of the digit-pattern lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub n: usize,
    /// 1: `a_n = 1, a_{n+1} >= 2, κ³_n < κ¹_{n+1}`; 2: mirror with `n - 1`; 4: `a_n >= 8`.
    pub statement: u8,
    pub detail: String,
}

/// Exact comparison of two quantities, refining until their enclosures separate.
fn less(
    exp: &mut Expansion,
    a: (usize, u8),
    b: (usize, u8),
) -> Result<Option<bool>> {
    for k in [12u32, 30, 60, 120] {
        let g = ten_pow_neg(k);
        let x = kappa_via_tails(exp, a.0, a.1, &g)?;
        let y = kappa_via_tails(exp, b.0, b.1, &g)?;
        if let Some(o) = x.compare(&y) {
            return Ok(Some(o == std::cmp::Ordering::Less));
        }
    }
    Ok(None)
}

/// Checks the three implications for `2 <= n <= N - 1`; returns every violation.
pub fn lemma13_implications(alpha: &AlphaSpec, horizon: usize) -> Result<Vec<Violation>> {
    if horizon < 3 {
        return Err(Error::InvalidArgument("horizon must be at least 3".into()));
    }
    let mut exp = Expansion::new(alpha);
    let mut out = Vec::new();
    for n in 2..horizon {
        let (prev, a, next) = (exp.digit(n - 1)?, exp.digit(n)?, exp.digit(n + 1)?);
        if a == 1 && next >= 2 && less(&mut exp, (n, 3), (n + 1, 1))? == Some(true) {
            let ok = next >= 4 && less(&mut exp, (n + 1, 4), (n, 3))? == Some(true);
            if !ok {
                out.push(Violation {
                    n,
                    statement: 1,
                    detail: format!("a_(n+1) = {next}"),
                });
            }
        }
        if a == 1 && prev >= 2 && less(&mut exp, (n, 3), (n - 1, 2))? == Some(true) {
            let ok = prev >= 4 && less(&mut exp, (n - 1, 4), (n, 3))? == Some(true);
            if !ok {
                out.push(Violation {
                    n,
                    statement: 2,
                    detail: format!("a_(n-1) = {prev}"),
                });
            }
        }
        if a >= 8 {
            for j in 1..=3u8 {
                if less(&mut exp, (n, j), (n, 4))? != Some(false) {
                    out.push(Violation {
                        n,
                        statement: 4,
                        detail: format!("kappa{j} not above kappa4 at a_n = {a}"),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `inf t·ψ^[2](t)` over `𝔱 <= t <= T`, computed two ways.
#[derive(Clone, Debug)]
pub struct InfAudit {
    /// Minimum of `𝔮·ψ(𝔮)` over jump points `𝔮 >= 𝔱`.
    pub via_jumps: Enclosure,
    pub jump_argmin: u64,
    /// Minimum of `t·ψ(t)` over every integer `t` in range.
    pub via_scan: Enclosure,
    pub scan_argmin: u64,
    pub threshold: u64,
}

impl InfAudit {
    pub fn agree_within(&self, tol: &BigRational) -> bool {
        let d = (self.via_jumps.midpoint() - self.via_scan.midpoint()).abs();
        use num_traits::Signed;
        &d <= tol
    }
}

pub fn inf_audit(alpha: &AlphaSpec, bound: u64, variant: PsiVariant, goal: &BigRational) -> Result<InfAudit> {
    let threshold = t_threshold(alpha)?;
    let mut exp = Expansion::new(alpha);
    let mut sc = Scanner::new(&mut exp, bound, variant)?;
    let mut jumps: Option<(Enclosure, u64)> = None;
    let mut scan: Option<(Enclosure, u64)> = None;
    let mut current: Option<Enclosure> = None;
    let goal_q = goal / BigRational::from_integer(bound.into());
    while let Some(s) = sc.step() {
        if s.jumped || current.is_none() {
            let p = sc.bracket().absolute(s.best_q, s.best_p_rel);
            current = Some(exp.form_value(&BigInt::from(s.best_q), &p, &goal_q)?);
        }
        if s.q < threshold {
            continue;
        }
        let v = current.as_ref().expect("set above");
        let prod = v.scale(&BigRational::from_integer(s.q.into()));
        if s.jumped && jumps.as_ref().is_none_or(|(b, _)| prod.lo() < b.lo()) {
            jumps = Some((prod.clone(), s.q));
        }
        if scan.as_ref().is_none_or(|(b, _)| prod.lo() < b.lo()) {
            scan = Some((prod, s.q));
        }
    }
    let (via_jumps, jump_argmin) =
        jumps.ok_or_else(|| Error::InsufficientHorizon("no jump point above the threshold".into()))?;
    let (via_scan, scan_argmin) = scan.expect("bound >= threshold");
    Ok(InfAudit {
        via_jumps,
        jump_argmin,
        via_scan,
        scan_argmin,
        threshold,
    })
}
