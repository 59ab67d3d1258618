use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Named irrationals with a closed-form digit law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedConstant {
    /// e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
    E,
}

/// Digit laws that are neither periodic nor named.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorRule {
    /// `b_0, 2, b_1, 2, ...` with `b_j = j + offset`.
    Alt2 { offset: u64 },
    /// Block `k` is `left[k-1], ..., left[0], center, right[0], ..., right[k-1]`;
    /// once `k` reaches `cap` the last block repeats forever.
    Blocks {
        center: u64,
        left: Vec<u64>,
        right: Vec<u64>,
        cap: usize,
    },
}

/// Where the partial quotients `a_1, a_2, ...` come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Periodic { preperiod: Vec<u64>, period: Vec<u64> },
    Named(NamedConstant),
    Prefix(Vec<u64>),
    Rule(GeneratorRule),
}

/// An irrational `α = [a0; a1, a2, ...]` given by its digit source.
/// Cloning is cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSpec {
    inner: Arc<Inner>,
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    a0: BigInt,
    source: Source,
}

impl AlphaSpec {
    pub fn new(a0: impl Into<BigInt>, source: Source) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidArgument(reason.to_string());
        match &source {
            Source::Periodic { preperiod, period } => {
                if period.is_empty() {
                    return Err(invalid("period must be nonempty"));
                }
                if preperiod.iter().chain(period).any(|&d| d == 0) {
                    return Err(invalid("partial quotients must be >= 1"));
                }
            }
            Source::Prefix(d) => {
                if d.iter().any(|&d| d == 0) {
                    return Err(invalid("partial quotients must be >= 1"));
                }
            }
            Source::Rule(GeneratorRule::Alt2 { offset }) => {
                if *offset == 0 {
                    return Err(invalid("alt2 offset must be >= 1"));
                }
            }
            Source::Rule(GeneratorRule::Blocks {
                center,
                left,
                right,
                cap,
            }) => {
                if *cap == 0 || left.len() < *cap || right.len() < *cap {
                    return Err(invalid("blocks need cap >= 1 and at least cap digits per side"));
                }
                if *center == 0 || left.iter().chain(right).any(|&d| d == 0) {
                    return Err(invalid("partial quotients must be >= 1"));
                }
            }
            Source::Named(_) => {}
        }
        Ok(AlphaSpec {
            inner: Arc::new(Inner {
                a0: a0.into(),
                source,
            }),
        })
    }

    pub fn periodic(a0: i64, preperiod: &[u64], period: &[u64]) -> Result<Self> {
        Self::new(
            a0,
            Source::Periodic {
                preperiod: preperiod.to_vec(),
                period: period.to_vec(),
            },
        )
    }

    pub fn prefix(a0: i64, digits: &[u64]) -> Result<Self> {
        Self::new(a0, Source::Prefix(digits.to_vec()))
    }

    /// `[0; 1, 1, 1, ...] = (√5 - 1)/2`.
    pub fn golden() -> Self {
        Self::periodic(0, &[], &[1]).expect("valid")
    }

    pub fn e() -> Self {
        Self::new(2, Source::Named(NamedConstant::E)).expect("valid")
    }

    pub fn a0(&self) -> &BigInt {
        &self.inner.a0
    }

    pub fn source(&self) -> &Source {
        &self.inner.source
    }

    /// Same digits with integer part zero.
    pub fn fractional_part(&self) -> AlphaSpec {
        if self.a0().is_zero() {
            return self.clone();
        }
        AlphaSpec::new(0, self.source().clone()).expect("already validated")
    }

    /// Number of digits available, `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        match self.source() {
            Source::Prefix(d) => Some(d.len()),
            _ => None,
        }
    }

    /// Partial quotient `a_n` for `n >= 1`; `n = 0` is rejected since `a0` may be any integer.
    pub fn digit(&self, n: usize) -> Result<u64> {
        assert!(n >= 1, "digit index starts at 1");
        match self.source() {
            Source::Periodic { preperiod, period } => Ok(if n <= preperiod.len() {
                preperiod[n - 1]
            } else {
                period[(n - 1 - preperiod.len()) % period.len()]
            }),
            Source::Named(NamedConstant::E) => Ok(if n % 3 == 2 {
                2 * (n as u64 + 1) / 3
            } else {
                1
            }),
            Source::Prefix(d) => d.get(n - 1).copied().ok_or(Error::PrefixExhausted {
                needed: n,
                available: d.len(),
            }),
            Source::Rule(GeneratorRule::Alt2 { offset }) => Ok(if n % 2 == 1 {
                (n as u64 - 1) / 2 + offset
            } else {
                2
            }),
            Source::Rule(GeneratorRule::Blocks {
                center,
                left,
                right,
                cap,
            }) => {
                let mut pos = n - 1;
                let mut k = 1;
                while k < *cap && pos >= 2 * k + 1 {
                    pos -= 2 * k + 1;
                    k += 1;
                }
                if k == *cap {
                    pos %= 2 * k + 1;
                }
                Ok(match pos.cmp(&k) {
                    std::cmp::Ordering::Less => left[k - 1 - pos],
                    std::cmp::Ordering::Equal => *center,
                    std::cmp::Ordering::Greater => right[pos - k - 1],
                })
            }
        }
    }

    /// `a_1 ..= a_count`.
    pub fn digits(&self, count: usize) -> Result<Vec<u64>> {
        (1..=count).map(|n| self.digit(n)).collect()
    }

    /// For periodic sources: `(preperiod length, period)`.
    pub fn periodic_parts(&self) -> Option<(usize, &[u64])> {
        match self.source() {
            Source::Periodic { preperiod, period } => Some((preperiod.len(), period)),
            _ => None,
        }
    }

    /// `(preperiod length, period)` for every eventually periodic source,
    /// including capped block rules.
    pub fn eventual_period(&self) -> Option<(usize, Vec<u64>)> {
        match self.source() {
            Source::Periodic { preperiod, period } => Some((preperiod.len(), period.clone())),
            Source::Rule(GeneratorRule::Blocks { cap, .. }) => {
                let pre = (1..*cap).map(|k| 2 * k + 1).sum::<usize>();
                let period = (pre + 1..=pre + 2 * cap + 1)
                    .map(|n| self.digit(n))
                    .collect::<Result<Vec<_>>>()
                    .ok()?;
                Some((pre, period))
            }
            _ => None,
        }
    }

    /// True when the digits are eventually all 1.
    /// Only decidable for eventually periodic sources; other sources answer `false`.
    pub fn is_golden_equivalent(&self) -> bool {
        matches!(self.eventual_period(), Some((_, p)) if p.iter().all(|&d| d == 1))
    }
}

fn join(d: &[u64]) -> String {
    d.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a0 = self.a0();
        match self.source() {
            Source::Named(NamedConstant::E) if *a0 == BigInt::from(2) => f.write_str("e"),
            Source::Named(NamedConstant::E) => write!(f, "rule:e?a0={a0}"),
            Source::Periodic { preperiod, period } => {
                let mut parts: Vec<String> = preperiod.iter().map(u64::to_string).collect();
                parts.push(format!("({})", join(period)));
                write!(f, "cf:[{a0};{}]", parts.join(","))
            }
            Source::Prefix(d) if d.is_empty() => write!(f, "cf:[{a0}]"),
            Source::Prefix(d) => write!(f, "cf:[{a0};{}]", join(d)),
            Source::Rule(rule) => {
                let mut s = match rule {
                    GeneratorRule::Alt2 { offset } => format!("rule:alt2?offset={offset}"),
                    GeneratorRule::Blocks {
                        center,
                        left,
                        right,
                        cap,
                    } => format!(
                        "rule:blocks?center={center}&left={}&right={}&cap={cap}",
                        join(&left[..*cap]),
                        join(&right[..*cap])
                    ),
                };
                if !a0.is_zero() {
                    s.push_str(&format!("&a0={a0}"));
                }
                f.write_str(&s)
            }
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

fn parse_err(spec: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

fn parse_digits(spec: &str, s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| parse_err(spec, format!("bad digit `{t}`")))
        })
        .collect()
}

/// Parses the alpha grammar: `golden`, `e`, `sqrt:D`, `quad:a,b,d,c`,
/// `cf:[a0;a1,...]`, `cf:[a0;a1,(p1,...)]`, `rule:<id>?k=v&...`.
pub fn parse(spec: &str) -> Result<AlphaSpec> {
    let s = spec.trim();
    if s == "golden" {
        return Ok(AlphaSpec::golden());
    }
    if s == "e" {
        return Ok(AlphaSpec::e());
    }
    if let Some(d) = s.strip_prefix("sqrt:") {
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|_| parse_err(spec, "sqrt needs an integer"))?;
        return super::quad::quad_to_cf(0, 1, d, 1);
    }
    if let Some(rest) = s.strip_prefix("quad:") {
        let v: Vec<i64> = rest
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| parse_err(spec, "quad needs four integers a,b,d,c"))?;
        if v.len() != 4 {
            return Err(parse_err(spec, "quad needs four integers a,b,d,c"));
        }
        return super::quad::quad_to_cf(v[0], v[1], v[2], v[3]);
    }
    if let Some(rest) = s.strip_prefix("cf:") {
        return parse_cf(spec, rest.trim());
    }
    if let Some(rest) = s.strip_prefix("rule:") {
        return parse_rule(spec, rest.trim());
    }
    Err(parse_err(spec, "unknown form"))
}

fn parse_cf(spec: &str, body: &str) -> Result<AlphaSpec> {
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| parse_err(spec, "expected [a0;...]"))?;
    let (a0s, rest) = inner.split_once(';').unwrap_or((inner, ""));
    let a0: BigInt = a0s
        .trim()
        .parse()
        .map_err(|_| parse_err(spec, "bad integer part"))?;
    let rest = rest.trim();
    let source = if let Some(open) = rest.find('(') {
        let close = rest
            .rfind(')')
            .filter(|&c| c > open && rest[c + 1..].trim().is_empty())
            .ok_or_else(|| parse_err(spec, "periodic part must end the expansion"))?;
        let pre = rest[..open].trim().trim_end_matches(',');
        Source::Periodic {
            preperiod: parse_digits(spec, pre)?,
            period: parse_digits(spec, &rest[open + 1..close])?,
        }
    } else {
        Source::Prefix(parse_digits(spec, rest)?)
    };
    AlphaSpec::new(a0, source).map_err(|e| parse_err(spec, e.to_string()))
}

fn parse_rule(spec: &str, body: &str) -> Result<AlphaSpec> {
    let (id, query) = body.split_once('?').unwrap_or((body, ""));
    let mut params = std::collections::BTreeMap::new();
    for kv in query.split('&').filter(|kv| !kv.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| parse_err(spec, format!("expected key=value, got `{kv}`")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    let take = |params: &mut std::collections::BTreeMap<String, String>, key: &str| {
        params.remove(key)
    };
    let num = |v: Option<String>, key: &str, default: Option<u64>| -> Result<u64> {
        match v {
            Some(v) => v
                .parse()
                .map_err(|_| parse_err(spec, format!("bad value for {key}"))),
            None => default.ok_or_else(|| parse_err(spec, format!("missing parameter {key}"))),
        }
    };
    let a0: BigInt = match take(&mut params, "a0") {
        Some(v) => v.parse().map_err(|_| parse_err(spec, "bad a0"))?,
        None => BigInt::zero(),
    };
    let out = match id {
        "e" => {
            let a0 = if query.contains("a0=") { a0 } else { BigInt::from(2) };
            AlphaSpec::new(a0, Source::Named(NamedConstant::E))
        }
        "alt2" => {
            let offset = num(take(&mut params, "offset"), "offset", Some(2))?;
            AlphaSpec::new(a0, Source::Rule(GeneratorRule::Alt2 { offset }))
        }
        "blocks" => {
            let center = num(take(&mut params, "center"), "center", None)?;
            let left = parse_digits(spec, &take(&mut params, "left").unwrap_or_default())?;
            let right = parse_digits(spec, &take(&mut params, "right").unwrap_or_default())?;
            let cap = num(take(&mut params, "cap"), "cap", Some(left.len().min(right.len()) as u64))?
                as usize;
            AlphaSpec::new(
                a0,
                Source::Rule(GeneratorRule::Blocks {
                    center,
                    left,
                    right,
                    cap,
                }),
            )
        }
        other => return Err(parse_err(spec, format!("unknown rule `{other}`"))),
    };
    if let Some(k) = params.keys().next() {
        return Err(parse_err(spec, format!("unknown parameter `{k}`")));
    }
    out.map_err(|e| parse_err(spec, e.to_string()))
}
