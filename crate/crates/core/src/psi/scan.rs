use num_integer::Integer;

use crate::cf::{Expansion, IntBracket};
use crate::error::Result;

use super::PsiVariant;

/// Incremental exact scan of `min |qα - p|` over admissible `(q, p)` with `q` ascending.
///
/// Works on the integer model of [`IntBracket`], with `r = qA mod B` and
/// `fl = floor(qA/B)` carried from one `q` to the next, so each step is a
/// handful of machine operations plus an exclusion lookup.
pub struct Scanner {
    br: IntBracket,
    variant: PsiVariant,
    /// Convergent points `(q_n, p_n - a0 q_n)` for `n >= 0`, `q_n <= bound`, sorted.
    convergents: Vec<(u64, i128)>,
    next_conv: usize,
    q: u64,
    r: u128,
    fl: i128,
    best: Option<(u128, u64, i128)>,
    forms: u64,
}

/// Best admissible form found at a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanStep {
    pub q: u64,
    /// Minimizer `(q, p - a0 q)` over all `q' <= q`.
    pub best_q: u64,
    pub best_p_rel: i128,
    /// `|best_q·A - best_p·B|`.
    pub best_scaled: u128,
    pub jumped: bool,
}

impl Scanner {
    pub fn new(exp: &mut Expansion, bound: u64, variant: PsiVariant) -> Result<Self> {
        let br = IntBracket::new(exp, bound)?;
        let mut convergents = Vec::new();
        let mut n = 0isize;
        loop {
            let (q, p) = exp.point(n)?;
            if q > bound.into() {
                break;
            }
            let q_u: u64 = q.clone().try_into().expect("q <= bound");
            let rel = br.relative(&q, &p).expect("p_n - a0 q_n <= q_n");
            convergents.push((q_u, rel));
            n += 1;
        }
        convergents.sort_unstable();
        Ok(Scanner {
            br,
            variant,
            convergents,
            next_conv: 0,
            q: 0,
            r: 0,
            fl: 0,
            best: None,
            forms: 0,
        })
    }

    pub fn bracket(&self) -> &IntBracket {
        &self.br
    }

    /// Number of candidate forms examined so far.
    pub fn forms_examined(&self) -> u64 {
        self.forms
    }

    fn excluded(&self, q: u64, p: i128) -> bool {
        match self.variant {
            PsiVariant::Best => false,
            PsiVariant::SecondPair => self.convergents[self.next_conv..]
                .iter()
                .take_while(|c| c.0 == q)
                .any(|c| c.1 == p),
            PsiVariant::SecondFraction => {
                let g = (q as i128).gcd(&p) as u64;
                let (rq, rp) = (q / g, p / g as i128);
                self.convergents
                    .binary_search_by(|c| c.0.cmp(&rq).then(c.1.cmp(&rp)))
                    .is_ok()
            }
        }
    }

    /// Advances to the next `q`; `None` once the bound is passed.
    pub fn step(&mut self) -> Option<ScanStep> {
        if self.q >= self.br.bound {
            return None;
        }
        self.q += 1;
        let q = self.q;
        while self.next_conv < self.convergents.len() && self.convergents[self.next_conv].0 < q {
            self.next_conv += 1;
        }
        self.r += self.br.a;
        if self.r >= self.br.b {
            self.r -= self.br.b;
            self.fl += 1;
        }
        let b = self.br.b;
        // candidates below: fl - i at distance r + iB; above: fl + 1 + j at distance (j+1)B - r
        let (mut i, mut j) = (0u128, 0u128);
        let (dist, p) = loop {
            let below = self.r + i * b;
            let above = (j + 1) * b - self.r;
            let (d, p) = if below < above {
                i += 1;
                (below, self.fl - (i as i128 - 1))
            } else {
                j += 1;
                (above, self.fl + j as i128)
            };
            self.forms += 1;
            if !self.excluded(q, p) {
                break (d, p);
            }
        };
        let jumped = match self.best {
            Some((bd, _, _)) => dist < bd,
            None => true,
        };
        if jumped {
            self.best = Some((dist, q, p));
        }
        let (best_scaled, best_q, best_p_rel) = self.best.expect("set above");
        Some(ScanStep {
            q,
            best_q,
            best_p_rel,
            best_scaled,
            jumped,
        })
    }
}
