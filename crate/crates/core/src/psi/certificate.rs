use num_integer::Integer;
use num_traits::ToPrimitive;

use super::PsiVariant;
use crate::cf::{AlphaSpec, Expansion, IntBracket, LatticePoint};
use crate::error::{Error, Result};

/// Role of a lattice point found inside the parallelogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointClass {
    Origin,
    W1,
    W2,
    /// `z_n` itself.
    Convergent(isize),
    /// `k·z_n` with `k >= 2`.
    ConvergentMultiple { n: isize, k: u64 },
    Other,
}

/// Exhaustive check that `w1`, `w2` are successive minimizers, via the
/// parallelogram `Π = {0 <= x <= x2, |αx - y| <= ξ(w1)}`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub w1: LatticePoint,
    pub w2: LatticePoint,
    pub variant: PsiVariant,
    /// `ξ(w2) < ξ(w1)`, which puts both points on the boundary of `Π`.
    pub on_boundary: bool,
    /// Convergent strictly inside `Ω[w1]`.
    pub witness1: Option<isize>,
    /// Convergent strictly inside `Ω[w2]`.
    pub witness2: Option<isize>,
    pub inventory: Vec<(LatticePoint, PointClass)>,
    /// First inventory point that is not allowed for the variant.
    pub counterexample: Option<LatticePoint>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.on_boundary
            && self.witness1.is_some()
            && self.witness2.is_some()
            && self.counterexample.is_none()
    }
}

pub fn certify_successive(
    alpha: &AlphaSpec,
    w1: &LatticePoint,
    w2: &LatticePoint,
    variant: PsiVariant,
) -> Result<Certificate> {
    let x1 = w1
        .q
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("w1 needs 0 < q".into()))?;
    let x2 = w2
        .q
        .to_u64()
        .ok_or_else(|| Error::PrecisionCap("w2 beyond enumeration range".into()))?;
    if x1 == 0 || x1 >= x2 {
        return Err(Error::InvalidArgument("certificate needs 0 < q(w1) < q(w2)".into()));
    }
    let mut exp = Expansion::new(alpha);
    let br = IntBracket::new(&mut exp, x2)?;
    let rel = |w: &LatticePoint| {
        br.relative(&w.q, &w.p)
            .ok_or_else(|| Error::PrecisionCap("lattice point too far from αq".into()))
    };
    let (y1, y2) = (rel(w1)?, rel(w2)?);
    let d1 = br.scaled(x1, y1);
    let d2 = br.scaled(x2, y2);

    let mut convs: Vec<(isize, u64, i128)> = Vec::new();
    let mut n = 0isize;
    loop {
        let (q, p) = exp.point(n)?;
        match q.to_u64() {
            Some(qu) if qu <= x2 => convs.push((n, qu, br.relative(&q, &p).expect("small"))),
            _ => break,
        }
        n += 1;
    }

    let interior = |x_max: u64, d: u128| {
        convs
            .iter()
            .filter(|&&(_, q, p)| q > 0 && q < x_max && br.scaled(q, p) < d)
            .map(|c| c.0)
            .last()
    };
    let witness1 = interior(x1, d1);
    let witness2 = interior(x2, d2);

    let classify = |x: u64, y: i128| -> PointClass {
        if x == 0 && y == 0 {
            return PointClass::Origin;
        }
        if (x, y) == (x1, y1) {
            return PointClass::W1;
        }
        if (x, y) == (x2, y2) {
            return PointClass::W2;
        }
        if let Some(c) = convs.iter().find(|c| c.1 == x && c.2 == y) {
            return PointClass::Convergent(c.0);
        }
        if x > 0 {
            let g = (x as i128).gcd(&y) as u64;
            if g > 1 {
                if let Some(c) = convs
                    .iter()
                    .find(|c| c.1 == x / g && c.2 == y / g as i128)
                {
                    return PointClass::ConvergentMultiple { n: c.0, k: g };
                }
            }
        }
        PointClass::Other
    };
    let allowed = |c: &PointClass| match c {
        PointClass::Other => false,
        PointClass::ConvergentMultiple { .. } => variant == PsiVariant::SecondFraction,
        _ => true,
    };

    let mut inventory = Vec::new();
    let mut counterexample = None;
    for x in 0..=x2 {
        for y in br.rows_within(x, d1) {
            let class = classify(x, y);
            let pt = LatticePoint::new(x, br.absolute(x, y));
            if counterexample.is_none() && !allowed(&class) {
                counterexample = Some(pt.clone());
            }
            inventory.push((pt, class));
        }
    }
    Ok(Certificate {
        w1: w1.clone(),
        w2: w2.clone(),
        variant,
        on_boundary: d2 < d1,
        witness1,
        witness2,
        inventory,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_successive_pair() {
        let r2: AlphaSpec = "sqrt:2".parse().unwrap();
        let c = certify_successive(
            &r2,
            &LatticePoint::new(3, 4),
            &LatticePoint::new(7, 10),
            PsiVariant::SecondPair,
        )
        .unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.witness1, Some(1));
        assert_eq!(c.witness2, Some(2));
    }

    #[test]
    fn golden_non_successive_pair_fails() {
        let c = certify_successive(
            &AlphaSpec::golden(),
            &LatticePoint::new(4, 2),
            &LatticePoint::new(7, 4),
            PsiVariant::SecondPair,
        )
        .unwrap();
        assert!(!c.passed());
        assert_eq!(c.counterexample, Some(LatticePoint::new(6, 4)));
    }

    #[test]
    fn sixes_triple() {
        // α = [0; 6, 6, ...]: z0 + z1 and 2 z1, then 2 z1 and z2 - z1
        let a: AlphaSpec = "cf:[0;(6)]".parse().unwrap();
        let c = certify_successive(&a, &LatticePoint::new(7, 1), &LatticePoint::new(12, 2), PsiVariant::SecondPair)
            .unwrap();
        assert!(c.passed(), "{c:?}");
        let c = certify_successive(&a, &LatticePoint::new(12, 2), &LatticePoint::new(31, 5), PsiVariant::SecondPair)
            .unwrap();
        assert!(c.passed(), "{c:?}");
    }
}
