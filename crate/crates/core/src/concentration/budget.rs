use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetParams {
    pub k: u32,
    pub chi: u64,
    #[serde(with = "exact::serde_rat")]
    pub eps: Rational,
    #[serde(with = "exact::serde_rat")]
    pub delta: Rational,
}

impl BudgetParams {
    pub fn new(k: u32, chi: u64, eps: Rational, delta: Rational) -> Result<Self> {
        let p = BudgetParams { k, chi, eps, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.chi == 0 {
            return Err(Error::invalid("chi must be positive"));
        }
        for (name, v) in [("eps", &self.eps), ("delta", &self.delta)] {
            if *v <= Rational::zero() || *v >= Rational::one() {
                return Err(Error::invalid(format!("{name} must lie in (0,1), got {v}")));
            }
        }
        Ok(())
    }
}

/// `⌈200χ²/(ε²δ³)⌉^k · 1000^{k²}`.
pub fn budget_q(p: &BudgetParams) -> Result<BigInt> {
    p.validate()?;
    let chi = Rational::from_integer(p.chi.into());
    let base = exact::int(200) * &chi * &chi / (&p.eps * &p.eps * &p.delta * &p.delta * &p.delta);
    let base = exact::ceil_int(&base);
    Ok(Pow::pow(base, p.k) * Pow::pow(BigInt::from(1000), p.k * p.k))
}

/// `Q(0) = 1`, `Q(k) = ⌈2χ/(εδ)⌉ (1 + ⌈64χ/(εδ²)⌉)(1 + Q(k−1, χ, ε/2, δ/8))`.
pub fn budget_big_q(p: &BudgetParams) -> Result<BigInt> {
    p.validate()?;
    let chi = Rational::from_integer(p.chi.into());
    let mut eps = p.eps.clone();
    let mut delta = p.delta.clone();
    let mut factors = Vec::with_capacity(p.k as usize);
    for _ in 0..p.k {
        let a = exact::ceil_int(&(exact::int(2) * &chi / (&eps * &delta)));
        let b = exact::ceil_int(&(exact::int(64) * &chi / (&eps * &delta * &delta)));
        factors.push(a * (BigInt::one() + b));
        eps /= exact::int(2);
        delta /= exact::int(8);
    }
    Ok(factors.into_iter().rev().fold(BigInt::one(), |q, f| f * (BigInt::one() + q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn params(k: u32, chi: u64) -> BudgetParams {
        BudgetParams::new(k, chi, rat(1, 2), rat(1, 2)).unwrap()
    }

    #[test]
    fn q_examples() {
        assert_eq!(budget_q(&params(0, 7)).unwrap(), BigInt::one());
        assert_eq!(budget_q(&params(1, 5)).unwrap(), BigInt::from(160_000_000u64));
        let two: BigInt = BigInt::from(160_000u64).pow(2u32) * BigInt::from(1000).pow(4u32);
        assert_eq!(budget_q(&params(2, 5)).unwrap(), two);
    }

    #[test]
    fn big_q_examples() {
        assert_eq!(budget_big_q(&params(0, 5)).unwrap(), BigInt::one());
        assert_eq!(budget_big_q(&params(1, 5)).unwrap(), BigInt::from(40 * 2561 * 2));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(BudgetParams::new(1, 0, rat(1, 2), rat(1, 2)).is_err());
        assert!(BudgetParams::new(1, 1, rat(1, 1), rat(1, 2)).is_err());
    }
}
