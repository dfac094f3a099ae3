use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::Point;

/// A free nonsingular `Z^d`-action on a countable atomic space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionModel {
    /// Translation on `Z^d` with counting measure.
    Counting { d: usize },
    /// Translation on `Z^d` with `μ{x} = λ^{‖x‖₁}`.
    Weighted { d: usize, lambda: Rational },
    /// Coordinatewise adding machine on `(Z/2^N)^d`; bit `j` of every
    /// coordinate is 1 with probability `biases[j]`.
    Odometer { d: usize, bits: u32, biases: Vec<Rational> },
}

#[derive(Serialize, Deserialize)]
struct RawAction {
    model: String,
    d: usize,
    #[serde(default, with = "exact::serde_rat_opt", skip_serializing_if = "Option::is_none")]
    lambda: Option<Rational>,
    #[serde(default, with = "exact::serde_rat_vec", skip_serializing_if = "Vec::is_empty")]
    biases: Vec<Rational>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
}

impl ActionModel {
    pub fn counting(d: usize) -> Self {
        ActionModel::Counting { d }
    }

    pub fn weighted(d: usize, lambda: Rational) -> Result<Self> {
        if lambda <= Rational::zero() || lambda >= Rational::one() {
            return Err(Error::invalid(format!("lambda must lie in (0,1), got {lambda}")));
        }
        Ok(ActionModel::Weighted { d, lambda })
    }

    pub fn odometer(d: usize, biases: Vec<Rational>) -> Result<Self> {
        if biases.is_empty() || biases.len() > 62 {
            return Err(Error::invalid("odometer needs between 1 and 62 bits"));
        }
        if let Some(p) = biases.iter().find(|p| **p <= Rational::zero() || **p >= Rational::one()) {
            return Err(Error::invalid(format!("bias {p} must lie in (0,1)")));
        }
        Ok(ActionModel::Odometer { d, bits: biases.len() as u32, biases })
    }

    pub fn dim(&self) -> usize {
        match self {
            ActionModel::Counting { d } | ActionModel::Weighted { d, .. } | ActionModel::Odometer { d, .. } => *d,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ActionModel::Counting { .. } => "counting",
            ActionModel::Weighted { .. } => "weighted",
            ActionModel::Odometer { .. } => "odometer",
        }
    }

    /// Largest coordinate magnitude a displacement may have; `None` when unbounded.
    pub fn horizon(&self) -> Option<i64> {
        match self {
            ActionModel::Odometer { bits, .. } => Some((1i64 << (bits - 1)) - 1),
            _ => None,
        }
    }

    fn modulus(&self) -> Option<i64> {
        match self {
            ActionModel::Odometer { bits, .. } => Some(1i64 << bits),
            _ => None,
        }
    }

    pub fn check_atom(&self, w: &[i64]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: w.len() });
        }
        if let Some(m) = self.modulus() {
            if w.iter().any(|c| !(0..m).contains(c)) {
                return Err(Error::HorizonOverflow(format!("{}", Point::from(w))));
            }
        }
        Ok(())
    }

    pub fn check_displacement(&self, u: &[i64]) -> Result<()> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        if let Some(h) = self.horizon() {
            if u.iter().any(|c| c.abs() > h) {
                return Err(Error::HorizonOverflow(format!("{}", Point::from(u))));
            }
        }
        Ok(())
    }

    /// `T^u ω`.
    pub fn apply(&self, u: &[i64], w: &[i64]) -> Result<Point> {
        self.check_atom(w)?;
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        Ok(self.apply_unchecked(u, w))
    }

    pub(crate) fn apply_unchecked(&self, u: &[i64], w: &[i64]) -> Point {
        match self.modulus() {
            Some(m) => Point(w.iter().zip(u).map(|(a, b)| (a + b).rem_euclid(m)).collect()),
            None => Point(w.iter().zip(u).map(|(a, b)| a + b).collect()),
        }
    }

    /// Displacement `b` with `T^b from = to`, taken in the centred range for the odometer.
    pub(crate) fn displacement(&self, from: &[i64], to: &[i64]) -> Vec<i64> {
        match self.modulus() {
            Some(m) => from
                .iter()
                .zip(to)
                .map(|(a, b)| {
                    let r = (b - a).rem_euclid(m);
                    if r > m / 2 {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
            None => from.iter().zip(to).map(|(a, b)| b - a).collect(),
        }
    }

    /// `μ{ω}`.
    pub fn mass(&self, w: &[i64]) -> Result<Rational> {
        self.check_atom(w)?;
        Ok(self.mass_unchecked(w))
    }

    pub(crate) fn mass_unchecked(&self, w: &[i64]) -> Rational {
        match self {
            ActionModel::Counting { .. } => Rational::one(),
            ActionModel::Weighted { lambda, .. } => {
                let k: u64 = w.iter().map(|c| c.unsigned_abs()).sum();
                pow(lambda, k)
            }
            ActionModel::Odometer { biases, .. } => {
                let mut m = Rational::one();
                for &c in w {
                    for (j, p) in biases.iter().enumerate() {
                        if (c >> j) & 1 == 1 {
                            m *= p;
                        } else {
                            m *= Rational::one() - p;
                        }
                    }
                }
                m
            }
        }
    }

    /// `μ(Ω)`, or `None` when infinite.
    pub fn total_mass(&self) -> Option<Rational> {
        match self {
            ActionModel::Counting { .. } => None,
            ActionModel::Weighted { d, lambda } => {
                let one = Rational::one();
                Some(pow(&((&one + lambda) / (&one - lambda)), *d as u64))
            }
            ActionModel::Odometer { .. } => Some(Rational::one()),
        }
    }

    /// `ρ(u, ω) = μ(T^{−u}ω)/μ(ω)`.
    pub fn rn_derivative(&self, u: &[i64], w: &[i64]) -> Result<Rational> {
        self.check_atom(w)?;
        self.check_displacement(u)?;
        let back: Vec<i64> = u.iter().map(|c| -c).collect();
        let prev = self.apply_unchecked(&back, w);
        Ok(self.mass_unchecked(&prev) / self.mass_unchecked(w))
    }

    fn raw(&self) -> RawAction {
        match self {
            ActionModel::Counting { d } => {
                RawAction { model: "counting".into(), d: *d, lambda: None, biases: vec![], n: None }
            }
            ActionModel::Weighted { d, lambda } => {
                RawAction { model: "weighted".into(), d: *d, lambda: Some(lambda.clone()), biases: vec![], n: None }
            }
            ActionModel::Odometer { d, bits, biases } => {
                RawAction { model: "odometer".into(), d: *d, lambda: None, biases: biases.clone(), n: Some(*bits) }
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.raw())?)
    }
}

fn pow(base: &Rational, k: u64) -> Rational {
    num_traits::pow::Pow::pow(base, k as u32)
}

impl Serialize for ActionModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ActionModel {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawAction::deserialize(de)?;
        if raw.d == 0 {
            return Err(D::Error::custom("d must be positive"));
        }
        match raw.model.as_str() {
            "counting" => Ok(ActionModel::counting(raw.d)),
            "weighted" => {
                let l = raw.lambda.ok_or_else(|| D::Error::custom("weighted model needs lambda"))?;
                ActionModel::weighted(raw.d, l).map_err(D::Error::custom)
            }
            "odometer" => {
                let mut biases = raw.biases;
                if let Some(n) = raw.n {
                    if biases.is_empty() {
                        biases = vec![exact::rat(1, 2); n as usize];
                    } else if biases.len() != n as usize {
                        return Err(D::Error::custom(format!("N = {n} but {} biases given", biases.len())));
                    }
                }
                ActionModel::odometer(raw.d, biases).map_err(D::Error::custom)
            }
            other => Err(D::Error::custom(format!("unknown model {other:?}"))),
        }
    }
}
