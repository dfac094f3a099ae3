use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ActionModel;
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::Point;

/// A rational function on atoms: finitely supported, or constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observable {
    Finite(BTreeMap<Point, Rational>),
    Constant(Rational),
}

impl Observable {
    /// Zero values are dropped from the support.
    pub fn finite(values: impl IntoIterator<Item = (Point, Rational)>) -> Self {
        let mut map = BTreeMap::new();
        for (p, v) in values {
            *map.entry(p).or_insert_with(Rational::zero) += v;
        }
        map.retain(|_, v| !v.is_zero());
        Observable::Finite(map)
    }

    pub fn indicator<'a>(points: impl IntoIterator<Item = &'a Point>) -> Self {
        Observable::finite(points.into_iter().map(|p| (p.clone(), exact::one())))
    }

    pub fn value(&self, w: &Point) -> Rational {
        match self {
            Observable::Finite(m) => m.get(w).cloned().unwrap_or_else(Rational::zero),
            Observable::Constant(c) => c.clone(),
        }
    }

    pub fn support(&self) -> Option<impl Iterator<Item = (&Point, &Rational)>> {
        match self {
            Observable::Finite(m) => Some(m.iter()),
            Observable::Constant(_) => None,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Observable::Finite(m) => m.values().all(|v| !v.is_negative()),
            Observable::Constant(c) => !c.is_negative(),
        }
    }

    pub fn sup_norm(&self) -> Rational {
        match self {
            Observable::Finite(m) => m.values().map(|v| v.abs()).max().unwrap_or_else(Rational::zero),
            Observable::Constant(c) => c.abs(),
        }
    }

    pub fn abs(&self) -> Observable {
        match self {
            Observable::Finite(m) => Observable::Finite(m.iter().map(|(p, v)| (p.clone(), v.abs())).collect()),
            Observable::Constant(c) => Observable::Constant(c.abs()),
        }
    }

    pub fn scaled(&self, c: &Rational) -> Observable {
        match self {
            Observable::Finite(m) => Observable::finite(m.iter().map(|(p, v)| (p.clone(), v * c))),
            Observable::Constant(k) => Observable::Constant(k * c),
        }
    }

    /// `∫ f dμ`.
    pub fn integral(&self, action: &ActionModel) -> Result<Rational> {
        match self {
            Observable::Finite(m) => {
                let mut s = Rational::zero();
                for (p, v) in m {
                    s += v * action.mass(p)?;
                }
                Ok(s)
            }
            Observable::Constant(c) if c.is_zero() => Ok(Rational::zero()),
            Observable::Constant(c) => action
                .total_mass()
                .map(|t| t * c)
                .ok_or_else(|| Error::invalid("a nonzero constant has infinite integral under counting measure")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawValue {
    point: Point,
    #[serde(with = "exact::serde_rat")]
    value: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawObservable {
    Constant {
        #[serde(with = "exact::serde_rat")]
        constant: Rational,
    },
    Finite(Vec<RawValue>),
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Observable::Finite(m) => {
                m.iter().map(|(p, v)| RawValue { point: p.clone(), value: v.clone() }).collect::<Vec<_>>().serialize(s)
            }
            Observable::Constant(c) => RawObservable::Constant { constant: c.clone() }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match RawObservable::deserialize(d)? {
            RawObservable::Constant { constant } => Observable::Constant(constant),
            RawObservable::Finite(v) => Observable::finite(v.into_iter().map(|r| (r.point, r.value))),
        })
    }
}
