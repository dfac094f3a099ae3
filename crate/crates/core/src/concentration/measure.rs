use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{for_each_in_box, NormSpec, Point};

/// Finitely supported measure with strictly positive rational atoms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiscreteMeasure {
    masses: BTreeMap<Point, Rational>,
    total: Rational,
}

impl DiscreteMeasure {
    /// Builds from `(point, mass)` pairs; repeated points are summed.
    pub fn new(atoms: impl IntoIterator<Item = (Point, Rational)>) -> Result<Self> {
        let mut masses: BTreeMap<Point, Rational> = BTreeMap::new();
        let mut dim = None;
        for (p, m) in atoms {
            if !m.is_positive() {
                return Err(Error::invalid(format!("mass at {p} must be positive, got {m}")));
            }
            match dim {
                None => dim = Some(p.dim()),
                Some(d) if d != p.dim() => return Err(Error::DimensionMismatch { expected: d, got: p.dim() }),
                _ => {}
            }
            *masses.entry(p).or_insert_with(Rational::zero) += m;
        }
        let total = masses.values().sum();
        Ok(DiscreteMeasure { masses, total })
    }

    /// Unit mass on each point.
    pub fn counting(points: impl IntoIterator<Item = Point>) -> Self {
        Self::new(points.into_iter().map(|p| (p, exact::one()))).expect("unit masses are positive")
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.masses.keys().next().map(Point::dim)
    }

    pub fn mass_at(&self, p: &Point) -> Rational {
        self.masses.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.masses.contains_key(p)
    }

    /// `μ(S)` for a set given as distinct points.
    pub fn mass_of<'a>(&self, points: impl IntoIterator<Item = &'a Point>) -> Rational {
        points.into_iter().filter_map(|p| self.masses.get(p)).sum()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Point, &Rational)> {
        self.masses.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.masses.keys()
    }

    pub fn restrict(&self, mut keep: impl FnMut(&Point) -> bool) -> DiscreteMeasure {
        let masses: BTreeMap<Point, Rational> =
            self.masses.iter().filter(|(p, _)| keep(p)).map(|(p, m)| (p.clone(), m.clone())).collect();
        let total = masses.values().sum();
        DiscreteMeasure { masses, total }
    }

    /// `μ(B_outer(c) ∖ B_inner(c))` (closed balls; a negative `inner` removes nothing).
    pub fn mass_in_annulus(
        &self,
        norm: &NormSpec,
        center: &[i64],
        outer: &Rational,
        inner: Option<&Rational>,
    ) -> Rational {
        if outer.is_negative() {
            return Rational::zero();
        }
        let out_t = norm.closed_test(outer);
        let in_t = inner.map(|r| norm.closed_test(r));
        let accept = |off: &[i64]| norm.accepts(&out_t, off) && !in_t.as_ref().is_some_and(|t| norm.accepts(t, off));
        let ext = norm.box_extent(outer);
        let vol: u128 = ext.iter().map(|e| (2 * e + 1) as u128).product();
        let mut sum = Rational::zero();
        let mut off = vec![0i64; center.len()];
        if (self.masses.len() as u128) <= vol {
            for (p, m) in &self.masses {
                for (o, (a, c)) in off.iter_mut().zip(p.iter().zip(center)) {
                    *o = a - c;
                }
                if accept(&off) {
                    sum += m;
                }
            }
        } else {
            let lo: Vec<i64> = center.iter().zip(&ext).map(|(c, e)| c - e).collect();
            let hi: Vec<i64> = center.iter().zip(&ext).map(|(c, e)| c + e).collect();
            let mut probe = Point::origin(center.len());
            for_each_in_box(&lo, &hi, |p| {
                for (o, (a, c)) in off.iter_mut().zip(p.iter().zip(center)) {
                    *o = a - c;
                }
                if accept(&off) {
                    probe.0.copy_from_slice(p);
                    if let Some(m) = self.masses.get(&probe) {
                        sum += m;
                    }
                }
            });
        }
        sum
    }

    pub fn mass_in_ball(&self, norm: &NormSpec, center: &[i64], r: &Rational) -> Rational {
        self.mass_in_annulus(norm, center, r, None)
    }

    /// `μ(∂_t B_r(c))`, allowing `t > r`.
    pub fn mass_in_shell(&self, norm: &NormSpec, center: &[i64], r: &Rational, t: &Rational) -> Rational {
        self.mass_in_annulus(norm, center, &(r + t), Some(&(r - t)))
    }
}

#[derive(Serialize, Deserialize)]
struct RawAtom {
    point: Point,
    #[serde(with = "exact::serde_rat")]
    mass: Rational,
}

impl Serialize for DiscreteMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let atoms: Vec<RawAtom> =
            self.masses.iter().map(|(p, m)| RawAtom { point: p.clone(), mass: m.clone() }).collect();
        atoms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscreteMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let atoms = Vec::<RawAtom>::deserialize(d)?;
        DiscreteMeasure::new(atoms.into_iter().map(|a| (a.point, a.mass))).map_err(serde::de::Error::custom)
    }
}
