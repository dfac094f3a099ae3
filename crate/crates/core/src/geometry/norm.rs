use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{self, ceil_sqrt, lcm_i128, to_i128_pair, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormKind {
    L1,
    L2,
    LInf,
    /// `max_i w_i |v_i|` with positive rational weights.
    WeightedSup(Vec<Rational>),
    /// `max_j |⟨a_j, v⟩|`; the functionals must span `R^d`.
    Polyhedral(Vec<Vec<Rational>>),
}

/// Integer gauge `g(v)`: the norm is `g(v)/scale` for the linear kinds and
/// `sqrt(g(v))` for the Euclidean one.
#[derive(Clone, Debug)]
enum Gauge {
    Sum,
    Max,
    Euclid,
    WeightedMax(Vec<i128>),
    Rows(Vec<Vec<i128>>),
}

/// A norm on `R^d` evaluated exactly on lattice points.
#[derive(Clone, Debug)]
pub struct NormSpec {
    kind: NormKind,
    dim: usize,
    gauge: Gauge,
    scale: i128,
    /// `max { |v_i| : ‖v‖ ≤ 1 }` per axis.
    unit_extent: Vec<Rational>,
}

impl PartialEq for NormSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.dim == other.dim
    }
}

impl Eq for NormSpec {}

/// Value of `‖v‖`. The Euclidean norm is carried squared so it stays exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormValue {
    Exact(Rational),
    Squared(Rational),
}

impl NormValue {
    /// Compares `‖v‖` with a nonnegative rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            NormValue::Exact(x) => x.cmp(r),
            NormValue::Squared(s) => {
                if r.is_negative() {
                    Ordering::Greater
                } else {
                    s.cmp(&(r * r))
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            NormValue::Exact(x) => exact::to_f64(x),
            NormValue::Squared(s) => exact::to_f64(s).sqrt(),
        }
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (NormValue::Exact(a), NormValue::Exact(b)) => a.partial_cmp(b),
            (NormValue::Squared(a), NormValue::Squared(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Exact(x) => write!(f, "{x}"),
            NormValue::Squared(s) => write!(f, "sqrt({s})"),
        }
    }
}

/// A compiled membership test `‖v‖ ≤ r` (or `< r`) in integer arithmetic.
#[derive(Clone, Copy, Debug)]
pub struct RadiusTest {
    mul: i128,
    rhs: i128,
    strict: bool,
    empty: bool,
}

impl RadiusTest {
    #[inline]
    fn accepts(&self, g: i128) -> bool {
        if self.empty {
            return false;
        }
        let lhs = g * self.mul;
        if self.strict {
            lhs < self.rhs
        } else {
            lhs <= self.rhs
        }
    }
}

impl NormSpec {
    pub fn l1(dim: usize) -> Self {
        Self::build(NormKind::L1, dim).expect("l1 is a norm")
    }

    pub fn l2(dim: usize) -> Self {
        Self::build(NormKind::L2, dim).expect("l2 is a norm")
    }

    pub fn linf(dim: usize) -> Self {
        Self::build(NormKind::LInf, dim).expect("linf is a norm")
    }

    pub fn weighted_sup(weights: Vec<Rational>) -> Result<Self> {
        let d = weights.len();
        Self::build(NormKind::WeightedSup(weights), d)
    }

    pub fn polyhedral(functionals: Vec<Vec<Rational>>) -> Result<Self> {
        let d = functionals.first().map_or(0, Vec::len);
        Self::build(NormKind::Polyhedral(functionals), d)
    }

    fn build(kind: NormKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("norm dimension must be positive"));
        }
        let one = exact::one();
        let (gauge, scale, unit_extent) = match &kind {
            NormKind::L1 => (Gauge::Sum, 1, vec![one; dim]),
            NormKind::LInf => (Gauge::Max, 1, vec![one; dim]),
            NormKind::L2 => (Gauge::Euclid, 1, vec![one; dim]),
            NormKind::WeightedSup(w) => {
                if w.iter().any(|x| !x.is_positive()) {
                    return Err(Error::invalid("weighted-sup weights must be positive"));
                }
                let (ints, scale) = integerize(w)?;
                let extent = w.iter().map(|x| x.recip()).collect();
                (Gauge::WeightedMax(ints), scale, extent)
            }
            NormKind::Polyhedral(rows) => {
                if rows.iter().any(|r| r.len() != dim) {
                    return Err(Error::invalid("polyhedral functionals must share one dimension"));
                }
                let flat: Vec<Rational> = rows.iter().flatten().cloned().collect();
                let (ints, scale) = integerize(&flat)?;
                let int_rows = ints.chunks(dim).map(<[i128]>::to_vec).collect();
                let extent = polytope_extent(rows, dim)?;
                (Gauge::Rows(int_rows), scale, extent)
            }
        };
        Ok(NormSpec { kind, dim, gauge, scale, unit_extent })
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self.gauge, Gauge::Euclid)
    }

    /// Short label for reports: `l1`, `l2`, `linf`, `wsup`, `poly`.
    pub fn label(&self) -> &'static str {
        match self.kind {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::LInf => "linf",
            NormKind::WeightedSup(_) => "wsup",
            NormKind::Polyhedral(_) => "poly",
        }
    }

    /// Integer gauge of an offset; see [`Gauge`].
    #[inline]
    pub(crate) fn gauge(&self, v: &[i64]) -> i128 {
        match &self.gauge {
            Gauge::Sum => v.iter().map(|&x| (x as i128).abs()).sum(),
            Gauge::Max => v.iter().map(|&x| (x as i128).abs()).max().unwrap_or(0),
            Gauge::Euclid => v.iter().map(|&x| (x as i128) * (x as i128)).sum(),
            Gauge::WeightedMax(w) => v.iter().zip(w).map(|(&x, &w)| (x as i128).abs() * w).max().unwrap_or(0),
            Gauge::Rows(rows) => rows
                .iter()
                .map(|row| row.iter().zip(v).map(|(&a, &x)| a * x as i128).sum::<i128>().abs())
                .max()
                .unwrap_or(0),
        }
    }

    pub(crate) fn value_from_gauge(&self, g: i128) -> NormValue {
        if self.is_euclidean() {
            NormValue::Squared(Rational::from_integer(BigInt::from(g)))
        } else {
            NormValue::Exact(Rational::new(BigInt::from(g), BigInt::from(self.scale)))
        }
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got });
        }
        Ok(())
    }

    pub fn eval(&self, v: &[i64]) -> Result<NormValue> {
        self.check_dim(v.len())?;
        Ok(self.value_from_gauge(self.gauge(v)))
    }

    /// Compiles `‖v‖ ≤ r` (closed) for repeated use.
    pub fn closed_test(&self, r: &Rational) -> RadiusTest {
        self.test(r, false)
    }

    /// Compiles `‖v‖ < r`.
    pub fn open_test(&self, r: &Rational) -> RadiusTest {
        self.test(r, true)
    }

    fn test(&self, r: &Rational, strict: bool) -> RadiusTest {
        if r.is_negative() {
            return RadiusTest { mul: 0, rhs: 0, strict, empty: true };
        }
        let (a, b) = to_i128_pair(r).expect("radius fits lattice arithmetic");
        if self.is_euclidean() {
            RadiusTest { mul: b * b, rhs: a * a, strict, empty: false }
        } else {
            RadiusTest { mul: b, rhs: a * self.scale, strict, empty: false }
        }
    }

    #[inline]
    pub fn accepts(&self, test: &RadiusTest, v: &[i64]) -> bool {
        test.accepts(self.gauge(v))
    }

    /// Smallest integer `n ≥ 0` with `‖v‖ ≤ n`.
    pub fn min_integer_radius(&self, v: &[i64]) -> u64 {
        let g = self.gauge(v);
        let n = if self.is_euclidean() { ceil_sqrt(g) } else { (g + self.scale - 1) / self.scale };
        n as u64
    }

    /// Smallest rational `t ≥ ‖v‖` that the norm represents exactly: `‖v‖`
    /// itself for the linear kinds, `ceil(‖v‖)` for the Euclidean norm.
    pub fn rational_upper(&self, v: &[i64]) -> Rational {
        let g = self.gauge(v);
        if self.is_euclidean() {
            Rational::from_integer(BigInt::from(ceil_sqrt(g)))
        } else {
            Rational::new(BigInt::from(g), BigInt::from(self.scale))
        }
    }

    /// Per-axis bound `floor(r · extent_i)` on `|v_i|` over the ball of radius `r`.
    pub fn box_extent(&self, r: &Rational) -> Vec<i64> {
        if r.is_negative() {
            return vec![-1; self.dim];
        }
        self.unit_extent.iter().map(|e| exact::floor_i64(&(e * r))).collect()
    }
}

/// Scales rationals to integers over a common denominator.
fn integerize(xs: &[Rational]) -> Result<(Vec<i128>, i128)> {
    let mut scale = 1i128;
    for x in xs {
        let (_, d) = to_i128_pair(x)?;
        scale = lcm_i128(scale, d);
    }
    let ints = xs
        .iter()
        .map(|x| {
            let (n, d) = to_i128_pair(x)?;
            Ok(n * (scale / d))
        })
        .collect::<Result<_>>()?;
    Ok((ints, scale))
}

/// Per-axis extent of `{v : |⟨a_j, v⟩| ≤ 1 ∀j}` by exact vertex enumeration.
fn polytope_extent(rows: &[Vec<Rational>], dim: usize) -> Result<Vec<Rational>> {
    let mut halfspaces: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for row in rows {
        halfspaces.push((row.clone(), exact::one()));
        halfspaces.push((row.iter().map(|x| -x).collect(), exact::one()));
    }
    let mut extent: Vec<Option<Rational>> = vec![None; dim];
    let mut found = false;
    for combo in combinations(halfspaces.len(), dim) {
        let a: Vec<Vec<Rational>> = combo.iter().map(|&i| halfspaces[i].0.clone()).collect();
        let b: Vec<Rational> = combo.iter().map(|&i| halfspaces[i].1.clone()).collect();
        let Some(x) = solve(a, b) else { continue };
        let feasible = halfspaces.iter().all(|(row, rhs)| {
            let dot: Rational = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            &dot <= rhs
        });
        if !feasible {
            continue;
        }
        found = true;
        for (e, xi) in extent.iter_mut().zip(&x) {
            let v = xi.abs();
            if e.as_ref().is_none_or(|cur| &v > cur) {
                *e = Some(v);
            }
        }
    }
    if !found {
        return Err(Error::invalid("polyhedral functionals do not span R^d: not a norm"));
    }
    Ok(extent.into_iter().map(|e| e.unwrap_or_else(exact::zero)).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Gaussian elimination over the rationals; `None` if singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &pivot_row[col];
                for (x, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * p;
                }
                let sub = &f * &b[col];
                b[r] -= sub;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PValue {
    Int(u8),
    Str(String),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
enum RawNorm {
    #[serde(rename = "p")]
    P { p: PValue, d: usize },
    #[serde(rename = "wsup")]
    WeightedSup {
        #[serde(with = "exact::serde_rat_vec")]
        weights: Vec<Rational>,
    },
    #[serde(rename = "poly")]
    Poly { functionals: Vec<RawRow> },
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawRow(#[serde(with = "exact::serde_rat_vec")] Vec<Rational>);

impl TryFrom<RawNorm> for NormSpec {
    type Error = Error;

    fn try_from(raw: RawNorm) -> Result<Self> {
        match raw {
            RawNorm::P { p, d } => {
                let kind = match p {
                    PValue::Int(1) => NormKind::L1,
                    PValue::Int(2) => NormKind::L2,
                    PValue::Str(s) if s == "inf" => NormKind::LInf,
                    _ => return Err(Error::invalid("p must be 1, 2 or \"inf\"")),
                };
                NormSpec::build(kind, d)
            }
            RawNorm::WeightedSup { weights } => NormSpec::weighted_sup(weights),
            RawNorm::Poly { functionals } => NormSpec::polyhedral(functionals.into_iter().map(|r| r.0).collect()),
        }
    }
}

impl From<&NormSpec> for RawNorm {
    fn from(n: &NormSpec) -> Self {
        match &n.kind {
            NormKind::L1 => RawNorm::P { p: PValue::Int(1), d: n.dim },
            NormKind::L2 => RawNorm::P { p: PValue::Int(2), d: n.dim },
            NormKind::LInf => RawNorm::P { p: PValue::Str("inf".into()), d: n.dim },
            NormKind::WeightedSup(w) => RawNorm::WeightedSup { weights: w.clone() },
            NormKind::Polyhedral(rows) => RawNorm::Poly { functionals: rows.iter().cloned().map(RawRow).collect() },
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawNorm::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawNorm::deserialize(d)?;
        NormSpec::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(d={})", self.label(), self.dim)
    }
}
