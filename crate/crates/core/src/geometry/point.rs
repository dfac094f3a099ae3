use std::fmt;
use std::ops::{Add, Deref, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A point of `Z^d`. Ordering is lexicographic on coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<i64>);

impl Point {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Point(coords.into())
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// `;`-separated coordinates, the form used in CSV cells.
    pub fn to_cell(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
    }
}

impl Deref for Point {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for Point {
    fn from(v: Vec<i64>) -> Self {
        Point(v)
    }
}

impl From<&[i64]> for Point {
    fn from(v: &[i64]) -> Self {
        Point(v.to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(v: [i64; N]) -> Self {
        Point(v.to_vec())
    }
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
