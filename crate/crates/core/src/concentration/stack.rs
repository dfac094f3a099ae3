use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::covering::{BallFamily, Carpet};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::{LatticeBall, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthMode {
    /// `minrad U_i ≥ maxrad U_{i−1}`.
    Adjacent,
    /// `minrad U_i ≥ (maxrad U_{i−1})²`.
    Squared,
}

impl GrowthMode {
    pub fn floor_after(&self, prev_max: &Rational) -> Rational {
        match self {
            GrowthMode::Adjacent => prev_max.clone(),
            GrowthMode::Squared => prev_max * prev_max,
        }
    }
}

/// Carpets over one centre set with a growth rule between consecutive levels.
#[derive(Clone, Debug)]
pub struct Stack {
    family: BallFamily,
    centers: BTreeSet<Point>,
    levels: Vec<Carpet>,
    growth: GrowthMode,
    base_minrad: Rational,
}

impl Stack {
    pub fn new(
        family: BallFamily,
        centers: BTreeSet<Point>,
        growth: GrowthMode,
        base_minrad: Rational,
        levels: Vec<Carpet>,
    ) -> Result<Self> {
        for p in &centers {
            family.check_dim(p)?;
        }
        let mut stack = Stack { family, centers, levels: Vec::new(), growth, base_minrad };
        for level in levels {
            stack.push(level)?;
        }
        Ok(stack)
    }

    pub fn push(&mut self, level: Carpet) -> Result<()> {
        if level.family() != &self.family {
            return Err(Error::invalid("stack levels must share one ball family"));
        }
        if level.centers() != self.centers || level.len() != self.centers.len() {
            return Err(Error::invalid(format!(
                "level {} is not a carpet over the stack's centres",
                self.levels.len() + 1
            )));
        }
        if let Some(lo) = level.minrad() {
            let floor = match self.levels.last().and_then(Carpet::maxrad) {
                Some(prev) => self.growth.floor_after(prev),
                None => self.base_minrad.clone(),
            };
            if *lo < floor {
                return Err(Error::Precondition(format!(
                    "level {} has minrad {lo} below the required {floor}",
                    self.levels.len() + 1
                )));
            }
        }
        self.levels.push(level);
        Ok(())
    }

    pub fn family(&self) -> &BallFamily {
        &self.family
    }

    pub fn centers(&self) -> &BTreeSet<Point> {
        &self.centers
    }

    pub fn growth(&self) -> GrowthMode {
        self.growth
    }

    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Levels indexed from 1.
    pub fn level(&self, i: usize) -> &Carpet {
        &self.levels[i - 1]
    }

    pub fn levels(&self) -> &[Carpet] {
        &self.levels
    }

    pub fn truncated(&self, height: usize) -> Stack {
        let mut s = self.clone();
        s.levels.truncate(height);
        s
    }

    /// Every ball centred at `x`, bottom level first.
    pub fn balls_at<'a>(&'a self, x: &'a Point) -> impl Iterator<Item = &'a LatticeBall> + 'a {
        self.levels.iter().filter_map(move |l| l.ball_at(x))
    }
}

/// Random radii per level inside the growth envelope.
#[derive(Clone, Debug)]
pub struct StackBuilder {
    pub family: BallFamily,
    pub growth: GrowthMode,
    pub base_minrad: Rational,
    /// Extra integer slack added above each level's floor, drawn uniformly.
    pub spread: u64,
}

impl StackBuilder {
    pub fn build<R: Rng>(&self, rng: &mut R, centers: &BTreeSet<Point>, height: usize) -> Result<Stack> {
        let mut stack =
            Stack::new(self.family.clone(), centers.clone(), self.growth, self.base_minrad.clone(), Vec::new())?;
        let mut floor = Rational::from_integer(exact::ceil_int(&self.base_minrad));
        for _ in 0..height {
            let balls: Vec<LatticeBall> = centers
                .iter()
                .map(|c| LatticeBall::new(c.clone(), &floor + exact::int(rng.gen_range(0..=self.spread) as i64)))
                .collect();
            let level = Carpet::new(self.family.clone(), balls)?;
            floor = self.growth.floor_after(level.maxrad().unwrap_or(&floor));
            stack.push(level)?;
        }
        Ok(stack)
    }

    /// Same radius for every centre on each level.
    pub fn uniform(&self, centers: &BTreeSet<Point>, radii: &[Rational]) -> Result<Stack> {
        let levels = radii
            .iter()
            .map(|r| {
                Carpet::new(
                    self.family.clone(),
                    centers.iter().map(|c| LatticeBall::new(c.clone(), r.clone())).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Stack::new(self.family.clone(), centers.clone(), self.growth, self.base_minrad.clone(), levels)
    }
}
