use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{csv_bytes, float_cell, Outcome};
use crate::covering::BallFamily;
use crate::dynamics::{
    ball_sum_profile, coboundary_ratio_bound_check, shell_ratio, tail_ratio_bound, window_tail_profile, ActionModel,
    Observable,
};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::Point;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioConfig {
    pub action: ActionModel,
    pub family: BallFamily,
    pub f: Observable,
    pub g: Observable,
    /// Shell-ratio observable; defaults to `g`.
    #[serde(default)]
    pub h: Option<Observable>,
    pub omegas: Vec<Point>,
    pub n_max: u64,
    #[serde(default)]
    pub shell_t: Vec<u64>,
    #[serde(default)]
    pub coboundary: Vec<Point>,
    /// Largest `n` for the term-by-term coboundary check; defaults to `n_max`.
    #[serde(default)]
    pub coboundary_n_max: Option<u64>,
}

#[derive(Serialize)]
struct Row {
    omega: String,
    n: u64,
    quantity: String,
    value: String,
    value_f64: String,
}

fn push(rows: &mut Vec<Row>, w: &Point, n: u64, quantity: impl Into<String>, v: Option<&Rational>) {
    rows.push(Row {
        omega: w.to_cell(),
        n,
        quantity: quantity.into(),
        value: v.map(exact::fmt_rational).unwrap_or_else(|| "undefined".into()),
        value_f64: v.map(float_cell).unwrap_or_default(),
    });
}

fn undefined_on_zero(r: Result<Rational>) -> Result<Option<Rational>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroDenominator(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Long-format table of `R_n(f,g)`, its distance to `∫f/∫g` with the exact
/// tail bound (finite measures), shell ratios and coboundary checks.
pub fn run_ratio(cfg: &RatioConfig) -> Result<Outcome> {
    if cfg.omegas.is_empty() {
        return Err(Error::invalid("no base points configured"));
    }
    let a = &cfg.action;
    if cfg.family.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: cfg.family.dim() });
    }
    let h = cfg.h.as_ref().unwrap_or(&cfg.g);
    let finite = a.total_mass().is_some() && f_and_g_bounded(cfg);
    let limit = if finite {
        let (fi, gi) = (cfg.f.integral(a)?, cfg.g.integral(a)?);
        (!gi.is_zero()).then(|| (fi.clone(), gi.clone(), &fi / &gi))
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut findings = Vec::new();
    for w in &cfg.omegas {
        let num = ball_sum_profile(a, &cfg.f, &cfg.family, cfg.n_max, w)?;
        let den = ball_sum_profile(a, &cfg.g, &cfg.family, cfg.n_max, w)?;
        let tails = match &limit {
            Some(_) => Some(window_tail_profile(a, &cfg.family, cfg.n_max, w)?),
            None => None,
        };
        for n in 0..=cfg.n_max {
            let i = n as usize;
            let r = (!den[i].is_zero()).then(|| &num[i] / &den[i]);
            push(&mut rows, w, n, "ratio", r.as_ref());
            if let (Some((fi, gi, lim)), Some(tails)) = (&limit, &tails) {
                let err = r.as_ref().map(|r| (r - lim).abs());
                push(&mut rows, w, n, "error", err.as_ref());
                let bound = tail_ratio_bound(fi, &cfg.f.sup_norm(), gi, &cfg.g.sup_norm(), &tails[i]);
                push(&mut rows, w, n, "tail_bound", bound.as_ref());
                if let (Some(e), Some(b)) = (&err, &bound) {
                    if e > b {
                        findings.push(format!(
                            "omega {w}, n = {n}: |R_n − ∫f/∫g| = {} exceeds the tail bound {}",
                            exact::fmt_rational(e),
                            exact::fmt_rational(b)
                        ));
                    }
                }
            }
            if let Some(norm) = cfg.family.norm() {
                for &t in cfg.shell_t.iter().filter(|&&t| t <= n) {
                    let s = undefined_on_zero(shell_ratio(a, h, norm, n, t, w))?;
                    push(&mut rows, w, n, format!("shell_ratio_t{t}"), s.as_ref());
                }
                if n <= cfg.coboundary_n_max.unwrap_or(cfg.n_max) {
                    for v in &cfg.coboundary {
                        let rep = coboundary_ratio_bound_check(a, norm, &cfg.f, v, n, w)?;
                        let tag = v.to_cell();
                        push(&mut rows, w, n, format!("coboundary_cancellation_{tag}"), Some(&rep.cancellation));
                        push(&mut rows, w, n, format!("coboundary_shell_{tag}"), Some(&rep.shell_sum));
                        push(&mut rows, w, n, format!("coboundary_sup_{tag}"), Some(&rep.sup_bound));
                        if !rep.holds() {
                            findings.push(format!("omega {w}, n = {n}, v = {v}: coboundary chain fails"));
                        }
                    }
                }
            }
        }
    }
    Ok(Outcome { bytes: csv_bytes(&rows)?, findings })
}

fn f_and_g_bounded(cfg: &RatioConfig) -> bool {
    cfg.f.support().is_some() && cfg.g.support().is_some() && cfg.f.is_nonnegative() && cfg.g.is_nonnegative()
}
