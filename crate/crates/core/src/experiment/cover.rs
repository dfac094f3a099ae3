use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{csv_bytes, default_seed, Outcome};
use crate::covering::{
    certify_besicovitch, certify_doubling, chi_from_constants, color_with_budget, is_well_separated, random_carpet,
    trial_rng, BallFamily, CarpetSampler,
};
use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverRun {
    pub family: BallFamily,
    pub trials: usize,
    #[serde(default)]
    pub targeted_trials: usize,
    pub sampler: CarpetSampler,
    #[serde(default = "default_r_max")]
    pub doubling_r_max: u64,
}

fn default_r_max() -> u64 {
    16
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub runs: Vec<CoverRun>,
}

#[derive(Serialize)]
struct Row {
    norm: String,
    d: usize,
    trials: usize,
    max_multiplicity: usize,
    chi_used: usize,
    besicovitch_c: usize,
    doubling_d: u64,
    max_classes: usize,
    violations: usize,
    window: i64,
    centers: usize,
    min_radius: i64,
    max_radius: i64,
    seed: u64,
}

/// Carpet calibration: empirical constants `C` and `D`, then first-fit
/// colouring of every trial carpet with `χ = C·D² + 1`.
pub fn run_cover(cfg: &CoverConfig, seed: Option<u64>) -> Result<Outcome> {
    let seed = seed.unwrap_or(cfg.seed);
    if cfg.runs.is_empty() {
        return Err(Error::invalid("no runs configured"));
    }
    let mut rows = Vec::new();
    let mut findings = Vec::new();
    for run in &cfg.runs {
        if run.trials == 0 {
            return Err(Error::invalid("trials must be positive"));
        }
        let cert = certify_besicovitch(&run.family, &run.sampler, run.trials, run.targeted_trials, seed)?;
        let dbl = certify_doubling(&run.family.metric(), run.doubling_r_max)?;
        let chi = chi_from_constants(cert.c as u64, dbl.d)?;
        let results: Vec<std::result::Result<usize, String>> = (0..run.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(seed, i as u64);
                let carpet = random_carpet(&mut rng, &run.family, &run.sampler)?;
                let centers: Vec<Point> = carpet.centers().into_iter().collect();
                match color_with_budget(&carpet, chi) {
                    Ok(col) => {
                        if !col.covers(&run.family, &centers) {
                            return Ok(Err(format!("trial {i}: colour classes miss a centre")));
                        }
                        for class in &col.classes {
                            if !is_well_separated(&run.family, class, None)? {
                                return Ok(Err(format!("trial {i}: a colour class is not well separated")));
                            }
                        }
                        Ok(Ok(col.class_count()))
                    }
                    Err(e @ Error::CertificateViolation { .. }) => Ok(Err(format!("trial {i}: {e}"))),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?;
        let max_classes = results.iter().filter_map(|r| r.as_ref().ok()).copied().max().unwrap_or(0);
        let bad: Vec<String> = results.into_iter().filter_map(|r| r.err()).collect();
        rows.push(Row {
            norm: run.family.label(),
            d: run.family.dim(),
            trials: run.trials,
            max_multiplicity: cert.c,
            chi_used: chi,
            besicovitch_c: cert.c,
            doubling_d: dbl.d,
            max_classes,
            violations: bad.len(),
            window: run.sampler.window,
            centers: run.sampler.centers,
            min_radius: run.sampler.min_radius,
            max_radius: run.sampler.max_radius,
            seed,
        });
        findings.extend(bad.into_iter().map(|b| format!("{}: {b}", run.family.label())));
    }
    Ok(Outcome { bytes: csv_bytes(&rows)?, findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::NormSpec;

    fn cfg(family: BallFamily, trials: usize, window: i64) -> CoverConfig {
        CoverConfig {
            seed: 5,
            runs: vec![CoverRun {
                family,
                trials,
                targeted_trials: 10,
                sampler: CarpetSampler { window, centers: 12, min_radius: 1, max_radius: 4 },
                doubling_r_max: 8,
            }],
        }
    }

    #[test]
    fn one_dimensional_sup_norm_calibrates_to_two() {
        let out = run_cover(&cfg(NormSpec::linf(1).into(), 300, 40), None).unwrap();
        let text = String::from_utf8(out.bytes).unwrap();
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[3], "2");
        assert!(out.findings.is_empty());
    }

    #[test]
    fn zero_trials_is_usage_error() {
        assert!(matches!(run_cover(&cfg(NormSpec::linf(2).into(), 0, 20), None), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn deterministic_bytes() {
        let c = cfg(NormSpec::l2(2).into(), 30, 30);
        assert_eq!(run_cover(&c, Some(9)).unwrap().bytes, run_cover(&c, Some(9)).unwrap().bytes);
    }
}
