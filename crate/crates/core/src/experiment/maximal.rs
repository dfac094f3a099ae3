use serde::{Deserialize, Serialize};

use super::{default_seed, json_bytes, Outcome};
use crate::covering::{
    certify_besicovitch, multiplicity, staircase_balls, BallFamily, BesicovitchCertificate, CarpetSampler,
};
use crate::error::{Error, Result};
use crate::exact::{self, Rational};
use crate::geometry::Point;
use crate::maximal::{
    staircase_witness, weak_type_trials, witness_validate, WeakTypeReport, WeakTypeTrials, WitnessPackage,
    WitnessReport,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaircaseSweep {
    pub k_from: u64,
    pub k_to: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySpec {
    pub sampler: CarpetSampler,
    pub random_trials: usize,
    pub targeted_trials: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakTypeSpec {
    pub family: BallFamily,
    pub trials: usize,
    pub params: WeakTypeTrials,
    /// Constant to test; certified from `certify` when absent.
    #[serde(default, with = "exact::serde_rat_opt")]
    pub m_cert: Option<Rational>,
    #[serde(default)]
    pub certify: Option<CertifySpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximalConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(with = "exact::serde_rat")]
    pub m: Rational,
    #[serde(default)]
    pub staircase: Option<StaircaseSweep>,
    #[serde(default)]
    pub packages: Vec<WitnessPackage>,
    #[serde(default)]
    pub weak_type: Option<WeakTypeSpec>,
}

#[derive(Serialize)]
struct StaircaseRow {
    k: u64,
    multiplicity: usize,
    valid: bool,
    #[serde(with = "exact::serde_rat_opt")]
    score: Option<Rational>,
    #[serde(with = "exact::serde_rat_opt")]
    score_over_k: Option<Rational>,
}

#[derive(Serialize)]
struct WeakTypeOut {
    family: String,
    certificate: Option<BesicovitchCertificate>,
    report: WeakTypeReport,
}

#[derive(Serialize)]
struct Report {
    #[serde(with = "exact::serde_rat")]
    m: Rational,
    staircase: Vec<StaircaseRow>,
    packages: Vec<WitnessReport>,
    weak_type: Option<WeakTypeOut>,
}

/// Staircase sweep, validation of supplied packages, and weak-type trials
/// against a certified constant, as one JSON report.
pub fn run_maximal(cfg: &MaximalConfig, seed: Option<u64>) -> Result<Outcome> {
    let seed = seed.unwrap_or(cfg.seed);
    let mut findings = Vec::new();
    let mut staircase = Vec::new();
    if let Some(s) = &cfg.staircase {
        if s.k_from > s.k_to {
            return Err(Error::invalid("k_from exceeds k_to"));
        }
        let cube = BallFamily::one_sided_cube(2);
        for k in s.k_from..=s.k_to {
            let w = staircase_witness(k, &cfg.m)?;
            let r = witness_validate(&w, &cfg.m)?;
            let mult = multiplicity(&cube, &staircase_balls(k), Some(&[Point::origin(2)]))?;
            if !r.valid {
                findings.push(format!("staircase K = {k} fails validation"));
            }
            staircase.push(StaircaseRow {
                k,
                multiplicity: mult,
                valid: r.valid,
                score_over_k: r.score.as_ref().map(|s| s / exact::int(k as i64)),
                score: r.score,
            });
        }
    }
    let mut packages = Vec::new();
    for (i, p) in cfg.packages.iter().enumerate() {
        let r = witness_validate(p, &cfg.m)?;
        if let Some(f) = &r.first_failure {
            findings.push(format!(
                "package {i}: {} {} {} fails (lhs {}, rhs {})",
                f.label, f.relation, f.rhs, f.lhs, f.rhs
            ));
        }
        packages.push(r);
    }
    let weak_type = match &cfg.weak_type {
        Some(wt) => {
            let (certificate, m_cert) = match (&wt.m_cert, &wt.certify) {
                (Some(m), _) => (None, m.clone()),
                (None, Some(c)) => {
                    let cert = certify_besicovitch(&wt.family, &c.sampler, c.random_trials, c.targeted_trials, seed)?;
                    let m = exact::int(cert.c as i64);
                    (Some(cert), m)
                }
                (None, None) => return Err(Error::invalid("weak-type trials need m_cert or a certify block")),
            };
            let report = weak_type_trials(&wt.family, &wt.params, wt.trials, &m_cert, seed)?;
            for i in &report.violations {
                findings.push(format!("weak-type trial {i} exceeds M = {}", exact::fmt_rational(&m_cert)));
            }
            Some(WeakTypeOut { family: wt.family.label(), certificate, report })
        }
        None => None,
    };
    let report = Report { m: cfg.m.clone(), staircase, packages, weak_type };
    Ok(Outcome { bytes: json_bytes(&report)?, findings })
}
