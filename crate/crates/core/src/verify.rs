//! Self-check suite: closed forms against the numeric oracle, W-state
//! constants, φ gradient, volume estimates, CKW and tangle sweeps.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::{
    ckw_residual, eof_from_concurrence, ghz_closed_form_concurrences, reduced_pair_concurrences,
    tangle, w_closed_form_concurrences,
};
use crate::monogamy::evaluate;
use crate::operational::{
    closed_form_accessible_volume, closed_form_source_volume, estimate_accessible_volume,
    estimate_source_volume, phi,
};
use crate::states::{sample_at, FamilyTag, GhzParams, ParamRecord, WParams};

pub const W_EOF: f64 = 0.550048;
pub const W_SCORE: f64 = 0.0923424;
pub const W_TOL: f64 = 1e-5;
pub const ORACLE_TOL: f64 = 1e-9;
pub const PHI_GRADIENT_TOL: f64 = 1e-6;
pub const VOLUME_Z_MAX: f64 = 4.0;
pub const CKW_TOL: f64 = 1e-10;
pub const W_TANGLE_MAX: f64 = 1e-10;

/// Source-volume test points `(g⃗, r)`.
pub const SOURCE_VOLUME_POINTS: [([f64; 3], f64); 3] = [
    ([0.0, 0.0, 0.0], 0.25),
    ([0.25, 0.0, 0.0], 0.5),
    ([0.1, 0.2, 0.0], 0.5),
];
/// Accessible-volume test points `(g⃗, r)`.
pub const ACCESSIBLE_VOLUME_POINTS: [([f64; 3], f64); 3] = [
    ([0.0, 0.0, 0.0], 0.5),
    ([0.25, 0.0, 0.0], 0.5),
    ([0.1, 0.2, 0.0], 1.0),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Samples per family for the oracle, CKW and tangle sweeps.
    pub samples_per_family: usize,
    /// Monte-Carlo draws per volume test point.
    pub volume_samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            samples_per_family: 2_000,
            volume_samples: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Measured deviation, compared against `tolerance`.
    pub deviation: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn at_most(name: impl Into<String>, deviation: f64, tolerance: f64, detail: String) -> Self {
        CheckResult {
            name: name.into(),
            passed: deviation <= tolerance,
            deviation,
            tolerance,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

fn samples(family: FamilyTag, cfg: &VerifyConfig) -> Vec<ParamRecord> {
    (0..cfg.samples_per_family as u64)
        .map(|i| sample_at(family, cfg.seed, i))
        .collect()
}

fn closed_vs_numeric(p: &ParamRecord) -> Result<f64> {
    let closed = match p {
        ParamRecord::Ghz(g) => ghz_closed_form_concurrences(g),
        ParamRecord::W(w) => w_closed_form_concurrences(w),
    };
    Ok(reduced_pair_concurrences(&p.build()?)?.max_abs_diff(&closed))
}

/// Worst closed-form versus Wootters gap over every family.
pub fn check_oracle(cfg: &VerifyConfig) -> Result<CheckResult> {
    let all: Vec<ParamRecord> = FamilyTag::ALL
        .iter()
        .flat_map(|&f| samples(f, cfg))
        .collect();
    let worst = all
        .par_iter()
        .map(closed_vs_numeric)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(CheckResult::at_most(
        "oracle-equivalence",
        worst,
        ORACLE_TOL,
        format!(
            "{} states across {} families",
            all.len(),
            FamilyTag::ALL.len()
        ),
    ))
}

/// `(g⃗ = (0.25, 0, 0), z = 1)` has `C₂₃ = 1/2` by hand.
pub fn check_hand_value() -> Result<CheckResult> {
    let p = GhzParams::real([0.25, 0.0, 0.0], 1.0)?;
    let closed = ghz_closed_form_concurrences(&p).c23;
    let numeric = reduced_pair_concurrences(&ParamRecord::Ghz(p).build()?)?.c23;
    let dev = (closed - 0.5).abs().max((numeric - 0.5).abs());
    Ok(CheckResult::at_most(
        "oracle-hand-value",
        dev,
        1e-12,
        format!("C23 closed {closed}, numeric {numeric}, expected 0.5"),
    ))
}

pub fn check_w_constants() -> Result<Vec<CheckResult>> {
    let third = 1.0 / 3.0;
    let p = ParamRecord::W(WParams::new(0.0, third, third, 1.0 - 2.0 * third)?);
    let r = evaluate(&p)?;
    let eof_dev = [r.e12, r.e13, r.e23]
        .iter()
        .map(|e| (e - W_EOF).abs())
        .fold(0.0, f64::max);
    let score_dev = (r.m1 - W_SCORE).abs().max((r.m2 - W_SCORE).abs());
    Ok(vec![
        CheckResult::at_most(
            "w-state-eof",
            eof_dev,
            W_TOL,
            format!("E12 = {}, expected {W_EOF}", r.e12),
        ),
        CheckResult::at_most(
            "w-state-scores",
            score_dev,
            W_TOL,
            format!("M1 = {}, M2 = {}, expected {W_SCORE}", r.m1, r.m2),
        ),
    ])
}

/// Central differences of `φ` against `−½(ln f)²`, and `φ(1) = 0`.
pub fn check_phi() -> Vec<CheckResult> {
    let h = 1e-5;
    let worst = (1..=9)
        .map(|k| {
            let f = k as f64 / 10.0;
            let fd = (phi(f + h) - phi(f - h)) / (2.0 * h);
            let exact = -0.5 * f.ln().powi(2);
            ((fd - exact) / exact).abs()
        })
        .fold(0.0, f64::max);
    vec![
        CheckResult::at_most(
            "phi-gradient",
            worst,
            PHI_GRADIENT_TOL,
            "relative error at f = 0.1..0.9".into(),
        ),
        CheckResult::at_most("phi-at-one", phi(1.0).abs(), 1e-12, "phi(1)".into()),
    ]
}

/// Monte-Carlo volumes at the closed-form test points, in standard errors.
pub fn check_volumes(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (k, (g, r)) in SOURCE_VOLUME_POINTS.into_iter().enumerate() {
        let p = GhzParams::real(g, r)?;
        let est = estimate_source_volume(&p, cfg.volume_samples, cfg.seed + k as u64)?;
        let want = closed_form_source_volume(&p)?;
        out.push(CheckResult::at_most(
            format!("source-volume g={g:?} r={r}"),
            est.z_score(want),
            VOLUME_Z_MAX,
            format!("estimate {} ± {}, expected {want}", est.mean, est.std_error),
        ));
    }
    for (k, (g, r)) in ACCESSIBLE_VOLUME_POINTS.into_iter().enumerate() {
        let p = GhzParams::real(g, r)?;
        let est = estimate_accessible_volume(&p, cfg.volume_samples, cfg.seed + 10 + k as u64)?;
        let want = closed_form_accessible_volume(&p)?;
        out.push(CheckResult::at_most(
            format!("accessible-volume g={g:?} r={r}"),
            est.z_score(want),
            VOLUME_Z_MAX,
            format!("estimate {} ± {}, expected {want}", est.mean, est.std_error),
        ));
    }
    Ok(out)
}

/// Most negative CKW residual over every family and focus qubit.
pub fn check_ckw(cfg: &VerifyConfig) -> Result<CheckResult> {
    let all: Vec<ParamRecord> = FamilyTag::ALL
        .iter()
        .flat_map(|&f| samples(f, cfg))
        .collect();
    let worst = all
        .par_iter()
        .map(|p| {
            let s = p.build()?;
            let mut m = f64::INFINITY;
            for focus in 1..=3 {
                m = m.min(ckw_residual(&s, focus)?);
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(CheckResult::at_most(
        "ckw-sweep",
        (-worst).max(0.0),
        CKW_TOL,
        format!("min residual {worst:e} over {} states", all.len()),
    ))
}

/// W-class tangles vanish; non-generic GHZ tangles do not.
pub fn check_tangles(cfg: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let tangles = |families: &[FamilyTag]| -> Result<Vec<f64>> {
        families
            .iter()
            .flat_map(|&f| samples(f, cfg))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|p| tangle(&p.build()?))
            .collect()
    };
    let w = tangles(&[FamilyTag::WClass, FamilyTag::WClassMes])?;
    let ghz = tangles(&[
        FamilyTag::GhzAllZero,
        FamilyTag::GhzOneNonzero,
        FamilyTag::GhzTwoNonzero,
    ])?;
    let w_max = w.iter().copied().fold(0.0, f64::max);
    let ghz_min = ghz.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(vec![
        CheckResult::at_most(
            "w-tangle-zero",
            w_max,
            W_TANGLE_MAX,
            format!("max tangle over {} W states", w.len()),
        ),
        CheckResult {
            name: "ghz-tangle-positive".into(),
            passed: ghz_min > 0.0,
            deviation: ghz_min,
            tolerance: 0.0,
            detail: format!("min tangle over {} non-generic GHZ states", ghz.len()),
        },
    ])
}

/// EoF values must be finite and inside `[0, 1]` for concurrences on a grid.
pub fn check_eof_range() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for k in 0..=1000 {
        let e = eof_from_concurrence(k as f64 / 1000.0)?;
        worst = worst.max((-e).max(e - 1.0).max(0.0));
    }
    Ok(CheckResult::at_most(
        "eof-range",
        worst,
        0.0,
        "EoF on a 1001-point concurrence grid".into(),
    ))
}

/// Runs every check.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = vec![check_oracle(cfg)?, check_hand_value()?];
    checks.extend(check_w_constants()?);
    checks.extend(check_phi());
    checks.extend(check_volumes(cfg)?);
    checks.push(check_ckw(cfg)?);
    checks.extend(check_tangles(cfg)?);
    checks.push(check_eof_range()?);
    Ok(VerifyReport {
        config: cfg.clone(),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let cfg = VerifyConfig {
            seed: 1,
            samples_per_family: 200,
            volume_samples: 20_000,
        };
        let report = run(&cfg).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(report.passed);
        assert_eq!(report.checks.len(), 16);
    }

    #[test]
    fn base_two_phi_would_fail_the_gradient_check() {
        let phi2 = |f: f64| {
            let l = f.log2();
            1.0 + f * (l * (1.0 - 0.5 * l) - 1.0)
        };
        let h = 1e-5;
        let f: f64 = 0.5;
        let fd = (phi2(f + h) - phi2(f - h)) / (2.0 * h);
        let exact = -0.5 * f.ln().powi(2);
        assert!(((fd - exact) / exact).abs() > PHI_GRADIENT_TOL);
    }
}
