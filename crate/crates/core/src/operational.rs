//! Source and accessible entanglement, LOCC convertibility inside the GHZ
//! class, and Monte-Carlo estimates of source/accessible volumes.

use std::f64::consts::{FRAC_PI_4, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Complex;
use crate::states::{indexed_rng, FamilyTag, GhzParams, ParamRecord, WParams, G_ZERO_TOL};

/// Tolerance for the equalities in the convertibility conditions.
pub const LOCC_TOL: f64 = 1e-9;
/// `|z|` within this of one is treated as `r = 1`.
pub const R_ONE_TOL: f64 = 1e-12;

/// `(E_s, E_a)` of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperationalPair {
    pub e_s: f64,
    pub e_a: f64,
}

/// Monte-Carlo volume with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`.
    pub std_error: f64,
    pub n: usize,
}

impl VolumeEstimate {
    /// Distance to `expected` in units of the standard error.
    pub fn z_score(&self, expected: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == expected {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - expected).abs() / self.std_error
        }
    }
}

/// `f_z ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct FzValue {
    pub value: f64,
}

/// `f_z = 2|Re(z²)| / (1 + |z|⁴)`.
pub fn f_z(z: Complex) -> Result<FzValue> {
    if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParams(format!("f_z needs 0 < |z|, got {z}")));
    }
    let r2 = z.norm_sqr();
    let value = 2.0 * (z * z).re.abs() / (1.0 + r2 * r2);
    Ok(FzValue {
        value: value.min(1.0),
    })
}

/// `φ(f) = 1 + f[ln f (1 − ½ ln f) − 1]`, with `φ(0) = 1`.
///
/// `φ` falls from 1 at `f → 0⁺` to 0 at `f = 1`; `φ'(f) = −½ (ln f)²`.
pub fn phi(f: f64) -> f64 {
    if f == 0.0 {
        return 1.0;
    }
    let l = f.ln();
    1.0 + f * (l * (1.0 - 0.5 * l) - 1.0)
}

fn is_r_one(r: f64) -> bool {
    (r - 1.0).abs() < R_ONE_TOL
}

fn nonzero_gs(p: &GhzParams) -> Vec<f64> {
    p.g.iter().copied().filter(|&g| g >= G_ZERO_TOL).collect()
}

fn ghz_source(p: &GhzParams) -> f64 {
    let r = p.r();
    let gs = nonzero_gs(p);
    match p.family() {
        FamilyTag::GhzMesAllZero | FamilyTag::GhzMesNonzero => 1.0,
        FamilyTag::GhzAllZero => {
            if is_r_one(r) {
                1.0
            } else {
                r
            }
        }
        FamilyTag::GhzOneNonzero => {
            if is_r_one(r) {
                1.0 - 2.0 * gs[0]
            } else {
                1.0 - 2.0 * gs[0] * (1.0 - r)
            }
        }
        FamilyTag::GhzTwoNonzero => {
            let prod = gs[0] * gs[1];
            if is_r_one(r) {
                1.0 - 4.0 * prod
            } else {
                1.0 - 4.0 * prod * (1.0 - r)
            }
        }
        FamilyTag::GhzGeneric => {
            let f = f_z(p.z).expect("validated params have z != 0");
            1.0 - 8.0 * p.g[0] * p.g[1] * p.g[2] * phi(f.value)
        }
        FamilyTag::WClass | FamilyTag::WClassMes => unreachable!("GHZ params"),
    }
}

fn ghz_accessible(p: &GhzParams) -> f64 {
    let r = p.r();
    let gs = nonzero_gs(p);
    let half = |g: f64| 0.5 - g;
    match p.family() {
        FamilyTag::GhzMesAllZero => 1.0,
        FamilyTag::GhzAllZero => {
            if is_r_one(r) {
                1.0
            } else {
                r
            }
        }
        FamilyTag::GhzOneNonzero => {
            if is_r_one(r) {
                1.0 - 2.0 * gs[0]
            } else {
                2.0 * half(gs[0]) * r
            }
        }
        FamilyTag::GhzTwoNonzero => {
            let base = 4.0 * half(gs[0]) * half(gs[1]);
            if is_r_one(r) {
                base
            } else {
                base * r
            }
        }
        FamilyTag::GhzGeneric | FamilyTag::GhzMesNonzero => {
            half(p.g[0]) * half(p.g[1]) * half(p.g[2])
        }
        FamilyTag::WClass | FamilyTag::WClassMes => unreachable!("GHZ params"),
    }
}

fn w_source(p: &WParams) -> f64 {
    1.0 - p.t.powi(3)
}

fn w_accessible(p: &WParams) -> f64 {
    27.0 * p.x * p.y * p.z
}

/// Source entanglement from the per-family closed forms.
///
/// Non-generic strata use `r = |z|` and switch to their `r = 1` rows when
/// `|z| = 1`; the jump this produces in the one-nonzero stratum is kept.
pub fn source_entanglement(p: &ParamRecord) -> Result<f64> {
    match p {
        ParamRecord::Ghz(g) => {
            let g = GhzParams::new(g.g, g.z)?;
            Ok(ghz_source(&g))
        }
        ParamRecord::W(w) => {
            let w = WParams::new(w.t, w.x, w.y, w.z)?;
            Ok(w_source(&w))
        }
    }
}

/// Accessible entanglement from the per-family closed forms.
pub fn accessible_entanglement(p: &ParamRecord) -> Result<f64> {
    match p {
        ParamRecord::Ghz(g) => {
            let g = GhzParams::new(g.g, g.z)?;
            Ok(ghz_accessible(&g))
        }
        ParamRecord::W(w) => {
            let w = WParams::new(w.t, w.x, w.y, w.z)?;
            Ok(w_accessible(&w))
        }
    }
}

pub fn operational_pair(p: &ParamRecord) -> Result<OperationalPair> {
    Ok(OperationalPair {
        e_s: source_entanglement(p)?,
        e_a: accessible_entanglement(p)?,
    })
}

fn is_zero(g: f64) -> bool {
    g < G_ZERO_TOL
}

/// Whether `from` can be turned into `to` by LOCC, dispatching on which
/// `gᵢ`/`hᵢ` vanish:
///
/// * some `hᵢ = 0`: `gᵢ ≤ hᵢ` and `|z| ≥ |z'|`;
/// * some `gᵢ = 0`, all `hᵢ ≠ 0`: `gᵢ ≤ hᵢ`, `|z| = 1` and `arg z' ∈ {π/4, 3π/4}`;
/// * all nonzero: `gᵢ ≤ hᵢ` and
///   `Πg/Πh = [Re z'²/(1+|z'|⁴)]·[(1+|z|⁴)/Re z²] = [Im z'²/(|z'|⁴−1)]·[(|z|⁴−1)/Im z²]`.
///
/// The ratio conditions are compared cross-multiplied, so a factor that is
/// `0/0` on both sides counts as satisfied.
pub fn locc_convertible(from: &GhzParams, to: &GhzParams) -> bool {
    let dominated = from.g.iter().zip(&to.g).all(|(g, h)| *g <= *h + G_ZERO_TOL);
    if !dominated {
        return false;
    }
    let target_has_zero = to.g.iter().any(|&h| is_zero(h));
    let source_has_zero = from.g.iter().any(|&g| is_zero(g));

    if target_has_zero {
        return from.r() >= to.r() - R_ONE_TOL;
    }
    if source_has_zero {
        if (from.r() - 1.0).abs() > LOCC_TOL {
            return false;
        }
        let phase = to.z.arg();
        return (phase - FRAC_PI_4).abs() < LOCC_TOL || (phase - 3.0 * PI / 4.0).abs() < LOCC_TOL;
    }

    let ratio = from.g.iter().product::<f64>() / to.g.iter().product::<f64>();
    let z2 = from.z * from.z;
    let w2 = to.z * to.z;
    let r4 = from.z.norm_sqr().powi(2);
    let s4 = to.z.norm_sqr().powi(2);
    let real_side = ratio * z2.re * (1.0 + s4) - w2.re * (1.0 + r4);
    let imag_side = ratio * z2.im * (s4 - 1.0) - w2.im * (r4 - 1.0);
    real_side.abs() <= LOCC_TOL && imag_side.abs() <= LOCC_TOL
}

fn require_non_generic(p: &GhzParams) -> Result<GhzParams> {
    let p = GhzParams::new(p.g, p.z)?;
    if !p.family().is_non_generic() {
        return Err(Error::UnsupportedFamily(format!(
            "{} (volume estimates cover the non-generic strata)",
            p.family()
        )));
    }
    Ok(p)
}

fn estimate_from_hits(hits: u64, n: usize, box_volume: f64) -> VolumeEstimate {
    let nf = n as f64;
    let frac = hits as f64 / nf;
    let var = if n > 1 {
        frac * (1.0 - frac) * nf / (nf - 1.0)
    } else {
        0.0
    };
    VolumeEstimate {
        mean: box_volume * frac,
        std_error: box_volume * (var / nf).sqrt(),
        n,
    }
}

/// Monte-Carlo source volume of a non-generic state.
///
/// Sources `(h⃗, r')` are drawn uniformly from the target's own stratum: every
/// coordinate that is nonzero in `p` ranges over `[0, 1/2)`, the others stay
/// zero, and `r'` ranges over `(0, 1]`. The estimate is the box volume times
/// the fraction of draws that convert to `p`.
pub fn estimate_source_volume(p: &GhzParams, n: usize, seed: u64) -> Result<VolumeEstimate> {
    let p = require_non_generic(p)?;
    if n == 0 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    let mask: Vec<bool> = p.g.iter().map(|&g| !is_zero(g)).collect();
    let box_volume = 0.5f64.powi(mask.iter().filter(|&&m| m).count() as i32);
    let hits: u64 = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = indexed_rng(seed, i);
            let mut h = [0.0; 3];
            for (hk, &m) in h.iter_mut().zip(&mask) {
                if m {
                    *hk = rng.random_range(0.0..0.5);
                }
            }
            let r: f64 = 1.0 - rng.random::<f64>();
            let source = GhzParams::real(h, r).expect("draws stay in range");
            u64::from(locc_convertible(&source, &p))
        })
        .sum();
    Ok(estimate_from_hits(hits, n, box_volume))
}

/// Monte-Carlo accessible volume of a non-generic state.
///
/// Targets are drawn from the union of the three strata with exactly one
/// vanishing coordinate: the zero position uniformly from `{1, 2, 3}`, the
/// two other coordinates from `[0, 1/2)`, and `r'` from `(0, 1]`. The box
/// volume is `3 · 1/4 · 1`.
pub fn estimate_accessible_volume(p: &GhzParams, n: usize, seed: u64) -> Result<VolumeEstimate> {
    let p = require_non_generic(p)?;
    if n == 0 {
        return Err(Error::InvalidParams("n must be >= 1".into()));
    }
    let box_volume = 3.0 * 0.25;
    let hits: u64 = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = indexed_rng(seed, i);
            let zero_at = rng.random_range(0..3usize);
            let mut h = [0.0; 3];
            for (k, hk) in h.iter_mut().enumerate() {
                if k != zero_at {
                    *hk = rng.random_range(0.0..0.5);
                }
            }
            let r: f64 = 1.0 - rng.random::<f64>();
            let target = GhzParams::real(h, r).expect("draws stay in range");
            u64::from(locc_convertible(&p, &target))
        })
        .sum();
    Ok(estimate_from_hits(hits, n, box_volume))
}

/// Printed source volume for the non-generic strata, `Π g_nonzero · (1 − r)`.
pub fn closed_form_source_volume(p: &GhzParams) -> Result<f64> {
    let p = require_non_generic(p)?;
    Ok(nonzero_gs(&p).iter().product::<f64>() * (1.0 - p.r()))
}

/// Printed accessible volume for the non-generic strata.
pub fn closed_form_accessible_volume(p: &GhzParams) -> Result<f64> {
    let p = require_non_generic(p)?;
    let gs = nonzero_gs(&p);
    let r = p.r();
    Ok(match gs.len() {
        0 => 3.0 * r / 4.0,
        1 => (0.5 - gs[0]) * r,
        _ => (0.5 - gs[0]) * (0.5 - gs[1]) * r,
    })
}
