//! Monogamy scores `M₁ = E_s² − ΣE_ij²` and `M₂ = E_a² − ΣE_ij²`, preset
//! parameter scans, boundary bisection and seeded batch runs.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{clip_nonnegative, Complex};
use crate::measures::{
    concurrence_pure_bipartition, eof_from_concurrence, generalized_concurrence,
    ghz_closed_form_concurrences, reduced_pair_concurrences, w_closed_form_concurrences,
    ConcurrenceTriple,
};
use crate::operational::operational_pair;
use crate::states::{sample_at, FamilyTag, GhzParams, ParamRecord, SampleSpec};

/// Scores at or above this count as satisfying the inequality.
pub const VERDICT_THRESHOLD: f64 = -1e-12;
/// Largest tolerated gap between closed-form and numeric concurrences.
pub const ORACLE_TOL: f64 = 1e-9;
/// Grid margin that keeps the open bounds `g < 1/2`, `r < 1` out of reach.
pub const GRID_MARGIN: f64 = 1e-4;
pub const DEFAULT_GRID: usize = 201;
/// Bisection stops once the bracket is shorter than this.
pub const BOUNDARY_TOL: f64 = 1e-6;
pub const DEFAULT_R_SLICES: [f64; 3] = [0.25, 0.5, 0.75];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
}

impl Verdict {
    pub fn of(score: f64) -> Verdict {
        if score >= VERDICT_THRESHOLD {
            Verdict::Satisfied
        } else {
            Verdict::Violated
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Satisfied => "satisfied",
            Verdict::Violated => "violated",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Every measure of one state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub family: FamilyTag,
    pub params: ParamRecord,
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
    pub e12: f64,
    pub e13: f64,
    pub e23: f64,
    /// Three-tangle, qubit 1 as focus.
    pub tau: f64,
    /// Generalized concurrence.
    pub c3: f64,
    pub e_s: f64,
    pub e_a: f64,
    pub m1: f64,
    pub m2: f64,
    pub verdict1: Verdict,
    pub verdict2: Verdict,
}

impl MeasureRecord {
    pub fn score(&self, kind: ScoreKind) -> f64 {
        match kind {
            ScoreKind::M1 => self.m1,
            ScoreKind::M2 => self.m2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    M1,
    M2,
}

impl FromStr for ScoreKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "m1" => Ok(ScoreKind::M1),
            "m2" => Ok(ScoreKind::M2),
            other => Err(Error::Parse(format!("unknown score '{other}' (m1 or m2)"))),
        }
    }
}

impl fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreKind::M1 => "m1",
            ScoreKind::M2 => "m2",
        })
    }
}

fn closed_form(params: &ParamRecord) -> ConcurrenceTriple {
    match params {
        ParamRecord::Ghz(p) => ghz_closed_form_concurrences(p),
        ParamRecord::W(p) => w_closed_form_concurrences(p),
    }
}

/// Evaluates all measures of `params`.
///
/// `E_ij` come from the numeric pipeline (state vector, Wootters
/// concurrence, entanglement of formation); the closed-form concurrences
/// must agree within [`ORACLE_TOL`].
pub fn evaluate(params: &ParamRecord) -> Result<MeasureRecord> {
    let state = params.build()?;
    let numeric = reduced_pair_concurrences(&state)?;
    let closed = closed_form(params);
    for ((pair, n), c) in ["c12", "c13", "c23"]
        .into_iter()
        .zip(numeric.as_array())
        .zip(closed.as_array())
    {
        if (n - c).abs() > ORACLE_TOL {
            return Err(Error::OracleMismatch {
                pair,
                closed: c,
                numeric: n,
            });
        }
    }
    let e12 = eof_from_concurrence(numeric.c12)?;
    let e13 = eof_from_concurrence(numeric.c13)?;
    let e23 = eof_from_concurrence(numeric.c23)?;
    let whole = concurrence_pure_bipartition(&state, 1)?;
    let tau = clip_nonnegative(
        whole * whole - numeric.c12 * numeric.c12 - numeric.c13 * numeric.c13,
        "tangle",
    )?;
    let c3 = generalized_concurrence(&state)?;
    let op = operational_pair(params)?;
    let pair_sum = e12 * e12 + e13 * e13 + e23 * e23;
    let m1 = op.e_s * op.e_s - pair_sum;
    let m2 = op.e_a * op.e_a - pair_sum;
    Ok(MeasureRecord {
        family: params.family(),
        params: *params,
        c12: numeric.c12,
        c13: numeric.c13,
        c23: numeric.c23,
        e12,
        e13,
        e23,
        tau,
        c3,
        e_s: op.e_s,
        e_a: op.e_a,
        m1,
        m2,
        verdict1: Verdict::of(m1),
        verdict2: Verdict::of(m2),
    })
}

/// Min/max scores and violation fractions of a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub n: usize,
    pub min_m1: f64,
    pub max_m1: f64,
    pub min_m2: f64,
    pub max_m2: f64,
    pub fraction_m1_violated: f64,
    pub fraction_m2_violated: f64,
}

impl BatchSummary {
    /// Folds `records` in order; `None` for an empty slice.
    pub fn from_records(records: &[MeasureRecord]) -> Option<BatchSummary> {
        if records.is_empty() {
            return None;
        }
        let mut s = BatchSummary {
            n: records.len(),
            min_m1: f64::INFINITY,
            max_m1: f64::NEG_INFINITY,
            min_m2: f64::INFINITY,
            max_m2: f64::NEG_INFINITY,
            fraction_m1_violated: 0.0,
            fraction_m2_violated: 0.0,
        };
        let (mut v1, mut v2) = (0usize, 0usize);
        for r in records {
            s.min_m1 = s.min_m1.min(r.m1);
            s.max_m1 = s.max_m1.max(r.m1);
            s.min_m2 = s.min_m2.min(r.m2);
            s.max_m2 = s.max_m2.max(r.m2);
            v1 += usize::from(r.verdict1 == Verdict::Violated);
            v2 += usize::from(r.verdict2 == Verdict::Violated);
        }
        s.fraction_m1_violated = v1 as f64 / s.n as f64;
        s.fraction_m2_violated = v2 as f64 / s.n as f64;
        Some(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchResult {
    pub records: Vec<MeasureRecord>,
    pub summary: BatchSummary,
}

/// Evaluates `spec.count` seeded samples; records are in index order.
pub fn batch_evaluate(spec: &SampleSpec) -> Result<BatchResult> {
    let spec = SampleSpec::new(spec.family, spec.count, spec.seed)?;
    let records = (0..spec.count as u64)
        .into_par_iter()
        .map(|i| evaluate(&sample_at(spec.family, spec.seed, i)))
        .collect::<Result<Vec<_>>>()?;
    let summary = BatchSummary::from_records(&records).expect("count >= 1");
    Ok(BatchResult { records, summary })
}

/// Named parameter families for region scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CasePreset {
    /// `g⃗ = 0`, axis `r`.
    Case1,
    /// `g⃗ = (g₁, 0, 0)`, axes `(g₁, r)`.
    Case2,
    /// `g⃗ = (g₁, 0, 0)`, `r = 1`, axis `g₁`.
    Case2R1,
    /// `g⃗ = (g₁, g₂, 0)`, axes `(g₁, g₂, r)` with `r` on the slice list.
    Case3,
    /// `g⃗ = (g₁, g₂, 0)`, `r = 1`, axes `(g₁, g₂)`.
    Case3R1,
    /// `g₁ = g₂ = g₃ = g`, `z = iy`, axes `(g, y)`.
    AppendixD1,
    /// `g₁ = g₂ = g₃ = g`, real `z = y`, axes `(g, y)`.
    AppendixD2,
    /// `g₁ = g₂ = g₃ = g`, `z = (1 + i)y` with `y ≤ 1/√2`, axes `(g, y)`.
    AppendixD3,
    /// `g₁ = g₂ = g`, `g₃ = 0`, axes `(g, r)`.
    AppendixB,
    /// `g₁ = g₂ = g₃ = g`, `z = 1`, axis `g`.
    AppendixE,
}

impl CasePreset {
    pub const ALL: [CasePreset; 10] = [
        CasePreset::Case1,
        CasePreset::Case2,
        CasePreset::Case2R1,
        CasePreset::Case3,
        CasePreset::Case3R1,
        CasePreset::AppendixD1,
        CasePreset::AppendixD2,
        CasePreset::AppendixD3,
        CasePreset::AppendixB,
        CasePreset::AppendixE,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CasePreset::Case1 => "case1",
            CasePreset::Case2 => "case2",
            CasePreset::Case2R1 => "case2-r1",
            CasePreset::Case3 => "case3",
            CasePreset::Case3R1 => "case3-r1",
            CasePreset::AppendixD1 => "appendix-d1",
            CasePreset::AppendixD2 => "appendix-d2",
            CasePreset::AppendixD3 => "appendix-d3",
            CasePreset::AppendixB => "appendix-b",
            CasePreset::AppendixE => "appendix-e",
        }
    }

    /// Axes of the preset; `resolution` points on each continuous axis.
    pub fn axes(self, grid: &GridSpec) -> Vec<Axis> {
        let n = grid.resolution;
        let g = |name| Axis::linspace(name, GRID_MARGIN, 0.5 - GRID_MARGIN, n);
        let r = |name| Axis::linspace(name, GRID_MARGIN, 1.0 - GRID_MARGIN, n);
        match self {
            CasePreset::Case1 => vec![r("r")],
            CasePreset::Case2 | CasePreset::AppendixB => vec![g("g1"), r("r")],
            CasePreset::Case2R1 => vec![g("g1")],
            CasePreset::Case3 => vec![g("g1"), g("g2"), Axis::list("r", grid.r_slices.clone())],
            CasePreset::Case3R1 => vec![g("g1"), g("g2")],
            CasePreset::AppendixD1 | CasePreset::AppendixD2 => vec![g("g"), r("y")],
            CasePreset::AppendixD3 => vec![
                g("g"),
                Axis::linspace("y", GRID_MARGIN, 0.5f64.sqrt() - GRID_MARGIN, n),
            ],
            CasePreset::AppendixE => vec![g("g")],
        }
    }

    /// Parameters at axis coordinates `x` (one entry per axis).
    pub fn params_at(self, x: &[f64]) -> Result<ParamRecord> {
        let want = match self {
            CasePreset::Case1 | CasePreset::Case2R1 | CasePreset::AppendixE => 1,
            CasePreset::Case3 => 3,
            _ => 2,
        };
        if x.len() != want {
            return Err(Error::InvalidParams(format!(
                "{} takes {want} coordinates, got {}",
                self.as_str(),
                x.len()
            )));
        }
        let p = match self {
            CasePreset::Case1 => GhzParams::real([0.0; 3], x[0])?,
            CasePreset::Case2 => GhzParams::real([x[0], 0.0, 0.0], x[1])?,
            CasePreset::Case2R1 => GhzParams::real([x[0], 0.0, 0.0], 1.0)?,
            CasePreset::Case3 => GhzParams::real([x[0], x[1], 0.0], x[2])?,
            CasePreset::Case3R1 => GhzParams::real([x[0], x[1], 0.0], 1.0)?,
            CasePreset::AppendixD1 => GhzParams::new([x[0]; 3], Complex::new(0.0, x[1]))?,
            CasePreset::AppendixD2 => GhzParams::real([x[0]; 3], x[1])?,
            CasePreset::AppendixD3 => GhzParams::new([x[0]; 3], Complex::new(x[1], x[1]))?,
            CasePreset::AppendixB => GhzParams::real([x[0], x[0], 0.0], x[1])?,
            CasePreset::AppendixE => GhzParams::real([x[0]; 3], 1.0)?,
        };
        Ok(ParamRecord::Ghz(p))
    }
}

impl fmt::Display for CasePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CasePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = match key.as_str() {
            "appendixb" => "appendix-b",
            "appendixe" => "appendix-e",
            "appendixd1" => "appendix-d1",
            "appendixd2" => "appendix-d2",
            "appendixd3" => "appendix-d3",
            other => other,
        };
        CasePreset::ALL
            .into_iter()
            .find(|c| c.as_str() == key)
            .ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

/// One grid axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub points: Vec<f64>,
}

impl Axis {
    /// `n ≥ 2` evenly spaced points, both ends included.
    pub fn linspace(name: &str, lo: f64, hi: f64, n: usize) -> Axis {
        let step = (hi - lo) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
        points[n - 1] = hi;
        Axis {
            name: name.to_string(),
            points,
        }
    }

    pub fn list(name: &str, points: Vec<f64>) -> Axis {
        Axis {
            name: name.to_string(),
            points,
        }
    }

    pub fn lo(&self) -> f64 {
        self.points[0]
    }

    pub fn hi(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Points per continuous axis, at least 2.
    pub resolution: usize,
    /// `r` values of the `case3` slices.
    pub r_slices: Vec<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: DEFAULT_GRID,
            r_slices: DEFAULT_R_SLICES.to_vec(),
        }
    }
}

impl GridSpec {
    pub fn new(resolution: usize) -> Result<GridSpec> {
        let spec = GridSpec {
            resolution,
            ..GridSpec::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::InvalidParams(format!(
                "grid resolution must be >= 2, got {}",
                self.resolution
            )));
        }
        if self.r_slices.is_empty()
            || self
                .r_slices
                .iter()
                .any(|r| !r.is_finite() || *r <= 0.0 || *r > 1.0)
        {
            return Err(Error::InvalidParams(
                "r slices must be non-empty and inside (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanCell {
    pub coords: Vec<f64>,
    pub record: MeasureRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub case: CasePreset,
    pub axes: Vec<Axis>,
    /// Row-major: the last axis varies fastest.
    pub cells: Vec<ScanCell>,
}

impl ScanResult {
    pub fn records(&self) -> impl Iterator<Item = &MeasureRecord> {
        self.cells.iter().map(|c| &c.record)
    }
}

fn unravel(mut flat: usize, axes: &[Axis]) -> Vec<f64> {
    let mut coords = vec![0.0; axes.len()];
    for (k, axis) in axes.iter().enumerate().rev() {
        let n = axis.points.len();
        coords[k] = axis.points[flat % n];
        flat /= n;
    }
    coords
}

/// Evaluates the preset on its full grid.
pub fn scan_region(case: CasePreset, grid: &GridSpec) -> Result<ScanResult> {
    grid.validate()?;
    let axes = case.axes(grid);
    let total: usize = axes.iter().map(|a| a.points.len()).product();
    let cells = (0..total)
        .into_par_iter()
        .map(|flat| {
            let coords = unravel(flat, &axes);
            let record = evaluate(&case.params_at(&coords)?)?;
            Ok(ScanCell { coords, record })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanResult { case, axes, cells })
}

/// Root of `score` along the first axis of `case`, with the remaining axes
/// pinned to `fixed`.
///
/// The axis is sampled at `grid.resolution` points and the first sign change
/// is bisected until the bracket is shorter than [`BOUNDARY_TOL`].
pub fn find_boundary(
    case: CasePreset,
    fixed: &[f64],
    score: ScoreKind,
    grid: &GridSpec,
) -> Result<f64> {
    grid.validate()?;
    let axes = case.axes(grid);
    if fixed.len() + 1 != axes.len() {
        return Err(Error::InvalidParams(format!(
            "{} scans along {} and needs {} fixed coordinates, got {}",
            case.as_str(),
            axes[0].name,
            axes.len() - 1,
            fixed.len()
        )));
    }
    let f = |x: f64| -> Result<f64> {
        let mut coords = Vec::with_capacity(axes.len());
        coords.push(x);
        coords.extend_from_slice(fixed);
        Ok(evaluate(&case.params_at(&coords)?)?.score(score))
    };
    let points = Axis::linspace("", axes[0].lo(), axes[0].hi(), grid.resolution).points;
    let mut prev = (points[0], f(points[0])?);
    for &x in &points[1..] {
        let cur = (x, f(x)?);
        if prev.1 == 0.0 {
            return Ok(prev.0);
        }
        if prev.1.signum() != cur.1.signum() {
            let (mut lo, mut hi) = (prev.0, cur.0);
            let lo_sign = prev.1.signum();
            while hi - lo >= BOUNDARY_TOL {
                let mid = 0.5 * (lo + hi);
                let v = f(mid)?;
                if v == 0.0 {
                    return Ok(mid);
                }
                if v.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        prev = cur;
    }
    Err(Error::NoSignChange)
}
