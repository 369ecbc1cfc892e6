//! Canonical three-qubit states of the GHZ and W classes, their family
//! classification, and seeded parameter sampling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron_vec, CVector, Complex, NORM_TOL};

/// `gᵢ` counts as zero below this.
pub const G_ZERO_TOL: f64 = 1e-12;
/// `z` counts as `±1` when within this distance.
pub const Z_UNIT_TOL: f64 = 1e-12;
/// Tolerance on `t + x + y + z = 1`.
pub const W_SUM_TOL: f64 = 1e-12;

const G_SAMPLE_MAX: f64 = 0.5 - 1e-6;
const R_SAMPLE_MIN: f64 = 1e-6;
const R_SAMPLE_MAX: f64 = 1.0 - 1e-6;
const Z_SAMPLE_MIN_ABS: f64 = 1e-6;
const Z_SAMPLE_UNIT_GAP: f64 = 1e-9;
const W_SAMPLE_FLOOR: f64 = 1e-9;

/// Canonical GHZ-class coordinates `(g₁, g₂, g₃, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhzParams {
    pub g: [f64; 3],
    pub z: Complex,
}

impl GhzParams {
    /// Validates `gᵢ ∈ [0, 1/2)` and `0 < |z| ≤ 1`.
    pub fn new(g: [f64; 3], z: Complex) -> Result<Self> {
        const NAMES: [&str; 3] = ["g1", "g2", "g3"];
        for (gi, name) in g.iter().zip(NAMES) {
            if !gi.is_finite() || *gi < 0.0 || *gi >= 0.5 {
                return Err(Error::InvalidParams(format!(
                    "{name} out of [0, 0.5): {gi}"
                )));
            }
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidParams("z is not finite".into()));
        }
        let abs = z.norm();
        if abs == 0.0 {
            return Err(Error::InvalidParams("|z| must be positive".into()));
        }
        if abs > 1.0 + 1e-12 {
            return Err(Error::InvalidParams(format!("|z| = {abs} exceeds 1")));
        }
        let p = Self { g, z };
        let k = p.normalizer();
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "normalizer k = {k} is not positive"
            )));
        }
        Ok(p)
    }

    /// Non-generic form with real `z = r`.
    pub fn real(g: [f64; 3], r: f64) -> Result<Self> {
        Self::new(g, Complex::new(r, 0.0))
    }

    /// `k = (1 + |z|⁴ + 2·Re(z²)·8·g₁g₂g₃) / (8|z|²)`.
    pub fn normalizer(&self) -> f64 {
        let r2 = self.z.norm_sqr();
        let re_z2 = (self.z * self.z).re;
        let gprod = self.g[0] * self.g[1] * self.g[2];
        (1.0 + r2 * r2 + 2.0 * re_z2 * 8.0 * gprod) / (8.0 * r2)
    }

    /// `r = |z|`.
    pub fn r(&self) -> f64 {
        self.z.norm()
    }

    pub fn nonzero_count(&self) -> usize {
        self.g.iter().filter(|&&gi| gi >= G_ZERO_TOL).count()
    }

    pub fn is_z_unit_real(&self) -> bool {
        (self.z - 1.0).norm() < Z_UNIT_TOL || (self.z + 1.0).norm() < Z_UNIT_TOL
    }

    pub fn family(&self) -> FamilyTag {
        classify_ghz(self)
    }
}

/// W-class coefficients of `√t|000⟩ + √x|100⟩ + √y|010⟩ + √z|001⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WParams {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl WParams {
    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        if ![t, x, y, z].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams("W coefficients must be finite".into()));
        }
        if t < 0.0 {
            return Err(Error::InvalidParams(format!("t must be >= 0, got {t}")));
        }
        for (name, v) in [("x", x), ("y", y), ("z", z)] {
            if v <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be > 0, got {v}")));
            }
        }
        let sum = t + x + y + z;
        if (sum - 1.0).abs() > W_SUM_TOL {
            return Err(Error::InvalidParams(format!(
                "t + x + y + z must equal 1, got {sum}"
            )));
        }
        Ok(Self { t, x, y, z })
    }

    pub fn family(&self) -> FamilyTag {
        if self.t == 0.0 {
            FamilyTag::WClassMes
        } else {
            FamilyTag::WClass
        }
    }
}

/// State family, following the GHZ strata and the W class split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    GhzAllZero,
    GhzOneNonzero,
    GhzTwoNonzero,
    GhzGeneric,
    GhzMesNonzero,
    GhzMesAllZero,
    #[serde(rename = "w")]
    WClass,
    #[serde(rename = "w-mes")]
    WClassMes,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 8] = [
        FamilyTag::GhzAllZero,
        FamilyTag::GhzOneNonzero,
        FamilyTag::GhzTwoNonzero,
        FamilyTag::GhzGeneric,
        FamilyTag::GhzMesNonzero,
        FamilyTag::GhzMesAllZero,
        FamilyTag::WClass,
        FamilyTag::WClassMes,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::GhzAllZero => "ghz-all-zero",
            FamilyTag::GhzOneNonzero => "ghz-one-nonzero",
            FamilyTag::GhzTwoNonzero => "ghz-two-nonzero",
            FamilyTag::GhzGeneric => "ghz-generic",
            FamilyTag::GhzMesNonzero => "ghz-mes-nonzero",
            FamilyTag::GhzMesAllZero => "ghz-mes-all-zero",
            FamilyTag::WClass => "w",
            FamilyTag::WClassMes => "w-mes",
        }
    }

    pub fn is_w(self) -> bool {
        matches!(self, FamilyTag::WClass | FamilyTag::WClassMes)
    }

    /// Non-generic strata, i.e. at least one `gᵢ = 0`.
    pub fn is_non_generic(self) -> bool {
        matches!(
            self,
            FamilyTag::GhzAllZero
                | FamilyTag::GhzOneNonzero
                | FamilyTag::GhzTwoNonzero
                | FamilyTag::GhzMesAllZero
        )
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family '{s}'")))
    }
}

/// Classifies GHZ-class parameters.
///
/// MES membership needs `z = ±1` together with all or none of the `gᵢ`
/// vanishing. Every other state with all `gᵢ ≠ 0` is generic; the remaining
/// ones are non-generic and are sorted by how many `gᵢ` are nonzero.
pub fn classify_ghz(p: &GhzParams) -> FamilyTag {
    let nonzero = p.nonzero_count();
    let unit = p.is_z_unit_real();
    match (nonzero, unit) {
        (0, true) => FamilyTag::GhzMesAllZero,
        (3, true) => FamilyTag::GhzMesNonzero,
        (3, false) => FamilyTag::GhzGeneric,
        (0, false) => FamilyTag::GhzAllZero,
        (1, _) => FamilyTag::GhzOneNonzero,
        _ => FamilyTag::GhzTwoNonzero,
    }
}

/// Parameters for either class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamRecord {
    Ghz(GhzParams),
    W(WParams),
}

impl ParamRecord {
    pub fn family(&self) -> FamilyTag {
        match self {
            ParamRecord::Ghz(p) => p.family(),
            ParamRecord::W(p) => p.family(),
        }
    }

    pub fn build(&self) -> Result<PureState3Q> {
        match self {
            ParamRecord::Ghz(p) => build_ghz(p),
            ParamRecord::W(p) => build_w(p),
        }
    }
}

impl From<GhzParams> for ParamRecord {
    fn from(p: GhzParams) -> Self {
        ParamRecord::Ghz(p)
    }
}

impl From<WParams> for ParamRecord {
    fn from(p: WParams) -> Self {
        ParamRecord::W(p)
    }
}

/// Normalized three-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState3Q {
    vector: CVector,
}

impl PureState3Q {
    pub fn new(amplitudes: [Complex; 8]) -> Result<Self> {
        let vector = CVector::new(amplitudes.to_vec())?;
        let dev = (vector.norm_sqr() - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::NotNormalized(dev));
        }
        Ok(Self { vector })
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn amplitudes(&self) -> &[Complex] {
        self.vector.as_slice()
    }

    /// Relabels qubits: qubit `i` of `self` becomes qubit `perm[i-1]` of the result.
    pub fn permute_qubits(&self, perm: [usize; 3]) -> Result<Self> {
        let mut sorted = perm;
        sorted.sort_unstable();
        if sorted != [1, 2, 3] {
            return Err(Error::InvalidParams(format!(
                "not a permutation of 1..=3: {perm:?}"
            )));
        }
        let mut out = [Complex::new(0.0, 0.0); 8];
        for (index, amp) in self.amplitudes().iter().enumerate() {
            let mut target = 0usize;
            for (q, &dest) in perm.iter().enumerate() {
                let bit = (index >> (2 - q)) & 1;
                target |= bit << (3 - dest);
            }
            out[target] = *amp;
        }
        Self::new(out)
    }
}

fn g_column(g: f64, branch: usize) -> Result<CVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let col = if branch == 0 {
        [Complex::new(h, 0.0), Complex::new(0.0, 0.0)]
    } else {
        [
            Complex::new(2f64.sqrt() * g, 0.0),
            Complex::new(h * (1.0 - 4.0 * g * g).sqrt(), 0.0),
        ]
    };
    CVector::new(col.to_vec())
}

/// `(1/√k)·(g¹⊗g²⊗g³)·P_z(|000⟩ + |111⟩)`.
///
/// `P_z` is diagonal on a superposition of `|000⟩` and `|111⟩`, so it enters
/// as the branch weights `z` and `1/z`; each local `gⁱ` acts on the branch by
/// contributing its first or second column.
pub fn build_ghz(p: &GhzParams) -> Result<PureState3Q> {
    let p = GhzParams::new(p.g, p.z)?;
    let scale = 1.0 / p.normalizer().sqrt();
    let mut amps = [Complex::new(0.0, 0.0); 8];
    for (branch, weight) in [(0usize, p.z), (1usize, p.z.inv())] {
        let v = kron_vec(
            &kron_vec(&g_column(p.g[0], branch)?, &g_column(p.g[1], branch)?)?,
            &g_column(p.g[2], branch)?,
        )?;
        for (a, x) in amps.iter_mut().zip(v.as_slice()) {
            *a += weight * x * scale;
        }
    }
    PureState3Q::new(amps)
}

/// `√t|000⟩ + √x|100⟩ + √y|010⟩ + √z|001⟩`.
pub fn build_w(p: &WParams) -> Result<PureState3Q> {
    let p = WParams::new(p.t, p.x, p.y, p.z)?;
    let mut amps = [Complex::new(0.0, 0.0); 8];
    amps[0] = Complex::new(p.t.sqrt(), 0.0);
    amps[4] = Complex::new(p.x.sqrt(), 0.0);
    amps[2] = Complex::new(p.y.sqrt(), 0.0);
    amps[1] = Complex::new(p.z.sqrt(), 0.0);
    PureState3Q::new(amps)
}

/// What to sample: `count` records of one family from one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub family: FamilyTag,
    pub count: usize,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(family: FamilyTag, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParams("sample count must be >= 1".into()));
        }
        Ok(Self {
            family,
            count,
            seed,
        })
    }
}

/// ChaCha8 seeded from `seed` with the stream selected by `index`, so each
/// sample depends on `(seed, index)` only.
pub fn indexed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn draw_nonzero_g(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let g = rng.random_range(0.0..=G_SAMPLE_MAX);
        if g >= G_ZERO_TOL {
            return g;
        }
    }
}

fn draw_r(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(R_SAMPLE_MIN..R_SAMPLE_MAX)
}

fn draw_generic_z(rng: &mut ChaCha8Rng) -> Complex {
    loop {
        let z = Complex::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        let abs = z.norm();
        if (Z_SAMPLE_MIN_ABS..=1.0).contains(&abs)
            && (z - 1.0).norm() >= Z_SAMPLE_UNIT_GAP
            && (z + 1.0).norm() >= Z_SAMPLE_UNIT_GAP
        {
            return z;
        }
    }
}

/// Uniform point on the simplex with `k` coordinates, via normalized exponentials.
fn draw_simplex<const K: usize>(rng: &mut ChaCha8Rng) -> [f64; K] {
    let mut e = [0.0; K];
    for v in e.iter_mut() {
        // 1 - u lies in (0, 1], so the log is finite
        let u: f64 = rng.random();
        *v = -(1.0 - u).ln();
    }
    let sum: f64 = e.iter().sum();
    e.map(|v| v / sum)
}

/// The `index`-th sample of a family stream.
pub fn sample_at(family: FamilyTag, seed: u64, index: u64) -> ParamRecord {
    let mut rng = indexed_rng(seed, index);
    let rng = &mut rng;
    let ghz = |g: [f64; 3], z: Complex| {
        ParamRecord::Ghz(GhzParams::new(g, z).expect("sampler draws valid GHZ parameters"))
    };
    match family {
        FamilyTag::GhzAllZero => ghz([0.0; 3], Complex::new(draw_r(rng), 0.0)),
        FamilyTag::GhzOneNonzero => {
            let g1 = draw_nonzero_g(rng);
            ghz([g1, 0.0, 0.0], Complex::new(draw_r(rng), 0.0))
        }
        FamilyTag::GhzTwoNonzero => {
            let g1 = draw_nonzero_g(rng);
            let g2 = draw_nonzero_g(rng);
            ghz([g1, g2, 0.0], Complex::new(draw_r(rng), 0.0))
        }
        FamilyTag::GhzGeneric => {
            let g = [
                draw_nonzero_g(rng),
                draw_nonzero_g(rng),
                draw_nonzero_g(rng),
            ];
            ghz(g, draw_generic_z(rng))
        }
        FamilyTag::GhzMesNonzero => {
            let g = [
                draw_nonzero_g(rng),
                draw_nonzero_g(rng),
                draw_nonzero_g(rng),
            ];
            ghz(g, Complex::new(1.0, 0.0))
        }
        FamilyTag::GhzMesAllZero => ghz([0.0; 3], Complex::new(1.0, 0.0)),
        FamilyTag::WClass => loop {
            let [t, x, y, z] = draw_simplex::<4>(rng);
            if x >= W_SAMPLE_FLOOR && y >= W_SAMPLE_FLOOR && z >= W_SAMPLE_FLOOR && t > 0.0 {
                if let Ok(p) = WParams::new(t, x, y, z) {
                    break ParamRecord::W(p);
                }
            }
        },
        FamilyTag::WClassMes => loop {
            let [x, y, z] = draw_simplex::<3>(rng);
            if x >= W_SAMPLE_FLOOR && y >= W_SAMPLE_FLOOR && z >= W_SAMPLE_FLOOR {
                if let Ok(p) = WParams::new(0.0, x, y, z) {
                    break ParamRecord::W(p);
                }
            }
        },
    }
}

/// Deterministic parameter sequence for `spec`, in index order.
pub fn sample_family(spec: &SampleSpec) -> Vec<ParamRecord> {
    (0..spec.count as u64)
        .map(|i| sample_at(spec.family, spec.seed, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, CMatrix};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    /// Independent route: the full 8x8 operator g¹⊗g²⊗g³ applied to the
    /// explicit vector z|000⟩ + z⁻¹|111⟩, normalized by its own norm.
    fn ghz_by_operator(g: [f64; 3], z: Complex) -> (Vec<Complex>, f64) {
        let gx = |gi: f64| {
            CMatrix::from_real(
                2,
                &[
                    std::f64::consts::FRAC_1_SQRT_2,
                    2f64.sqrt() * gi,
                    0.0,
                    std::f64::consts::FRAC_1_SQRT_2 * (1.0 - 4.0 * gi * gi).sqrt(),
                ],
            )
            .unwrap()
        };
        let op = kron(&gx(g[0]), &kron(&gx(g[1]), &gx(g[2])).unwrap()).unwrap();
        let mut base = vec![c(0.0, 0.0); 8];
        base[0] = z;
        base[7] = z.inv();
        let v = op.apply(&CVector::new(base).unwrap()).unwrap();
        let n = v.norm_sqr();
        (v.as_slice().iter().map(|a| a / n.sqrt()).collect(), n)
    }

    #[test]
    fn ghz_state_from_zero_parameters() {
        let s = build_ghz(&GhzParams::real([0.0; 3], 1.0).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (i, a) in s.amplitudes().iter().enumerate() {
            let want = if i == 0 || i == 7 { h } else { 0.0 };
            assert!((a - c(want, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn ghz_state_quarter_g1() {
        let p = GhzParams::real([0.25, 0.0, 0.0], 1.0).unwrap();
        assert!((p.normalizer() - 0.25).abs() < 1e-15);
        let s = build_ghz(&p).unwrap();
        let a = s.amplitudes();
        assert!((a[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6);
        assert!((a[3].re - 0.353553).abs() < 1e-6);
        assert!((a[7].re - 0.612372).abs() < 1e-6);
        for i in [1, 2, 4, 5, 6] {
            assert_eq!(a[i], c(0.0, 0.0));
        }
    }

    #[test]
    fn ghz_matches_operator_construction() {
        let cases = [
            ([0.1, 0.2, 0.3], c(0.3, -0.4)),
            ([0.49, 0.0, 0.05], c(0.2, 0.0)),
            ([0.45, 0.45, 0.45], c(-0.7, 0.7)),
        ];
        for (g, z) in cases {
            let p = GhzParams::new(g, z).unwrap();
            let s = build_ghz(&p).unwrap();
            let (oracle, n) = ghz_by_operator(g, z);
            assert!((n - p.normalizer()).abs() < 1e-12 * n.max(1.0));
            for (a, b) in s.amplitudes().iter().zip(&oracle) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ghz_rejects_bad_parameters() {
        assert!(GhzParams::new([0.6, 0.0, 0.0], c(1.0, 0.0)).is_err());
        assert!(GhzParams::new([0.5, 0.0, 0.0], c(1.0, 0.0)).is_err());
        assert!(GhzParams::new([-0.1, 0.0, 0.0], c(1.0, 0.0)).is_err());
        assert!(GhzParams::new([0.1, 0.0, 0.0], c(0.0, 0.0)).is_err());
        assert!(GhzParams::new([0.1, 0.0, 0.0], c(1.0, 1.0)).is_err());
        let err = GhzParams::new([0.6, 0.0, 0.0], c(1.0, 0.0)).unwrap_err();
        assert!(err.to_string().contains("g1 out of [0, 0.5)"));
    }

    #[test]
    fn w_state_construction() {
        let third = 1.0 / 3.0;
        let s = build_w(&WParams::new(0.0, third, third, third).unwrap()).unwrap();
        let a = s.amplitudes();
        for i in [1, 2, 4] {
            assert!((a[i].re - third.sqrt()).abs() < 1e-15);
        }
        assert_eq!(a[0], c(0.0, 0.0));

        let s = build_w(&WParams::new(0.4, 0.3, 0.2, 0.1).unwrap()).unwrap();
        let a = s.amplitudes();
        assert_eq!(a[0].re, 0.4f64.sqrt());
        assert_eq!(a[4].re, 0.3f64.sqrt());
        assert_eq!(a[2].re, 0.2f64.sqrt());
        assert_eq!(a[1].re, 0.1f64.sqrt());
    }

    #[test]
    fn w_rejects_boundary() {
        assert!(WParams::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(WParams::new(0.5, 0.2, 0.2, 0.2).is_err());
        assert!(WParams::new(-0.1, 0.5, 0.3, 0.3).is_err());
    }

    #[test]
    fn classification_examples() {
        let mes0 = GhzParams::real([0.0; 3], 1.0).unwrap();
        assert_eq!(classify_ghz(&mes0), FamilyTag::GhzMesAllZero);
        let mes = GhzParams::real([0.1, 0.2, 0.3], 1.0).unwrap();
        assert_eq!(classify_ghz(&mes), FamilyTag::GhzMesNonzero);
        let z = Complex::from_polar(0.5, std::f64::consts::PI / 6.0);
        let gen = GhzParams::new([0.1, 0.2, 0.3], z).unwrap();
        assert_eq!(classify_ghz(&gen), FamilyTag::GhzGeneric);
        let minus = GhzParams::real([0.1, 0.2, 0.3], -1.0).unwrap();
        assert_eq!(classify_ghz(&minus), FamilyTag::GhzMesNonzero);
        assert_eq!(
            classify_ghz(&GhzParams::real([0.0, 0.3, 0.0], 1.0).unwrap()),
            FamilyTag::GhzOneNonzero
        );
        assert_eq!(
            classify_ghz(&GhzParams::real([0.0, 0.3, 0.1], 0.4).unwrap()),
            FamilyTag::GhzTwoNonzero
        );
        assert_eq!(
            classify_ghz(&GhzParams::real([0.0; 3], 0.4).unwrap()),
            FamilyTag::GhzAllZero
        );
    }

    #[test]
    fn classification_is_stable_under_tiny_perturbations() {
        let p = GhzParams::new([0.1, 0.2, 0.3], c(1.0 - 1e-15, 1e-16)).unwrap();
        assert_eq!(classify_ghz(&p), FamilyTag::GhzMesNonzero);
        let q = GhzParams::new([1e-15, 0.2, 0.3], c(1.0, 0.0)).unwrap();
        assert_eq!(classify_ghz(&q), FamilyTag::GhzTwoNonzero);
    }

    #[test]
    fn family_names_round_trip() {
        for f in FamilyTag::ALL {
            assert_eq!(f.as_str().parse::<FamilyTag>().unwrap(), f);
        }
        assert!("ghz".parse::<FamilyTag>().is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_index_addressable() {
        let spec = SampleSpec::new(FamilyTag::GhzGeneric, 50, 9).unwrap();
        let a = sample_family(&spec);
        let b = sample_family(&spec);
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(a[17], sample_at(FamilyTag::GhzGeneric, 9, 17));
        let other = sample_family(&SampleSpec::new(FamilyTag::GhzGeneric, 50, 10).unwrap());
        assert_ne!(a, other);
        assert!(SampleSpec::new(FamilyTag::WClass, 0, 1).is_err());
    }

    #[test]
    fn every_sample_lands_in_its_family() {
        for family in FamilyTag::ALL {
            let spec = SampleSpec::new(family, 2000, 3).unwrap();
            for rec in sample_family(&spec) {
                assert_eq!(rec.family(), family);
                let s = rec.build().unwrap();
                assert!((s.vector().norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn generic_g1_mean_matches_uniform_law() {
        let spec = SampleSpec::new(FamilyTag::GhzGeneric, 10_000, 42).unwrap();
        let g1: Vec<f64> = sample_family(&spec)
            .iter()
            .map(|r| match r {
                ParamRecord::Ghz(p) => p.g[0],
                ParamRecord::W(_) => unreachable!(),
            })
            .collect();
        let (mean, se) = mean_and_se(&g1);
        assert!((mean - 0.25).abs() < 5.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn w_t_mean_matches_dirichlet_marginal() {
        let spec = SampleSpec::new(FamilyTag::WClass, 10_000, 42).unwrap();
        let t: Vec<f64> = sample_family(&spec)
            .iter()
            .map(|r| match r {
                ParamRecord::W(p) => p.t,
                ParamRecord::Ghz(_) => unreachable!(),
            })
            .collect();
        let (mean, se) = mean_and_se(&t);
        assert!((mean - 0.25).abs() < 5.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn permuting_qubits_moves_amplitudes() {
        let s = build_w(&WParams::new(0.4, 0.3, 0.2, 0.1).unwrap()).unwrap();
        // swap qubits 1 and 3
        let p = s.permute_qubits([3, 2, 1]).unwrap();
        assert_eq!(p.amplitudes()[1].re, 0.3f64.sqrt());
        assert_eq!(p.amplitudes()[4].re, 0.1f64.sqrt());
        assert!(s.permute_qubits([1, 1, 2]).is_err());
    }
}
