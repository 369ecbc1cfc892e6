//! Bipartite and tripartite entanglement measures on three-qubit pure states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    clip_nonnegative, eigh, kron, partial_trace, reduced_ensemble, CMatrix, CVector, Complex,
    DensityMatrix,
};
use crate::states::{GhzParams, PureState3Q, WParams};

/// Slack allowed on the unit interval for concurrence inputs.
pub const UNIT_SLACK: f64 = 1e-12;

/// Pairwise concurrences `(C₁₂, C₁₃, C₂₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceTriple {
    pub c12: f64,
    pub c13: f64,
    pub c23: f64,
}

impl ConcurrenceTriple {
    pub fn as_array(&self) -> [f64; 3] {
        [self.c12, self.c13, self.c23]
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &ConcurrenceTriple) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

fn spin_flip_operator() -> CMatrix {
    kron(&CMatrix::sigma_y(), &CMatrix::sigma_y()).expect("2x2 ⊗ 2x2 fits")
}

/// Wootters concurrence of a two-qubit density matrix.
///
/// `ρ` is split into its eigen-ensemble `φ_i = √p_i·u_i` and handed to
/// [`wootters_from_ensemble`].
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Dimension(format!(
            "Wootters concurrence needs a two-qubit state, got dimension {}",
            rho.dim()
        )));
    }
    let eig = eigh(rho.matrix())?;
    let mut members = Vec::with_capacity(4);
    for (k, &p) in eig.values.iter().enumerate() {
        let weight = clip_nonnegative(p, "density-matrix eigenvalue")?.sqrt();
        if weight == 0.0 {
            continue;
        }
        let column = (0..4).map(|row| eig.vectors[(row, k)] * weight).collect();
        members.push(CVector::new(column)?);
    }
    wootters_from_ensemble(&members)
}

/// Wootters concurrence of `ρ = Σ_k |φ_k⟩⟨φ_k|` given any decomposition of
/// the two-qubit state into (unnormalized) vectors.
///
/// With `W` the matrix whose columns are the `φ_k`, `√ρ·ρ̃·√ρ` and the
/// Hermitian `W†·ρ̃·W` share their nonzero spectrum, where
/// `ρ̃ = (σy⊗σy)ρ*(σy⊗σy)`. The λᵢ are the square roots of that spectrum.
pub fn wootters_from_ensemble(members: &[CVector]) -> Result<f64> {
    if members.is_empty() || members.len() > 4 || members.iter().any(|m| m.dim() != 4) {
        return Err(Error::Dimension(
            "expected one to four two-qubit vectors".into(),
        ));
    }
    let yy = spin_flip_operator();
    // flipped_k = (σy⊗σy)·φ_k*
    let flipped = members
        .iter()
        .map(|phi| {
            let conj = CVector::new(phi.as_slice().iter().map(|c| c.conj()).collect())?;
            yy.apply(&conj)
        })
        .collect::<Result<Vec<_>>>()?;

    // τ_kl = ⟨φ_k|φ̃_l⟩; W†ρ̃W = τ·τ†
    let n = members.len().max(2);
    let mut tau = vec![vec![Complex::new(0.0, 0.0); n]; n];
    for (k, phi) in members.iter().enumerate() {
        for (l, tilde) in flipped.iter().enumerate() {
            tau[k][l] = phi.inner(tilde);
        }
    }
    let dim = if n <= 2 { 2 } else { 4 };
    let mut h = CMatrix::zeros(dim);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = (0..n).map(|k| tau[i][k] * tau[j][k].conj()).sum();
        }
    }

    let mut lambdas = eigh(&h)?
        .values
        .into_iter()
        .map(|mu| clip_nonnegative(mu, "spin-flip eigenvalue").map(f64::sqrt))
        .collect::<Result<Vec<_>>>()?;
    lambdas.resize(4, 0.0);
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// `2√(det ρ_q)` for the cut `q | rest`, `q ∈ {1, 2, 3}`.
///
/// With `ψ` reshaped into the 2×4 matrix `M` (rows: qubit `q`),
/// `det ρ_q = det(MM†) = Σ_{j<k} |M₀ⱼM₁ₖ − M₀ₖM₁ⱼ|²`, a sum of non-negative
/// terms that keeps its relative accuracy for nearly product states.
pub fn concurrence_pure_bipartition(state: &PureState3Q, qubit: usize) -> Result<f64> {
    let columns = reduced_ensemble(state.vector(), &[qubit])?;
    let mut det = 0.0;
    for (j, a) in columns.iter().enumerate() {
        for b in &columns[j + 1..] {
            det += (a[0] * b[1] - b[0] * a[1]).norm_sqr();
        }
    }
    Ok((2.0 * det.sqrt()).min(1.0))
}

/// Three-tangle as `4|Det ψ|`, with `Det` Cayley's hyperdeterminant of the
/// 2×2×2 amplitude array.
///
/// Equal to the CKW residual for every pure state; used as an independent
/// check of [`tangle`].
pub fn hyperdeterminant_tangle(state: &PureState3Q) -> f64 {
    let a = state.amplitudes();
    let d1 = a[0] * a[0] * a[7] * a[7]
        + a[1] * a[1] * a[6] * a[6]
        + a[2] * a[2] * a[5] * a[5]
        + a[4] * a[4] * a[3] * a[3];
    let d2 = a[0] * a[7] * a[3] * a[4]
        + a[0] * a[7] * a[5] * a[2]
        + a[0] * a[7] * a[6] * a[1]
        + a[3] * a[4] * a[5] * a[2]
        + a[3] * a[4] * a[6] * a[1]
        + a[5] * a[2] * a[6] * a[1];
    let d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
    4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm()
}

/// Entanglement of formation (bits) of a two-qubit state with concurrence `c`.
///
/// `h(x)` with `x = (1 + √(1 - c²))/2`; `c = 0` returns 0 without touching
/// `0·log 0`, and `c = 1` gives `x = 1/2` exactly.
pub fn eof_from_concurrence(c: f64) -> Result<f64> {
    if !c.is_finite() || !(-UNIT_SLACK..=1.0 + UNIT_SLACK).contains(&c) {
        return Err(Error::OutOfRange {
            what: "concurrence",
            value: c,
        });
    }
    let c = c.clamp(0.0, 1.0);
    if c == 0.0 {
        return Ok(0.0);
    }
    let root = (1.0 - c * c).sqrt();
    let x = (1.0 + root) / 2.0;
    // 1 - x without cancellation
    let y = c * c / (2.0 * (1.0 + root));
    if y == 0.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - y * y.log2())
}

/// Wootters concurrence of each two-qubit reduction.
pub fn reduced_pair_concurrences(state: &PureState3Q) -> Result<ConcurrenceTriple> {
    let pair = |a: usize, b: usize| {
        reduced_ensemble(state.vector(), &[a, b])
            .and_then(|members| wootters_from_ensemble(&members))
    };
    Ok(ConcurrenceTriple {
        c12: pair(1, 2)?,
        c13: pair(1, 3)?,
        c23: pair(2, 3)?,
    })
}

/// Closed-form reduced concurrences of a GHZ-class state.
pub fn ghz_closed_form_concurrences(p: &GhzParams) -> ConcurrenceTriple {
    let [g1, g2, g3] = p.g;
    let four_k = 4.0 * p.normalizer();
    let s = |g: f64| (1.0 - 4.0 * g * g).sqrt();
    ConcurrenceTriple {
        c12: 2.0 * g3 * s(g1) * s(g2) / four_k,
        c13: 2.0 * g2 * s(g1) * s(g3) / four_k,
        c23: 2.0 * g1 * s(g2) * s(g3) / four_k,
    }
}

/// Closed-form reduced concurrences of a W-class state.
pub fn w_closed_form_concurrences(p: &WParams) -> ConcurrenceTriple {
    ConcurrenceTriple {
        c12: 2.0 * (p.x * p.y).sqrt(),
        c13: 2.0 * (p.x * p.z).sqrt(),
        c23: 2.0 * (p.y * p.z).sqrt(),
    }
}

/// `C²(A|BC) − C²(AB) − C²(AC)` with `focus` playing the role of A.
pub fn ckw_residual(state: &PureState3Q, focus: usize) -> Result<f64> {
    if !(1..=3).contains(&focus) {
        return Err(Error::InvalidParams(format!(
            "focus qubit must be 1, 2 or 3, got {focus}"
        )));
    }
    let whole = concurrence_pure_bipartition(state, focus)?;
    let others: Vec<usize> = (1..=3).filter(|&q| q != focus).collect();
    let mut residual = whole * whole;
    for other in others {
        let c = wootters_from_ensemble(&reduced_ensemble(state.vector(), &[focus, other])?)?;
        residual -= c * c;
    }
    Ok(residual)
}

/// Three-tangle with qubit 1 as the focus; rounding below zero is clipped.
pub fn tangle(state: &PureState3Q) -> Result<f64> {
    clip_nonnegative(ckw_residual(state, 1)?, "tangle")
}

/// Generalized concurrence `2^{1-N/2}·√((2^N − 2) − Σ tr ρᵢ²)` for N = 3.
pub fn generalized_concurrence(state: &PureState3Q) -> Result<f64> {
    const SUBSYSTEMS: [&[usize]; 6] = [&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3]];
    let mut purity_sum = 0.0;
    for keep in SUBSYSTEMS {
        purity_sum += partial_trace(state.vector(), keep)?.purity();
    }
    let radicand = clip_nonnegative(6.0 - purity_sum, "generalized concurrence radicand")?;
    Ok(2f64.powf(1.0 - 1.5) * radicand.sqrt())
}

/// Two-qubit density matrix of a pure two-qubit vector (row-major amplitudes).
pub fn pure_two_qubit(amplitudes: [Complex; 4]) -> Result<DensityMatrix> {
    let v = CVector::new(amplitudes.to_vec())?;
    let n = v.norm_sqr();
    DensityMatrix::new(v.outer().scale(Complex::new(1.0 / n, 0.0)))
}
