//! Dense complex linear algebra for the 2-, 4- and 8-dimensional objects that
//! appear in three-qubit calculations.
//!
//! Everything is stored row-major in a `Vec<Complex64>`. Qubit 1 is the most
//! significant bit of a basis index, so `|011⟩` is index 3.

use std::ops::{Add, Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar type used throughout the crate.
pub type Complex = Complex64;

const ALLOWED_DIMS: [usize; 3] = [2, 4, 8];

/// Tolerance for Hermiticity of eigensolver input.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this.
pub const JACOBI_OFF_TOL: f64 = 1e-13;
/// Eigenvalues in `(-EIGEN_CLIP, 0)` are treated as rounding noise.
pub const EIGEN_CLIP: f64 = 1e-10;
/// Allowed deviation of `⟨ψ|ψ⟩` from one for state inputs.
pub const NORM_TOL: f64 = 1e-10;

const DENSITY_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;
const RELATIVE_PIVOT_TOL: f64 = 1e-17;

fn check_dim(dim: usize) -> Result<()> {
    if ALLOWED_DIMS.contains(&dim) {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "dimension {dim} is not one of 2, 4, 8"
        )))
    }
}

fn all_finite(data: &[Complex]) -> bool {
    data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// A complex vector of dimension 2, 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    data: Vec<Complex>,
}

impl CVector {
    pub fn new(data: Vec<Complex>) -> Result<Self> {
        check_dim(data.len())?;
        if !all_finite(&data) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Self { data })
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::Dimension(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut data = vec![Complex::new(0.0, 0.0); dim];
        data[index] = Complex::new(1.0, 0.0);
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &CVector) -> Complex {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|self⟩⟨self|`.
    pub fn outer(&self) -> CMatrix {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = self.data[i] * self.data[j].conj();
            }
        }
        m
    }
}

impl Index<usize> for CVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.data[i]
    }
}

/// Square complex matrix of dimension 2, 4 or 8, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries; the length must be 4, 16 or 64.
    pub fn from_row_major(dim: usize, data: Vec<Complex>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self { dim, data })
    }

    /// Convenience constructor from real entries.
    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, data.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[Complex]) -> Result<Self> {
        let dim = entries.len();
        check_dim(dim)?;
        let mut m = Self::zeros(dim);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        if !all_finite(&m.data) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(m)
    }

    /// Pauli σ_y.
    pub fn sigma_y() -> Self {
        let i = Complex::new(0.0, 1.0);
        let o = Complex::new(0.0, 0.0);
        Self {
            dim: 2,
            data: vec![o, -i, i, o],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (not transposed).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn scale(&self, factor: Complex) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "cannot apply a {0}x{0} matrix to a vector of dimension {1}",
                self.dim,
                v.dim()
            )));
        }
        let data = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect();
        Ok(CVector { data })
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.dim != other.dim {
            return Err(Error::Dimension(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `Σ_ij |m_ij|²`.
    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    fn off_diagonal_sqr(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    /// Panics on mismatched dimensions; use [`CMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    /// Panics on mismatched dimensions.
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions must agree");
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Tensor (Kronecker) product. The result dimension must not exceed 8.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let dim = a.dim * b.dim;
    if dim > 8 {
        return Err(Error::Dimension(format!(
            "kron of {}x{} and {}x{} exceeds dimension 8",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = CMatrix::zeros(dim);
    for i in 0..a.dim {
        for j in 0..a.dim {
            let aij = a[(i, j)];
            for k in 0..b.dim {
                for l in 0..b.dim {
                    out[(i * b.dim + k, j * b.dim + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of two vectors, result dimension at most 8.
pub fn kron_vec(a: &CVector, b: &CVector) -> Result<CVector> {
    let dim = a.dim() * b.dim();
    if dim > 8 {
        return Err(Error::Dimension(format!(
            "kron of vectors of dimension {} and {} exceeds 8",
            a.dim(),
            b.dim()
        )));
    }
    let data = a
        .data
        .iter()
        .flat_map(|x| b.data.iter().map(move |y| x * y))
        .collect();
    Ok(CVector { data })
}

/// Determinant of a 2x2 matrix.
pub fn det2(m: &CMatrix) -> Result<Complex> {
    if m.dim != 2 {
        return Err(Error::Dimension(format!(
            "det2 needs a 2x2 matrix, got {0}x{0}",
            m.dim
        )));
    }
    Ok(m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)])
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary whose column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix,
}

/// Cyclic complex Jacobi diagonalisation.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// the real symmetric Jacobi rotation on the `(p, q)` plane. On return the
/// off-diagonal Frobenius norm is below `JACOBI_OFF_TOL` (relative to the
/// matrix norm when that exceeds one).
pub fn eigh(m: &CMatrix) -> Result<HermitianEigen> {
    if m.dim != 2 && m.dim != 4 && m.dim != 8 {
        return Err(Error::Dimension(format!("eigh on dimension {}", m.dim)));
    }
    if !all_finite(&m.data) {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }

    let n = m.dim;
    // symmetrise so that rounding in the input cannot leak into the spectrum
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = Complex::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            a[(i, j)] = v;
            a[(j, i)] = v.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_sqr().sqrt().max(1.0);

    // Sweep until every pivot is negligible against its own diagonal pair,
    // which keeps small eigenvalues accurate relative to their size. The
    // absolute Frobenius threshold is always implied by this.
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)].norm();
                let scale = (a[(p, p)].re.abs() * a[(q, q)].re.abs()).sqrt();
                if g > RELATIVE_PIVOT_TOL * scale && g > f64::MIN_POSITIVE {
                    rotate(&mut a, &mut v, p, q);
                    rotated = true;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged || a.off_diagonal_sqr().sqrt() >= threshold {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// One Jacobi rotation zeroing `a[(p, q)]`; accumulates the rotation into `v`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g; // e^{iα}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = D·R with D = diag(.., 1 at p, e^{-iα} at q, ..)
    let jpp = Complex::new(c, 0.0);
    let jpq = Complex::new(s, 0.0);
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    let n = a.dim;
    // A ← A·J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A ← J†·A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = Complex::new(0.0, 0.0);
    a[(q, p)] = Complex::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V ← V·J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Real eigenvalues of a Hermitian matrix, descending.
pub fn eig_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    eigh(m).map(|e| e.values)
}

/// Clips values in `(-EIGEN_CLIP, 0)` to zero; more negative values are an error.
pub fn clip_nonnegative(value: f64, context: &'static str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value > -EIGEN_CLIP {
        Ok(0.0)
    } else {
        Err(Error::NegativeBeyondRounding { context, value })
    }
}

/// A validated density matrix on one or two qubits.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positive semidefiniteness.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.dim != 2 && matrix.dim != 4 {
            return Err(Error::Dimension(format!(
                "density matrices here are 2x2 or 4x4, got {0}x{0}",
                matrix.dim
            )));
        }
        let dev = matrix.hermitian_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - Complex::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}, not 1")));
        }
        let lowest = *eig_hermitian(&matrix)?.last().expect("non-empty spectrum");
        if lowest < -EIGEN_CLIP {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Hermitian: tr ρ² = Σ |ρ_ij|²
        self.matrix.frobenius_sqr()
    }
}

/// Qubit label, 1-based as in `ρ_12`.
pub type QubitIndex = usize;

/// Conditional vectors of a three-qubit pure state: for every basis state
/// `|k⟩` of the traced-out qubits, the (unnormalized) vector `φ_k = ⟨k|ψ⟩` of
/// the kept qubits, scaled by `1/‖ψ‖`. The reduced state is `Σ_k |φ_k⟩⟨φ_k|`.
///
/// `keep` names one or two distinct qubits from `{1, 2, 3}` in any order;
/// the kept qubits are ordered by label, so `[3, 1]` describes `ρ_13`.
pub fn reduced_ensemble(state: &CVector, keep: &[QubitIndex]) -> Result<Vec<CVector>> {
    if state.dim() != 8 {
        return Err(Error::Dimension(format!(
            "partial trace expects a three-qubit state, got dimension {}",
            state.dim()
        )));
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len()
        || kept.is_empty()
        || kept.len() > 2
        || kept.iter().any(|&q| !(1..=3).contains(&q))
    {
        return Err(Error::InvalidParams(format!(
            "keep must name one or two distinct qubits from 1..=3, got {keep:?}"
        )));
    }
    let traced: Vec<usize> = (1..=3).filter(|q| !kept.contains(q)).collect();

    let bit = |index: usize, qubit: usize| (index >> (3 - qubit)) & 1;
    let pack = |index: usize, qubits: &[usize]| {
        qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | bit(index, q))
    };

    let scale = 1.0 / norm.sqrt();
    let mut members = vec![vec![Complex::new(0.0, 0.0); 1 << kept.len()]; 1 << traced.len()];
    for i in 0..8 {
        members[pack(i, &traced)][pack(i, &kept)] = state[i] * scale;
    }
    members.into_iter().map(CVector::new).collect()
}

/// Reduced density matrix of the qubits in `keep` (see [`reduced_ensemble`]).
///
/// The result is divided by `⟨ψ|ψ⟩` so rounding in the input norm does not
/// break the unit-trace invariant.
pub fn partial_trace(state: &CVector, keep: &[QubitIndex]) -> Result<DensityMatrix> {
    let members = reduced_ensemble(state, keep)?;
    let dim = members[0].dim();
    let mut rho = CMatrix::zeros(dim);
    for phi in &members {
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += phi[i] * phi[j].conj();
            }
        }
    }
    DensityMatrix::new(rho)
}
