//! Fixed-dimension (d = 3) complex vector and matrix arithmetic.
//!
//! Everything in the crate works in the reference basis {|1⟩, |2⟩, |3⟩}.
//! Besides the usual state-vector and density-matrix types, this module
//! provides the normalized transition operators Λ̂(a,b) = |a⟩⟨b|/⟨b|a⟩
//! whose expectation values are weak values.

use num_complex::Complex64 as C64;
use thiserror::Error;

/// Default absolute comparison tolerance. All quantities handled by this
/// crate are small exact rationals, so 1e-10 leaves ample headroom.
pub const TOL: f64 = 1e-10;

/// Eigenvalues above this (negative) floor are accepted as nonnegative
/// when validating density matrices.
pub const PSD_TOL: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("state vector is not normalized: squared norm = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("cannot normalize a near-zero vector (norm = {norm:.3e})")]
    ZeroNorm { norm: f64 },
    #[error("transition operator undefined: |<b|a>| = {overlap:.3e}")]
    DegenerateOverlap { overlap: f64 },
    #[error("matrix is not Hermitian: max |M - M^dag| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix trace = {trace} instead of 1")]
    TraceNotOne { trace: f64 },
    #[error("matrix is not positive semidefinite: most negative eigenvalue = {min_eigenvalue:.6e}")]
    NotPositive { min_eigenvalue: f64 },
}

/// A normalized pure state of the qutrit, stored in the reference basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    amp: [C64; 3],
}

impl StateVector {
    /// Wrap amplitudes that are already normalized (within [`TOL`]).
    pub fn new(amp: [C64; 3]) -> Result<Self, HilbertError> {
        let norm_sq: f64 = amp.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TOL {
            return Err(HilbertError::NotNormalized { norm_sq });
        }
        Ok(Self { amp })
    }

    /// Normalize arbitrary amplitudes.
    pub fn normalized(amp: [C64; 3]) -> Result<Self, HilbertError> {
        let norm: f64 = amp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < TOL {
            return Err(HilbertError::ZeroNorm { norm });
        }
        Ok(Self {
            amp: [amp[0] / norm, amp[1] / norm, amp[2] / norm],
        })
    }

    /// Real amplitudes, normalized.
    pub fn from_real(re: [f64; 3]) -> Result<Self, HilbertError> {
        Self::normalized([C64::new(re[0], 0.0), C64::new(re[1], 0.0), C64::new(re[2], 0.0)])
    }

    /// The k-th reference basis vector |k+1⟩.
    pub fn basis(k: usize) -> Self {
        let mut amp = [C64::new(0.0, 0.0); 3];
        amp[k] = C64::new(1.0, 0.0);
        Self { amp }
    }

    pub fn amplitudes(&self) -> &[C64; 3] {
        &self.amp
    }

    /// |v⟩⟨v|.
    pub fn projector(&self) -> OperatorMatrix {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.amp[i] * self.amp[j].conj();
            }
        }
        OperatorMatrix { m }
    }

    /// Multiply by a global phase factor (must have unit modulus).
    pub fn with_phase(&self, phase: C64) -> Self {
        debug_assert!((phase.norm() - 1.0).abs() < 1e-9);
        Self {
            amp: [self.amp[0] * phase, self.amp[1] * phase, self.amp[2] * phase],
        }
    }
}

/// ⟨u|v⟩: conjugate-linear in `u`, linear in `v`.
pub fn inner(u: &StateVector, v: &StateVector) -> C64 {
    u.amp
        .iter()
        .zip(v.amp.iter())
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// The normalized transition operator Λ̂(a,b) = |a⟩⟨b| / ⟨b|a⟩.
///
/// Satisfies ⟨a|Λ̂|a⟩ = ⟨b|Λ̂|b⟩ = 1 and Tr(Λ̂) = 1, and annihilates every
/// vector orthogonal to `b`. Undefined when ⟨b|a⟩ vanishes.
pub fn lambda_op(a: &StateVector, b: &StateVector) -> Result<OperatorMatrix, HilbertError> {
    let ba = inner(b, a);
    if ba.norm() <= TOL {
        return Err(HilbertError::DegenerateOverlap { overlap: ba.norm() });
    }
    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = a.amp[i] * b.amp[j].conj() / ba;
        }
    }
    Ok(OperatorMatrix { m })
}

/// A general (possibly non-Hermitian) 3x3 operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorMatrix {
    m: [[C64; 3]; 3],
}

impl OperatorMatrix {
    pub fn zero() -> Self {
        Self {
            m: [[C64::new(0.0, 0.0); 3]; 3],
        }
    }

    pub fn identity() -> Self {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = C64::new(1.0, 0.0);
        }
        Self { m }
    }

    pub fn from_entries(m: [[C64; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn from_real(re: [[f64; 3]; 3]) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = C64::new(re[i][j], 0.0);
            }
        }
        Self { m }
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[i][j]
    }

    pub fn entries(&self) -> &[[C64; 3]; 3] {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.m[j][i].conj();
            }
        }
        Self { m }
    }

    /// Largest entry magnitude; the max-norm used for residual checks.
    pub fn max_norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm distance to the adjoint; zero for Hermitian matrices.
    pub fn hermiticity_deviation(&self) -> f64 {
        (*self - self.adjoint()).max_norm()
    }

    /// M |v⟩ as raw amplitudes.
    pub fn apply(&self, v: &StateVector) -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| self.m[i][j] * v.amp[j]).sum();
        }
        out
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut m = self.m;
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e *= c;
            }
        }
        Self { m }
    }
}

impl std::ops::Add for OperatorMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut m = self.m;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += rhs.m[i][j];
            }
        }
        Self { m }
    }
}

impl std::ops::Sub for OperatorMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut m = self.m;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] -= rhs.m[i][j];
            }
        }
        Self { m }
    }
}

impl std::ops::Mul for OperatorMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        Self { m }
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// within [`PSD_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    op: OperatorMatrix,
}

impl DensityMatrix {
    /// |v⟩⟨v| for a normalized vector.
    pub fn pure(v: &StateVector) -> Self {
        Self { op: v.projector() }
    }

    /// The maximally mixed state I/3.
    pub fn maximally_mixed() -> Self {
        Self {
            op: OperatorMatrix::identity().scale(C64::new(1.0 / 3.0, 0.0)),
        }
    }

    /// Convex mixture of pure states. Weights are normalized to sum 1.
    pub fn mixture(parts: &[(f64, StateVector)]) -> Result<Self, HilbertError> {
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if total < TOL {
            return Err(HilbertError::ZeroNorm { norm: total });
        }
        let mut op = OperatorMatrix::zero();
        for (w, v) in parts {
            op = op + v.projector().scale(C64::new(w / total, 0.0));
        }
        Ok(Self { op })
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        &self.op
    }

    /// Tr(ρ M); real for Hermitian M.
    pub fn expectation(&self, op: &OperatorMatrix) -> C64 {
        let mut t = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                t += self.op.m[i][j] * op.m[j][i];
            }
        }
        t
    }

    /// Born probability Tr(ρ |v⟩⟨v|) = ⟨v|ρ|v⟩.
    pub fn born_probability(&self, v: &StateVector) -> f64 {
        let mut t = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                t += v.amp[i].conj() * self.op.m[i][j] * v.amp[j];
            }
        }
        t.re
    }
}

/// Check Hermiticity, unit trace, and positivity, in that order, and wrap
/// the matrix as a [`DensityMatrix`]. Positivity failures report the most
/// negative eigenvalue.
pub fn validate_density(m: &OperatorMatrix) -> Result<DensityMatrix, HilbertError> {
    let deviation = m.hermiticity_deviation();
    if deviation > TOL {
        return Err(HilbertError::NotHermitian { deviation });
    }
    let trace = m.trace();
    if (trace.re - 1.0).abs() > TOL || trace.im.abs() > TOL {
        return Err(HilbertError::TraceNotOne { trace: trace.re });
    }
    let (eigenvalues, _) = eigh3(m);
    let min_eigenvalue = eigenvalues[0];
    if min_eigenvalue < PSD_TOL {
        return Err(HilbertError::NotPositive { min_eigenvalue });
    }
    Ok(DensityMatrix { op: *m })
}

/// Eigendecomposition of a Hermitian 3x3 matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in ascending order together with the
/// matching orthonormal eigenvector columns.
///
/// The input is symmetrized as (M + M†)/2 first; callers must check
/// Hermiticity themselves if deviations matter.
pub fn eigh3(a: &OperatorMatrix) -> ([f64; 3], [[C64; 3]; 3]) {
    // work matrix, hermitized
    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = 0.5 * (a.m[i][j] + a.m[j][i].conj());
        }
    }
    let mut v = [[C64::new(0.0, 0.0); 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }

    let scale: f64 = m
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .max(1e-300);

    for _ in 0..60 {
        let off: f64 = m[0][1].norm_sqr() + m[0][2].norm_sqr() + m[1][2].norm_sqr();
        if off <= 1e-32 * scale {
            break;
        }
        for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = m[p][q];
            let r = apq.norm();
            if r < 1e-300 {
                continue;
            }
            // phase that makes the (p,q) entry real, then a real rotation
            let u = apq / r;
            let app = m[p][p].re;
            let aqq = m[q][q].re;
            let tau = (aqq - app) / (2.0 * r);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            // column update: M <- M J with J_pp = c, J_pq = s,
            // J_qp = -s conj(u), J_qq = c conj(u)
            for k in 0..3 {
                let mkp = m[k][p];
                let mkq = m[k][q];
                m[k][p] = c * mkp - s * u.conj() * mkq;
                m[k][q] = s * mkp + c * u.conj() * mkq;
            }
            // row update: M <- J† M
            for k in 0..3 {
                let mpk = m[p][k];
                let mqk = m[q][k];
                m[p][k] = c * mpk - s * u * mqk;
                m[q][k] = s * mpk + c * u * mqk;
            }
            for k in 0..3 {
                let vkp = v[k][p];
                let vkq = v[k][q];
                v[k][p] = c * vkp - s * u.conj() * vkq;
                v[k][q] = s * vkp + c * u.conj() * vkq;
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| m[i][i].re.partial_cmp(&m[j][j].re).unwrap());
    let eigenvalues = [
        m[order[0]][order[0]].re,
        m[order[1]][order[1]].re,
        m[order[2]][order[2]].re,
    ];
    let mut vectors = [[C64::new(0.0, 0.0); 3]; 3];
    for (slot, &col) in order.iter().enumerate() {
        for k in 0..3 {
            vectors[k][slot] = v[k][col];
        }
    }
    (eigenvalues, vectors)
}

/// Trace distance (1/2)||A - B||_1 between two Hermitian matrices.
pub fn trace_distance(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
    let (eigenvalues, _) = eigh3(&(*a - *b));
    0.5 * eigenvalues.iter().map(|e| e.abs()).sum::<f64>()
}

/// Serde adapter storing a complex number as a `[re, im]` pair.
///
/// Apply with `#[serde(with = "cx_pair")]` wherever export formats call for
/// two-element arrays instead of `{re, im}` maps.
pub mod cx_pair {
    use num_complex::Complex64 as C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// 3x3 complex matrix as nested `[re, im]` pairs, for JSON export.
pub fn matrix_to_pairs(m: &OperatorMatrix) -> [[[f64; 2]; 3]; 3] {
    let mut out = [[[0.0; 2]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let z = m.entry(i, j);
            out[i][j] = [z.re, z.im];
        }
    }
    out
}

/// Inverse of [`matrix_to_pairs`].
pub fn matrix_from_pairs(pairs: &[[[f64; 2]; 3]; 3]) -> OperatorMatrix {
    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = C64::new(pairs[i][j][0], pairs[i][j][1]);
        }
    }
    OperatorMatrix::from_entries(m)
}
