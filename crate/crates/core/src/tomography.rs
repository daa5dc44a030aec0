//! Five-coefficient quantum state tomography.
//!
//! An arbitrary qutrit density matrix is fixed by the two probabilities
//! P(1), P(f) and the three KD terms ϱ(1,f), ϱ(1,D2), ϱ(D2,f). The same
//! information is carried by the five "red" entries of the two-context KD
//! table, ϱ(1,f), ϱ(2,f), ϱ(3,f), ϱ(1,S2), ϱ(1,P2); the remaining three
//! table entries follow by closed-form affine relations.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{
    cx_pair, validate_density, DensityMatrix, HilbertError, OperatorMatrix, StateVector,
};
use crate::kd::kd_term;
use crate::pentagon::{OutcomeId, PentagonFrame};

/// Largest imaginary part tolerated in a probability marginal assembled from
/// exact KD data.
pub const MARGINAL_IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TomographyError {
    #[error(
        "reconstructed matrix is not a positive state (most negative eigenvalue {min_eigenvalue:.6e})"
    )]
    NotPositive {
        /// The raw Hermitian, trace-one matrix assembled from the data.
        matrix: Box<OperatorMatrix>,
        min_eigenvalue: f64,
    },
    #[error("probability marginal has imaginary residual {residual:.3e}")]
    InconsistentMarginal { residual: f64 },
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// The five coefficients determining an arbitrary state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomographicData {
    pub p1: f64,
    pub pf: f64,
    #[serde(rename = "rho_1f", with = "cx_pair")]
    pub r_1f: C64,
    #[serde(rename = "rho_1D2", with = "cx_pair")]
    pub r_1d2: C64,
    #[serde(rename = "rho_D2f", with = "cx_pair")]
    pub r_d2f: C64,
}

impl TomographicData {
    pub fn zero() -> Self {
        Self {
            p1: 0.0,
            pf: 0.0,
            r_1f: C64::new(0.0, 0.0),
            r_1d2: C64::new(0.0, 0.0),
            r_d2f: C64::new(0.0, 0.0),
        }
    }
}

/// The five KD-table entries sufficient for reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RedEntries {
    #[serde(rename = "rho_1f", with = "cx_pair")]
    pub r_1f: C64,
    #[serde(rename = "rho_2f", with = "cx_pair")]
    pub r_2f: C64,
    #[serde(rename = "rho_3f", with = "cx_pair")]
    pub r_3f: C64,
    #[serde(rename = "rho_1S2", with = "cx_pair")]
    pub r_1s2: C64,
    #[serde(rename = "rho_1P2", with = "cx_pair")]
    pub r_1p2: C64,
}

impl RedEntries {
    pub fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        Self {
            r_1f: z,
            r_2f: z,
            r_3f: z,
            r_1s2: z,
            r_1p2: z,
        }
    }

    /// Read the five entries straight off a state.
    pub fn extract(rho: &DensityMatrix, frame: &PentagonFrame) -> Self {
        use OutcomeId::*;
        Self {
            r_1f: kd_term(rho, One, F, frame),
            r_2f: kd_term(rho, Two, F, frame),
            r_3f: kd_term(rho, Three, F, frame),
            r_1s2: kd_term(rho, One, S2, frame),
            r_1p2: kd_term(rho, One, P2, frame),
        }
    }
}

/// Read the five reconstruction coefficients off a state.
pub fn extract(rho: &DensityMatrix, frame: &PentagonFrame) -> TomographicData {
    use OutcomeId::*;
    TomographicData {
        p1: rho.born_probability(frame.vector(One)),
        pf: rho.born_probability(frame.vector(F)),
        r_1f: kd_term(rho, One, F, frame),
        r_1d2: kd_term(rho, One, D2, frame),
        r_d2f: kd_term(rho, D2, F, frame),
    }
}

/// Assemble the (Hermitian, trace-one) matrix determined by the data in the
/// non-orthogonal basis {|S2⟩, |2⟩, |S1⟩}, with P(D2) supplied by the
/// normalization condition. The result is returned unvalidated; data from a
/// valid state reproduces that state exactly.
pub fn reconstruct_raw(data: &TomographicData, frame: &PentagonFrame) -> OperatorMatrix {
    use OutcomeId::*;
    // non-orthogonal basis A = {1, f, D2}, contravariant B = {S2, 2, S1}
    let a = [One, F, D2];
    let b = [S2, Two, S1];
    // u_j = 1 / <A_j|B_j>
    let u: Vec<C64> = (0..3)
        .map(|j| C64::new(1.0, 0.0) / frame.inner(a[j], b[j]))
        .collect();

    // c[j][k] = <A_j| rho |A_k> in terms of the data
    let mut c = [[C64::new(0.0, 0.0); 3]; 3];
    c[0][0] = C64::new(data.p1, 0.0);
    c[1][1] = C64::new(data.pf, 0.0);
    c[0][1] = data.r_1f / frame.inner(F, One);
    c[1][0] = c[0][1].conj();
    c[0][2] = data.r_1d2 / frame.inner(D2, One);
    c[2][0] = c[0][2].conj();
    c[2][1] = data.r_d2f / frame.inner(F, D2);
    c[1][2] = c[2][1].conj();

    // P(D2) from Tr(rho) = 1: the trace of the expansion is
    // sum_jk u_j conj(u_k) c_jk <B_k|B_j>, and <2|S2> = 0 removes the
    // (1,f) cross terms. On the canonical frame this reduces to
    // P(D2) = (1 - 2 P(1) - 3 P(f) + Re(4 ϱ(1,D2) + 6 ϱ(D2,f))) / 4.
    let mut known = C64::new(0.0, 0.0);
    for j in 0..3 {
        for k in 0..3 {
            if j == 2 && k == 2 {
                continue;
            }
            known += u[j] * u[k].conj() * c[j][k] * frame.inner(b[k], b[j]);
        }
    }
    let pd2 = (1.0 - known.re) / u[2].norm_sqr();
    c[2][2] = C64::new(pd2, 0.0);

    let mut out = OperatorMatrix::zero();
    for j in 0..3 {
        for k in 0..3 {
            let coeff = u[j] * u[k].conj() * c[j][k];
            out = out + outer(frame.vector(b[j]), frame.vector(b[k])).scale(coeff);
        }
    }
    out
}

/// Reconstruct and validate. Inconsistent data (for example noisy
/// estimates) yields [`TomographyError::NotPositive`] carrying the raw
/// matrix; no projection back to the state space is attempted.
pub fn reconstruct(
    data: &TomographicData,
    frame: &PentagonFrame,
) -> Result<DensityMatrix, TomographyError> {
    let raw = reconstruct_raw(data, frame);
    match validate_density(&raw) {
        Ok(rho) => Ok(rho),
        Err(HilbertError::NotPositive { min_eigenvalue }) => Err(TomographyError::NotPositive {
            matrix: Box::new(raw),
            min_eigenvalue,
        }),
        Err(e) => Err(TomographyError::Hilbert(e)),
    }
}

/// |u⟩⟨v|.
fn outer(u: &StateVector, v: &StateVector) -> OperatorMatrix {
    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = u.amplitudes()[i] * v.amplitudes()[j].conj();
        }
    }
    OperatorMatrix::from_entries(m)
}

/// Convert the five red table entries to reconstruction coefficients:
/// P(1) and P(f) are marginals, ϱ(1,D2) = ϱ(1,f) + ϱ(1,P2) and
/// ϱ(D2,f) = ϱ(1,f) + ϱ(3,f).
///
/// Errors when a probability marginal keeps an imaginary part above
/// [`MARGINAL_IMAG_TOL`]; see [`red_to_data_lossy`] for the tolerant path
/// used with statistical estimates.
pub fn red_to_data(red: &RedEntries) -> Result<TomographicData, TomographyError> {
    let (data, residual) = red_to_data_lossy(red);
    if residual > MARGINAL_IMAG_TOL {
        return Err(TomographyError::InconsistentMarginal { residual });
    }
    Ok(data)
}

/// As [`red_to_data`], but keeps the real parts of the marginals regardless
/// and reports the largest imaginary residual instead of failing. Noisy
/// estimates of the red entries always carry such residuals.
pub fn red_to_data_lossy(red: &RedEntries) -> (TomographicData, f64) {
    let p1 = red.r_1f + red.r_1s2 + red.r_1p2;
    let pf = red.r_1f + red.r_2f + red.r_3f;
    let residual = p1.im.abs().max(pf.im.abs());
    let data = TomographicData {
        p1: p1.re,
        pf: pf.re,
        r_1f: red.r_1f,
        r_1d2: red.r_1f + red.r_1p2,
        r_d2f: red.r_1f + red.r_3f,
    };
    (data, residual)
}

/// The three completed KD-table entries implied by the red ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompletedEntries {
    #[serde(rename = "rho_3P2", with = "cx_pair")]
    pub r_3p2: C64,
    #[serde(rename = "rho_2P2", with = "cx_pair")]
    pub r_2p2: C64,
    #[serde(rename = "rho_3S2", with = "cx_pair")]
    pub r_3s2: C64,
}

/// Complete the two-context table from its red entries (canonical-frame
/// algebra). The affine relations are applied verbatim to complex inputs.
pub fn complete_table(red: &RedEntries) -> CompletedEntries {
    let one = C64::new(1.0, 0.0);
    let r_3p2 = 0.25
        * (one + red.r_1f - 3.0 * red.r_2f - red.r_3f - 2.0 * red.r_1s2 - 2.0 * red.r_1p2);
    let r_2p2 = 0.5
        * (one - red.r_1f + red.r_2f - 3.0 * red.r_3f - 2.0 * red.r_1s2 + 2.0 * red.r_1p2);
    let r_3s2 = 0.25
        * (one - 3.0 * red.r_1f - 3.0 * red.r_2f + 3.0 * red.r_3f + 2.0 * red.r_1s2
            - 6.0 * red.r_1p2);
    CompletedEntries {
        r_3p2,
        r_2p2,
        r_3s2,
    }
}

/// Probabilities derived from the five coefficients (canonical-frame
/// algebra).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedProbabilities {
    pub p2: f64,
    pub ps2: f64,
    pub pd2: f64,
    pub ps1: f64,
}

/// P(2), P(S2), P(D2) and P(S1) as affine functions of the data.
pub fn derived_probabilities(data: &TomographicData) -> DerivedProbabilities {
    let p2 = 0.5
        * (1.0 - 2.0 * data.p1 + 3.0 * data.pf + (4.0 * data.r_1d2 - 6.0 * data.r_d2f).re);
    let ps2 = 0.25
        * (1.0 + 6.0 * data.p1 - 3.0 * data.pf - (12.0 * data.r_1d2 - 6.0 * data.r_d2f).re);
    let pd2 = 0.25
        * (1.0 - 2.0 * data.p1 - 3.0 * data.pf + (4.0 * data.r_1d2 + 6.0 * data.r_d2f).re);
    let ps1 = 1.0 - 1.5 * data.p1 - 1.5 * data.pf + 3.0 * data.r_1f.re;
    DerivedProbabilities { p2, ps2, pd2, ps1 }
}
