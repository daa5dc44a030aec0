//! Kirkwood-Dirac quasiprobabilities over the five-context scenario.
//!
//! The KD term ϱ(a,b) = ⟨b|a⟩⟨a|ρ̂|b⟩ assigns a complex joint weight to a
//! pair of outcomes from different contexts. Ten such terms plus the
//! all-unique-path weight ϱ(0) form an eleven-term distribution indexed by
//! the classical paths through the five contexts; it sums to one, its
//! per-outcome marginals are the Born probabilities, and five operator
//! identities constrain it deterministically.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{lambda_op, DensityMatrix, HilbertError, OperatorMatrix, TOL};
use crate::pentagon::{ContextId, OutcomeId, PathLabel, PentagonFrame};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KdError {
    #[error("operator identity violated on line(s) {lines:?}; residuals {residuals:?}")]
    IdentityViolation {
        lines: Vec<usize>,
        residuals: [f64; 5],
    },
    #[error("determinism constraint violated on line(s) {lines:?}; residuals {residuals:?}")]
    ConstraintViolation {
        lines: Vec<usize>,
        residuals: [f64; 5],
    },
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// ϱ(a,b) = ⟨b|a⟩⟨a|ρ̂|b⟩. Zero whenever ⟨a|b⟩ = 0.
pub fn kd_term(rho: &DensityMatrix, a: OutcomeId, b: OutcomeId, frame: &PentagonFrame) -> C64 {
    let va = frame.vector(a);
    let vb = frame.vector(b);
    let ba = frame.inner(b, a);
    // <a|rho|b>
    let rb = rho.matrix().apply(vb);
    let arb: C64 = va
        .amplitudes()
        .iter()
        .zip(rb.iter())
        .map(|(x, y)| x.conj() * y)
        .sum();
    ba * arb
}

/// ϱ(0) = ϱ(D1,D2) − ϱ(3,f), the weight of the path through all five
/// unique outcomes.
pub fn rho_zero(rho: &DensityMatrix, frame: &PentagonFrame) -> C64 {
    kd_term(rho, OutcomeId::D1, OutcomeId::D2, frame)
        - kd_term(rho, OutcomeId::Three, OutcomeId::F, frame)
}

/// The eleven-term multi-context KD distribution, indexed by [`PathLabel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdDistribution11 {
    terms: [C64; 11],
}

impl KdDistribution11 {
    pub fn from_terms(terms: [C64; 11]) -> Self {
        Self { terms }
    }

    pub fn term(&self, path: PathLabel) -> C64 {
        self.terms[PathLabel::ALL.iter().position(|&p| p == path).unwrap()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (PathLabel, C64)> + '_ {
        PathLabel::ALL.iter().copied().zip(self.terms.iter().copied())
    }

    pub fn total(&self) -> C64 {
        self.terms.iter().sum()
    }

    /// Sum of the terms of all paths passing through `outcome`; equals the
    /// Born probability of the outcome for distributions of valid states.
    pub fn marginal(&self, outcome: OutcomeId) -> C64 {
        self.iter()
            .filter(|(p, _)| p.passes_through(outcome))
            .map(|(_, t)| t)
            .sum()
    }

    /// Smallest real part over the eleven terms.
    pub fn min_real(&self) -> f64 {
        self.terms.iter().map(|t| t.re).fold(f64::INFINITY, f64::min)
    }

    /// ϱ(a,b) for an arbitrary ordered pair covered by the distribution,
    /// conjugating a stored term when the printed order is reversed.
    pub fn pair_term(&self, a: OutcomeId, b: OutcomeId) -> Option<C64> {
        for (path, value) in self.iter() {
            match path.kd_pair() {
                Some((x, y)) if (x, y) == (a, b) => return Some(value),
                Some((x, y)) if (y, x) == (a, b) => return Some(value.conj()),
                _ => {}
            }
        }
        None
    }

    /// JSON view keyed by path label, values as [re, im].
    pub fn export(&self) -> BTreeMap<String, [f64; 2]> {
        self.iter()
            .map(|(p, t)| (p.label().to_string(), [t.re, t.im]))
            .collect()
    }
}

/// All eleven terms: the ten pair terms of the paths plus ϱ(0).
pub fn eleven_terms(rho: &DensityMatrix, frame: &PentagonFrame) -> KdDistribution11 {
    let mut terms = [C64::new(0.0, 0.0); 11];
    for (slot, path) in PathLabel::ALL.iter().enumerate() {
        terms[slot] = match path.kd_pair() {
            Some((a, b)) => kd_term(rho, a, b, frame),
            None => rho_zero(rho, frame),
        };
    }
    KdDistribution11 { terms }
}

/// The five decompositions of the identity into three transition operators,
/// one Λ̂(a,b) per path, grouped so that no two paths in a line share an
/// outcome in any context.
pub const IDENTITY_LINES: [[(OutcomeId, OutcomeId); 3]; 5] = {
    use OutcomeId::*;
    [
        [(One, S2), (F, Two), (D2, S1)],
        [(S1, Two), (S2, One), (Three, F)],
        [(F, One), (Two, S1), (D1, S2)],
        [(S2, S1), (One, F), (P1, Two)],
        [(Two, F), (S1, S2), (P2, One)],
    ]
};

/// Residuals of the five identity decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Max-norm of (Λ̂₁ + Λ̂₂ + Λ̂₃ − I) per line.
    pub residuals: [f64; 5],
}

/// Check Σ Λ̂(a,b) = I for each of the five lines; all residuals must stay
/// below 1e-10.
pub fn verify_identities(frame: &PentagonFrame) -> Result<IdentityReport, KdError> {
    let mut residuals = [0.0; 5];
    for (i, line) in IDENTITY_LINES.iter().enumerate() {
        let mut sum = OperatorMatrix::zero();
        for (a, b) in line {
            sum = sum + lambda_op(frame.vector(*a), frame.vector(*b))?;
        }
        residuals[i] = (sum - OperatorMatrix::identity()).max_norm();
    }
    let lines: Vec<usize> = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| **r > TOL)
        .map(|(i, _)| i + 1)
        .collect();
    if lines.is_empty() {
        Ok(IdentityReport { residuals })
    } else {
        Err(KdError::IdentityViolation { lines, residuals })
    }
}

/// The KD terms of the five determinism constraints, in the printed order;
/// the weight of each term is 1/|⟨a|b⟩|², and each weighted line sums to 1
/// for every valid state.
pub const DETERMINISM_LINES: [[(OutcomeId, OutcomeId); 3]; 5] = {
    use OutcomeId::*;
    [
        [(One, S2), (F, Two), (D2, S1)],
        [(S1, Two), (S2, One), (Three, F)],
        [(F, One), (Two, S1), (D1, S2)],
        [(S2, S1), (One, F), (P1, Two)],
        [(Two, F), (S1, S2), (P2, One)],
    ]
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminismReport {
    /// |weighted sum − 1| per line.
    pub residuals: [f64; 5],
}

/// Evaluate the five weighted KD-term sums against 1. Weights are computed
/// from the frame rather than hard-coded, so the check applies to any valid
/// angle frame.
pub fn check_determinism(
    terms: &KdDistribution11,
    frame: &PentagonFrame,
) -> Result<DeterminismReport, KdError> {
    let mut residuals = [0.0; 5];
    for (i, line) in DETERMINISM_LINES.iter().enumerate() {
        let mut sum = C64::new(0.0, 0.0);
        for (a, b) in line {
            let weight = 1.0 / frame.inner(*a, *b).norm_sqr();
            let term = terms
                .pair_term(*a, *b)
                .expect("every determinism pair maps to a stored path term");
            sum += weight * term;
        }
        residuals[i] = (sum - C64::new(1.0, 0.0)).norm();
    }
    let lines: Vec<usize> = residuals
        .iter()
        .enumerate()
        .filter(|(_, r)| **r > TOL)
        .map(|(i, _)| i + 1)
        .collect();
    if lines.is_empty() {
        Ok(DeterminismReport { residuals })
    } else {
        Err(KdError::ConstraintViolation { lines, residuals })
    }
}

/// The two-context KD distribution over {f, S2, P2} × {1, 2, 3}.
///
/// The (S2, 2) cell is structurally forbidden: ⟨2|S2⟩ = 0 makes the term
/// vanish identically, so it is excluded rather than reported as a zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdTable {
    entries: [[Option<C64>; 3]; 3],
}

impl KdTable {
    pub const ROWS: [OutcomeId; 3] = [OutcomeId::F, OutcomeId::S2, OutcomeId::P2];
    pub const COLS: [OutcomeId; 3] = [OutcomeId::One, OutcomeId::Two, OutcomeId::Three];

    pub fn entry(&self, row: OutcomeId, col: OutcomeId) -> Option<C64> {
        let i = Self::ROWS.iter().position(|&r| r == row)?;
        let j = Self::COLS.iter().position(|&c| c == col)?;
        self.entries[i][j]
    }

    pub fn row_sum(&self, row: OutcomeId) -> C64 {
        let i = Self::ROWS.iter().position(|&r| r == row).unwrap();
        self.entries[i].iter().flatten().sum()
    }

    pub fn col_sum(&self, col: OutcomeId) -> C64 {
        let j = Self::COLS.iter().position(|&c| c == col).unwrap();
        self.entries.iter().filter_map(|row| row[j]).sum()
    }

    pub fn total(&self) -> C64 {
        self.entries.iter().flatten().flatten().sum()
    }

    pub fn export(&self) -> KdTableExport {
        KdTableExport {
            rows: Self::ROWS.map(|o| o.label().to_string()),
            cols: Self::COLS.map(|o| o.label().to_string()),
            entries: self
                .entries
                .map(|row| row.map(|cell| cell.map(|z| [z.re, z.im]))),
            forbidden: ["S2".to_string(), "2".to_string()],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KdTableExport {
    pub rows: [String; 3],
    pub cols: [String; 3],
    pub entries: [[Option<[f64; 2]>; 3]; 3],
    pub forbidden: [String; 2],
}

/// The eight allowed entries ϱ(col, row) of the two-context table.
pub fn kd_table(rho: &DensityMatrix, frame: &PentagonFrame) -> KdTable {
    let mut entries = [[None; 3]; 3];
    for (i, row) in KdTable::ROWS.iter().enumerate() {
        for (j, col) in KdTable::COLS.iter().enumerate() {
            if (*row, *col) == (OutcomeId::S2, OutcomeId::Two) {
                continue;
            }
            entries[i][j] = Some(kd_term(rho, *col, *row, frame));
        }
    }
    KdTable { entries }
}

/// Residuals of the three pair-sum relations splitting each completed table
/// entry over the two paths containing its outcome pair:
/// ϱ(3,S2) = ϱ(S1,S2) + ϱ(D1,S2), ϱ(2,P2) = ϱ(2,S1) + ϱ(2,P1),
/// ϱ(3,P2) = ϱ(S1,D2) + ϱ(0).
pub fn pair_sum_relations(rho: &DensityMatrix, frame: &PentagonFrame) -> [f64; 3] {
    use OutcomeId::*;
    let kd = |a, b| kd_term(rho, a, b, frame);
    let r1 = kd(Three, S2) - (kd(S1, S2) + kd(D1, S2));
    let r2 = kd(Two, P2) - (kd(Two, S1) + kd(Two, P1));
    let r3 = kd(Three, P2) - (kd(S1, D2) + rho_zero(rho, frame));
    [r1.norm(), r2.norm(), r3.norm()]
}

/// The cyclic product ⟨3|D1⟩⟨D1|P1⟩⟨P1|P2⟩⟨P2|D2⟩⟨D2|3⟩ over the five
/// unique outcomes. Invariant under per-vector phase changes.
pub fn bargmann_invariant(frame: &PentagonFrame) -> C64 {
    use OutcomeId::*;
    let chain = [Three, D1, P1, P2, D2, Three];
    chain
        .windows(2)
        .map(|w| frame.inner(w[0], w[1]))
        .product()
}

/// Born probability of an outcome, Tr(ρ̂ |a⟩⟨a|).
pub fn born_probability(rho: &DensityMatrix, outcome: OutcomeId, frame: &PentagonFrame) -> f64 {
    rho.born_probability(frame.vector(outcome))
}

/// Born probabilities of the three outcomes of a context.
pub fn context_probabilities(
    rho: &DensityMatrix,
    context: ContextId,
    frame: &PentagonFrame,
) -> [f64; 3] {
    context.members().map(|o| born_probability(rho, o, frame))
}
