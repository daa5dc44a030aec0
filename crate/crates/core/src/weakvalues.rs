//! Contextual outcome values W(b|a) = ϱ(b,a)/P(a) and their fluctuations.
//!
//! Conditioning the weak value of |b⟩⟨b| on the observed outcome a of
//! another context distributes the total outcome value of 1 over each
//! context. The statistics of W reproduce the eigencontext statistics of
//! b exactly for pure states, both in mean and in fluctuation.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::DensityMatrix;
use crate::kd::{born_probability, kd_term};
use crate::pentagon::{ContextId, OutcomeId, PentagonFrame};

/// Outcomes with probability at or below this threshold leave the weak
/// value undefined; no limiting value is assigned.
pub const ZERO_PROBABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeakValueError {
    #[error("W(..|{outcome}) undefined: P({outcome}) = {probability:.3e} is zero")]
    ZeroProbabilityCondition {
        outcome: OutcomeId,
        probability: f64,
    },
}

/// W(b|a) = ϱ(b,a)/P(a): 1 for b = a, 0 for b orthogonal to a.
pub fn contextual_value(
    rho: &DensityMatrix,
    b: OutcomeId,
    a: OutcomeId,
    frame: &PentagonFrame,
) -> Result<C64, WeakValueError> {
    let probability = born_probability(rho, a, frame);
    if probability <= ZERO_PROBABILITY_TOL {
        return Err(WeakValueError::ZeroProbabilityCondition {
            outcome: a,
            probability,
        });
    }
    Ok(kd_term(rho, b, a, frame) / probability)
}

/// One conditioning outcome of the table: its probability and, when
/// defined, the contextual values of all ten outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeValueRow {
    pub outcome: OutcomeId,
    pub probability: f64,
    /// `None` when the row probability vanishes; indexed like
    /// [`OutcomeId::ALL`] otherwise.
    pub values: Option<[C64; 10]>,
}

/// Contextual values of every outcome, conditioned on the outcomes of one
/// measurement context.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeValueTable {
    pub context: ContextId,
    pub rows: [OutcomeValueRow; 3],
}

impl OutcomeValueTable {
    pub fn row(&self, outcome: OutcomeId) -> Option<&OutcomeValueRow> {
        self.rows.iter().find(|r| r.outcome == outcome)
    }

    /// W(b|a) if the row for `a` is defined.
    pub fn value(&self, b: OutcomeId, a: OutcomeId) -> Option<C64> {
        self.row(a)?.values.map(|v| v[b.index()])
    }

    pub fn export(&self) -> OutcomeValueTableExport {
        OutcomeValueTableExport {
            context: self.context.label().to_string(),
            rows: self
                .rows
                .iter()
                .map(|row| OutcomeValueRowExport {
                    outcome: row.outcome.label().to_string(),
                    probability: row.probability,
                    values: row.values.map(|vals| {
                        OutcomeId::ALL
                            .iter()
                            .map(|o| (o.label().to_string(), [vals[o.index()].re, vals[o.index()].im]))
                            .collect()
                    }),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeValueRowExport {
    pub outcome: String,
    pub probability: f64,
    /// `null` marks a row with vanishing probability.
    pub values: Option<BTreeMap<String, [f64; 2]>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeValueTableExport {
    pub context: String,
    pub rows: Vec<OutcomeValueRowExport>,
}

/// Contextual values of all ten outcomes conditioned on each outcome of
/// `context`. Rows with vanishing probability are flagged undefined rather
/// than given limiting values.
pub fn outcome_value_table(
    rho: &DensityMatrix,
    context: ContextId,
    frame: &PentagonFrame,
) -> OutcomeValueTable {
    let rows = context.members().map(|a| {
        let probability = born_probability(rho, a, frame);
        let values = if probability > ZERO_PROBABILITY_TOL {
            let mut vals = [C64::new(0.0, 0.0); 10];
            for b in OutcomeId::ALL {
                vals[b.index()] = kd_term(rho, b, a, frame) / probability;
            }
            Some(vals)
        } else {
            None
        };
        OutcomeValueRow {
            outcome: a,
            probability,
            values,
        }
    });
    OutcomeValueTable { context, rows }
}

/// Mean, variance and second moment of W(b|·) over one context.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationReport {
    pub outcome: OutcomeId,
    pub context: ContextId,
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
    /// Σ_a |W(b|a)|² P(a) ≤ P(b), with equality for pure states.
    pub bound_satisfied: bool,
}

/// ΔW_b² = Σ_a |W(b|a) − P(b)|² P(a) over the outcomes of `context`,
/// together with mean and second moment. Complex deviations enter through
/// their modulus, which reduces to the plain square for real values.
pub fn fluctuation(
    rho: &DensityMatrix,
    b: OutcomeId,
    context: ContextId,
    frame: &PentagonFrame,
) -> Result<FluctuationReport, WeakValueError> {
    let pb = born_probability(rho, b, frame);
    let mut mean = 0.0;
    let mut variance = 0.0;
    let mut second_moment = 0.0;
    for a in context.members() {
        let w = contextual_value(rho, b, a, frame)?;
        let pa = born_probability(rho, a, frame);
        mean += (w * pa).re;
        variance += (w - C64::new(pb, 0.0)).norm_sqr() * pa;
        second_moment += w.norm_sqr() * pa;
    }
    Ok(FluctuationReport {
        outcome: b,
        context,
        mean,
        variance,
        second_moment,
        bound_satisfied: second_moment <= pb + 1e-10,
    })
}
