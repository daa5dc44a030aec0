//! The ten outcome vectors and five measurement contexts of the pentagram
//! scenario, their orthogonality graph, the eleven classical paths through
//! the contexts, and the beam-splitter reflectivities of the equivalent
//! three-path interferometer.
//!
//! Adjacent contexts share exactly one outcome, giving a cyclic chain of
//! five orthogonal bases in d = 3. Outcomes 1, 2, S1, S2, f are shared by
//! two contexts each; 3, D1, D2, P1, P2 are unique to one context.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{inner, HilbertError, StateVector, TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PentagonError {
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// One of the ten measurement outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OutcomeId {
    One,
    Two,
    Three,
    S1,
    S2,
    D1,
    D2,
    F,
    P1,
    P2,
}

impl OutcomeId {
    pub const ALL: [OutcomeId; 10] = [
        OutcomeId::One,
        OutcomeId::Two,
        OutcomeId::Three,
        OutcomeId::S1,
        OutcomeId::S2,
        OutcomeId::D1,
        OutcomeId::D2,
        OutcomeId::F,
        OutcomeId::P1,
        OutcomeId::P2,
    ];

    /// The five outcomes shared by two contexts.
    pub const SHARED: [OutcomeId; 5] = [
        OutcomeId::One,
        OutcomeId::Two,
        OutcomeId::S1,
        OutcomeId::S2,
        OutcomeId::F,
    ];

    /// The five outcomes unique to a single context.
    pub const UNIQUE: [OutcomeId; 5] = [
        OutcomeId::Three,
        OutcomeId::D1,
        OutcomeId::D2,
        OutcomeId::P1,
        OutcomeId::P2,
    ];

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&o| o == self).unwrap()
    }

    pub fn label(self) -> &'static str {
        match self {
            OutcomeId::One => "1",
            OutcomeId::Two => "2",
            OutcomeId::Three => "3",
            OutcomeId::S1 => "S1",
            OutcomeId::S2 => "S2",
            OutcomeId::D1 => "D1",
            OutcomeId::D2 => "D2",
            OutcomeId::F => "f",
            OutcomeId::P1 => "P1",
            OutcomeId::P2 => "P2",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|o| o.label() == s)
    }

    /// The contexts this outcome belongs to (two for shared, one for unique).
    pub fn contexts(self) -> &'static [ContextId] {
        match self {
            OutcomeId::One => &[ContextId::C123, ContextId::C1],
            OutcomeId::Two => &[ContextId::C123, ContextId::C2],
            OutcomeId::Three => &[ContextId::C123],
            OutcomeId::S1 => &[ContextId::C1, ContextId::Cf1],
            OutcomeId::S2 => &[ContextId::Cf2, ContextId::C2],
            OutcomeId::D1 => &[ContextId::C1],
            OutcomeId::D2 => &[ContextId::C2],
            OutcomeId::F => &[ContextId::Cf1, ContextId::Cf2],
            OutcomeId::P1 => &[ContextId::Cf1],
            OutcomeId::P2 => &[ContextId::Cf2],
        }
    }
}

impl fmt::Display for OutcomeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for OutcomeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for OutcomeId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        OutcomeId::from_label(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown outcome label {s:?}")))
    }
}

/// One of the five measurement contexts (orthogonal bases).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextId {
    C123,
    C1,
    Cf1,
    Cf2,
    C2,
}

impl ContextId {
    /// All contexts in cyclic order; consecutive entries share one outcome.
    pub const ALL: [ContextId; 5] = [
        ContextId::C123,
        ContextId::C1,
        ContextId::Cf1,
        ContextId::Cf2,
        ContextId::C2,
    ];

    pub fn members(self) -> [OutcomeId; 3] {
        match self {
            ContextId::C123 => [OutcomeId::One, OutcomeId::Two, OutcomeId::Three],
            ContextId::C1 => [OutcomeId::One, OutcomeId::S1, OutcomeId::D1],
            ContextId::C2 => [OutcomeId::Two, OutcomeId::S2, OutcomeId::D2],
            ContextId::Cf1 => [OutcomeId::S1, OutcomeId::F, OutcomeId::P1],
            ContextId::Cf2 => [OutcomeId::S2, OutcomeId::F, OutcomeId::P2],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ContextId::C123 => "C123",
            ContextId::C1 => "C1",
            ContextId::C2 => "C2",
            ContextId::Cf1 => "Cf1",
            ContextId::Cf2 => "Cf2",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        let norm = s.replace('_', "");
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.label().eq_ignore_ascii_case(&norm))
    }

    pub fn contains(self, outcome: OutcomeId) -> bool {
        self.members().contains(&outcome)
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }
}

impl fmt::Display for ContextId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for ContextId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl<'de> Deserialize<'de> for ContextId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ContextId::from_label(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown context label {s:?}")))
    }
}

/// One of the eleven classical paths through the five contexts.
///
/// A path assigns one outcome to every context; shared outcomes merge two
/// assignments into a single segment. Two segments suffice to name every
/// path except the all-unique one, labeled `[0]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathLabel {
    Zero,
    OneP2,
    S1D2,
    F3,
    S2D1,
    TwoP1,
    OneF,
    S1S2,
    TwoF,
    OneS2,
    TwoS1,
}

impl PathLabel {
    pub const ALL: [PathLabel; 11] = [
        PathLabel::Zero,
        PathLabel::OneP2,
        PathLabel::S1D2,
        PathLabel::F3,
        PathLabel::S2D1,
        PathLabel::TwoP1,
        PathLabel::OneF,
        PathLabel::S1S2,
        PathLabel::TwoF,
        PathLabel::OneS2,
        PathLabel::TwoS1,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PathLabel::Zero => "0",
            PathLabel::OneP2 => "1,P2",
            PathLabel::S1D2 => "S1,D2",
            PathLabel::F3 => "f,3",
            PathLabel::S2D1 => "S2,D1",
            PathLabel::TwoP1 => "2,P1",
            PathLabel::OneF => "1,f",
            PathLabel::S1S2 => "S1,S2",
            PathLabel::TwoF => "2,f",
            PathLabel::OneS2 => "1,S2",
            PathLabel::TwoS1 => "2,S1",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|p| p.label() == s)
    }

    /// The ordered pair of outcomes naming the path, `None` for `[0]`.
    pub fn segment_pair(self) -> Option<(OutcomeId, OutcomeId)> {
        use OutcomeId::*;
        match self {
            PathLabel::Zero => None,
            PathLabel::OneP2 => Some((One, P2)),
            PathLabel::S1D2 => Some((S1, D2)),
            PathLabel::F3 => Some((F, Three)),
            PathLabel::S2D1 => Some((S2, D1)),
            PathLabel::TwoP1 => Some((Two, P1)),
            PathLabel::OneF => Some((One, F)),
            PathLabel::S1S2 => Some((S1, S2)),
            PathLabel::TwoF => Some((Two, F)),
            PathLabel::OneS2 => Some((One, S2)),
            PathLabel::TwoS1 => Some((Two, S1)),
        }
    }

    /// The (a, b) argument order of the KD term ϱ(a,b) stored for this path
    /// in the eleven-term distribution, `None` for `[0]` whose weight is not
    /// a single two-outcome KD term.
    pub fn kd_pair(self) -> Option<(OutcomeId, OutcomeId)> {
        use OutcomeId::*;
        match self {
            PathLabel::Zero => None,
            PathLabel::OneP2 => Some((One, P2)),
            PathLabel::S1D2 => Some((S1, D2)),
            PathLabel::F3 => Some((Three, F)),
            PathLabel::S2D1 => Some((D1, S2)),
            PathLabel::TwoP1 => Some((Two, P1)),
            PathLabel::OneF => Some((One, F)),
            PathLabel::S1S2 => Some((S1, S2)),
            PathLabel::TwoF => Some((Two, F)),
            PathLabel::OneS2 => Some((One, S2)),
            PathLabel::TwoS1 => Some((Two, S1)),
        }
    }

    /// The outcome this path assigns to every context, in the order of
    /// [`ContextId::ALL`].
    pub fn assignment(self) -> [OutcomeId; 5] {
        use OutcomeId::*;
        match self {
            PathLabel::Zero => [Three, D1, P1, P2, D2],
            PathLabel::OneP2 => [One, One, P1, P2, D2],
            PathLabel::S1D2 => [Three, S1, S1, P2, D2],
            PathLabel::F3 => [Three, D1, F, F, D2],
            PathLabel::S2D1 => [Three, D1, P1, S2, S2],
            PathLabel::TwoP1 => [Two, D1, P1, P2, Two],
            PathLabel::OneF => [One, One, F, F, D2],
            PathLabel::S1S2 => [Three, S1, S1, S2, S2],
            PathLabel::TwoF => [Two, D1, F, F, Two],
            PathLabel::OneS2 => [One, One, P1, S2, S2],
            PathLabel::TwoS1 => [Two, S1, S1, P2, Two],
        }
    }

    pub fn assigned(self, context: ContextId) -> OutcomeId {
        self.assignment()[context.index()]
    }

    /// Shared outcomes visited by this path (0, 1 or 2 of them).
    pub fn shared_outcomes(self) -> Vec<OutcomeId> {
        let assignment = self.assignment();
        OutcomeId::SHARED
            .iter()
            .copied()
            .filter(|o| assignment.contains(o))
            .collect()
    }

    /// Distinct states visited; shared outcomes count once.
    pub fn segments(self) -> Vec<OutcomeId> {
        let mut seen = Vec::with_capacity(5);
        for o in self.assignment() {
            if !seen.contains(&o) {
                seen.push(o);
            }
        }
        seen
    }

    /// Does the path run through `outcome` in that outcome's own context(s)?
    pub fn passes_through(self, outcome: OutcomeId) -> bool {
        self.assignment().contains(&outcome)
    }
}

impl fmt::Display for PathLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Beam-splitter reflectivities of the three-path interferometer realizing
/// the frame. Each beam splitter is labeled by the outcome shared between
/// the contexts before and after it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reflectivities {
    #[serde(rename = "R1")]
    pub r1: f64,
    #[serde(rename = "R2")]
    pub r2: f64,
    #[serde(rename = "RS1")]
    pub rs1: f64,
    #[serde(rename = "RS2")]
    pub rs2: f64,
    #[serde(rename = "Rf")]
    pub rf: f64,
}

/// The ten outcome vectors. Immutable and validated on construction:
/// every context is orthonormal and no cross-context pair outside the
/// orthogonality graph is orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PentagonFrame {
    vectors: [StateVector; 10],
}

/// conj(u) x conj(v); orthogonal to u and v under the Hermitian inner product.
fn cross_conj(u: &StateVector, v: &StateVector) -> [C64; 3] {
    let a = u.amplitudes();
    let b = v.amplitudes();
    [
        (a[1] * b[2] - a[2] * b[1]).conj(),
        (a[2] * b[0] - a[0] * b[2]).conj(),
        (a[0] * b[1] - a[1] * b[0]).conj(),
    ]
}

impl PentagonFrame {
    /// Build a frame from ten vectors, validating the pentagon structure.
    pub fn new(vectors: [StateVector; 10]) -> Result<Self, PentagonError> {
        let frame = Self { vectors };
        frame.validate()?;
        Ok(frame)
    }

    /// Build a frame without structural validation. Intended for feeding
    /// deliberately broken constructions to the verification routines;
    /// downstream guarantees only hold for frames passing [`validate`].
    ///
    /// [`validate`]: PentagonFrame::validate
    pub fn new_unchecked(vectors: [StateVector; 10]) -> Self {
        Self { vectors }
    }

    /// The canonical frame with |S1⟩ = (|2⟩+|3⟩)/√2 and |S2⟩ = (|1⟩+|3⟩)/√2.
    ///
    /// All components are real; the sign convention fixes
    /// |f⟩ = (|1⟩+|2⟩−|3⟩)/√3, |D1⟩ = (|2⟩−|3⟩)/√2, |D2⟩ = (|1⟩−|3⟩)/√2,
    /// |P1⟩ = (2|1⟩−|2⟩+|3⟩)/√6 and |P2⟩ = (−|1⟩+2|2⟩+|3⟩)/√6.
    pub fn canonical() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t = 1.0 / 3.0_f64.sqrt();
        let u = 1.0 / 6.0_f64.sqrt();
        let v = |re: [f64; 3]| StateVector::from_real(re).expect("canonical vector");
        Self::new([
            StateVector::basis(0),
            StateVector::basis(1),
            StateVector::basis(2),
            v([0.0, s, s]),    // S1
            v([s, 0.0, s]),    // S2
            v([0.0, s, -s]),   // D1
            v([s, 0.0, -s]),   // D2
            v([t, t, -t]),     // f
            v([2.0 * u, -u, u]), // P1
            v([-u, 2.0 * u, u]), // P2
        ])
        .expect("canonical frame is valid")
    }

    /// Generalized frame with |S1⟩ = cosθ1|2⟩ + sinθ1|3⟩ and
    /// |S2⟩ = cosθ2|1⟩ + sinθ2|3⟩; all other vectors follow by orthogonal
    /// complements within their contexts. `from_angles(π/4, π/4)` equals the
    /// canonical frame.
    pub fn from_angles(theta1: f64, theta2: f64) -> Result<Self, PentagonError> {
        for (name, angle) in [("theta1", theta1), ("theta2", theta2)] {
            if angle.sin().abs() <= TOL || angle.cos().abs() <= TOL {
                return Err(PentagonError::DegenerateFrame(format!(
                    "sin and cos of {name} must be nonzero (got {angle})"
                )));
            }
        }
        let one = StateVector::basis(0);
        let two = StateVector::basis(1);
        let three = StateVector::basis(2);
        let s1 = StateVector::from_real([0.0, theta1.cos(), theta1.sin()])?;
        let s2 = StateVector::from_real([theta2.cos(), 0.0, theta2.sin()])?;

        let complement = |label: &str, u: &StateVector, v: &StateVector| {
            let raw = cross_conj(u, v);
            let norm: f64 = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < TOL {
                return Err(PentagonError::DegenerateFrame(format!(
                    "orthogonal complement for {label} collapsed to zero"
                )));
            }
            Ok(StateVector::normalized(raw)?)
        };

        let f = complement("f", &s1, &s2)?;
        let d1 = complement("D1", &s1, &one)?;
        let d2 = complement("D2", &two, &s2)?;
        let p1 = complement("P1", &f, &s1)?;
        let p2 = complement("P2", &s2, &f)?;

        Self::new([one, two, three, s1, s2, d1, d2, f, p1, p2])
    }

    pub fn vector(&self, outcome: OutcomeId) -> &StateVector {
        &self.vectors[outcome.index()]
    }

    pub fn inner(&self, a: OutcomeId, b: OutcomeId) -> C64 {
        inner(self.vector(a), self.vector(b))
    }

    /// Structural validation: orthonormal contexts, and orthogonality
    /// between outcome vectors exactly where the pentagon graph demands it.
    pub fn validate(&self) -> Result<(), PentagonError> {
        for context in ContextId::ALL {
            let m = context.members();
            for i in 0..3 {
                for j in i..3 {
                    let g = self.inner(m[i], m[j]);
                    let want = if i == j { 1.0 } else { 0.0 };
                    if (g - C64::new(want, 0.0)).norm() > TOL {
                        return Err(PentagonError::DegenerateFrame(format!(
                            "context {context} is not orthonormal: <{}|{}> = {g}",
                            m[i], m[j]
                        )));
                    }
                }
            }
        }
        let graph_edges = context_edges();
        for (i, &a) in OutcomeId::ALL.iter().enumerate() {
            for &b in &OutcomeId::ALL[i + 1..] {
                let overlap = self.inner(a, b).norm();
                let is_graph_edge = graph_edges.contains(&sorted_pair(a, b));
                if !is_graph_edge && overlap <= TOL {
                    return Err(PentagonError::DegenerateFrame(format!(
                        "unexpected orthogonality between {a} and {b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Multiply each outcome vector by a unit-modulus phase. KD terms and
    /// all probabilities are invariant under this relabeling.
    pub fn apply_phases(&self, phases: &[C64; 10]) -> Result<Self, PentagonError> {
        let mut vectors = self.vectors.clone();
        for (vec, phase) in vectors.iter_mut().zip(phases.iter()) {
            *vec = vec.with_phase(*phase);
        }
        Self::new(vectors)
    }

    /// JSON-friendly view: outcome label → [re, im] component pairs, plus
    /// context membership lists.
    pub fn export(&self) -> FrameExport {
        let mut vectors = BTreeMap::new();
        for o in OutcomeId::ALL {
            let amp = self.vector(o).amplitudes();
            vectors.insert(
                o.label().to_string(),
                [
                    [amp[0].re, amp[0].im],
                    [amp[1].re, amp[1].im],
                    [amp[2].re, amp[2].im],
                ],
            );
        }
        let mut contexts = BTreeMap::new();
        for c in ContextId::ALL {
            contexts.insert(
                c.label().to_string(),
                c.members().map(|o| o.label().to_string()),
            );
        }
        FrameExport { vectors, contexts }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameExport {
    pub vectors: BTreeMap<String, [[f64; 2]; 3]>,
    pub contexts: BTreeMap<String, [String; 3]>,
}

fn sorted_pair(a: OutcomeId, b: OutcomeId) -> (OutcomeId, OutcomeId) {
    if a.index() <= b.index() {
        (a, b)
    } else {
        (b, a)
    }
}

/// The 15 orthogonality edges implied by context membership.
fn context_edges() -> Vec<(OutcomeId, OutcomeId)> {
    let mut edges = Vec::with_capacity(15);
    for context in ContextId::ALL {
        let m = context.members();
        for i in 0..3 {
            for j in (i + 1)..3 {
                let e = sorted_pair(m[i], m[j]);
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
        }
    }
    edges
}

/// Orthogonality relations between the ten outcome vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityGraph {
    edges: Vec<(OutcomeId, OutcomeId)>,
}

impl OrthogonalityGraph {
    pub fn edges(&self) -> &[(OutcomeId, OutcomeId)] {
        &self.edges
    }

    pub fn has_edge(&self, a: OutcomeId, b: OutcomeId) -> bool {
        self.edges.contains(&sorted_pair(a, b))
    }

    pub fn degree(&self, a: OutcomeId) -> usize {
        self.edges.iter().filter(|(x, y)| *x == a || *y == a).count()
    }

    /// True iff the graph has exactly the 15 context edges and nothing else.
    pub fn matches_pentagon(&self) -> bool {
        let expected = context_edges();
        self.edges.len() == expected.len() && self.edges.iter().all(|e| expected.contains(e))
    }
}

/// Edge (a,b) iff |⟨a|b⟩| ≤ 1e-10.
pub fn orthogonality_graph(frame: &PentagonFrame) -> OrthogonalityGraph {
    let mut edges = Vec::new();
    for (i, &a) in OutcomeId::ALL.iter().enumerate() {
        for &b in &OutcomeId::ALL[i + 1..] {
            if frame.inner(a, b).norm() <= TOL {
                edges.push((a, b));
            }
        }
    }
    OrthogonalityGraph { edges }
}

/// The eleven paths of the scenario, checked against the frame: every pair
/// of states along one path must have a non-zero inner product.
pub fn paths(frame: &PentagonFrame) -> Result<[PathLabel; 11], PentagonError> {
    for path in PathLabel::ALL {
        let segments = path.segments();
        for (i, &a) in segments.iter().enumerate() {
            for &b in &segments[i + 1..] {
                if frame.inner(a, b).norm() <= TOL {
                    return Err(PentagonError::DegenerateFrame(format!(
                        "path [{path}] broken: <{a}|{b}> = 0"
                    )));
                }
            }
        }
    }
    Ok(PathLabel::ALL)
}

/// Squared overlaps of the basis pairs mixed by each beam splitter.
pub fn reflectivities(frame: &PentagonFrame) -> Reflectivities {
    use OutcomeId::*;
    Reflectivities {
        r1: frame.inner(Two, S1).norm_sqr(),
        r2: frame.inner(One, S2).norm_sqr(),
        rs1: frame.inner(D1, P1).norm_sqr(),
        rs2: frame.inner(D2, P2).norm_sqr(),
        rf: frame.inner(D1, D2).norm_sqr(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    const FRAC_PI_5: f64 = PI / 5.0;

    fn r(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn canonical_matches_printed_components() {
        let frame = PentagonFrame::canonical();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t = 1.0 / 3.0_f64.sqrt();
        let u = 1.0 / 6.0_f64.sqrt();
        let cases: [(OutcomeId, [f64; 3]); 7] = [
            (OutcomeId::S1, [0.0, s, s]),
            (OutcomeId::S2, [s, 0.0, s]),
            (OutcomeId::F, [t, t, -t]),
            (OutcomeId::D1, [0.0, s, -s]),
            (OutcomeId::D2, [s, 0.0, -s]),
            (OutcomeId::P1, [2.0 * u, -u, u]),
            (OutcomeId::P2, [-u, 2.0 * u, u]),
        ];
        for (o, comps) in cases {
            let amp = frame.vector(o).amplitudes();
            for k in 0..3 {
                assert!((amp[k] - r(comps[k])).norm() < 1e-15, "{o} component {k}");
            }
        }
    }

    #[test]
    fn canonical_d2_matches_nonorthogonal_expansion() {
        // |D2> ∝ |S2> + √2 |2> − 2 |S1>, normalized
        let frame = PentagonFrame::canonical();
        let s1 = frame.vector(OutcomeId::S1).amplitudes();
        let s2 = frame.vector(OutcomeId::S2).amplitudes();
        let two = frame.vector(OutcomeId::Two).amplitudes();
        let mut raw = [C64::new(0.0, 0.0); 3];
        for k in 0..3 {
            raw[k] = s2[k] + 2.0_f64.sqrt() * two[k] - 2.0 * s1[k];
        }
        let expected = StateVector::normalized(raw).unwrap();
        let d2 = frame.vector(OutcomeId::D2);
        for k in 0..3 {
            assert!((expected.amplitudes()[k] - d2.amplitudes()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn three_f_overlap_squared_is_one_third() {
        let frame = PentagonFrame::canonical();
        let p = frame.inner(OutcomeId::Three, OutcomeId::F).norm_sqr();
        assert!((p - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn from_angles_quarter_pi_equals_canonical() {
        let canonical = PentagonFrame::canonical();
        let frame = PentagonFrame::from_angles(FRAC_PI_4, FRAC_PI_4).unwrap();
        for o in OutcomeId::ALL {
            let a = canonical.vector(o).amplitudes();
            let b = frame.vector(o).amplitudes();
            for k in 0..3 {
                assert!((a[k] - b[k]).norm() < 1e-12, "{o}");
            }
        }
    }

    #[test]
    fn from_angles_generic_frame_is_valid() {
        let frame = PentagonFrame::from_angles(FRAC_PI_3, FRAC_PI_4).unwrap();
        assert!(orthogonality_graph(&frame).matches_pentagon());
        assert!(paths(&frame).is_ok());

        let frame = PentagonFrame::from_angles(FRAC_PI_3, FRAC_PI_5).unwrap();
        assert!(orthogonality_graph(&frame).matches_pentagon());
    }

    #[test]
    fn from_angles_rejects_degenerate_angles() {
        assert!(matches!(
            PentagonFrame::from_angles(0.0, 1.0),
            Err(PentagonError::DegenerateFrame(_))
        ));
        assert!(matches!(
            PentagonFrame::from_angles(1.0, std::f64::consts::FRAC_PI_2),
            Err(PentagonError::DegenerateFrame(_))
        ));
    }

    #[test]
    fn context_gram_matrices_are_identity() {
        for frame in [
            PentagonFrame::canonical(),
            PentagonFrame::from_angles(0.9, 0.4).unwrap(),
        ] {
            for context in ContextId::ALL {
                let m = context.members();
                for i in 0..3 {
                    for j in 0..3 {
                        let g = frame.inner(m[i], m[j]);
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((g - r(want)).norm() < TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn context_completeness() {
        let frame = PentagonFrame::from_angles(1.1, 0.7).unwrap();
        for context in ContextId::ALL {
            let mut sum = crate::hilbert::OperatorMatrix::zero();
            for o in context.members() {
                sum = sum + frame.vector(o).projector();
            }
            assert!((sum - crate::hilbert::OperatorMatrix::identity()).max_norm() < 1e-12);
        }
    }

    #[test]
    fn inner_product_consistency_relations() {
        // <1|D2><D2|S1> = −<1|S2><S2|S1> and <f|D2><D2|S1> = −<f|2><2|S1>
        use OutcomeId::*;
        for frame in [
            PentagonFrame::canonical(),
            PentagonFrame::from_angles(0.6, 1.2).unwrap(),
            PentagonFrame::from_angles(FRAC_PI_3, FRAC_PI_5).unwrap(),
        ] {
            let lhs1 = frame.inner(One, D2) * frame.inner(D2, S1);
            let rhs1 = -frame.inner(One, S2) * frame.inner(S2, S1);
            assert!((lhs1 - rhs1).norm() < 1e-12);
            let lhs2 = frame.inner(F, D2) * frame.inner(D2, S1);
            let rhs2 = -frame.inner(F, Two) * frame.inner(Two, S1);
            assert!((lhs2 - rhs2).norm() < 1e-12);
        }
    }

    #[test]
    fn orthogonality_graph_canonical() {
        let frame = PentagonFrame::canonical();
        let graph = orthogonality_graph(&frame);
        assert_eq!(graph.edges().len(), 15);
        assert!(graph.matches_pentagon());
        assert!(graph.has_edge(OutcomeId::Two, OutcomeId::S2));
        assert!(!graph.has_edge(OutcomeId::One, OutcomeId::F));
        assert_eq!(graph.degree(OutcomeId::F), 4);
    }

    #[test]
    fn path_table_structure() {
        // Table-level facts: segment counts partition 1/5/5 and the [0] path
        // visits each unique outcome.
        let zero = PathLabel::Zero.assignment();
        assert_eq!(
            zero,
            [
                OutcomeId::Three,
                OutcomeId::D1,
                OutcomeId::P1,
                OutcomeId::P2,
                OutcomeId::D2
            ]
        );
        let with_two_shared = PathLabel::ALL
            .iter()
            .filter(|p| p.shared_outcomes().len() == 2)
            .count();
        let with_one_shared = PathLabel::ALL
            .iter()
            .filter(|p| p.shared_outcomes().len() == 1)
            .count();
        assert_eq!(with_two_shared, 5);
        assert_eq!(with_one_shared, 5);
        assert_eq!(PathLabel::Zero.shared_outcomes().len(), 0);
        // segment counts: 5 for [0], 4 with one shared outcome, 3 with two
        for p in PathLabel::ALL {
            assert_eq!(p.segments().len(), 5 - p.shared_outcomes().len());
        }
        // row [1,f] assigns D2 to context C2
        assert_eq!(PathLabel::OneF.assigned(ContextId::C2), OutcomeId::D2);
    }

    #[test]
    fn each_context_outcome_is_assigned_consistently() {
        // in every context, each path assigns an outcome belonging to it,
        // and each outcome of the context is used by the right path count
        for context in ContextId::ALL {
            for path in PathLabel::ALL {
                assert!(context.contains(path.assigned(context)));
            }
            for o in context.members() {
                let n = PathLabel::ALL
                    .iter()
                    .filter(|p| p.assigned(context) == o)
                    .count();
                // shared outcomes lie on 3 paths, unique outcomes on 5
                let expected = if OutcomeId::SHARED.contains(&o) { 3 } else { 5 };
                assert_eq!(n, expected, "context {context}, outcome {o}");
            }
        }
    }

    #[test]
    fn path_pairs_have_nonzero_overlap() {
        let frame = PentagonFrame::canonical();
        for p in PathLabel::ALL {
            if let Some((a, b)) = p.segment_pair() {
                assert!(frame.inner(a, b).norm() > TOL, "path [{p}]");
            }
        }
        assert!(paths(&frame).is_ok());
    }

    #[test]
    fn canonical_reflectivities() {
        let refl = reflectivities(&PentagonFrame::canonical());
        assert!((refl.r1 - 0.5).abs() < 1e-14);
        assert!((refl.r2 - 0.5).abs() < 1e-14);
        assert!((refl.rs1 - 1.0 / 3.0).abs() < 1e-14);
        assert!((refl.rs2 - 1.0 / 3.0).abs() < 1e-14);
        assert!((refl.rf - 0.25).abs() < 1e-14);
    }

    #[test]
    fn labels_round_trip() {
        for o in OutcomeId::ALL {
            assert_eq!(OutcomeId::from_label(o.label()), Some(o));
        }
        for c in ContextId::ALL {
            assert_eq!(ContextId::from_label(c.label()), Some(c));
        }
        for p in PathLabel::ALL {
            assert_eq!(PathLabel::from_label(p.label()), Some(p));
        }
        assert_eq!(ContextId::from_label("C_123"), Some(ContextId::C123));
        assert_eq!(OutcomeId::from_label("q"), None);
    }

    #[test]
    fn phase_relabeling_keeps_frame_valid() {
        let frame = PentagonFrame::canonical();
        let mut phases = [C64::new(1.0, 0.0); 10];
        phases[3] = C64::from_polar(1.0, 0.8);
        phases[7] = C64::from_polar(1.0, -2.3);
        let rotated = frame.apply_phases(&phases).unwrap();
        assert!(orthogonality_graph(&rotated).matches_pentagon());
    }
}
