//! Five-context measurement scenario of a qutrit.
//!
//! The crate builds the ten outcome vectors and five orthogonal measurement
//! contexts of the pentagram scenario, computes Kirkwood-Dirac (KD)
//! quasiprobabilities over the eleven classical paths connecting the
//! contexts, reconstructs arbitrary density matrices from five KD
//! coefficients, evaluates the non-contextuality inequality Σ ≤ 2, derives
//! contextual outcome values (weak values) with their fluctuation laws, and
//! simulates finite-shot projective measurements of all of the above.

pub mod contextuality;
pub mod hilbert;
pub mod kd;
pub mod pentagon;
pub mod sim;
pub mod tomography;
pub mod weakvalues;
