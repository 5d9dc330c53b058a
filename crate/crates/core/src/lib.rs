//! Exact calculus for parabolic vector bundles on marked smooth projective
//! curves.
//!
//! The model is formal and combinatorial: a bundle is a finite sum of
//! semistable atoms, each with a rank, an underlying degree and weight
//! multisets in `[0, 1)` at the marked points. On top of that the crate
//! implements parabolic degree and slope, Harder-Narasimhan spectra, dual,
//! direct sum, tensor product and symmetric powers, pullback and direct
//! image along finite branched coverings, Galois closure of a covering with
//! the induced decomposition of a direct image, ampleness and nefness
//! decision procedures, and randomized verification suites that re-check the
//! structural identities on generated instances. All arithmetic is exact.

// The error enum carries point names and exact rationals for diagnostics; it
// is only built on cold failure paths, so the size is not worth boxing for.
#![allow(clippy::result_large_err)]

pub mod bundle;
pub mod calculus;
pub mod covering;
pub mod curve;
pub mod error;
pub mod galois;
pub mod generate;
pub mod perm;
pub mod positivity;
pub mod rational;
pub mod suites;
pub mod transport;
pub mod weights;
pub mod workspace;

pub use bundle::{BundleLocal, GradedPiece, HnSpectrum, ParabolicBundle, SemistableAtom};
pub use calculus::{QuotientSelection, QUOTIENT_ATOM_BOUND};
pub use covering::{compose, covering_from_monodromy, CoveringMap, FiberProfile, RamifiedPoint};
pub use curve::{MarkedCurve, PointId};
pub use error::{Error, Result};
pub use galois::{
    galois_closure_data, galois_closure_data_with_cap, verify_decomposition, DecompositionReport,
    GaloisClosure, PermutationGroup, SideComparison, DEFAULT_GROUP_CAP,
};
pub use perm::Permutation;
pub use positivity::{
    classify, nef_definitional_harness, NefHarnessReport, NefHarnessStep, PositivityVerdict,
};
pub use rational::Rat;
pub use suites::{
    covered_operations, minimize_bundle, minimize_covering, run_suite, trial_seed, SuiteFailure,
    SuiteReport, COVERED_OPERATIONS, SUITES,
};
pub use transport::{
    direct_image, direct_image_reported, pullback, pullback_reported, TransportReport,
};
pub use weights::WeightMultiset;
pub use workspace::Workspace;
