//! Exact lattice geometry of Nash blowups of normal toric surfaces.
//!
//! A normal toric surface is the cone `cone{(1,0), (P,Q)}`, or equivalently
//! the Hirzebruch–Jung continued fraction `[1, a_2, ..., a_r]` of `P/Q`.
//! This crate computes the charts of its Nash blowup and normalized Nash
//! blowup from first principles (Hilbert bases, Newton polyhedra, semigroup
//! membership) and checks the classification of the surfaces that one such
//! blowup resolves against that geometry.
//!
//! Everything is generic over an exact integer [`Scalar`]; the aliases below
//! fix it to [`BigInt`].
//!
//! ```
//! use toric_nash::{analyze, hj_expand, BigInt, Characteristic, Mode, SurfaceInput};
//!
//! let cf = hj_expand(&BigInt::from(5), &BigInt::from(12)).unwrap();
//! assert_eq!(cf.to_string(), "[1,2,4,2]");
//! let input = SurfaceInput::ContinuedFraction(cf);
//! let nash = analyze(&input, Mode::Nash, Characteristic::ZERO).unwrap();
//! assert!(!nash.all_smooth && nash.consistent);
//! ```

pub mod cfrac;
pub mod charts;
pub mod classify;
pub mod error;
pub mod lattice;
pub mod newton;
pub mod scalar;

pub use num_bigint::BigInt;

pub use cfrac::{
    convergents, evaluate, hilbert_basis, hilbert_basis_bruteforce, hj_expand, segment_denominator,
};
pub use charts::{
    is_saturated, member, minimal_generators, nash_chart_is_smooth, nash_chart_smoothness,
    normalized_chart_is_smooth, semigroup_chart, AffineSemigroup,
};
pub use classify::{
    analyze, enumerate_surfaces, iterate_normalized, theorem_a_predicate, theorem_b_predicate,
    verify_theorems, Mode, VerificationSummary,
};
pub use error::{Error, Result};
pub use lattice::{det2, normal_form, primitive_part};
pub use newton::{
    localization_cone, localization_cone_raw, log_jacobian_generators, newton_vertices,
    newton_vertices_hull, Characteristic,
};
pub use scalar::Scalar;

pub type LatticeVector = lattice::Vector<BigInt>;
pub type UnimodularMap = lattice::UnimodularMap<BigInt>;
pub type Cone2 = lattice::Cone<BigInt>;
pub type NormalForm = lattice::NormalForm<BigInt>;
pub type ContinuedFraction = cfrac::ContinuedFraction<BigInt>;
pub type ConvergentTable = cfrac::ConvergentTable<BigInt>;
pub type LogJacobianGenerators = newton::LogJacobianGenerators<BigInt>;
pub type NewtonVertexSet = newton::NewtonVertexSet<BigInt>;
pub type LocalizationCone = newton::LocalizationCone<BigInt>;
pub type SemigroupChart = charts::SemigroupChart<BigInt>;
pub type SaturationReport = charts::SaturationReport<BigInt>;
pub type SurfaceInput = classify::SurfaceInput<BigInt>;
pub type AnalysisReport = classify::AnalysisReport<BigInt>;
pub type ResolutionTrace = classify::ResolutionTrace<BigInt>;
