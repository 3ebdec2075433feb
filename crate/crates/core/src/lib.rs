//! Binary ℤ-sequences, their frequencies and orbit dynamics, and finite
//! detectors for independence, order and strict order in relation matrices.
//!
//! Numeric results are generic over [`Scalar`] (`f32` or `f64`); cylinder
//! masses also accept exact rationals. Type aliases at the crate root fix the
//! scalar for the common cases.

pub mod detect;
pub mod dynamics;
mod error;
pub mod freq;
pub mod gen;
mod scalar;
pub mod seqcore;

pub use detect::{
    ip_witness, max_staircase, op_witness, shelah_bound_table, shelah_decompose, sop_image_check, sop_witness, sw_closed_check, toeplitz_matrix,
    Counterexample, CounterexampleKind, EdgeFill, IPWitness, OPWitness, RelationMatrix, SOPWitness, Selector, ShelahResult,
    SopImageVerdict, SwCheck,
};
pub use dynamics::{
    block_entropy, compact_check, finite_system_entropy, partition_entropy, pushforward_cylinder, rho_language, xi,
    xi_span, FinitePermSystem, Language, MembershipRule, ShiftOrbitSystem, System, SystemSpec,
};
pub use error::{Error, Result};
pub use freq::{
    avg_membership, bernoulli_cylinder, default_tolerance, density, epsilon_wide, frequency_measure,
    intersect_shifts, malg_distance, occurrences, separation_report, AvgMembership,
};
pub use gen::{
    gen_champernowne, gen_champernowne_integers, gen_constant, gen_periodic, gen_pnormal, gen_step, gen_sturmian,
    rado_cayley, RadoCayley, SourceKind, SourceSpec,
};
pub use scalar::Scalar;
pub use seqcore::{
    cantor_distance, closure_contains, cylinder_contains, replay, sw_reach, BitSource, BitWindow, CantorDistance,
    ChampernowneOrder, Move, Polarity, ReachOutcome, SymbolicSource, Word,
};

pub type FrequencyEstimateF64 = freq::FrequencyEstimate<f64>;
pub type FrequencyEstimateF32 = freq::FrequencyEstimate<f32>;
pub type OccurrencesF64 = freq::Occurrences<f64>;
pub type WidenessReportF64 = freq::WidenessReport<f64>;
pub type WidenessReportF32 = freq::WidenessReport<f32>;
pub type SeparationReportF64 = freq::SeparationReport<f64>;
pub type EntropyEstimateF64 = dynamics::EntropyEstimate<f64>;
pub type EntropyEstimateF32 = dynamics::EntropyEstimate<f32>;
pub type CompactnessReportF64 = dynamics::CompactnessReport<f64>;
pub type FinitePermSystemF64 = dynamics::FinitePermSystem<f64>;
