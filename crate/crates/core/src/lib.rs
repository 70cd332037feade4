//! Quantum mechanics over sets.
//!
//! A finite universe `U` carries two lattices: the subsets of `U`, which form
//! the vector space `Z2^|U|` under symmetric difference, and the partitions of
//! `U`, ordered by refinement. This crate implements both sides together with
//! the probability calculus that ties them: brackets as overlap counts, norms,
//! the counting form of the Born rule, spectral decomposition of attributes,
//! measurement as partition join, and evolution by non-singular GF(2) maps.
//!
//! Everything is exact. Probabilities are rationals; only norms (square
//! roots) and display formatting touch floating point.

pub mod attribute;
mod bits;
pub mod error;
pub mod gf2;
pub mod group;
pub mod partition;
pub mod quantum;
pub mod universe;

pub use attribute::{
    compatible, eigen_sets, inverse_image_partition, is_csca, join_attributes, AnnotatedPartition,
    Attribute, AttributeSet, Value,
};
pub use error::{Error, Result};
pub use gf2::{
    apply_map, check_basis, is_nonsingular, ket_table, Basis, KetTable, LinearMap, RowOrder,
    SetKet, DEFAULT_TABLE_BOUND,
};
pub use group::{
    generate_group, is_invariant, orbit_partition, verify_group_axioms, AxiomReport, Permutation,
    TransformationGroup, DEFAULT_GROUP_BOUND,
};
pub use partition::{
    block_sizes, covers, discrete, dit, enumerate_partitions, indiscrete, join, logical_entropy,
    meet, refines, DitSet, SetPartition, DEFAULT_PARTITION_BOUND,
};
pub use quantum::{
    born_distribution, bracket, cascade_distribution, csca_measure, csca_measure_from, evolve,
    ketbra_resolve, measure_distribution, measure_sample, measure_sample_at, measurement_join,
    norm, pythagoras_check, spectral_decompose, Bracket, FinalOutcome, KetBraResolution,
    MeasurementJoin, MeasurementRecord, MeasurementStep, Norm, Outcome, OutcomeDistribution,
    Probability, Projection, SpectralDecomposition,
};
pub use universe::Universe;
