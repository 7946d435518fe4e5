//! Limits of divergent sequences in the image of the representation, and the
//! limit-set and domain constructions built on them.

mod accumulation;
mod domination;
mod flags;
mod myrberg;
mod proper;
mod qp;

pub use accumulation::{
    hyperplane_witness, orbit_accumulation, orbit_accumulation_with, AccumulationOptions,
    AccumulationPoint, AccumulationReport, HyperplaneUnion, HyperplaneWitness, COMPLEMENT_SEP,
    REFINE_BELOW,
};
pub use domination::{dominated_diagnostic, DominationFit};
pub use flags::{element_powers, limit_flags, FlagPair};
pub(crate) use myrberg::evaluate;
pub use myrberg::{
    attach_ecg, ecg_has_neutral_direction, ecg_index, ecg_subspace, extended_cg_limit,
    myrberg_from, myrberg_limit, CrossCheck, LimitEntry, LimitSetSample, CROSS_CHECK_TOL,
    DEFAULT_CROSS_CHECK_COUNT,
};
pub use proper::{
    proper_discontinuity_check, proper_discontinuity_with, OverlapWord, ProperReport,
};
pub use qp::{
    conjugation_sequence, doubling_sequence, image_kernel_distance, loxodromic_limit,
    loxodromic_power_count, normalize_term, power_sequence, quasi_projective_limit,
    sequence_type, QuasiProjLimit, SequenceType, DEFAULT_CONV_TOL, DEFAULT_RANK_TOL,
    DEFAULT_TYPE_TOL,
};
