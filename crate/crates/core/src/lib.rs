//! Stable marriage analysis through rotation posets, `(a,b)`-supermatch
//! robustness checks, the SAT-SM Boolean formulation and the two-way
//! reduction between SAT-SM and a restricted family of stable marriage
//! instances whose rotation posets are built from 2-pair rotations.
//!
//! The crate is organised by subsystem:
//!
//! - [`marriage`]: instances, matchings, deferred acceptance, blocking pairs.
//! - [`poset`]: rotation discovery, the rotation poset, closed subsets and
//!   full enumeration of the stable matching lattice.
//! - [`robustness`]: `(a,b)`-supermatch decision procedures.
//! - [`satsm`]: SAT-SM instances, CNF generation, DIMACS I/O and a small
//!   complete DPLL solver.
//! - [`reduction`]: SAT-SM to stable marriage construction, family-F
//!   validation, solution mappings and a random instance generator.

pub mod marriage;
pub mod poset;
pub mod reduction;
pub mod robustness;
pub mod satsm;

pub use marriage::{
    blocking_pairs, deferred_acceptance, distance, fixed_pairs, is_stable, parse_instance,
    parse_matching, Instance, InstanceError, Matching, MatchingError, ParseError, Person, Side,
};
pub use poset::{
    enumerate_stable_matchings, find_rotations, men_of, ClosedSubset, EdgeType, PosetError,
    Rotation, RotationPoset, DEFAULT_ENUMERATION_CAP,
};
pub use reduction::{
    generate_random_satsm, map_solution_backward, map_solution_forward, reduce,
    reduce_to_poset, synthesize_preferences, validate_family_f, FamilyFReport, GeneratorParams,
    Reduction, ReductionError,
};
pub use robustness::{
    exists_ab_supermatch, first_ab_supermatch, holds_ab_supermatch, is_11_supermatch_family_f,
    is_ab_supermatch, repairs, RepairWitness, RobustnessError, RobustnessQuery,
    SupermatchVerdict,
};
pub use satsm::{
    audit_schaefer, build_cnf, decode, encode, from_dimacs_model, parse_satsm, solve,
    to_dimacs, Assignment, Cnf, ClauseGroup, SatSmInstance, ValidationReport, Variable,
    Violation,
};
