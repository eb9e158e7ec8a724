//! Finite open dynamics as lax functors.
//!
//! Transitions are set-valued maps `U -> P(V)` ordered by reverse inclusion.
//! A multi-dynamic assigns a state set to every object of a finite engine
//! category and a parameter-indexed family of transitions to every arrow,
//! composing laxly. Open dynamics add a clock and a datation; their
//! realizations are enumerated exactly and cross-checked by brute force.

pub mod cat;
pub mod dynamic;
pub mod error;
pub mod io;
pub mod morph;
pub mod open;
pub mod rel;
pub mod report;
pub mod testkit;

pub use cat::{
    build_engine, chain_engine, check_functor, cyclic_engine, discrete_engine, free_engine_on_dag, hom_set,
    monoid_engine, Arrow, DagEdge, EngineCategory, EngineFunctor,
};
pub use dynamic::{
    build_closed_dynamic, build_multi_dynamic, check_laws, clock_from_functor, component_at, is_deterministic_dynamic,
    is_quasi_deterministic_dynamic, total_state_set, Clock, ClosedDynamic, DynamicData, MultiDynamic, CLOSED_PARAM,
};
pub use error::{Error, Result};
pub use io::{parse_spec, serialize_spec, Document, Kind};
pub use morph::{
    check_dynamorphism, check_same_engine_multi, compose_dynamorphisms, is_deterministic_morphism,
    is_quasi_deterministic_morphism, naturality_intersection_check, Dynamorphism,
};
pub use open::{
    brute_force_realizations, build_open_dynamic, check_lax_section, check_open_dynamorphism, enumerate_realizations,
    sample_trajectory, verify_realization, EnumerateOptions, Enumeration, OpenDynamic, OpenDynamorphism, Realization,
    Trajectory,
};
pub use rel::{
    compose, compose_family, identity_transition, is_deterministic, is_quasi_deterministic, leq_constraint, leq_family,
    subseteq, FiniteSet, Transition, TransitionFamily,
};
pub use report::{Law, Report, Violation};
