//! Validated arrangement types and the valuations they induce.
//!
//! An [`ExperimentalArrangement`] is a Hermitian, trace-one, positive tensor.
//! Its diagonal entries are the potentia of the product-basis [`Power`]s, and
//! `Ψ(P) = Tr(α P)` extends the assignment to every projector through a
//! [`GlobalIntensiveValuation`]. Only finite dimensions are modelled.

mod arrangement;
mod projector;
mod sampling;

pub use arrangement::{
    build_from_mixture, build_from_state_vector, degree_of_complexity, potentia_of_power, purity_abstract,
    purity_operational, validate_isa, AbstractPurity, Check, ExperimentalArrangement, OperationalPurity, Power,
    ValidationReport,
};
pub use projector::{
    build_powers_graph, commutes, potentia_of_projector, verify_additivity, AdditivityReport, GeneralProjector,
    GlobalIntensiveValuation, PowersGraph,
};
pub use sampling::{sample_outcomes, SampleReport, SAMPLER_ALGORITHM};
