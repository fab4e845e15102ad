//! System representations, interpolation-data generators and example plants.

mod descriptor;
mod examples;
mod generator;
mod lti;
mod ph;

pub use descriptor::DescriptorModel;
pub use examples::{
    ladder_system, ladder_with_q, smib_generator, smib_inductance, smib_printed_tables,
    smib_system, smib_system_with, SMIB_DEFAULT_DELTA, SMIB_DEFAULT_L55,
};
pub use generator::{Generator, GeneratorLeft, GeneratorRight};
pub use lti::{markov_parameters, LtiSystem, Transfer};
pub(crate) use lti::resolvent_solve;
pub use ph::{ph_to_lti, PortHamiltonianSystem};
