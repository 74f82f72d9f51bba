//! Compiles service and channel declarations into a composition model.

mod compose;
mod spec;
mod template;

pub use compose::compose_model;
pub use spec::{
    bound_services, derive_sets, ChannelSpec, CompositionConfig, DerivedSets, GenError, ServiceKind,
    ServiceSpec,
};
pub use template::{model_receiver, model_sender};
