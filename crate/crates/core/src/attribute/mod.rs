//! Solvers over attribute data.

mod catecm;
mod ecm;

pub use catecm::{catecm_criterion, catecm_fit, categorical_distances, Profiles};
pub use ecm::{ccm_criterion, ccm_distance, ccm_fit, ecm_criterion, ecm_fit, meta_prototypes, EcmState};
