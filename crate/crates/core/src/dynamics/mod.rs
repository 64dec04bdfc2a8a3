//! Finite group actions and the entropy functionals built on them.

mod action;
mod average;
mod bernoulli;
mod growth;
mod sequential;

pub use action::{ActionTable, FolnerFamily, HOMOMORPHISM_FULL_CHECK};
pub use average::{folner_average, phi, phi_profile, translate_semimetric, PhiRow};
pub use bernoulli::{bernoulli_shift, BernoulliShift, BERNOULLI_ATOM_CAP};
pub use growth::{growth_compare, GrowthReport, GrowthRow, GrowthSummary, ProfilePoint};
pub use sequential::{
    refined_orbit_partition, seq_entropy_functional, sequential_entropy_profile, SequentialRow,
};
