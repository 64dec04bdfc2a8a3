//! Finite-scale laboratory for scaling entropy of group actions.
//!
//! The crate is split by role:
//!
//! * [`algebra`]: finite field towers `F_p ⊂ F_{p²} ⊂ F_{p⁴} ⊂ …`, finite groups
//!   (with `SL(2, F_q)` as the main instance), cosets and product-set growth.
//! * [`spaces`]: finite probability spaces, partitions, semimetrics and the
//!   L¹ / m-norms on kernels.
//! * [`entropy`]: ε-entropy of a semimetric, exact for small spaces and
//!   bracketed (packing lower bound, greedy cover upper bound) otherwise.
//! * [`dynamics`]: group actions on finite spaces, translated and Følner-averaged
//!   semimetrics, sequential entropy functionals and Bernoulli shifts.
//! * [`constructions`]: difference-graph colorings, the `SL(2, F_q)` tower
//!   action with its dyadic component metric, transversal partitions and the
//!   experiments built on them.
//! * [`suites`]: seeded randomized verification suites (ε-entropy bounds,
//!   entropy lemmas, averaging identities, colorings, Bernoulli additivity).

pub mod algebra;
pub mod constructions;
pub mod dynamics;
pub mod entropy;
mod error;
pub mod spaces;
pub mod suites;
pub mod table;
pub(crate) mod util;

pub use error::{Error, Result};

/// Version string echoed into every CSV produced by the experiment runners.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
