//! Finite probability spaces, partitions, semimetrics and norms on kernels.

mod io;
mod mnorm;
mod partition;
mod prob;
mod semimetric;

pub use io::{read_masses_csv, read_partition_csv, read_semimetric_csv, write_partition_csv, write_semimetric_csv};
pub use mnorm::{m_norm, M_NORM_CAP};
pub use partition::{refine, Partition};
pub(crate) use partition::same_space;
pub(crate) use prob::mass_below;
pub use prob::{FiniteProbSpace, MASS_TOLERANCE};
pub use semimetric::{Kernel, Semimetric, METRIC_TOLERANCE};
