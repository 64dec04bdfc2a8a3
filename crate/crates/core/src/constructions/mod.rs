//! Explicit constructions: separated families from difference-graph
//! colorings, the `SL(2, F̄_p)` tower action, transversal partitions and the
//! experiments built on them.

mod coloring;
mod experiments;
mod index;
mod tower;
mod transversal;

pub use coloring::{difference_graph, greedy_coloring, is_proper, separated_family, Graph, SeparatedFamily};
pub use index::choose_index_sequence;
pub use tower::{component_metric, sl2_tower_action, tower_field_order, TowerAction, TOWER_ACTION_CAP, TOWER_METRIC_CAP};
pub use transversal::{elementary_generators, left_invariant_semimetric, transversal_partition, InvariantRecipe};
pub use experiments::{
    claim52_experiment, gap_experiment, product_growth_experiment, transversal_experiment, Claim52Report, Claim52Row,
    GapReport, GapRow, ProductGrowthReport, ProductGrowthTrial, TransversalReport, TransversalRow, GROWTH_SET_SIZES,
};
