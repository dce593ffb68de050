//! Finite R-trees and the free space over them.

pub mod criteria;
pub mod godard;
pub mod rtree;
pub mod step;

pub use criteria::{best_subtree, equi_integrability_report, min_defect_k_generators, EquiReport, SubtreeChoice};
pub use godard::{
    dist_to_small_support, dist_to_subtree, godard_transform, inverse_godard, l1_norm, mass_outside, top_mass,
    top_mass_inverse, tree_dual_norm, TreeOracle,
};
pub use rtree::{tree_distance, RTree, Subtree, TreePoint, TreeSpace};
pub use step::{EdgeSteps, L1Step, Piece};
