//! Lipschitz-free spaces over finite pointed metric spaces.

pub mod cyclic;
pub mod element;
pub mod extension;
pub mod flow;
pub mod l1basis;
pub mod lp;
pub mod molecules;
pub mod norm;
pub mod simplex;
pub mod uniform;

pub use cyclic::{find_norming_function, is_cyclically_monotone, CmReport};
pub use element::{FreeElement, LipFunction, Molecule, MoleculeRep, PartialFunction, Space};
pub use extension::{extend_disjoint, mcshane_extend, DisjointExtension};
pub use lp::{ConstraintGraph, DualProgram};
pub use l1basis::{l1_basis_lower_bound, L1Estimate, MetricOracle, NormOracle, PointProgram};
pub use molecules::{
    apply_weighted_operator, refine_partition, small_mass_modulus, small_mass_modulus_exact, split_by_scale, Modulus,
};
pub use norm::{
    dist_to_subspace, dist_to_subspace_primal, is_convex_representation, molecule_dist_upper, norm_dual, norm_primal,
    DualNorm, PrimalNorm,
};
