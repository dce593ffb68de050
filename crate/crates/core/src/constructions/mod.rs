//! Cantor schemes, the star and dyadic families, and checks on sequences
//! of convex sums of molecules.

pub mod cantor;
pub mod families;
pub mod limit;

pub use cantor::{bilipschitz_constant, cantor_scheme, CantorScheme};
pub use families::{cantor_family, dyadic_family, star_family, SequenceBundle};
pub use limit::{ai_l1_subsequence_probe, small_molecule_limit_check, LimitRow, LimitTable, SubsequenceCertificate};
