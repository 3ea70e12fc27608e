//! Simple Lie algebras in Chevalley bases and their irreducible modules.

mod algebra;
mod highest;
mod rootsys;

pub use algebra::{basis_matrices, BasisKind, ChevalleyAlgebra, IrrepModule, RootRecipe};
pub use highest::{build_generators, GeneratorRep};
pub use rootsys::{cartan_matrix, check_dominant, classify_cartan, is_connected, positive_roots, symmetrizer, RootSystem};
