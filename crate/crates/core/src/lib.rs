//! Canonical forms of real vectors and tensors under permutation-group
//! actions.
//!
//! The main entry point is [`Projector`]: build it from an [`ActionSpec`],
//! then call [`Projector::project`] to get the canonical representative of
//! an input together with the group element that produced it. Dirichlet
//! projections by discrete descent live in [`dirichlet`], and [`verify`]
//! holds brute-force oracles for the guarantees the projections rely on.

pub mod actions;
pub mod cayley;
pub mod dirichlet;
pub mod error;
pub mod group;
pub mod perm;
pub mod project;
pub mod verify;

pub use actions::{alternating, cyclic, dihedral, symmetric, tensor_base, ActionSpec};
pub use dirichlet::{descend, descend_multi_seed, Descent, DescentStatus, DirichletConfig};
pub use error::{Error, Result};
pub use group::{build_chain, Family, PermGroup, StabilizerChain};
pub use perm::{format_cycles, parse_cycles, Permutation};
pub use project::{
    mu_average, phi_tensor_fastpath, rank_hat, Direction, PerturbationConfig, ProjectionKind,
    ProjectionResult, Projector, RankVector,
};
pub use verify::SuiteReport;
