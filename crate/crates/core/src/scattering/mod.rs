//! Zero-energy two-body scattering for radial repulsive potentials, the
//! cutoff trial function built from it, and weighted norms of radial fields.

mod cutoff;
mod potential;
mod solver;

pub use cutoff::{
    cutoff_grid, cutoff_phi, discrepancy_e_phi, weighted_norm, CutoffFunction, NormSpec, RadialSamples,
};
pub use potential::{PotentialShape, RadialPotential};
pub use solver::{second_moment_identity, solve_scattering, ScatteringSolution, ScatteringSummary, SolverOptions};
