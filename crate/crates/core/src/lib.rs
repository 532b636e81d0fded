//! Random annulus graphs, geometric block models and triangle-count
//! community recovery.
//!
//! Models live on the unit-circumference circle (geodesic distance) or on the
//! unit sphere `S^t` (chord distance). Radii passed to generators are
//! absolute; [`connectivity_scale`] gives the `(ln n / n)^{1/t}` unit that the
//! regime predicates and recovery thresholds are stated in.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod io;
mod quad;
pub mod recovery;
pub mod rng;

pub use analysis::{
    connected_components, count_isolated, count_no_left_neighbor, edge_triangle_counts, is_connected,
    predicted_isolated_rag, predicted_vrg_connectivity, rag_connectivity_sufficient,
    vrg_union_connectivity_sufficient, ComponentLabeling, RegimeVerdict, UnionFind, Verdict,
};
pub use error::{Error, Result};
pub use experiment::{SweepConfig, TrialRecord};
pub use generators::{
    connectivity_scale, gen_gbm, gen_gbm_t, gen_rag, gen_vrg, gen_vrg_union, generate, naive_oracle,
    GeometricInstance, Model, ModelSpec, Positions,
};
pub use geometry::{
    annulus_fraction, cap_fraction, chord_distance, circle_distance, lens_fraction, psi, surface_area,
    AnnulusSpec, CircPosition, Metric, SpherePosition,
};
pub use graph::{Graph, Partition};
pub use recovery::{
    compute_thresholds, min_a_for_recovery, recover_gbm_1d, recover_gbm_highdim, recover_with_locations,
    recovery_guaranteed, RecoveryOutcome, RecoveryThresholds,
};
