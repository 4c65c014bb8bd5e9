//! Persistent homology of Euclidean point clouds.
//!
//! The pipeline is
//!
//! 1. [`PointCloud`] → [`DistanceMatrix`] ([`pointcloud`]),
//! 2. Vietoris–Rips [`Filtration`] in canonical `(value, dim, lex)` order ([`filtration`]),
//! 3. boundary-matrix reduction over Z/2 into [`PersistencePair`]s and
//!    [`PersistenceDiagram`]s ([`persistence`]),
//! 4. diagram comparison by exact 1-Wasserstein, bottleneck and Sinkhorn ([`distance`]),
//! 5. gradients of diagram functionals with respect to point coordinates and
//!    gradient-descent topology optimization ([`topo_opt`]).
//!
//! Image data in IDX format is turned into point clouds by [`ingest`].

pub mod distance;
pub mod error;
pub mod filtration;
pub mod ingest;
pub mod io;
pub mod persistence;
pub mod pointcloud;
pub mod rng;
pub mod topo_opt;

pub use distance::{GroundMetric, TransportPlan};
pub use error::{Error, Result};
pub use filtration::{Filtration, Radius, Simplex};
pub use ingest::{CropRegion, CropSpec, ImageSet};
pub use persistence::{LifetimeStats, Persistence, PersistenceDiagram, PersistencePair};
pub use pointcloud::{DistanceMatrix, PointCloud};
pub use topo_opt::{DiagramFunctional, Direction, FunctionalKind, GradientField};
