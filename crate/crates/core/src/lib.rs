//! Graph limits for edge-decorated graphs.
//!
//! Edges of a graph carry elements of a compact decoration space (a finite
//! label set, a real interval, or a finite binary product). The crate
//! provides sampling of induced decorated subgraphs, homomorphism densities
//! against patterns whose edges carry test functions, equal-measure step
//! graphons and their moment representations, the cut norm of step kernels,
//! weak regularity partitions, and empirical convergence diagnostics.

pub mod convergence;
pub mod cutnorm;
pub mod error;
pub mod graph;
pub mod graphon;
pub mod hom;
pub mod io;
pub mod numeric;
pub mod regularity;
pub mod sampling;
pub mod space;

pub mod cli;

pub use error::{Error, Result};
pub use graph::{DecoratedGraph, PatternGraph};
pub use graphon::{KernelMatrix, MomentFunctionSequence, StepGraphon};
pub use regularity::StepPartition;
pub use space::{Decoration, DecorationSpace, KDistribution, SpaceRef, TestFamily, TestFunction};
