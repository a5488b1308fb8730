//! Travelling salesman solvers built around a discrete Hopfield network.
//!
//! The crate provides:
//!
//! * [`instance`]: city sets, Euclidean distance matrices and a JSON file format;
//! * [`tour`]: tours, their 0/1 permutation-matrix encoding and an exact
//!   enumeration solver for small instances;
//! * [`annealing`]: simulated annealing with swap moves and geometric cooling;
//! * [`hopfield`]: the penalty energy, derived weights and asynchronous
//!   threshold dynamics of a Hopfield network over city/position units;
//! * [`baselines`]: nearest-neighbour construction, 2-opt and 3-opt;
//! * [`pipeline`]: the annealing → network hybrid and a seeded benchmark sweep.

pub mod annealing;
pub mod baselines;
pub mod builtin;
pub mod error;
pub mod hopfield;
pub mod instance;
pub mod pipeline;
pub mod plot;
pub mod tour;

pub use annealing::{anneal, AnnealOutcome, SaConfig, SaTrace};
pub use error::{Error, MatrixDefect, Result};
pub use hopfield::{ActivationGrid, HopfieldParams, HopfieldResult, WeightMatrix};
pub use instance::{City, DistanceMatrix, Instance};
pub use pipeline::{BenchmarkReport, HybridReport, ReportFormat, SuccessMetric, SweepConfig};
pub use tour::{Tour, TourMatrix};
