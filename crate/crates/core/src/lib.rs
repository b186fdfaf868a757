//! Maximal-clique graph generative models.
//!
//! Given an input graph, the models in [`models`] plant edges from its
//! maximal cliques with probability `p` under one of three dependency
//! structures (edge independent, node independent, fully dependent), then
//! union the result with an odds-product residual graph fitted so expected
//! degrees match the input. [`overlap`] measures how much independent
//! samples share, [`stats`] compares samples with the input, and
//! [`bounds`] checks the subgraph-count ceilings each dependency level
//! imposes at a given overlap.

pub mod bounds;
pub mod clique;
pub mod datasets;
pub mod error;
pub mod graph;
pub mod models;
pub mod overlap;
pub mod rng;
pub mod stats;
pub mod sweep;

pub use clique::{enumerate_maximal_cliques, CliqueSet};
pub use error::{Error, Result};
pub use graph::{DegreeSequence, Graph};
pub use models::{Dependency, GraphSampler, OddsProductModel, PlantedModel, UnionModel};
pub use stats::StatsReport;
