//! Anchor-text-aware hyperlink prediction on Wikipedia document networks.
//!
//! The pipeline reads a MediaWiki dump, builds an article network whose edges
//! carry the anchor texts that realize them, extracts topic-centered subgraphs
//! by personalized PageRank, and evaluates link predictors in transductive and
//! inductive settings on candidate pairs found by anchor-text matching.

pub mod anchors;
pub mod cli;
pub mod config;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod predictors;
pub mod synthetic;
pub mod text;

pub use dataset::{Article, Dataset};
pub use error::{Error, Result};
pub use graph::{DocumentNetwork, NodeId};
