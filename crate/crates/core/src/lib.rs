//! Hybrid quantum walks on edge-labeled graphs.
//!
//! A walk couples a coin space spanned by the edge labels to the vertex
//! space of a graph. [`walk`] runs the dynamics, [`pst`] builds state
//! transfer schedules on properly colored graphs, and [`matmul`] estimates
//! entries of products of regular-graph adjacency matrices.
//!
//! With the default `parallel` feature, independent runs are spread over a
//! rayon pool; without it the same code runs sequentially.

pub mod exec;
pub mod graphs;
pub mod linalg;
pub mod matmul;
pub mod pst;
pub mod walk;
