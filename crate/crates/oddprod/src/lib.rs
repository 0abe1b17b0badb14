//! Odd colourings of graphs with product structure.
//!
//! A colouring is *odd* if every non-isolated vertex sees some colour an odd
//! number of times in its neighbourhood; it is *proper odd* if adjacent
//! vertices additionally get different colours. This crate constructs proper
//! odd colourings for subgraphs of three strong products of an
//! elimination-ordered host H of width t:
//!
//! | product          | secondary factor                 | palette             |
//! |------------------|----------------------------------|---------------------|
//! | H ⊠ P            | path                             | 8t+4                |
//! | H ⊠ P ⊠ K_ℓ      | path × clique of order ℓ         | 8ℓt+5ℓ−1            |
//! | H ⊠ I            | any graph of maximum degree Δ    | (Δ²+Δ)(t+1)+2t+1    |
//!
//! The construction is a single forward greedy pass in lexicographic vertex
//! order with per-vertex parity bookkeeping, so it runs in near-linear time.
//! Independent verifiers check properness, oddness, and support-set colour
//! distinctness, and a brute-force oracle computes exact odd chromatic
//! numbers for small graphs.
//!
//! The `parallel` feature (on by default) runs batch sweeps, verifiers, and
//! the oracle's top-level branching on rayon; without it everything falls
//! back to sequential code with identical results.

#![forbid(unsafe_code)]

pub mod colouring;
pub mod graph;
pub mod host;
pub mod io;
pub mod oracle;
mod par;
pub mod product;
pub mod report;
pub mod sweep;
pub mod verify;

pub use colouring::{
    colour_subgraph, colour_ttree_maxdeg, colour_ttree_path, colour_ttree_path_clique,
    colour_with_palette, default_palette, forbidden_sets, Colouring, ColouringError, RunStats,
};
pub use graph::SimpleGraph;
pub use host::{random_t_tree, ElimOrderedHost, HostError};
pub use oracle::{exact_odd_chromatic, OracleError, DEFAULT_VERTEX_CAP};
pub use product::{
    product_adjacent, sample_subgraph, ProductError, ProductSubgraph, ProductVertex,
    SecondaryFactor,
};
pub use report::{ValidationReport, Violation};
pub use verify::{verify_odd, verify_proper, verify_support_distinct, ContractError, OddWitness};
