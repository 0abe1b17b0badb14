//! Shared instance builders for the integration suites.
#![allow(dead_code)]

use oddprod::sweep::{build_instance, InstanceSpec, SecondarySpec};
use oddprod::ProductSubgraph;

pub fn instance(
    t: u32,
    r: u32,
    h: u32,
    secondary: SecondarySpec,
    q: f64,
    p: f64,
    seed: u64,
) -> ProductSubgraph {
    build_instance(&InstanceSpec {
        t,
        r,
        h,
        secondary,
        q_vertex: q,
        p_edge: p,
        seed,
    })
    .expect("test instance must build")
}

pub fn path_instance(t: u32, r: u32, h: u32, q: f64, p: f64, seed: u64) -> ProductSubgraph {
    instance(t, r, h, SecondarySpec::Path, q, p, seed)
}

pub fn clique_instance(
    t: u32,
    r: u32,
    h: u32,
    ell: u32,
    q: f64,
    p: f64,
    seed: u64,
) -> ProductSubgraph {
    instance(t, r, h, SecondarySpec::PathClique { ell }, q, p, seed)
}

pub fn general_instance(
    t: u32,
    r: u32,
    h: u32,
    max_deg: u32,
    q: f64,
    p: f64,
    seed: u64,
) -> ProductSubgraph {
    instance(t, r, h, SecondarySpec::GeneralRandom { max_deg }, q, p, seed)
}
