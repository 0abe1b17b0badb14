//! Oracle sanity, the naive oddness recount, and the support-distinctness
//! implication.

mod common;

use common::{clique_instance, path_instance};
use oddprod::{
    colour_subgraph, exact_odd_chromatic, verify_odd, verify_proper, verify_support_distinct,
    Colouring, ProductSubgraph, SimpleGraph,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straight recount of neighbourhood colour multiplicities, written
/// independently of the verifier's histogram pass.
fn naive_is_odd(g: &ProductSubgraph, c: &Colouring) -> bool {
    'vertices: for pos in 0..g.n() as u32 {
        let neighbours = g.neighbours_of(pos);
        if neighbours.is_empty() {
            continue;
        }
        for &w in neighbours {
            let colour = c.get(w);
            let count = neighbours.iter().filter(|&&u| c.get(u) == colour).count();
            if count % 2 == 1 {
                continue 'vertices;
            }
        }
        return false;
    }
    true
}

#[test]
fn verify_odd_agrees_with_naive_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 1000 {
        let t = rng.random_range(1..=2);
        let seed = rng.random();
        let g = path_instance(t, 6, 4, 0.8, 0.7, seed);
        let palette = 8 * t + 4;
        let colours: Vec<u32> = (0..g.n()).map(|_| rng.random_range(1..=palette)).collect();
        let c = Colouring::new(palette, colours);
        let (report, _) = verify_odd(&g, &c).unwrap();
        assert_eq!(report.ok(), naive_is_odd(&g, &c));
        checked += 1;
    }
}

/// Support distinctness implies properness: any mutation that breaks
/// properness must also break support distinctness.
#[test]
fn support_distinct_implies_proper() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..200u64 {
        let g = path_instance(1 + (seed % 3) as u32, 7, 4, 0.9, 0.9, seed);
        let (good, _) = colour_subgraph(&g).unwrap();
        assert!(verify_support_distinct(&g, &good).unwrap().ok());
        assert!(verify_proper(&g, &good).unwrap().ok());
        if g.n() == 0 {
            continue;
        }
        let mut colours = good.colours().to_vec();
        let pos = rng.random_range(0..g.n());
        colours[pos] = rng.random_range(1..=good.palette());
        let mutated = Colouring::new(good.palette(), colours);
        let support_ok = verify_support_distinct(&g, &mutated).unwrap().ok();
        let proper_ok = verify_proper(&g, &mutated).unwrap().ok();
        assert!(!support_ok || proper_ok, "support ok but colouring improper");
    }
}

/// On small instances the exact optimum never exceeds what the greedy used.
#[test]
fn oracle_lower_bounds_the_greedy() {
    let mut found = 0;
    let mut seed = 0u64;
    while found < 60 {
        let g = if seed.is_multiple_of(2) {
            path_instance(1 + (seed % 2) as u32, 3, 2, 0.7, 0.7, seed)
        } else {
            clique_instance(1, 3, 2, 2, 0.6, 0.7, seed)
        };
        seed += 1;
        if g.n() > 10 {
            continue;
        }
        found += 1;
        let (c, stats) = colour_subgraph(&g).unwrap();
        let exact = exact_odd_chromatic(&g.to_simple_graph(), c.palette(), 12)
            .unwrap()
            .expect("greedy output witnesses feasibility within the palette");
        assert!(
            exact <= stats.colours_used,
            "oracle found {exact} but greedy used {} on n={}",
            stats.colours_used,
            g.n()
        );
    }
}

/// The product edge (1,1)-(1,2)-(1,3) path example: greedy attains the
/// exact optimum of 3.
#[test]
fn greedy_matches_oracle_on_the_path_example() {
    let g = {
        let host = oddprod::ElimOrderedHost::new(1, vec![vec![]]);
        oddprod::sample_subgraph(host, oddprod::SecondaryFactor::Path { h: 3 }, 1.0, 1.0, 0)
    };
    let (c, stats) = colour_subgraph(&g).unwrap();
    assert_eq!(c.colours(), &[1, 2, 3]);
    let exact = exact_odd_chromatic(&g.to_simple_graph(), 12, 12).unwrap();
    assert_eq!(exact, Some(3));
    assert_eq!(stats.colours_used, 3);
}

/// Spot-check the oracle against an independent from-first-principles
/// filter over all canonical colourings for a couple of tiny graphs.
#[test]
fn oracle_agrees_with_exhaustive_filter() {
    fn brute(g: &SimpleGraph, max_colours: u32) -> Option<u32> {
        let n = g.n() as usize;
        if n == 0 {
            return Some(0);
        }
        let mut best: Option<u32> = None;
        let mut colours = vec![0u32; n];
        fn rec(
            g: &SimpleGraph,
            colours: &mut Vec<u32>,
            v: usize,
            max_colours: u32,
            best: &mut Option<u32>,
        ) {
            let n = g.n() as usize;
            if v == n {
                let proper = g
                    .edges()
                    .all(|(a, b)| colours[a as usize - 1] != colours[b as usize - 1]);
                if !proper {
                    return;
                }
                for v in 1..=g.n() {
                    let neigh = g.neighbours(v);
                    if neigh.is_empty() {
                        continue;
                    }
                    let odd_exists = neigh.iter().any(|&w| {
                        let colour = colours[w as usize - 1];
                        neigh
                            .iter()
                            .filter(|&&u| colours[u as usize - 1] == colour)
                            .count()
                            % 2
                            == 1
                    });
                    if !odd_exists {
                        return;
                    }
                }
                let used = {
                    let mut c = colours.clone();
                    c.sort_unstable();
                    c.dedup();
                    c.len() as u32
                };
                *best = Some(best.map_or(used, |b| b.min(used)));
                return;
            }
            for c in 1..=max_colours {
                colours[v] = c;
                rec(g, colours, v + 1, max_colours, best);
            }
            colours[v] = 0;
        }
        rec(g, &mut colours, 0, max_colours.min(g.n()), &mut best);
        best.filter(|&b| b <= max_colours)
    }

    for g in [
        SimpleGraph::path(3),
        SimpleGraph::path(4),
        SimpleGraph::cycle(4),
        SimpleGraph::cycle(5),
        SimpleGraph::complete(4),
        SimpleGraph::from_edges(5, &[(1, 2), (3, 4)]).unwrap(),
        SimpleGraph::empty(3),
    ] {
        let expected = brute(&g, 6);
        let got = exact_odd_chromatic(&g, 6, 12).unwrap();
        assert_eq!(got, expected);
    }
}
