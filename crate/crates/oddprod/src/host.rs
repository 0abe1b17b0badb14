//! Elimination-ordered hosts.
//!
//! The host graph H is stored through its vertex ordering x_1..x_r and the
//! back-cliques C_i: the earlier neighbours of vertex i. An ordering is
//! accepted when every C_i is a clique of size at most t — any width-t
//! perfect-elimination host qualifies, full t-trees being the canonical
//! case. Host adjacency is implicit: {a,b} with a < b is an edge iff
//! a ∈ C_b.
//!
//! Validation also checks the ancestor-closure property: whenever i ∈ C_j,
//! C_i ∪ {i} contains every element of C_j up to index i. This follows from
//! the clique rule but is checked independently because the colouring
//! engine's risk sets lean on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::report::{rules, ValidationReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HostError {
    #[error("r must be at least t+1 (got t={t}, r={r})")]
    TooFewVertices { t: u32, r: u32 },
}

/// Host graph with an elimination ordering of width at most `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElimOrderedHost {
    t: u32,
    /// back_cliques[i-1] = C_i, sorted ascending; valid entries are in 1..i.
    back_cliques: Vec<Vec<u32>>,
    /// children[a-1] = { m : a ∈ C_m }, sorted ascending. Derived.
    children: Vec<Vec<u32>>,
}

impl ElimOrderedHost {
    /// Wraps raw back-cliques without validating them; call [`validate`]
    /// to obtain a report. Entries are sorted; out-of-range entries are
    /// kept (so validation can point at them) but excluded from the
    /// derived adjacency.
    ///
    /// [`validate`]: ElimOrderedHost::validate
    pub fn new(t: u32, mut back_cliques: Vec<Vec<u32>>) -> Self {
        for clique in &mut back_cliques {
            clique.sort_unstable();
        }
        let r = back_cliques.len();
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); r];
        for (i0, clique) in back_cliques.iter().enumerate() {
            let i = i0 as u32 + 1;
            for &a in clique {
                if a >= 1 && a < i {
                    children[a as usize - 1].push(i);
                }
            }
        }
        Self {
            t,
            back_cliques,
            children,
        }
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn r(&self) -> u32 {
        self.back_cliques.len() as u32
    }

    pub fn back_clique(&self, i: u32) -> &[u32] {
        &self.back_cliques[i as usize - 1]
    }

    pub fn back_cliques(&self) -> &[Vec<u32>] {
        &self.back_cliques
    }

    /// Later vertices whose back-clique contains `a`.
    pub fn forward_star(&self, a: u32) -> &[u32] {
        &self.children[a as usize - 1]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.back_cliques[hi as usize - 1].binary_search(&lo).is_ok()
    }

    /// All neighbours of `i` (back-clique plus forward star), sorted.
    pub fn neighbours(&self, i: u32) -> Vec<u32> {
        let mut out = self.back_clique(i).to_vec();
        out.extend_from_slice(self.forward_star(i));
        out
    }

    pub fn degree(&self, i: u32) -> usize {
        self.back_clique(i).len() + self.forward_star(i).len()
    }

    pub fn edge_count(&self) -> usize {
        self.back_cliques.iter().map(|c| c.len()).sum()
    }

    /// Checks all host invariants: well-formed indices, |C_i| ≤ t, each C_i
    /// pairwise adjacent, and the ancestor-closure property.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (i0, clique) in self.back_cliques.iter().enumerate() {
            let i = i0 as u32 + 1;
            for &a in clique {
                if a < 1 || a >= i {
                    report.push(
                        rules::HOST_INDEX,
                        vec![i, a],
                        format!("back-clique entry {a} of vertex {i} is not in 1..{i}"),
                    );
                }
            }
            for w in clique.windows(2) {
                if w[0] == w[1] {
                    report.push(
                        rules::HOST_INDEX,
                        vec![i, w[0]],
                        format!("duplicate back-clique entry {} at vertex {i}", w[0]),
                    );
                }
            }
            if clique.len() > self.t as usize {
                report.push(
                    rules::HOST_SIZE,
                    vec![i],
                    format!(
                        "back-clique of vertex {i} has {} entries, width bound is {}",
                        clique.len(),
                        self.t
                    ),
                );
            }
            for (p, &a) in clique.iter().enumerate() {
                if a < 1 || a >= i {
                    continue;
                }
                for &b in &clique[p + 1..] {
                    if b < 1 || b >= i || a == b {
                        continue;
                    }
                    if !self.has_edge(a, b) {
                        report.push(
                            rules::HOST_CLIQUE,
                            vec![i, a, b],
                            format!("back-clique of vertex {i} is not a clique: missing edge {{{a},{b}}}"),
                        );
                    }
                }
            }
        }
        report.merge(self.check_star_property());
        report
    }

    /// Checks only the ancestor-closure property: for every i ∈ C_j and
    /// every m ∈ C_j with m ≤ i, m ∈ C_i ∪ {i}.
    pub fn check_star_property(&self) -> ValidationReport {
        let mut report = ValidationReport::new();
        for (j0, clique) in self.back_cliques.iter().enumerate() {
            let j = j0 as u32 + 1;
            for &i in clique {
                if i < 1 || i >= j {
                    continue;
                }
                for &m in clique {
                    if m < 1 || m >= i {
                        continue;
                    }
                    if self.back_clique(i).binary_search(&m).is_err() {
                        report.push(
                            rules::HOST_STAR,
                            vec![i, j, m],
                            format!(
                                "{m} is in the back-clique of {j} up to index {i}, but not in that of {i}"
                            ),
                        );
                    }
                }
            }
        }
        report
    }
}

/// Random full t-tree on `r >= t+1` vertices: the first t+1 vertices form a
/// clique; every later vertex attaches to a t-clique drawn uniformly from
/// the multiset of t-subsets of all (t+1)-cliques created so far.
/// Deterministic for a given seed.
pub fn random_t_tree(t: u32, r: u32, seed: u64) -> Result<ElimOrderedHost, HostError> {
    if r < t + 1 {
        return Err(HostError::TooFewVertices { t, r });
    }
    let mut back_cliques: Vec<Vec<u32>> = Vec::with_capacity(r as usize);
    for i in 1..=t + 1 {
        back_cliques.push((1..i).collect());
    }
    if t == 0 {
        back_cliques.resize(r as usize, Vec::new());
        return Ok(ElimOrderedHost::new(t, back_cliques));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // t-subsets of the base clique, then t+1 more per attachment.
    let mut cliques: Vec<Vec<u32>> = Vec::new();
    let base: Vec<u32> = (1..=t + 1).collect();
    for skip in 0..base.len() {
        let mut sub = base.clone();
        sub.remove(skip);
        cliques.push(sub);
    }
    for i in t + 2..=r {
        let pick = rng.random_range(0..cliques.len());
        let attach = cliques[pick].clone();
        let mut grown = attach.clone();
        grown.push(i);
        for skip in 0..grown.len() {
            let mut sub = grown.clone();
            sub.remove(skip);
            cliques.push(sub);
        }
        back_cliques.push(attach);
    }
    Ok(ElimOrderedHost::new(t, back_cliques))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn host(t: u32, cliques: &[&[u32]]) -> ElimOrderedHost {
        ElimOrderedHost::new(t, cliques.iter().map(|c| c.to_vec()).collect())
    }

    #[test]
    fn triangle_as_2_tree_is_valid() {
        let h = host(2, &[&[], &[1], &[1, 2]]);
        assert!(h.validate().ok());
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn path_as_1_tree_is_valid() {
        let h = host(1, &[&[], &[1], &[2], &[3]]);
        assert!(h.validate().ok());
        assert_eq!(h.edge_count(), 3);
    }

    #[test]
    fn missing_clique_edge_is_reported() {
        // C_4 = {1,3} but {1,3} is not an edge (1 is not in C_3).
        let h = host(2, &[&[], &[], &[2], &[1, 3]]);
        let report = h.validate();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == rules::HOST_CLIQUE && v.indices == vec![4, 1, 3]));
    }

    #[test]
    fn star_property_violation_named() {
        let h = host(2, &[&[], &[], &[2], &[1, 3]]);
        let report = h.check_star_property();
        assert!(!report.ok());
        // 1 ∈ C_4 ∩ {1,2,3} but 1 ∉ C_3 ∪ {3}.
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == rules::HOST_STAR && v.indices == vec![3, 4, 1]));
    }

    #[test]
    fn single_vertex_has_no_star_pairs() {
        let h = host(3, &[&[]]);
        assert!(h.check_star_property().ok());
        assert!(h.validate().ok());
    }

    #[test]
    fn malformed_index_is_a_violation() {
        let h = host(2, &[&[], &[3]]);
        let report = h.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == rules::HOST_INDEX && v.indices == vec![2, 3]));
    }

    #[test]
    fn one_tree_is_a_tree() {
        let h = random_t_tree(1, 5, 99).unwrap();
        assert!(h.validate().ok());
        assert_eq!(h.edge_count(), 4);
    }

    #[test]
    fn two_tree_on_three_vertices_is_the_triangle() {
        let h = random_t_tree(2, 3, 7).unwrap();
        assert_eq!(h.back_cliques(), &[vec![], vec![1], vec![1, 2]]);
    }

    #[test]
    fn generator_is_deterministic() {
        let a = random_t_tree(3, 50, 1234).unwrap();
        let b = random_t_tree(3, 50, 1234).unwrap();
        assert_eq!(a, b);
        let c = random_t_tree(3, 50, 1235).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn generator_rejects_small_r() {
        assert_eq!(
            random_t_tree(3, 3, 0),
            Err(HostError::TooFewVertices { t: 3, r: 3 })
        );
    }

    #[test]
    fn full_t_tree_edge_count_formula() {
        for t in 0..=4u32 {
            for r in (t + 1)..=(t + 20) {
                let h = random_t_tree(t, r, u64::from(t * 100 + r)).unwrap();
                let expected = (t * (t + 1) / 2 + t * (r - t - 1)) as usize;
                assert_eq!(h.edge_count(), expected, "t={t} r={r}");
                assert!(h.validate().ok());
            }
        }
    }

    #[test]
    fn valid_hosts_satisfy_star_property() {
        // Clique back-neighbourhoods imply ancestor closure; checked here
        // over a spread of random t-trees as a metamorphic test.
        let mut checked = 0;
        for t in 1..=4u32 {
            for seed in 0..250u64 {
                let r = t + 2 + (seed % 30) as u32;
                let h = random_t_tree(t, r, seed).unwrap();
                assert!(h.validate().ok());
                assert!(h.check_star_property().ok());
                checked += 1;
            }
        }
        assert!(checked >= 1000);
    }

    #[test]
    fn neighbour_queries() {
        let triangle = host(2, &[&[], &[1], &[1, 2]]);
        assert_eq!(triangle.neighbours(1), vec![2, 3]);
        let path = host(1, &[&[], &[1], &[2]]);
        assert_eq!(path.neighbours(2), vec![1, 3]);
    }

    #[test]
    fn neighbours_are_symmetric() {
        let h = random_t_tree(2, 30, 5).unwrap();
        for i in 1..=h.r() {
            for m in h.neighbours(i) {
                assert!(h.neighbours(m).contains(&i));
            }
        }
        // Degree of vertex 1 equals its forward-star size (its back-clique
        // is empty).
        assert_eq!(h.degree(1), h.forward_star(1).len());
    }
}
