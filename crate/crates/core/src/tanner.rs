//! Explicit Tanner graphs and the brute-force 4-cycle oracle.
//!
//! The Tanner graph of a binary parity-check matrix `H` is the bipartite
//! graph whose check nodes are the rows and variable nodes the columns, with
//! an edge wherever `H` has a 1. A 4-cycle is an unordered pair of checks
//! sharing an unordered pair of variables. [`oracle_count`] counts these
//! rectangles directly from the adjacency lists — slower than the closed
//! forms in [`crate::cycles`], but obviously correct, which is what makes it
//! the reference the closed forms are certified against.

use crate::cycles::GeneralQcMatrix;
use crate::errors::{Error, Result};

/// Bipartite Tanner graph in check-major adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n_vars: usize,
    /// `adjacency[c]` = sorted, duplicate-free variable neighbors of check `c`.
    adjacency: Vec<Vec<usize>>,
}

impl TannerGraph {
    /// Builds a graph from per-check adjacency lists, which must be sorted,
    /// duplicate-free, and within `[0, n_vars)`.
    pub fn new(n_vars: usize, adjacency: Vec<Vec<usize>>) -> Result<Self> {
        for list in &adjacency {
            for (pos, &v) in list.iter().enumerate() {
                if v >= n_vars {
                    return Err(Error::IndexOutOfRange { index: v, r: n_vars });
                }
                if pos > 0 && list[pos - 1] >= v {
                    return Err(Error::InvalidGrid(
                        "adjacency lists must be sorted and duplicate-free".into(),
                    ));
                }
            }
        }
        Ok(TannerGraph { n_vars, adjacency })
    }

    /// Number of variable nodes (columns).
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Number of check nodes (rows).
    pub fn n_checks(&self) -> usize {
        self.adjacency.len()
    }

    /// Sorted variable neighbors of check `c`.
    pub fn neighbors(&self, c: usize) -> &[usize] {
        &self.adjacency[c]
    }
}

/// Expands a quasi-cyclic grid into its full Tanner graph.
///
/// Block `(i, j)` generated by `h` contributes, for every row offset `m`,
/// edges from check `i·r + m` to variable `j·r + ((e + m) mod r)` for each
/// `e` in the support of `h` — each block row of the expanded matrix is the
/// cyclic right-shift of the previous one.
pub fn from_general_qc(m: &GeneralQcMatrix) -> TannerGraph {
    let r = m.r();
    let (c, n0) = (m.c(), m.n0());
    let mut adjacency = vec![Vec::new(); c * r];
    for bi in 0..c {
        for bj in 0..n0 {
            let block = m.block(bi, bj);
            for offset in 0..r {
                let check = bi * r + offset;
                for &e in block.support() {
                    let col = e + offset;
                    let col = if col >= r { col - r } else { col };
                    adjacency[check].push(bj * r + col);
                }
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    TannerGraph { n_vars: n0 * r, adjacency }
}

fn shared_neighbors(a: &[usize], b: &[usize]) -> u64 {
    let mut count = 0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Exact number of 4-cycles: over all unordered check pairs, the number of
/// ways to pick two shared variables, `Σ C(|N(c1) ∩ N(c2)|, 2)`.
pub fn oracle_count(g: &TannerGraph) -> u64 {
    let n = g.n_checks();
    let mut total = 0u64;
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            let shared = shared_neighbors(&g.adjacency[c1], &g.adjacency[c2]);
            total += shared * shared.saturating_sub(1) / 2;
        }
    }
    total
}

/// Whether the graph contains any 4-cycle (then its girth is 4, the minimum
/// possible in a simple bipartite graph). Exits early on the first witness.
pub fn girth_at_most_4(g: &TannerGraph) -> bool {
    let n = g.n_checks();
    for c1 in 0..n {
        for c2 in c1 + 1..n {
            if shared_neighbors(&g.adjacency[c1], &g.adjacency[c2]) >= 2 {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{count_total_bike, count_within};
    use crate::gf2ring::SparsePoly;

    fn poly(r: usize, support: &[usize]) -> SparsePoly {
        SparsePoly::new(r, support.to_vec()).unwrap()
    }

    /// 3 checks × 6 variables where no two checks share two variables.
    fn cycle_free_graph() -> TannerGraph {
        TannerGraph::new(
            6,
            vec![vec![0, 1, 3], vec![1, 2, 4], vec![2, 3, 5]],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(TannerGraph::new(3, vec![vec![0, 3]]).is_err());
        assert!(TannerGraph::new(3, vec![vec![1, 0]]).is_err());
        assert!(TannerGraph::new(3, vec![vec![1, 1]]).is_err());
        assert!(TannerGraph::new(3, vec![vec![], vec![0, 1, 2]]).is_ok());
    }

    #[test]
    fn oracle_on_tiny_graphs() {
        assert_eq!(oracle_count(&cycle_free_graph()), 0);
        assert!(!girth_at_most_4(&cycle_free_graph()));

        // Complete bipartite 2 × 2: exactly one rectangle.
        let k22 = TannerGraph::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(oracle_count(&k22), 1);
        assert!(girth_at_most_4(&k22));
    }

    #[test]
    fn expansion_of_identity_block() {
        let m = GeneralQcMatrix::new(vec![vec![poly(4, &[0])]]).unwrap();
        let g = from_general_qc(&m);
        assert_eq!(g.n_checks(), 4);
        assert_eq!(g.n_vars(), 4);
        for check in 0..4 {
            assert_eq!(g.neighbors(check), &[check]);
        }
    }

    #[test]
    fn expansion_matches_circulant_rows() {
        let h = poly(11, &[0, 1, 8, 9]);
        let g = from_general_qc(&GeneralQcMatrix::new(vec![vec![h.clone()]]).unwrap());
        assert_eq!(g.neighbors(0), &[0, 1, 8, 9]);
        assert_eq!(g.neighbors(1), &[1, 2, 9, 10]);
        assert_eq!(g.neighbors(3), &[0, 1, 3, 4]);
        assert_eq!(oracle_count(&g), count_within(&h));
    }

    #[test]
    fn expansion_of_bike_pair() {
        let h0 = poly(11, &[0, 1, 8, 9]);
        let h1 = poly(11, &[0, 2, 3]);
        let m = GeneralQcMatrix::from_bike(&h0, &h1).unwrap();
        let g = from_general_qc(&m);
        assert_eq!(g.n_checks(), 11);
        assert_eq!(g.n_vars(), 22);
        for check in 0..11 {
            assert_eq!(g.neighbors(check).len(), h0.weight() + h1.weight());
        }
        assert_eq!(oracle_count(&g), count_total_bike(&h0, &h1).unwrap());
    }

    #[test]
    fn repeated_heavy_column_forces_cycles() {
        let g = TannerGraph::new(2, vec![vec![0, 1], vec![0, 1], vec![1]]).unwrap();
        assert!(girth_at_most_4(&g));
        assert_eq!(oracle_count(&g), 1);
    }
}
