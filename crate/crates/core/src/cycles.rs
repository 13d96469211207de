//! Closed-form 4-cycle counting for circulant and quasi-cyclic matrices.
//!
//! A 4-cycle in a Tanner graph is a pair of check nodes sharing a pair of
//! variable nodes — an incidence rectangle. For circulant matrices these
//! rectangles are governed entirely by distance multiplicities:
//!
//! - within one circulant of `h`, the count is `r · Σ_δ C(μ(δ,h), 2)`
//!   (with a doubled-overlap adjustment at the halfway distance when `r`
//!   is even);
//! - between two circulants `H0, H1` side by side, the count is
//!   `r · Σ_k C(c_k, 2)` where `c_k = |Supp(h0) ∩ Supp(x^k h1)|`;
//! - for a general `c × n0` grid of circulants, cycles split into four types
//!   by how many distinct block rows/columns they touch (within a single
//!   block; across a block row; across a block column; across four blocks),
//!   the first three reducing to the two formulas above and the fourth to a
//!   direct tuple enumeration.
//!
//! Every closed form here is certified against the brute-force oracle in
//! [`crate::tanner`] by the test suite.
//!
//! The module also provides the feasibility test and probability estimates
//! for 4-cycle-free circulants used when assessing whether such keys can be
//! sampled at random.

use crate::errors::{Error, Result};
use crate::gf2ring::{DenseBits, SparsePoly};
use crate::spectrum::{compute_spectrum, distance};
use serde::Serialize;

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Overlap of columns `i` and `j` of the circulant of `h`: equals
/// `μ(d(i,j), h)`, except that on even `r` the halfway distance `r/2`
/// doubles the overlap — both orientations of each support pair land on the
/// same column pair there.
pub fn column_intersection(h: &SparsePoly, i: usize, j: usize) -> Result<usize> {
    if i == j {
        return Err(Error::SameIndex(i));
    }
    let r = h.r();
    let delta = distance(i, j, r)?;
    let mu = compute_spectrum(h).multiplicity(delta);
    Ok(if r % 2 == 0 && delta == r / 2 { 2 * mu } else { mu })
}

/// Maximum column intersection within the circulant of `h`: the maximum
/// multiplicity over all distances, with the halfway distance counted
/// double on even `r` (see [`column_intersection`]).
pub fn mci_single(h: &SparsePoly) -> usize {
    let report = compute_spectrum(h);
    let r = h.r();
    if r % 2 == 0 && r >= 2 {
        let half = r / 2;
        report
            .mu
            .iter()
            .enumerate()
            .skip(1)
            .map(|(delta, &m)| if delta == half { 2 * m } else { m })
            .max()
            .unwrap_or(0)
    } else {
        report.max_multiplicity()
    }
}

/// Number of 4-cycles inside the circulant of `h`.
///
/// Each distance `δ < r/2` is realized by `r` column pairs, every one
/// overlapping in `μ(δ,h)` rows, contributing `r · C(μ(δ,h), 2)`. On even
/// `r` the halfway distance is special: only `r/2` column pairs realize it
/// and each overlaps in `2·μ(r/2,h)` rows, contributing
/// `(r/2) · C(2μ(r/2,h), 2)`. For odd `r` the total is simply
/// `r · Σ_δ C(μ(δ,h), 2)`.
pub fn count_within(h: &SparsePoly) -> u64 {
    let report = compute_spectrum(h);
    let r = h.r() as u64;
    let even = h.r() % 2 == 0;
    let half = h.r() / 2;
    let mut total = 0u64;
    for (delta, &m) in report.mu.iter().enumerate().skip(1) {
        let m = m as u64;
        if even && delta == half {
            total += (r / 2) * choose2(2 * m);
        } else {
            total += r * choose2(m);
        }
    }
    total
}

/// The same count through the `γ` histogram:
/// `r · Σ_{i≥2} γ(i,h) · C(i, 2)`, with the even-`r` halfway term swapped
/// for its doubled-overlap value. Always equal to [`count_within`].
pub fn count_within_via_gamma(h: &SparsePoly) -> u64 {
    let report = compute_spectrum(h);
    let r = h.r() as u64;
    let mut total: u64 = report
        .gamma
        .iter()
        .enumerate()
        .skip(2)
        .map(|(i, &g)| r * g as u64 * choose2(i as u64))
        .sum();
    if h.r() % 2 == 0 {
        let m = report.mu[h.r() / 2] as u64;
        // The histogram pass tallied the halfway distance as one of r
        // ordinary column pairs; replace that term.
        total -= r * choose2(m);
        total += (r / 2) * choose2(2 * m);
    }
    total
}

/// The cross-correlation profile `c_0, …, c_{r-1}` with
/// `c_k = |Supp(h0) ∩ Supp(x^k h1)|`. Sums to `wt(h0) · wt(h1)`.
pub fn cross_profile(h0: &SparsePoly, h1: &SparsePoly) -> Result<Vec<usize>> {
    if h0.r() != h1.r() {
        return Err(Error::MismatchedModulus(h0.r(), h1.r()));
    }
    let r = h0.r();
    let mut profile = vec![0usize; r];
    // a ∈ Supp(h0) lies in Supp(x^k h1) exactly when k = a - b for some
    // b ∈ Supp(h1); one histogram pass over support pairs builds the profile.
    for &a in h0.support() {
        for &b in h1.support() {
            profile[(r + a - b) % r] += 1;
        }
    }
    Ok(profile)
}

/// Maximum column intersection between the circulants of `h0` and `h1`:
/// the maximum of [`cross_profile`].
///
/// For nonzero inputs this is 1 exactly when the full spectra of `h0` and
/// `h1` are disjoint, and at least 2 otherwise.
pub fn mci_cross(h0: &SparsePoly, h1: &SparsePoly) -> Result<usize> {
    Ok(cross_profile(h0, h1)?.into_iter().max().unwrap_or(0))
}

/// Number of 4-cycles with one variable node in each of the circulants of
/// `h0` and `h1`: `r · Σ_k C(c_k, 2)`.
pub fn count_cross(h0: &SparsePoly, h1: &SparsePoly) -> Result<u64> {
    let profile = cross_profile(h0, h1)?;
    let pairs: u64 = profile.into_iter().map(|c| choose2(c as u64)).sum();
    Ok(h0.r() as u64 * pairs)
}

/// Total number of 4-cycles of the parity-check matrix `[H0 | H1]`:
/// within `H0`, plus within `H1`, plus the cross count.
pub fn count_total_bike(h0: &SparsePoly, h1: &SparsePoly) -> Result<u64> {
    Ok(count_within(h0) + count_within(h1) + count_cross(h0, h1)?)
}

/// A `c × n0` grid of circulant blocks over a common modulus `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralQcMatrix {
    r: usize,
    blocks: Vec<Vec<SparsePoly>>,
}

impl GeneralQcMatrix {
    /// Builds a grid from block rows. All rows must have equal length and all
    /// blocks the same modulus; the grid must be non-empty.
    pub fn new(blocks: Vec<Vec<SparsePoly>>) -> Result<Self> {
        if blocks.is_empty() || blocks[0].is_empty() {
            return Err(Error::InvalidGrid("grid must be non-empty".into()));
        }
        let n0 = blocks[0].len();
        let r = blocks[0][0].r();
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != n0 {
                return Err(Error::InvalidGrid(format!(
                    "block row {i} has {} columns, expected {n0}",
                    row.len()
                )));
            }
            for (j, block) in row.iter().enumerate() {
                if block.r() != r {
                    return Err(Error::InvalidGrid(format!(
                        "block ({i},{j}) has modulus {}, expected {r}",
                        block.r()
                    )));
                }
            }
        }
        Ok(GeneralQcMatrix { r, blocks })
    }

    /// The 1 × 2 grid `[H0 | H1]` of a BIKE private key.
    pub fn from_bike(h0: &SparsePoly, h1: &SparsePoly) -> Result<Self> {
        if h0.r() != h1.r() {
            return Err(Error::MismatchedModulus(h0.r(), h1.r()));
        }
        Self::new(vec![vec![h0.clone(), h1.clone()]])
    }

    /// Block size `r`.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of block rows `c`.
    pub fn c(&self) -> usize {
        self.blocks.len()
    }

    /// Number of block columns `n0`.
    pub fn n0(&self) -> usize {
        self.blocks[0].len()
    }

    /// The generating polynomial of block `(i, j)`.
    pub fn block(&self, i: usize, j: usize) -> &SparsePoly {
        &self.blocks[i][j]
    }
}

/// 4-cycle count of one block, with its grid position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WithinCount {
    pub block_row: usize,
    pub block_col: usize,
    pub count: u64,
}

/// 4-cycle count between two blocks of the same block row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossRowCount {
    pub block_row: usize,
    pub col_a: usize,
    pub col_b: usize,
    pub count: u64,
}

/// 4-cycle count between two blocks of the same block column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossColCount {
    pub block_col: usize,
    pub row_a: usize,
    pub row_b: usize,
    pub count: u64,
}

/// Complete 4-cycle census of a quasi-cyclic grid, split by cycle type.
///
/// Every individual count is a multiple of `r` (cycle classes close under
/// simultaneous cyclic rotation), and `total` is the sum of all categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCensus {
    /// Cycles confined to a single circulant block.
    pub within: Vec<WithinCount>,
    /// Cycles using two blocks of one block row.
    pub cross_row: Vec<CrossRowCount>,
    /// Cycles using two blocks of one block column.
    pub cross_col: Vec<CrossColCount>,
    /// Cycles spanning two block rows and two block columns.
    pub cross_quad: u64,
    /// Sum of all categories.
    pub total: u64,
}

impl CycleCensus {
    /// Sum of the within-block counts.
    pub fn within_total(&self) -> u64 {
        self.within.iter().map(|w| w.count).sum()
    }

    /// Sum of the same-block-row cross counts.
    pub fn cross_row_total(&self) -> u64 {
        self.cross_row.iter().map(|c| c.count).sum()
    }

    /// Sum of the same-block-column cross counts.
    pub fn cross_col_total(&self) -> u64 {
        self.cross_col.iter().map(|c| c.count).sum()
    }
}

/// Counts 4-cycles spanning the block pairs `(i,j) (i,j') (i',j) (i',j')`.
///
/// A spanning rectangle is a tuple `(m, m', n, n')` — check `m` in block row
/// `i`, check `m'` in block row `i'`, variable `n` in block column `j`,
/// variable `n'` in block column `j'` — whose four incidences all hold. The
/// tuple set is invariant under the simultaneous rotation of all four
/// indices, so the count is `r` times the number of tuples with `m = 0`.
fn quad_count(
    r: usize,
    h_ij: &SparsePoly,
    h_ij2: &SparsePoly,
    h_i2j: &SparsePoly,
    h_i2j2: &SparsePoly,
) -> u64 {
    let mut membership = DenseBits::zero(r);
    for &e in h_i2j2.support() {
        membership.toggle(e);
    }
    let mut tuples = 0u64;
    // With m = 0: n ∈ Supp(h_ij), n' ∈ Supp(h_ij'), and m' must satisfy
    // n - m' ∈ Supp(h_i'j); the last incidence checks n' - m' ∈ Supp(h_i'j').
    for &n in h_ij.support() {
        for &u in h_i2j.support() {
            let m2 = (r + n - u) % r;
            for &n2 in h_ij2.support() {
                if membership.get((r + n2 - m2) % r) {
                    tuples += 1;
                }
            }
        }
    }
    r as u64 * tuples
}

/// Full 4-cycle census of a quasi-cyclic grid.
///
/// The within, cross-row and cross-column categories reduce to the circulant
/// closed forms ([`count_within`], [`count_cross`]); the four-block category
/// is enumerated directly. The grand total equals the brute-force oracle
/// count on the expanded binary matrix.
pub fn census_general(m: &GeneralQcMatrix) -> Result<CycleCensus> {
    let (c, n0) = (m.c(), m.n0());
    let mut within = Vec::with_capacity(c * n0);
    for i in 0..c {
        for j in 0..n0 {
            within.push(WithinCount {
                block_row: i,
                block_col: j,
                count: count_within(m.block(i, j)),
            });
        }
    }
    let mut cross_row = Vec::new();
    for i in 0..c {
        for j in 0..n0 {
            for j2 in j + 1..n0 {
                cross_row.push(CrossRowCount {
                    block_row: i,
                    col_a: j,
                    col_b: j2,
                    count: count_cross(m.block(i, j), m.block(i, j2))?,
                });
            }
        }
    }
    let mut cross_col = Vec::new();
    for j in 0..n0 {
        for i in 0..c {
            for i2 in i + 1..c {
                cross_col.push(CrossColCount {
                    block_col: j,
                    row_a: i,
                    row_b: i2,
                    count: count_cross(m.block(i, j), m.block(i2, j))?,
                });
            }
        }
    }
    let mut cross_quad = 0u64;
    for i in 0..c {
        for i2 in i + 1..c {
            for j in 0..n0 {
                for j2 in j + 1..n0 {
                    cross_quad += quad_count(
                        m.r(),
                        m.block(i, j),
                        m.block(i, j2),
                        m.block(i2, j),
                        m.block(i2, j2),
                    );
                }
            }
        }
    }
    let total = within.iter().map(|w| w.count).sum::<u64>()
        + cross_row.iter().map(|x| x.count).sum::<u64>()
        + cross_col.iter().map(|x| x.count).sum::<u64>()
        + cross_quad;
    Ok(CycleCensus { within, cross_row, cross_col, cross_quad, total })
}

/// Necessary lower bound on `r` for a quasi-cyclic grid with the given block
/// weights to have girth at least 6 (no 4-cycles): `max{X, Y, Z}` where
///
/// - `X = max_i 2 · Σ_j C(wt(h_ij), 2)` (block-row constraint),
/// - `Y = max_j 2 · Σ_i C(wt(h_ij), 2)` (block-column constraint),
/// - `Z = max_{i≠i'} Σ_j wt(h_ij) · wt(h_i'j)` (row-pair constraint).
///
/// The caller compares the bound against `r`; meeting it does not guarantee
/// a 4-cycle-free matrix exists.
pub fn girth6_bound(m: &GeneralQcMatrix) -> u64 {
    let (c, n0) = (m.c(), m.n0());
    let x = (0..c)
        .map(|i| 2 * (0..n0).map(|j| choose2(m.block(i, j).weight() as u64)).sum::<u64>())
        .max()
        .unwrap_or(0);
    let y = (0..n0)
        .map(|j| 2 * (0..c).map(|i| choose2(m.block(i, j).weight() as u64)).sum::<u64>())
        .max()
        .unwrap_or(0);
    let z = (0..c)
        .flat_map(|i| (0..c).filter(move |&i2| i2 != i).map(move |i2| (i, i2)))
        .map(|(i, i2)| {
            (0..n0)
                .map(|j| m.block(i, j).weight() as u64 * m.block(i2, j).weight() as u64)
                .sum::<u64>()
        })
        .max()
        .unwrap_or(0);
    x.max(y).max(z)
}

/// Natural log of the binomial coefficient `C(n, k)`, or `None` when the
/// coefficient is zero.
fn ln_choose(n: u64, k: u64) -> Option<f64> {
    use statrs::function::gamma::ln_gamma;
    if k > n {
        return None;
    }
    Some(ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0))
}

/// Probability that a fixed distance `δ` has multiplicity exactly `m` in a
/// uniformly random weight-`d` polynomial modulo `x^r - 1`:
///
/// `P(μ(δ,h) = m) = r · C(d-1, d-m-1) · C(r-d-1, d-m-1) / ((d-m) · C(r, d))`.
///
/// The distribution is the same for every `δ ∈ [1, ⌊r/2⌋]` (at odd `r`), and
/// the formula sums to 1 over `m ∈ [0, d)`. Requires `0 ≤ m < d ≤ r`.
pub fn prob_multiplicity(r: usize, d: usize, m: usize) -> Result<f64> {
    if d == 0 || d > r {
        return Err(Error::DomainError(format!("weight d={d} must satisfy 1 ≤ d ≤ r={r}")));
    }
    if m >= d {
        return Err(Error::DomainError(format!("multiplicity m={m} must be below d={d}")));
    }
    let k = (d - m - 1) as u64;
    let (num1, num2) = match (ln_choose(d as u64 - 1, k), ln_choose(r as u64 - d as u64 - 1, k)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(0.0),
    };
    let denom = ln_choose(r as u64, d as u64).expect("C(r,d) with d <= r");
    let ln_p = (r as f64).ln() + num1 + num2 - ((d - m) as f64).ln() - denom;
    Ok(ln_p.exp().clamp(0.0, 1.0))
}

/// Probability that every distance of a uniformly random weight-`d`
/// polynomial has multiplicity below `m`, under the approximation that the
/// `⌊r/2⌋` multiplicities are independent:
///
/// `P(max_δ μ(δ,h) < m) = (1 - π_m)^⌊r/2⌋` with
/// `π_m = Σ_{k=m}^{d-1} P(μ(δ,h) = k)`.
///
/// `prob_max_below(r, d, 2)` estimates the probability that a random `h` is
/// 4-cycle free within its own circulant. The independence assumption is a
/// genuine approximation: multiplicities are negatively correlated, and
/// Monte Carlo sampling shows the true probability is somewhat higher.
/// Requires `1 ≤ m ≤ d ≤ r`.
pub fn prob_max_below(r: usize, d: usize, m: usize) -> Result<f64> {
    if d == 0 || d > r {
        return Err(Error::DomainError(format!("weight d={d} must satisfy 1 ≤ d ≤ r={r}")));
    }
    if m < 1 || m > d {
        return Err(Error::DomainError(format!("bound m={m} must satisfy 1 ≤ m ≤ d={d}")));
    }
    let mut pi = 0.0;
    for k in m..d {
        pi += prob_multiplicity(r, d, k)?;
    }
    Ok((1.0 - pi.min(1.0)).powi((r / 2) as i32))
}

/// Whether a 4-cycle-free pair `(h0, h1)` of weight-`d` polynomials is
/// possible at all for this `r`: the `2·C(d,2)` distances of the two
/// polynomials must all be distinct, and only `⌊r/2⌋` distance values exist.
///
/// Returns `⌊r/2⌋ ≥ 2·C(d,2)` — equivalent up to rounding to the simplified
/// condition `r > 2d(d-1)`.
pub fn fourcycle_free_feasible(r: usize, d: usize) -> bool {
    (r as u64 / 2) >= 2 * choose2(d as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(r: usize, support: &[usize]) -> SparsePoly {
        SparsePoly::new(r, support.to_vec()).unwrap()
    }

    fn example_h() -> SparsePoly {
        poly(11, &[0, 1, 8, 9])
    }

    #[test]
    fn column_intersection_examples() {
        let h = example_h();
        assert_eq!(column_intersection(&h, 0, 1).unwrap(), 2);
        assert_eq!(column_intersection(&h, 0, 5).unwrap(), 0);
        assert_eq!(column_intersection(&poly(11, &[3]), 2, 9).unwrap(), 0);
        assert_eq!(column_intersection(&h, 4, 4).unwrap_err(), Error::SameIndex(4));
        assert!(column_intersection(&h, 0, 11).is_err());
    }

    #[test]
    fn mci_single_examples() {
        assert_eq!(mci_single(&example_h()), 2);
        assert_eq!(mci_single(&poly(11, &[7])), 0);
        // {0,2,4} mod 7 has distances 2, 2, 3.
        assert_eq!(mci_single(&poly(7, &[0, 2, 4])), 2);
    }

    #[test]
    fn count_within_examples() {
        assert_eq!(count_within(&example_h()), 22);
        assert_eq!(count_within(&poly(11, &[5])), 0);
        assert_eq!(count_within(&SparsePoly::zero(11)), 0);
        assert_eq!(count_within(&poly(3, &[0, 1, 2])), 9);
    }

    #[test]
    fn gamma_form_matches() {
        assert_eq!(count_within_via_gamma(&example_h()), 22);
        assert_eq!(count_within_via_gamma(&poly(31, &[4, 9])), 0);
        assert_eq!(count_within_via_gamma(&poly(3, &[0, 1, 2])), 9);
    }

    #[test]
    fn cross_profile_example() {
        let h = example_h();
        let profile = cross_profile(&h, &h).unwrap();
        assert_eq!(profile, vec![4, 2, 1, 2, 1, 0, 0, 1, 2, 1, 2]);
        assert_eq!(profile.iter().sum::<usize>(), 16);
        assert!(cross_profile(&h, &SparsePoly::zero(11)).unwrap().iter().all(|&c| c == 0));
        let one = poly(4, &[0]);
        assert_eq!(cross_profile(&one, &one).unwrap(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn mci_cross_examples() {
        let h = example_h();
        assert_eq!(mci_cross(&h, &h).unwrap(), 4);
        // Disjoint (here: empty) full spectra give maximum intersection 1.
        assert_eq!(mci_cross(&poly(7, &[0]), &poly(7, &[3])).unwrap(), 1);
        assert_eq!(mci_cross(&poly(7, &[0, 1]), &poly(7, &[0, 2])).unwrap(), 1);
        assert_eq!(mci_cross(&poly(7, &[0]), &SparsePoly::zero(7)).unwrap(), 0);
    }

    #[test]
    fn count_cross_examples() {
        let p = poly(5, &[0, 1]);
        assert_eq!(count_cross(&p, &p).unwrap(), 5);
        let h = example_h();
        assert_eq!(count_cross(&h, &h).unwrap(), 110);
        assert_eq!(count_cross(&h, &poly(11, &[4])).unwrap(), 0);
    }

    #[test]
    fn count_total_bike_example() {
        let h = example_h();
        assert_eq!(count_total_bike(&h, &h).unwrap(), 154);
        assert_eq!(count_total_bike(&poly(11, &[0]), &poly(11, &[5])).unwrap(), 0);
    }

    #[test]
    fn census_reduces_to_bike() {
        let h = example_h();
        let m = GeneralQcMatrix::from_bike(&h, &h).unwrap();
        let census = census_general(&m).unwrap();
        assert_eq!(census.within_total(), 44);
        assert_eq!(census.cross_row_total(), 110);
        assert_eq!(census.cross_col_total(), 0);
        assert_eq!(census.cross_quad, 0);
        assert_eq!(census.total, 154);
    }

    #[test]
    fn census_identity_grid() {
        // 2 × 2 grid of identity circulants at r = 5: rectangles must use one
        // row from each block row and one column from each block column, and
        // they align only under equal offsets — one tuple class, r cycles.
        let id = poly(5, &[0]);
        let m = GeneralQcMatrix::new(vec![
            vec![id.clone(), id.clone()],
            vec![id.clone(), id.clone()],
        ])
        .unwrap();
        let census = census_general(&m).unwrap();
        assert_eq!(census.within_total(), 0);
        assert_eq!(census.cross_row_total(), 0);
        assert_eq!(census.cross_col_total(), 0);
        assert_eq!(census.cross_quad, 5);
        assert_eq!(census.total, 5);
    }

    #[test]
    fn grid_validation() {
        let p = poly(5, &[0]);
        assert!(GeneralQcMatrix::new(vec![]).is_err());
        assert!(GeneralQcMatrix::new(vec![vec![p.clone()], vec![]]).is_err());
        assert!(GeneralQcMatrix::new(vec![vec![p.clone(), poly(7, &[0])]]).is_err());
        assert!(GeneralQcMatrix::from_bike(&p, &poly(7, &[1])).is_err());
    }

    #[test]
    fn girth6_bound_examples() {
        let b = |weights: &[&[usize]]| {
            let blocks = weights
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&w| poly(101, &(0..w).collect::<Vec<_>>()))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>();
            girth6_bound(&GeneralQcMatrix::new(blocks).unwrap())
        };
        // BIKE shape: X = 2 · 2 · C(d,2) = 2d(d-1).
        assert_eq!(b(&[&[4, 4]]), 2 * 4 * 3);
        assert_eq!(b(&[&[1, 1], &[1, 1]]), 2);
        assert_eq!(b(&[&[3, 3], &[3, 3]]), 18);
        assert_eq!(b(&[&[1]]), 0);
    }

    #[test]
    fn prob_multiplicity_normalizes() {
        for &(r, d) in &[(101, 5), (557, 15), (587, 12), (1999, 20)] {
            let total: f64 = (0..d).map(|m| prob_multiplicity(r, d, m).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-9, "(r={r}, d={d}) sums to {total}");
        }
    }

    #[test]
    fn prob_multiplicity_domain() {
        assert!(prob_multiplicity(101, 5, 5).is_err());
        assert!(prob_multiplicity(101, 0, 0).is_err());
        assert!(prob_multiplicity(5, 7, 1).is_err());
        // d - m - 1 exceeding r - d - 1 forces the second binomial to zero.
        assert_eq!(prob_multiplicity(7, 6, 0).unwrap(), 0.0);
    }

    #[test]
    fn prob_max_below_edges() {
        // m = d leaves an empty tail sum: probability 1.
        assert_eq!(prob_max_below(101, 5, 5).unwrap(), 1.0);
        assert!(prob_max_below(101, 5, 0).is_err());
        assert!(prob_max_below(101, 5, 6).is_err());
        let p = prob_max_below(557, 4, 2).unwrap();
        assert!((p - 0.9682).abs() < 1e-3, "got {p}");
    }

    #[test]
    fn feasibility_examples() {
        assert!(fourcycle_free_feasible(12323, 78));
        assert!(!fourcycle_free_feasible(12323, 79));
        assert!(fourcycle_free_feasible(101, 1));
        // 2·C(15,2) = 210 ≤ ⌊557/2⌋ = 278: not excluded by counting alone.
        assert!(fourcycle_free_feasible(557, 15));
        assert!(!fourcycle_free_feasible(17, 4));
    }
}
