//! Distance spectra of sparse polynomials.
//!
//! The *distance* between two positions `i, j` in `[0, r)` is the cyclic
//! distance `min((j-i) mod r, (i-j) mod r)`, always in `[0, ⌊r/2⌋]`. Each of
//! the `C(d, 2)` unordered support pairs of a weight-`d` polynomial
//! contributes one distance; the *multiplicity* `μ(δ, h)` is the number of
//! pairs at distance `δ`. These multiplicities determine column overlaps of
//! the circulant of `h` and hence its 4-cycle count, which is why spectra are
//! the basic object of weak-key analysis.

use crate::errors::{Error, Result};
use crate::gf2ring::SparsePoly;
use serde::Serialize;

/// Cyclic distance between positions `i` and `j` modulo `r`.
///
/// Symmetric, zero iff `i = j`, and at most `⌊r/2⌋`.
pub fn distance(i: usize, j: usize, r: usize) -> Result<usize> {
    if i >= r {
        return Err(Error::IndexOutOfRange { index: i, r });
    }
    if j >= r {
        return Err(Error::IndexOutOfRange { index: j, r });
    }
    let fwd = (r + j - i) % r;
    Ok(fwd.min(r - fwd))
}

/// Full distance-multiplicity description of one polynomial.
///
/// - `mu[δ]` for `δ ∈ [1, ⌊r/2⌋]` is the multiplicity `μ(δ, h)` (index 0 is
///   unused and stays 0 — loops are never counted);
/// - `full_spectrum` is the sorted multiset of all `C(d, 2)` pair distances;
/// - `gamma[m]` for `m ∈ [0, d]` counts distances `δ` with `μ(δ, h) = m`.
///   The table extends to `m = d` because degenerate inputs (e.g. the
///   all-ones polynomial at tiny `r`) can reach multiplicity `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    /// Ring modulus of the analyzed polynomial.
    pub r: usize,
    /// Weight of the analyzed polynomial.
    pub d: usize,
    /// `μ(δ, h)` indexed by `δ ∈ [0, ⌊r/2⌋]`; entry 0 is always 0.
    pub mu: Vec<usize>,
    /// Sorted multiset of all pair distances (`C(d, 2)` entries).
    pub full_spectrum: Vec<usize>,
    /// `γ(m, h)` indexed by `m ∈ [0, d]`.
    pub gamma: Vec<usize>,
}

/// Computes the spectrum of `h`: multiplicities, the full distance multiset,
/// and the `γ` histogram.
pub fn compute_spectrum(h: &SparsePoly) -> SpectrumReport {
    let r = h.r();
    let d = h.weight();
    let half = r / 2;
    let mut mu = vec![0usize; half + 1];
    let mut full_spectrum = Vec::with_capacity(d * d.saturating_sub(1) / 2);
    let support = h.support();
    for (a, &i) in support.iter().enumerate() {
        for &j in &support[a + 1..] {
            let fwd = j - i; // support is sorted, so j > i
            let delta = fwd.min(r - fwd);
            mu[delta] += 1;
            full_spectrum.push(delta);
        }
    }
    full_spectrum.sort_unstable();
    // Every distance value in [1, ⌊r/2⌋] has exactly one multiplicity
    // (possibly 0), so gamma sums to ⌊r/2⌋.
    let mut gamma = vec![0usize; d + 1];
    for &m in &mu[1..] {
        gamma[m] += 1;
    }
    SpectrumReport { r, d, mu, full_spectrum, gamma }
}

impl SpectrumReport {
    /// `μ(δ, h)`, or 0 for out-of-range `δ`.
    pub fn multiplicity(&self, delta: usize) -> usize {
        self.mu.get(delta).copied().unwrap_or(0)
    }

    /// Maximum multiplicity over all distances.
    pub fn max_multiplicity(&self) -> usize {
        self.mu.iter().copied().max().unwrap_or(0)
    }

    /// The distance multiplicity spectrum: pairs `(m, γ(m, h))` for
    /// `m ∈ [1, d-1]`, sorted by `m`.
    pub fn mspec(&self) -> Vec<(usize, usize)> {
        (1..self.d).map(|m| (m, self.gamma[m])).collect()
    }
}

/// The distance multiplicity spectrum of `h` as `(m, γ(m, h))` pairs for
/// `m ∈ [1, d-1]`.
pub fn mspec(report: &SpectrumReport) -> Vec<(usize, usize)> {
    report.mspec()
}

/// Maximum weight of `h` over any cyclic window `[a, a+m)` of length `m`.
///
/// A key satisfies the `(m, ε)`-gathering property when all but `ε` of the
/// support of `h0` fits in such a window, i.e. when this value is at least
/// `weight - ε`. Errors with [`Error::WindowOutOfRange`] unless `1 ≤ m ≤ r`.
pub fn gathering_weight(h: &SparsePoly, m: usize) -> Result<usize> {
    let r = h.r();
    if m < 1 || m > r {
        return Err(Error::WindowOutOfRange { m, r });
    }
    let support = h.support();
    let w = support.len();
    if w == 0 {
        return Ok(0);
    }
    // The best window can be anchored at a support element; scan the doubled
    // support with two pointers.
    let mut best = 0;
    let mut hi = 0;
    for lo in 0..w {
        let bound = support[lo] + m;
        while hi < lo + w {
            let e = if hi < w { support[hi] } else { support[hi - w] + r };
            if e < bound {
                hi += 1;
            } else {
                break;
            }
        }
        best = best.max(hi - lo);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(r: usize, support: &[usize]) -> SparsePoly {
        SparsePoly::new(r, support.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(1, 9, 11).unwrap(), 3);
        assert_eq!(distance(1, 8, 11).unwrap(), 4);
        assert_eq!(distance(9, 1, 11).unwrap(), 3);
        assert_eq!(distance(4, 4, 11).unwrap(), 0);
        assert!(distance(11, 0, 11).is_err());
    }

    #[test]
    fn worked_example_spectrum() {
        let h = poly(11, &[0, 1, 8, 9]);
        let report = compute_spectrum(&h);
        assert_eq!(report.mu, vec![0, 2, 1, 2, 1, 0]);
        assert_eq!(report.full_spectrum, vec![1, 1, 2, 3, 3, 4]);
        assert_eq!(report.gamma, vec![1, 2, 2, 0, 0]);
        assert_eq!(report.mspec(), vec![(1, 2), (2, 2), (3, 0)]);
        assert_eq!(report.max_multiplicity(), 2);
    }

    #[test]
    fn degenerate_spectra() {
        let empty = compute_spectrum(&SparsePoly::zero(11));
        assert!(empty.full_spectrum.is_empty());
        assert!(empty.mu.iter().all(|&m| m == 0));
        assert!(empty.mspec().is_empty());

        let single = compute_spectrum(&poly(11, &[4]));
        assert!(single.full_spectrum.is_empty());

        // All-ones at r = 3: the single distance value 1 appears d = 3 times,
        // which only the extended gamma table can represent.
        let ones = compute_spectrum(&poly(3, &[0, 1, 2]));
        assert_eq!(ones.mu, vec![0, 3]);
        assert_eq!(ones.gamma, vec![0, 0, 0, 1]);
        assert_eq!(ones.mspec(), vec![(1, 0), (2, 0)]);
    }

    #[test]
    fn pair_count_sum_rule() {
        let h = poly(101, &[0, 5, 17, 30, 77, 98]);
        let report = compute_spectrum(&h);
        let d = h.weight();
        assert_eq!(report.mu.iter().sum::<usize>(), d * (d - 1) / 2);
        assert_eq!(report.full_spectrum.len(), d * (d - 1) / 2);
        assert_eq!(report.gamma.iter().sum::<usize>(), 101 / 2);
    }

    #[test]
    fn even_modulus_halfway_distance() {
        // r = 8: the pair {0, 4} sits at the halfway distance 4.
        let h = poly(8, &[0, 4]);
        let report = compute_spectrum(&h);
        assert_eq!(report.mu, vec![0, 0, 0, 0, 1]);
        assert_eq!(report.full_spectrum, vec![4]);
    }

    #[test]
    fn spectrum_is_shift_invariant() {
        let h = poly(31, &[0, 2, 11, 12, 20]);
        let base = compute_spectrum(&h);
        for k in 1..31 {
            assert_eq!(compute_spectrum(&h.shift(k)), base);
        }
    }

    #[test]
    fn gathering_weight_examples() {
        let h = poly(11, &[0, 1, 8, 9]);
        assert_eq!(gathering_weight(&h, 4).unwrap(), 3);
        assert_eq!(gathering_weight(&h, 11).unwrap(), 4);
        assert_eq!(gathering_weight(&poly(11, &[0, 1, 2, 3]), 4).unwrap(), 4);
        assert_eq!(gathering_weight(&SparsePoly::zero(11), 3).unwrap(), 0);
        assert!(gathering_weight(&h, 0).is_err());
        assert!(gathering_weight(&h, 12).is_err());
    }

    #[test]
    fn gathering_weight_is_shift_invariant() {
        let h = poly(23, &[0, 4, 5, 9, 17]);
        for m in 1..=23 {
            let base = gathering_weight(&h, m).unwrap();
            for k in [1, 7, 22] {
                assert_eq!(gathering_weight(&h.shift(k), m).unwrap(), base);
            }
        }
    }
}
