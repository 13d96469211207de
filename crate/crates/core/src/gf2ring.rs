//! Sparse polynomial arithmetic over `F2[x]/(x^r - 1)`.
//!
//! Elements are stored by their *support*: the sorted list of exponents with
//! a nonzero coefficient. This is the natural representation for MDPC keys,
//! whose weight is `O(√r)`; a dense one-bit-per-coefficient path is used
//! internally where it wins (multiplication accumulation, inversion).
//!
//! A polynomial `h` doubles as the `r × r` circulant matrix whose row `m`
//! has ones exactly at columns `(e + m) mod r` for `e` in the support of `h`.

use crate::errors::{Error, Result};

/// An element of `F2[x]/(x^r - 1)` stored as its sorted support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    r: usize,
    support: Vec<usize>,
}

impl SparsePoly {
    /// Builds a polynomial from a sorted, duplicate-free support.
    ///
    /// Returns [`Error::IndexOutOfRange`] if any exponent is `≥ r` or the
    /// list is unsorted or has duplicates (reported as the offending index).
    pub fn new(r: usize, support: Vec<usize>) -> Result<Self> {
        if r == 0 {
            return Err(Error::ParameterError("modulus r must be positive".into()));
        }
        for (pos, &e) in support.iter().enumerate() {
            if e >= r {
                return Err(Error::IndexOutOfRange { index: e, r });
            }
            if pos > 0 && support[pos - 1] >= e {
                return Err(Error::IndexOutOfRange { index: e, r });
            }
        }
        Ok(SparsePoly { r, support })
    }

    /// Builds a polynomial from exponents in any order (they are sorted;
    /// duplicates are rejected).
    pub fn from_indices(r: usize, indices: &[usize]) -> Result<Self> {
        let mut support = indices.to_vec();
        support.sort_unstable();
        if support.windows(2).any(|w| w[0] == w[1]) {
            let dup = support.windows(2).find(|w| w[0] == w[1]).unwrap()[0];
            return Err(Error::IndexOutOfRange { index: dup, r });
        }
        Self::new(r, support)
    }

    /// The zero polynomial.
    pub fn zero(r: usize) -> Self {
        SparsePoly { r, support: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one(r: usize) -> Self {
        SparsePoly { r, support: vec![0] }
    }

    /// Ring modulus exponent `r`.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Sorted support (exponents of nonzero coefficients).
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Hamming weight `|support|`.
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    /// Whether this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Whether coefficient `e` is set.
    pub fn contains(&self, e: usize) -> bool {
        self.support.binary_search(&e).is_ok()
    }

    fn check_modulus(&self, other: &SparsePoly) -> Result<()> {
        if self.r != other.r {
            return Err(Error::MismatchedModulus(self.r, other.r));
        }
        Ok(())
    }

    /// Cyclic shift by `k` positions: multiplication by `x^k`.
    ///
    /// `k` may be any integer (negative shifts rotate the other way);
    /// the support becomes `{(e + k) mod r}`, weight is preserved.
    pub fn shift(&self, k: i64) -> SparsePoly {
        let r = self.r as i64;
        let k = k.rem_euclid(r) as usize;
        if k == 0 {
            return self.clone();
        }
        // Shifted support splits into a wrapped prefix and an unwrapped
        // suffix, each already sorted.
        let mut support = Vec::with_capacity(self.support.len());
        let split = self.r - k;
        for &e in self.support.iter().filter(|&&e| e >= split) {
            support.push(e + k - self.r);
        }
        for &e in self.support.iter().filter(|&&e| e < split) {
            support.push(e + k);
        }
        SparsePoly { r: self.r, support }
    }

    /// GF(2) addition: symmetric difference of supports.
    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_modulus(other)?;
        let mut support = Vec::with_capacity(self.weight() + other.weight());
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() && j < other.support.len() {
            match self.support[i].cmp(&other.support[j]) {
                std::cmp::Ordering::Less => {
                    support.push(self.support[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    support.push(other.support[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        support.extend_from_slice(&self.support[i..]);
        support.extend_from_slice(&other.support[j..]);
        Ok(SparsePoly { r: self.r, support })
    }

    /// Ring product `self · other` reduced mod `x^r - 1` and mod 2.
    ///
    /// Equals the XOR-accumulation of `self.shift(e)` over the support of
    /// `other`; implemented by toggling one dense bit per exponent pair.
    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_modulus(other)?;
        let mut acc = DenseBits::zero(self.r);
        for &eq in &other.support {
            for &ep in &self.support {
                let mut e = ep + eq;
                if e >= self.r {
                    e -= self.r;
                }
                acc.toggle(e);
            }
        }
        Ok(acc.to_sparse())
    }

    /// Multiplicative inverse in `F2[x]/(x^r - 1)`.
    ///
    /// Runs the extended Euclidean algorithm against `x^r - 1` over `F2[x]`.
    /// Returns [`Error::NotInvertible`] when `gcd(self, x^r - 1) ≠ 1` — in
    /// particular for every even-weight polynomial, since `x + 1` divides
    /// `x^r - 1`.
    pub fn invert(&self) -> Result<SparsePoly> {
        let r = self.r;
        if self.is_zero() {
            return Err(Error::NotInvertible { r });
        }
        // Modulus x^r + 1 (= x^r - 1 over F2).
        let mut modulus = DensePoly::zero(r + 1);
        modulus.set(0);
        modulus.set(r);
        let mut b = DensePoly::zero(r + 1);
        for &e in &self.support {
            b.set(e);
        }

        let (mut r0, mut r1) = (modulus, b);
        let (mut t0, mut t1) = (DensePoly::zero(r + 1), DensePoly::zero(r + 1));
        t1.set(0);
        while !r1.is_zero() {
            let q = r0.div_assign_rem(&r1); // r0 becomes r0 mod r1
            std::mem::swap(&mut r0, &mut r1);
            t0.sub_mul(&q, &t1); // t0 -= q·t1 (XOR in F2)
            std::mem::swap(&mut t0, &mut t1);
        }
        if r0.degree() != Some(0) {
            return Err(Error::NotInvertible { r });
        }
        // gcd is the constant 1, so t0 · self ≡ 1 (mod x^r - 1). The Bézout
        // coefficient has degree < r already; fold defensively anyway.
        Ok(t0.fold_mod_ring(r))
    }

    /// Size of the intersection of the two supports.
    pub fn intersect_count(&self, other: &SparsePoly) -> Result<usize> {
        self.check_modulus(other)?;
        let mut count = 0;
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() && j < other.support.len() {
            match self.support[i].cmp(&other.support[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(count)
    }
}

/// Fixed-width bit array over `[0, r)` used as an XOR accumulator.
#[derive(Debug, Clone)]
pub(crate) struct DenseBits {
    r: usize,
    words: Vec<u64>,
}

impl DenseBits {
    pub(crate) fn zero(r: usize) -> Self {
        DenseBits { r, words: vec![0; r.div_ceil(64)] }
    }

    pub(crate) fn toggle(&mut self, e: usize) {
        debug_assert!(e < self.r);
        self.words[e / 64] ^= 1u64 << (e % 64);
    }

    pub(crate) fn get(&self, e: usize) -> bool {
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub(crate) fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub(crate) fn to_sparse(&self) -> SparsePoly {
        let mut support = Vec::new();
        for (wi, &word) in self.words.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let bit = w.trailing_zeros() as usize;
                support.push(wi * 64 + bit);
                w &= w - 1;
            }
        }
        SparsePoly { r: self.r, support }
    }
}

/// Dense polynomial over `F2[x]` (no ring reduction) with enough room for
/// degree `cap - 1`; the workhorse of the extended Euclidean algorithm.
#[derive(Debug, Clone)]
struct DensePoly {
    words: Vec<u64>,
}

impl DensePoly {
    fn zero(cap: usize) -> Self {
        DensePoly { words: vec![0; cap.div_ceil(64).max(1)] }
    }

    fn set(&mut self, e: usize) {
        self.words[e / 64] |= 1u64 << (e % 64);
    }

    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn degree(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * 64 + (63 - w.leading_zeros() as usize));
            }
        }
        None
    }

    /// `self ^= other << shift` (bitwise; shift in bit positions).
    fn xor_shifted(&mut self, other: &DensePoly, shift: usize) {
        let (word_shift, bit_shift) = (shift / 64, shift % 64);
        let n = other.words.len();
        for i in (0..n).rev() {
            let w = other.words[i];
            if w == 0 {
                continue;
            }
            let lo = i + word_shift;
            if lo < self.words.len() {
                self.words[lo] ^= w << bit_shift;
            }
            if bit_shift != 0 && lo + 1 < self.words.len() {
                self.words[lo + 1] ^= w >> (64 - bit_shift);
            }
        }
    }

    /// Long division: reduces `self` to `self mod divisor` and returns the
    /// quotient. `divisor` must be nonzero.
    fn div_assign_rem(&mut self, divisor: &DensePoly) -> DensePoly {
        let dd = divisor.degree().expect("division by zero polynomial");
        let mut quotient = DensePoly::zero(self.words.len() * 64);
        while let Some(d) = self.degree() {
            if d < dd {
                break;
            }
            let shift = d - dd;
            quotient.set(shift);
            self.xor_shifted(divisor, shift);
        }
        quotient
    }

    /// `self ^= q · other` (subtraction and addition coincide over F2).
    fn sub_mul(&mut self, q: &DensePoly, other: &DensePoly) {
        for (wi, &w) in q.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let bit = bits.trailing_zeros() as usize;
                self.xor_shifted(other, wi * 64 + bit);
                bits &= bits - 1;
            }
        }
    }

    /// Reduces exponents modulo `x^r - 1` (`x^{r+k} ≡ x^k`) and converts to
    /// sparse form.
    fn fold_mod_ring(&self, r: usize) -> SparsePoly {
        let mut acc = DenseBits::zero(r);
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let bit = bits.trailing_zeros() as usize;
                acc.toggle((wi * 64 + bit) % r);
                bits &= bits - 1;
            }
        }
        acc.to_sparse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(r: usize, support: &[usize]) -> SparsePoly {
        SparsePoly::new(r, support.to_vec()).unwrap()
    }

    #[test]
    fn new_rejects_out_of_range_and_unsorted() {
        assert!(SparsePoly::new(5, vec![0, 5]).is_err());
        assert!(SparsePoly::new(5, vec![2, 1]).is_err());
        assert!(SparsePoly::new(5, vec![1, 1]).is_err());
        assert!(SparsePoly::new(0, vec![]).is_err());
        assert!(SparsePoly::new(5, vec![0, 1, 4]).is_ok());
    }

    #[test]
    fn shift_example() {
        let h = poly(11, &[0, 1, 8, 9]);
        assert_eq!(h.shift(1).support(), &[1, 2, 9, 10]);
        assert_eq!(h.shift(0), h);
        assert_eq!(h.shift(11), h);
        assert_eq!(h.shift(-1).support(), &[0, 7, 8, 10]);
    }

    #[test]
    fn shift_composes() {
        let h = poly(11, &[0, 3, 5]);
        for a in -15..15i64 {
            for b in -15..15i64 {
                assert_eq!(h.shift(a).shift(b), h.shift(a + b));
            }
        }
    }

    #[test]
    fn add_is_symmetric_difference() {
        let p = poly(5, &[0, 1]);
        let q = poly(5, &[1, 2]);
        assert_eq!(p.add(&q).unwrap().support(), &[0, 2]);
        assert!(p.add(&p).unwrap().is_zero());
        assert_eq!(p.add(&SparsePoly::zero(5)).unwrap(), p);
        assert_eq!(
            p.add(&poly(7, &[0])).unwrap_err(),
            Error::MismatchedModulus(5, 7)
        );
    }

    #[test]
    fn mul_small_cases() {
        let p = poly(5, &[0, 1]);
        assert_eq!(p.mul(&p).unwrap().support(), &[0, 2]);
        let x = poly(3, &[1]);
        assert_eq!(x.mul(&x).unwrap().support(), &[2]);
        let q = poly(5, &[2, 3, 4]);
        assert_eq!(SparsePoly::one(5).mul(&q).unwrap(), q);
    }

    #[test]
    fn invert_small_cases() {
        assert_eq!(SparsePoly::one(7).invert().unwrap(), SparsePoly::one(7));
        let x = poly(7, &[1]);
        assert_eq!(x.invert().unwrap().support(), &[6]);
        // Even weight is never invertible: x + 1 divides x^r - 1.
        assert_eq!(
            poly(7, &[0, 1]).invert().unwrap_err(),
            Error::NotInvertible { r: 7 }
        );
        assert!(SparsePoly::zero(7).invert().is_err());
    }

    #[test]
    fn invert_round_trip() {
        let h = poly(557, &[0, 3, 10, 51, 200, 433, 556]);
        let inv = h.invert().unwrap();
        assert_eq!(h.mul(&inv).unwrap(), SparsePoly::one(557));
    }

    #[test]
    fn intersect_count_examples() {
        let h = poly(11, &[0, 1, 8, 9]);
        assert_eq!(h.intersect_count(&h.shift(1)).unwrap(), 2);
        assert_eq!(h.intersect_count(&h).unwrap(), h.weight());
        assert_eq!(h.intersect_count(&SparsePoly::zero(11)).unwrap(), 0);
    }

    #[test]
    fn weight_parity_under_add() {
        let p = poly(9, &[0, 2, 4]);
        let q = poly(9, &[2, 3]);
        let s = p.add(&q).unwrap();
        assert_eq!(s.weight() % 2, (p.weight() + q.weight()) % 2);
    }
}
