//! BIKE key parameters, seeded key generation, and the weighted
//! column-intersection weak-key filter.
//!
//! A private key is `(h0, h1)`, two uniformly random weight-`d` polynomials
//! modulo `x^r - 1` with `h0` invertible; the public key is
//! `h2 = h0⁻¹ · h1`. The modulus must be prime with 2 a primitive root so
//! that `x^r - 1` has exactly two irreducible binary factors — then the only
//! non-invertible nonzero elements are the even-weight polynomials and the
//! all-ones polynomial, which makes invertibility a simple weight condition.
//!
//! The filter scores a key by the histogram of its distance multiplicities
//! and of its cross-correlation profile: with weights `w_m = C(m, 2)` the
//! cumulative score times `r` is exactly the key's total 4-cycle count, and
//! with 0/1 indicator weights the filter rejects any key whose maximum
//! column intersection reaches a chosen bound.

use crate::cycles::cross_profile;
use crate::errors::{Error, Result};
use crate::gf2ring::SparsePoly;
use crate::spectrum::{compute_spectrum, gathering_weight};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Whether `r` is prime with 2 a primitive root modulo `r` — the condition
/// for `x^r - 1` to split into exactly two irreducible factors over `F2`.
pub fn validate_r(r: usize) -> bool {
    if r < 3 || r % 2 == 0 {
        return false;
    }
    let mut f = 3;
    while f * f <= r {
        if r % f == 0 {
            return false;
        }
        f += 2;
    }
    // Multiplicative order of 2 modulo the prime r.
    let mut pow = 2usize % r;
    let mut order = 1;
    while pow != 1 {
        pow = pow * 2 % r;
        order += 1;
    }
    order == r - 1
}

/// BIKE system parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BikeParams {
    /// Circulant block size (prime, 2 primitive root).
    pub r: usize,
    /// Weight of each of `h0`, `h1`.
    pub d: usize,
    /// Error weight used by encryption / decoder experiments.
    pub t: usize,
    /// Optional security-level tag (bits).
    pub security_label: Option<u32>,
}

/// How to read a published weight figure when instantiating full-size
/// parameter sets: some sources quote the weight of a full parity-check row
/// (both blocks together), others the weight of a single block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightConvention {
    /// The published figure is the full row weight `2d`; each block gets
    /// half of it.
    RowWeight,
    /// The published figure is already the per-block weight `d`.
    BlockWeight,
}

/// Published security levels with suggested parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecurityLevel {
    L128,
    L192,
    L256,
}

impl BikeParams {
    /// Validates and builds a parameter set.
    pub fn new(r: usize, d: usize, t: usize) -> Result<Self> {
        if !validate_r(r) {
            return Err(Error::ParameterError(format!(
                "r={r} must be prime with 2 a primitive root modulo r"
            )));
        }
        if d < 1 || d > r {
            return Err(Error::ParameterError(format!("d={d} must satisfy 1 ≤ d ≤ r={r}")));
        }
        if t < 1 || t > 2 * r {
            return Err(Error::ParameterError(format!("t={t} must satisfy 1 ≤ t ≤ 2r")));
        }
        Ok(BikeParams { r, d, t, security_label: None })
    }

    /// The small-`r` experimental setting: `d = 15`, `t = 18`, with `r` one
    /// of the primes (such as 557 or 587) used for explicit decoding-failure
    /// studies.
    pub fn desk_scale(r: usize) -> Result<Self> {
        BikeParams::new(r, 15, 18)
    }

    /// Suggested full-size parameters for a security level. The published
    /// weight figures (142, 206, 274) are interpreted per `convention`;
    /// see [`WeightConvention`].
    pub fn preset(level: SecurityLevel, convention: WeightConvention) -> Result<Self> {
        let (lambda, r, published_weight, t) = match level {
            SecurityLevel::L128 => (128, 12323, 142, 134),
            SecurityLevel::L192 => (192, 24659, 206, 99),
            SecurityLevel::L256 => (256, 40973, 274, 264),
        };
        let d = match convention {
            WeightConvention::RowWeight => published_weight / 2,
            WeightConvention::BlockWeight => published_weight,
        };
        let mut params = BikeParams::new(r, d, t)?;
        params.security_label = Some(lambda);
        Ok(params)
    }
}

/// A BIKE private key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcKey {
    params: BikeParams,
    h0: SparsePoly,
    h1: SparsePoly,
}

impl QcKey {
    /// Builds a key, checking that both polynomials have modulus `params.r`
    /// and weight `params.d`.
    pub fn new(params: BikeParams, h0: SparsePoly, h1: SparsePoly) -> Result<Self> {
        for (name, h) in [("h0", &h0), ("h1", &h1)] {
            if h.r() != params.r {
                return Err(Error::ParameterError(format!(
                    "{name} has modulus {}, parameters say {}",
                    h.r(),
                    params.r
                )));
            }
            if h.weight() != params.d {
                return Err(Error::ParameterError(format!(
                    "{name} has weight {}, parameters say {}",
                    h.weight(),
                    params.d
                )));
            }
        }
        Ok(QcKey { params, h0, h1 })
    }

    pub fn params(&self) -> &BikeParams {
        &self.params
    }

    pub fn h0(&self) -> &SparsePoly {
        &self.h0
    }

    pub fn h1(&self) -> &SparsePoly {
        &self.h1
    }
}

/// Draws a uniformly random size-`weight` subset of `[0, range)`, sorted.
///
/// Uses plain rejection sampling on `next_u64`: a draw `x` is accepted when
/// `x` falls below the largest multiple of `range` representable in 64 bits
/// (then `x mod range` is exactly uniform), and indices already picked are
/// redrawn. The draw order is fixed, so the result is a pure function of the
/// generator state.
pub(crate) fn sample_support(rng: &mut ChaCha12Rng, range: usize, weight: usize) -> Vec<usize> {
    debug_assert!(weight <= range);
    let range64 = range as u64;
    let zone = u64::MAX - u64::MAX % range64;
    let mut picked: Vec<usize> = Vec::with_capacity(weight);
    while picked.len() < weight {
        let x = loop {
            let x = rng.next_u64();
            if x < zone {
                break (x % range64) as usize;
            }
        };
        if !picked.contains(&x) {
            picked.push(x);
        }
    }
    picked.sort_unstable();
    picked
}

/// Generates the key determined by `(params, seed)`.
///
/// The generator is ChaCha12 seeded from the 64-bit seed (via the standard
/// SplitMix64 state expansion); supports are drawn by rejection sampling —
/// see [`sample_support`]. `h0` is drawn first and redrawn until invertible,
/// then `h1`. At a valid modulus the non-invertible weight-`d` polynomials
/// are exactly the even-weight ones (all of them) and the all-ones
/// polynomial, so even `d` or `d = r` is rejected up front as
/// [`Error::ParameterError`] rather than looping forever.
pub fn generate_key(params: &BikeParams, seed: u64) -> Result<QcKey> {
    let (r, d) = (params.r, params.d);
    if d % 2 == 0 {
        return Err(Error::ParameterError(format!(
            "even weight d={d}: x+1 divides every even-weight polynomial, h0 can never be inverted"
        )));
    }
    if d == r {
        return Err(Error::ParameterError(
            "d = r: the all-ones polynomial is not invertible".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let h0 = loop {
        let candidate = SparsePoly::new(r, sample_support(&mut rng, r, d))
            .expect("sampled support is sorted and in range");
        // Odd weight below r is exactly the invertibility condition at a
        // valid modulus; with odd d every draw passes, but the loop keeps
        // the generation contract explicit.
        if candidate.weight() % 2 == 1 && candidate.weight() < r {
            break candidate;
        }
    };
    let h1 = SparsePoly::new(r, sample_support(&mut rng, r, d))
        .expect("sampled support is sorted and in range");
    QcKey::new(params.clone(), h0, h1)
}

/// The public key `h2 = h0⁻¹ · h1` (the non-identity half of the systematic
/// form of `[H0 | H1]`).
pub fn derive_public_key(key: &QcKey) -> Result<SparsePoly> {
    key.h0().invert()?.mul(key.h1())
}

/// How filter scores are compared against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterMode {
    /// Reject as soon as one multiplicity's weighted score reaches the
    /// threshold.
    PerMultiplicity,
    /// Reject when the sum of all weighted scores reaches the threshold.
    Cumulative,
}

impl std::str::FromStr for FilterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per" | "per-multiplicity" => Ok(FilterMode::PerMultiplicity),
            "cum" | "cumulative" => Ok(FilterMode::Cumulative),
            other => Err(Error::ConfigError(format!(
                "unknown filter mode {other:?}; expected per or cum"
            ))),
        }
    }
}

/// Configuration of the column-intersection filter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    /// `weights[m]` scores multiplicity `m`; must cover at least `[0, d)`.
    /// An entry for `m = d` is honored when present (the cross profile can
    /// reach `d`); absent entries score 0.
    pub weights: Vec<u64>,
    /// Rejection threshold `s ≥ 1`.
    pub threshold: u64,
    pub mode: FilterMode,
}

impl FilterConfig {
    /// The maximum-column-intersection rule with bound `T`: reject a key iff
    /// any distance multiplicity or cross-profile entry reaches `T`.
    /// Indicator weights for `m ∈ [0, d]`, threshold 1, per-multiplicity.
    pub fn t_equivalent(d: usize, t_bound: usize) -> Self {
        FilterConfig {
            weights: (0..=d).map(|m| u64::from(m >= t_bound)).collect(),
            threshold: 1,
            mode: FilterMode::PerMultiplicity,
        }
    }

    /// 4-cycle weights `w_m = C(m, 2)` for `m ∈ [0, d]`, cumulative mode:
    /// the rejection statistic times `r` is exactly the key's total 4-cycle
    /// count, so threshold `s` rejects keys with at least `r·s` cycles.
    pub fn cycle_weights(d: usize, threshold: u64) -> Self {
        FilterConfig {
            weights: (0..=d as u64).map(|m| m * m.saturating_sub(1) / 2).collect(),
            threshold,
            mode: FilterMode::Cumulative,
        }
    }
}

/// Filter outcome; rejections carry the witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject {
        /// The multiplicity that triggered rejection (per-multiplicity mode).
        multiplicity: Option<usize>,
        /// The score that met the threshold.
        statistic: u64,
    },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Runs the weighted column-intersection filter.
///
/// Computes `S_{i,m} = γ(m, h_i)` — how many distance values have
/// multiplicity `m` in each circulant — and `Q_m`, how many of the `r`
/// cross-profile entries `c_k` equal `m`. The score of multiplicity `m` is
/// `w_m · (S_{0,m} + S_{1,m} + Q_m)`; per-multiplicity mode rejects on the
/// first `m` whose score reaches the threshold, cumulative mode on the total.
pub fn filter_key(key: &QcKey, cfg: &FilterConfig) -> Result<Verdict> {
    let d = key.params().d;
    if cfg.weights.len() < d {
        return Err(Error::ConfigError(format!(
            "weight vector has {} entries, need at least d={d}",
            cfg.weights.len(),
        )));
    }
    if cfg.threshold < 1 {
        return Err(Error::ConfigError("threshold must be at least 1".into()));
    }
    let s0 = compute_spectrum(key.h0()).gamma;
    let s1 = compute_spectrum(key.h1()).gamma;
    let mut q = vec![0u64; d + 1];
    for c in cross_profile(key.h0(), key.h1())? {
        q[c] += 1;
    }
    let weight = |m: usize| cfg.weights.get(m).copied().unwrap_or(0);
    let mut cumulative = 0u64;
    for m in 0..=d {
        let score = weight(m) * (s0[m] as u64 + s1[m] as u64 + q[m]);
        match cfg.mode {
            FilterMode::PerMultiplicity => {
                if score >= cfg.threshold {
                    return Ok(Verdict::Reject { multiplicity: Some(m), statistic: score });
                }
            }
            FilterMode::Cumulative => cumulative += score,
        }
    }
    if cfg.mode == FilterMode::Cumulative && cumulative >= cfg.threshold {
        return Ok(Verdict::Reject { multiplicity: None, statistic: cumulative });
    }
    Ok(Verdict::Accept)
}

/// Whether the key lies in the gathering class `K_{m,ε}`: all but at most
/// `eps` of the support of `h0` fits in one cyclic window of length `m`.
pub fn classify_gathering(key: &QcKey, m: usize, eps: usize) -> Result<bool> {
    let w = gathering_weight(key.h0(), m)?;
    Ok(w + eps >= key.h0().weight())
}
