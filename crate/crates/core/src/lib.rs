//! Analysis toolkit for QC-MDPC (BIKE-style) keys.
//!
//! A BIKE private key is a pair of sparse polynomials `(h0, h1)` in
//! `F2[x]/(x^r - 1)`, each standing for an `r × r` circulant block of the
//! parity-check matrix `H = [H0 | H1]`. The number of 4-cycles in the Tanner
//! graph of `H` — the dominant obstruction to iterative decoding — is fully
//! determined by the *distance spectra* of `h0` and `h1` and by the overlap
//! profile between them. This crate provides:
//!
//! - [`gf2ring`]: sparse polynomial arithmetic over `F2[x]/(x^r - 1)`;
//! - [`spectrum`]: distances, multiplicities, spectra and the gathering
//!   property;
//! - [`cycles`]: closed-form 4-cycle counts for BIKE keys and for general
//!   quasi-cyclic block matrices, plus feasibility and probability estimates;
//! - [`tanner`]: explicit Tanner graphs and a brute-force cycle oracle that
//!   certifies every closed-form count;
//! - [`keys`]: BIKE parameters, seeded key generation and the weighted
//!   column-intersection weak-key filter;
//! - [`decoder`]: syndrome computation and the Black-Gray Flip bit-flipping
//!   decoder;
//! - [`harness`]: reproducible experiment campaigns (cycle statistics,
//!   decoding-failure-rate estimation) and dataset ingestion.
//!
//! All counting operations are exact integer computations and are
//! cross-checked against the oracle in the test suite; campaign runs are
//! bit-reproducible from a single 64-bit master seed.

pub mod cycles;
pub mod decoder;
pub mod errors;
pub mod gf2ring;
pub mod harness;
pub mod keys;
pub mod spectrum;
pub mod tanner;

pub use errors::{Error, Result};
