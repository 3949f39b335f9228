//! Exact Fourier analysis of Boolean functions on the ±1 hypercube.
//!
//! Functions are stored as bit-packed truth tables and their spectra as
//! integer-scaled Walsh–Hadamard coefficients `c_S = 2^n · f̂(S)`, so every
//! identity checked by this crate is an exact integer or rational identity.
//!
//! Module map:
//!
//! * [`function`] – truth tables, transforms, F2-degree, affine restrictions.
//! * [`gf2`] – parity masks, echelon bases, subspace enumeration.
//! * [`measures`] – weight, sparsity, rank, max-supp-entropy, max-rank-entropy.
//! * [`bounds`] – Chang-type bound evaluators and inequality verdicts.
//! * [`napdt`] – the parity-fixing restriction algorithm with traces.
//! * [`constructions`] – addressing-based witness families and closed-form spectra.
//! * [`harness`] – verification suites, frontier scan, plot data and file formats.

pub mod bounds;
pub mod constructions;
mod error;
pub mod function;
pub mod gf2;
pub mod harness;
pub mod measures;
pub mod napdt;
pub mod rational;

pub use error::{Error, Result};
pub use function::{BooleanFunction, RestrictionMap, Sign, SparseSpectrum, Spectrum};
pub use gf2::{Gf2Basis, Mask};
pub use measures::SpectralProfile;
pub use rational::Rational;

use std::sync::OnceLock;

/// Default maximum arity for dense truth tables (2^22 entries).
pub const DEFAULT_MAX_ARITY: usize = 22;

/// Default maximum arity for exact affine-subspace search.
pub const DEFAULT_EXACT_SEARCH_MAX_N: usize = 10;

/// Environment variable overriding [`DEFAULT_MAX_ARITY`].
pub const MAX_ARITY_ENV: &str = "BOOLSPEC_MAX_N";

/// The arity guard in effect: `BOOLSPEC_MAX_N` if set and parseable, else 22.
pub fn max_arity() -> usize {
    static GUARD: OnceLock<usize> = OnceLock::new();
    *GUARD.get_or_init(|| {
        std::env::var(MAX_ARITY_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            // masks are 128-bit and table indices are usize
            .map(|n| n.min(40))
            .unwrap_or(DEFAULT_MAX_ARITY)
    })
}
