//! Weight, sparsity, rank, max-supp-entropy and max-rank-entropy.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::function::{BooleanFunction, SparseSpectrum};
use crate::gf2::{rank_of, Gf2Basis, Mask};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub n: usize,
    #[serde(with = "rational::json")]
    pub delta: Rational,
    pub k: usize,
    pub r: usize,
    #[serde(with = "rational::json")]
    pub kprime: Rational,
    #[serde(with = "rational::json")]
    pub kdprime: Rational,
    /// Absent when only a spectrum is known.
    pub degf2: Option<u32>,
    pub degenerate: bool,
}

impl SpectralProfile {
    /// `(δ, k, r, k′, k″)`, the usual table row.
    pub fn row(&self) -> (Rational, usize, usize, Rational, Rational) {
        (self.delta, self.k, self.r, self.kprime, self.kdprime)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("profile serializes")
    }
}

/// Full profile from a truth table.
pub fn profile(f: &BooleanFunction) -> SpectralProfile {
    let mut p = profile_sparse(&f.wht().to_sparse());
    p.degf2 = Some(f.f2_degree());
    p
}

/// Profile from the nonzero coefficients alone (no F2-degree).
pub fn profile_sparse(s: &SparseSpectrum) -> SpectralProfile {
    let delta = (Rational::one() - s.get(0)) / 2;
    let k = s.sparsity();
    let r = rank_of(s.terms().iter().map(|&(m, _)| m));
    let min_mag = s.terms().iter().map(|(_, v)| v.abs()).min().unwrap_or_else(Rational::one);
    let kdprime = threshold_dims(s)
        .into_iter()
        .find(|&(_, d)| d == r)
        .filter(|_| r > 0)
        .map(|(t, _)| t)
        .unwrap_or_else(Rational::zero);
    SpectralProfile {
        n: s.n(),
        delta,
        k,
        r,
        kprime: min_mag.recip(),
        kdprime,
        degf2: None,
        degenerate: k <= 1,
    }
}

/// Support masks grouped by `|f̂|`, largest magnitude first, masks ascending.
fn by_magnitude(s: &SparseSpectrum) -> Vec<(Rational, Vec<Mask>)> {
    s.terms()
        .iter()
        .map(|&(m, v)| (v.abs(), m))
        .sorted_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)))
        .chunk_by(|&(mag, _)| mag)
        .into_iter()
        .map(|(mag, g)| (mag, g.map(|(_, m)| m).collect()))
        .collect()
}

/// The step function `t ↦ dim(S_t)`: one `(1/m, dim)` per distinct magnitude
/// `m`, thresholds increasing.
pub fn threshold_dims(s: &SparseSpectrum) -> Vec<(Rational, usize)> {
    let mut basis = Gf2Basis::new();
    by_magnitude(s)
        .into_iter()
        .map(|(mag, masks)| {
            for m in masks {
                basis.insert(m);
            }
            (mag.recip(), basis.dim())
        })
        .collect()
}

/// Support masks taken greedily by decreasing `|f̂|` that are independent
/// and span `supp(f)`; every member has `|f̂| ≥ 1/k″`.
pub fn kdprime_basis(s: &SparseSpectrum) -> Vec<Mask> {
    let mut basis = Gf2Basis::new();
    let mut chosen = Vec::new();
    for (_, masks) in by_magnitude(s) {
        for m in masks {
            if basis.insert(m) {
                chosen.push(m);
            }
        }
    }
    chosen
}

/// `Σ_S |f̂(S)|`.
pub fn l1_norm(s: &SparseSpectrum) -> Rational {
    s.terms().iter().map(|(_, v)| v.abs()).sum()
}

/// `Σ_i |f̂({i})|`.
pub fn level_one_weight(s: &SparseSpectrum) -> Rational {
    s.terms().iter().filter(|(m, _)| m.count_ones() == 1).map(|(_, v)| v.abs()).sum()
}

/// Sparsity excluding the empty set.
pub fn nonempty_sparsity(s: &SparseSpectrum) -> usize {
    s.terms().iter().filter(|&&(m, _)| m != 0).count()
}
