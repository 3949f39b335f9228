//! Chang-type bound evaluators and the inequality checks relating the measures.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::function::{BooleanFunction, SparseSpectrum};
use crate::measures::{self, kdprime_basis, l1_norm, level_one_weight, threshold_dims, SpectralProfile};
use crate::rational::{self, to_f64, Rational};
use crate::{Error, Result};

/// Relative slack for comparisons that involve a logarithm.
pub const LOG_EPS: f64 = 1e-12;

/// Constant in the appendix dimension-form screen.
pub const DIM_SCREEN_CONSTANT: f64 = 64.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub status: Status,
}

impl Verdict {
    pub(crate) fn exact(name: &str, lhs: Rational, rhs: Rational, ok: bool) -> Self {
        Self::float(name, to_f64(&lhs), to_f64(&rhs), ok)
    }

    pub(crate) fn float(name: &str, lhs: f64, rhs: f64, ok: bool) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { name: name.to_string(), lhs, rhs, status }
    }

    pub(crate) fn le_float(name: &str, lhs: f64, rhs: f64) -> Self {
        Self::float(name, lhs, rhs, lhs <= rhs * (1.0 + LOG_EPS) + f64::EPSILON)
    }

    pub(crate) fn skipped(name: &str) -> Self {
        Self { name: name.to_string(), lhs: 0.0, rhs: 0.0, status: Status::Skipped }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub chang_best: Option<f64>,
    #[serde(with = "rational::json_opt")]
    pub chang_argmax: Option<Rational>,
    /// `r² / (k log² k)`
    pub kline: Option<f64>,
    /// `k / k′²`
    pub kprime_curve: Option<f64>,
    /// `r / (k″ log k)`
    pub kdprime_curve: Option<f64>,
    pub verdicts: Vec<Verdict>,
}

/// `√d / (t·√log₂(t²/d))`.
pub fn chang_weight_bound(d: usize, t: Rational) -> Result<f64> {
    if d <= 1 {
        return Err(Error::Undefined(format!("dimension {d} must exceed 1")));
    }
    let d_q = Rational::from_integer(d as i64);
    if t * t <= d_q {
        return Err(Error::Undefined(format!("t² = {} must exceed d = {d}", t * t)));
    }
    let tf = to_f64(&t);
    let ratio = to_f64(&(t * t / d_q));
    Ok((d as f64).sqrt() / (tf * ratio.log2().sqrt()))
}

/// `t²·δ²·log₂(1/δ)`.
pub fn chang_dim_bound(t: Rational, delta: Rational) -> Result<f64> {
    if delta <= Rational::zero() || delta >= Rational::one() {
        return Err(Error::Undefined(format!("weight {delta} must lie strictly between 0 and 1")));
    }
    let tf = to_f64(&t);
    let df = to_f64(&delta);
    Ok(tf * tf * df * df * (1.0 / df).log2())
}

/// Maximum of [`chang_weight_bound`] over the threshold steps; ties go to the
/// smallest threshold.
pub fn best_chang_bound(s: &SparseSpectrum) -> Result<(f64, Rational)> {
    let mut best: Option<(f64, Rational)> = None;
    for (t, d) in threshold_dims(s) {
        if let Ok(v) = chang_weight_bound(d, t) {
            if best.map_or(true, |(b, _)| v > b) {
                best = Some((v, t));
            }
        }
    }
    best.ok_or(Error::NoValidThreshold)
}

/// One appendix-screen observation at a threshold step.
#[derive(Clone, Debug, PartialEq)]
pub struct DimScreen {
    pub t: Rational,
    pub dim: usize,
    pub bound: f64,
    pub holds: bool,
}

/// `chang_dim_bound(t, δ) ≥ dim(S_t)/64` at every step with `dim > 1`,
/// for `δ < 1/2`. Observations, not assertions.
pub fn dim_screen(s: &SparseSpectrum) -> Vec<DimScreen> {
    let delta = (Rational::one() - s.get(0)) / 2;
    if delta >= Rational::new(1, 2) || delta.is_zero() {
        return vec![];
    }
    threshold_dims(s)
        .into_iter()
        .filter(|&(_, d)| d > 1)
        .map(|(t, dim)| {
            let bound = chang_dim_bound(t, delta).expect("weight strictly inside (0, 1/2)");
            DimScreen { t, dim, bound, holds: bound * (1.0 + LOG_EPS) >= dim as f64 / DIM_SCREEN_CONSTANT }
        })
        .collect()
}

fn log2k(k: usize) -> f64 {
    (k as f64).log2()
}

fn curves(p: &SpectralProfile) -> (Option<f64>, Option<f64>, Option<f64>) {
    if p.degenerate {
        return (None, None, None);
    }
    let (k, r) = (p.k as f64, p.r as f64);
    let lk = log2k(p.k);
    let kp = to_f64(&p.kprime);
    let kdp = to_f64(&p.kdprime);
    (Some(r * r / (k * lk * lk)), Some(k / (kp * kp)), Some(r / (kdp * lk)))
}

/// All inequality checks for a function given by its table.
pub fn verify_inequalities(f: &BooleanFunction) -> Vec<Verdict> {
    let s = f.wht().to_sparse();
    let p = measures::profile(f);
    verify_profile(&p, &s)
}

/// Inequality checks from a profile and its spectrum; degree-based checks
/// run only when the profile carries the F2-degree.
pub fn verify_profile(p: &SpectralProfile, s: &SparseSpectrum) -> Vec<Verdict> {
    if p.degenerate {
        return vec![Verdict::skipped("degenerate")];
    }
    let one = Rational::one();
    let int = |x: usize| Rational::from_integer(x as i64);
    let (k, r, delta, kp, kdp) = (int(p.k), int(p.r), p.delta, p.kprime, p.kdprime);
    let lk = log2k(p.k);
    let mut v = Vec::with_capacity(20);

    let sq = s.sum_of_squares();
    v.push(Verdict::exact("parseval", sq, one, sq == one));

    // every |f̂(S)| is a multiple of 2^{1−⌊log₂ k⌋}
    let fl = (usize::BITS - 1 - p.k.leading_zeros()) as i64;
    let unit = if fl >= 1 { Rational::new(1, 1 << (fl - 1)) } else { Rational::from_integer(2) };
    let bad = s.terms().iter().map(|(_, c)| c.abs()).find(|c| !(c / unit).is_integer());
    let min = s.terms().iter().map(|(_, c)| c.abs()).min().unwrap_or(one);
    v.push(Verdict::exact("granularity", bad.unwrap_or(min), unit, bad.is_none()));

    v.push(Verdict::exact("sparsity_times_weight", k * delta, one, k * delta >= one));

    let two_r = if p.r < 63 { Rational::from_integer(1 << p.r) } else { Rational::from_integer(i64::MAX) };
    v.push(Verdict::float("log_sparsity_le_rank", lk, p.r as f64, k <= two_r));

    v.push(Verdict::exact("sqrt_sparsity_le_kprime", k, kp * kp, k <= kp * kp));
    v.push(Verdict::exact("kprime_le_half_sparsity", kp, k / 2, kp <= k / 2));
    v.push(Verdict::exact("sqrt_rank_le_kdprime", r, kdp * kdp, r <= kdp * kdp));
    v.push(Verdict::le_float("rank_over_4log_le_kdprime", p.r as f64 / (4.0 * lk), to_f64(&kdp)));
    v.push(Verdict::exact("kdprime_le_kprime", kdp, kp, kdp <= kp));

    let w = (k - one) / (kp * kp * 4);
    v.push(Verdict::exact("weight_ge_sparsity_over_kprime_sq", w, delta, delta >= w));

    let l1 = l1_norm(s);
    v.push(Verdict::float(
        "l1_le_3_sqrt_sparsity_weight",
        to_f64(&l1),
        3.0 * to_f64(&(k * delta)).sqrt(),
        l1 * l1 <= k * delta * 9,
    ));

    let basis = kdprime_basis(s);
    let basis_l1: Rational = basis.iter().map(|&m| s.get(m).abs()).sum();
    v.push(Verdict::le_float("basis_l1_le_4log_sparsity", to_f64(&basis_l1), 4.0 * lk));
    v.push(Verdict::le_float("rank_over_kdprime_le_4log_sparsity", to_f64(&(r / kdp)), 4.0 * lk));

    if let Some(deg) = p.degf2 {
        let d = Rational::from_integer(deg as i64);
        v.push(Verdict::float("degree_le_log_sparsity", deg as f64, lk, deg < 63 && (1usize << deg) <= p.k));
        let lvl1 = level_one_weight(s);
        v.push(Verdict::exact("level_one_le_4deg", lvl1, d * 4, lvl1 <= d * 4));
        if delta <= Rational::new(1, 4) {
            let rhs = d * delta * 32;
            v.push(Verdict::exact("level_one_le_32_weight_deg", lvl1, rhs, lvl1 <= rhs));
            v.push(Verdict::exact("basis_l1_le_32_weight_deg", basis_l1, rhs, basis_l1 <= rhs));
        } else {
            v.push(Verdict::skipped("level_one_le_32_weight_deg"));
            v.push(Verdict::skipped("basis_l1_le_32_weight_deg"));
        }
    }
    v
}

/// Measures, curves, best Chang bound and verdicts in one record.
pub fn bound_report(p: &SpectralProfile, s: &SparseSpectrum) -> BoundReport {
    let (kline, kprime_curve, kdprime_curve) = curves(p);
    let best = best_chang_bound(s).ok();
    BoundReport {
        chang_best: best.map(|b| b.0),
        chang_argmax: best.map(|b| b.1),
        kline,
        kprime_curve,
        kdprime_curve,
        verdicts: verify_profile(p, s),
    }
}
