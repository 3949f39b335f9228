//! Parity-fixing restriction algorithm.
//!
//! Each iteration (a) adds the smallest parity set on which the current
//! minimal restriction becomes constant for some assignment, then (b) picks,
//! among all assignments of the accumulated parities whose restriction is
//! not constant, the one minimizing weight over sparsity. The loop stops when
//! every assignment yields a constant function.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::bounds::{Status, Verdict};
use crate::function::{BooleanFunction, RestrictionMap, Sign};
use crate::gf2::{coset_count, dual_constraints, enumerate_linear_subspaces, Gf2Basis, Mask};
use crate::measures::nonempty_sparsity;
use crate::rational::{self, to_f64, Rational};
use crate::{Error, Result, DEFAULT_EXACT_SEARCH_MAX_N};

/// Most parities whose assignments are enumerated in Step (b).
pub const MAX_ASSIGNMENT_BITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Greedy,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "greedy" => Ok(Mode::Greedy),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// Parities added in Step (a).
    pub q_i: usize,
    /// Coset count before Step (a).
    pub ell_prev: usize,
    /// Coset count after Step (a).
    pub ell_i: usize,
    /// Chosen assignment; absent once every restriction is constant.
    pub b_star: Option<Vec<Sign>>,
    #[serde(with = "rational::json_opt")]
    pub delta_fmin: Option<Rational>,
    pub k_fmin: Option<usize>,
    pub kplus_fmin: Option<usize>,
    /// Whether some non-constant restriction has `δ/k⁺ ≤ 4kδ/ℓ_i²`.
    pub witness_exists: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NapdtTrace {
    pub mode: Mode,
    pub n: usize,
    /// Coset count of the input with no parities fixed.
    pub ell_0: usize,
    pub iterations: Vec<IterationRecord>,
    #[serde(with = "rational::hex_masks")]
    pub gamma: Vec<Mask>,
}

impl NapdtTrace {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trace serializes")
    }
}

/// Number of classes of `supp(f) ∪ {∅}` modulo `span(Γ)`.
///
/// The empty set is always counted so that fixing a parity that turns a
/// character into a constant registers as a merge.
pub fn class_count(support: &[Mask], gamma: &[Mask]) -> usize {
    let span = Gf2Basis::from_masks(gamma.iter().copied());
    coset_count(&span, support.iter().copied().chain(std::iter::once(0)))
}

/// Maximum dimension of an affine subspace on which `f` is constant, with the
/// parity constraints that cut it out (masks in the coordinates of `f`).
pub fn max_monochromatic(f: &BooleanFunction) -> Result<(usize, RestrictionMap)> {
    let n = f.n();
    if n > DEFAULT_EXACT_SEARCH_MAX_N {
        return Err(Error::SizeGuard { what: "exact monochromatic search", n, max: DEFAULT_EXACT_SEARCH_MAX_N });
    }
    let len = 1usize << n;
    let mut minus = vec![0u32; len];
    for d in (0..=n).rev() {
        let full = 1u32 << d;
        for basis in enumerate_linear_subspaces(n, d)? {
            minus.iter_mut().for_each(|c| *c = 0);
            let mut seen = vec![false; len];
            for x in 0..len {
                let rep = basis.reduce(x as Mask) as usize;
                seen[rep] = true;
                minus[rep] += f.bit(x) as u32;
            }
            if let Some(u) = (0..len).find(|&u| seen[u] && (minus[u] == 0 || minus[u] == full)) {
                let map = dual_constraints(basis.rows(), u as Mask, n)?;
                return Ok((d, map));
            }
        }
    }
    unreachable!("a single point is always monochromatic")
}

/// One heuristic step: the nonempty mask of largest `|f̂|` (smallest mask on
/// ties) and the sign whose restriction has smaller weight (`+1` on ties).
pub fn greedy_step(f: &BooleanFunction) -> Result<(Mask, Sign)> {
    let s = f.wht();
    let (mask, _) = s
        .support()
        .filter(|&(m, _)| m != 0)
        .fold(None, |best: Option<(usize, i64)>, (m, c)| match best {
            Some((_, bc)) if bc.abs() >= c.abs() => best,
            _ => Some((m, c)),
        })
        .ok_or_else(|| Error::OutOfRange("greedy step needs a non-constant function".into()))?;
    let mask = mask as Mask;
    let weight = |sign| -> Result<u64> {
        let r = RestrictionMap::new(f.n(), vec![mask], vec![sign])?;
        Ok(f.restrict(&r)?.weight())
    };
    let sign = if weight(Sign::Minus)? < weight(Sign::Plus)? { Sign::Minus } else { Sign::Plus };
    Ok((mask, sign))
}

/// Step (a): masks (in the coordinates of `g`) fixing `g` to a constant for
/// some assignment.
fn step_a(g: &BooleanFunction, mode: Mode) -> Result<Vec<Mask>> {
    match mode {
        Mode::Exact => Ok(max_monochromatic(g)?.1.gamma().to_vec()),
        Mode::Greedy => {
            let mut masks = Vec::new();
            let mut signs = Vec::new();
            let mut cur = g.clone();
            while !cur.is_constant() {
                let local = RestrictionMap::new(g.n(), masks.clone(), signs.clone())?;
                let (m, s) = greedy_step(&cur)?;
                masks.push(local.lift_mask(m));
                signs.push(s);
                cur = g.restrict(&RestrictionMap::new(g.n(), masks.clone(), signs.clone())?)?;
            }
            Ok(masks)
        }
    }
}

/// Assignment number `c` in lexicographic sign order (`+1` before `−1`).
pub fn assignment(len: usize, c: u64) -> Vec<Sign> {
    (0..len).map(|j| Sign::from_bit((c >> (len - 1 - j)) & 1 == 1)).collect()
}

struct Candidate {
    b: Vec<Sign>,
    weight: u64,
    k: usize,
    kplus: usize,
}

/// Runs the algorithm; returns the parity set and the trace.
pub fn napdt(f: &BooleanFunction, mode: Mode) -> Result<(Vec<Mask>, NapdtTrace)> {
    let n = f.n();
    if mode == Mode::Exact && n > DEFAULT_EXACT_SEARCH_MAX_N {
        return Err(Error::SizeGuard { what: "exact restriction algorithm", n, max: DEFAULT_EXACT_SEARCH_MAX_N });
    }
    let spec = f.wht();
    let support: Vec<Mask> = spec.support().map(|(m, _)| m as Mask).collect();
    let k = support.len() as i64;
    let delta = f.delta();
    let ell_0 = class_count(&support, &[]);
    let mut trace = NapdtTrace { mode, n, ell_0, iterations: vec![], gamma: vec![] };
    if f.is_constant() {
        return Ok((vec![], trace));
    }
    let mut gamma: Vec<Mask> = Vec::new();
    let mut current = RestrictionMap::empty(n);
    let mut fmin = f.clone();
    let mut ell_prev = ell_0;
    loop {
        let local = step_a(&fmin, mode)?;
        let q_i = local.len();
        gamma.extend(local.iter().map(|&m| current.lift_mask(m)));
        if gamma.len() > MAX_ASSIGNMENT_BITS {
            return Err(Error::SizeGuard { what: "parity assignments", n: gamma.len(), max: MAX_ASSIGNMENT_BITS });
        }
        let ell_i = class_count(&support, &gamma);
        let bound = Rational::new(4 * k, 1) * delta / Rational::from_integer((ell_i * ell_i) as i64);
        let quotient_len = 1i64 << (n - gamma.len());

        let mut best: Option<Candidate> = None;
        let mut witness_exists = false;
        for c in 0..1u64 << gamma.len() {
            let b = assignment(gamma.len(), c);
            let g = f.restrict(&RestrictionMap::new(n, gamma.clone(), b.clone())?)?;
            if g.is_constant() {
                continue;
            }
            let s = g.wht().to_sparse();
            let (weight, kk, kplus) = (g.weight(), s.sparsity(), nonempty_sparsity(&s));
            if Rational::new(weight as i64, quotient_len * kplus as i64) <= bound {
                witness_exists = true;
            }
            let better = match &best {
                None => true,
                Some(bst) => (weight as u128) * (bst.k as u128) < (bst.weight as u128) * (kk as u128),
            };
            if better {
                best = Some(Candidate { b, weight, k: kk, kplus });
            }
        }
        let mut rec = IterationRecord {
            q_i,
            ell_prev,
            ell_i,
            b_star: None,
            delta_fmin: None,
            k_fmin: None,
            kplus_fmin: None,
            witness_exists,
        };
        match best {
            None => {
                trace.iterations.push(rec);
                break;
            }
            Some(bst) => {
                rec.delta_fmin = Some(Rational::new(bst.weight as i64, quotient_len));
                rec.k_fmin = Some(bst.k);
                rec.kplus_fmin = Some(bst.kplus);
                current = RestrictionMap::new(n, gamma.clone(), bst.b.clone())?;
                rec.b_star = Some(bst.b);
                fmin = f.restrict(&current)?;
                trace.iterations.push(rec);
            }
        }
        ell_prev = ell_i;
    }
    trace.gamma = gamma.clone();
    Ok((gamma, trace))
}

/// Every restriction of `f` by `(Γ, b)` over all `b` is constant.
pub fn all_restrictions_constant(f: &BooleanFunction, gamma: &[Mask]) -> Result<bool> {
    for c in 0..1u64 << gamma.len() {
        let r = RestrictionMap::new(f.n(), gamma.to_vec(), assignment(gamma.len(), c))?;
        if !f.restrict(&r)?.is_constant() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks a finished run against the guarantees of the algorithm.
///
/// * every restriction constant and `r(f) ≤ |Γ|`;
/// * coset counts strictly decrease and `Σ q_i = |Γ|`;
/// * per iteration with `ℓ_i ≥ 2`: the chosen restriction has
///   `δ/k ≤ 4kδ/ℓ_i²` and some restriction has `δ/k⁺ ≤ 4kδ/ℓ_i²`;
/// * exact mode: `q_i/(ℓ_{i−1} − ℓ_i) ≤ 6√(δk)/ℓ_{i−1}`, and for
///   non-degenerate `f`, `|Γ| ≤ 6√(δk)·log₂k`.
pub fn audit(f: &BooleanFunction, gamma: &[Mask], trace: &NapdtTrace) -> Result<Vec<Verdict>> {
    let s = f.wht().to_sparse();
    let k = s.sparsity();
    let delta = f.delta();
    let kd = Rational::from_integer(k as i64) * delta;
    let mut v = Vec::new();
    let size = gamma.len() as f64;

    v.push(Verdict::float("all_restrictions_constant", 0.0, 0.0, all_restrictions_constant(f, gamma)?));
    let r = crate::gf2::rank_of(s.terms().iter().map(|&(m, _)| m));
    v.push(Verdict::float("rank_le_parity_count", r as f64, size, r <= gamma.len()));
    let q_total: usize = trace.iterations.iter().map(|it| it.q_i).sum();
    v.push(Verdict::float("parity_count_is_sum_of_q", q_total as f64, size, q_total == gamma.len()));

    for (i, it) in trace.iterations.iter().enumerate() {
        let tag = |name: &str| format!("{name}[{}]", i + 1);
        v.push(Verdict::float(&tag("coset_count_decreases"), it.ell_i as f64, it.ell_prev as f64, it.ell_i < it.ell_prev));
        if it.ell_i >= 2 {
            let bound = Rational::from_integer(4) * kd / Rational::from_integer((it.ell_i * it.ell_i) as i64);
            if let (Some(d), Some(kk)) = (it.delta_fmin, it.k_fmin) {
                let ratio = d / Rational::from_integer(kk as i64);
                v.push(Verdict::exact(&tag("min_ratio_le_4k_delta_over_ell_sq"), ratio, bound, ratio <= bound));
                v.push(Verdict::float(&tag("ratio_witness_exists"), 0.0, to_f64(&bound), it.witness_exists));
            }
        }
        if trace.mode == Mode::Exact {
            let lhs = Rational::new(it.q_i as i64, (it.ell_prev - it.ell_i).max(1) as i64);
            // lhs ≤ 6√(δk)/ℓ_{i−1}  ⇔  (lhs·ℓ_{i−1})² ≤ 36·δk
            let scaled = lhs * Rational::from_integer(it.ell_prev as i64);
            let ok = it.ell_i < it.ell_prev && scaled * scaled <= kd * 36;
            let rhs = 6.0 * to_f64(&kd).sqrt() / it.ell_prev as f64;
            v.push(Verdict::float(&tag("q_over_coset_drop"), to_f64(&lhs), rhs, ok));
        }
    }
    if trace.mode == Mode::Exact {
        if k > 1 {
            let rhs = 6.0 * to_f64(&kd).sqrt() * (k as f64).log2();
            v.push(Verdict::float("parity_count_le_6_sqrt_kdelta_logk", size, rhs, size <= rhs * (1.0 + 1e-12)));
        } else {
            v.push(Verdict { name: "parity_count_le_6_sqrt_kdelta_logk".into(), lhs: size, rhs: 0.0, status: Status::Skipped });
        }
    }
    Ok(v)
}

/// Averages over all assignments of `Γ`: `(E_b[δ(f|_b)], E_b[k⁺(f|_b)])`.
pub fn restriction_averages(f: &BooleanFunction, gamma: &[Mask]) -> Result<(Rational, Rational)> {
    let mut sum_delta = Rational::zero();
    let mut sum_kplus = 0i64;
    let count = 1u64 << gamma.len();
    for c in 0..count {
        let g = f.restrict(&RestrictionMap::new(f.n(), gamma.to_vec(), assignment(gamma.len(), c))?)?;
        sum_delta += g.delta();
        sum_kplus += nonempty_sparsity(&g.wht().to_sparse()) as i64;
    }
    let denom = Rational::from_integer(count as i64);
    Ok((sum_delta / denom, Rational::from_integer(sum_kplus) / denom))
}

/// `ℓ²/(4k)` with `ℓ` the number of classes of `supp(f)` modulo `span(Γ)`.
pub fn expected_sparsity_floor(f: &BooleanFunction, gamma: &[Mask]) -> (usize, Rational) {
    let s = f.wht();
    let support: Vec<Mask> = s.support().map(|(m, _)| m as Mask).collect();
    let ell = coset_count(&Gf2Basis::from_masks(gamma.iter().copied()), support.iter().copied());
    let k = support.len().max(1) as i64;
    (ell, Rational::new((ell * ell) as i64, 4 * k))
}
