//! Reference implementations used only by the tests. Everything here is
//! written from the definitions, independently of the library internals.
#![allow(dead_code)]

use std::collections::HashSet;

use boolspec::constructions::FamilySpec;
use boolspec::{BooleanFunction, Rational};
use num_traits::{One, Signed, Zero};

/// `±1` values of a table, index order.
pub fn values(f: &BooleanFunction) -> Vec<i64> {
    (0..f.len()).map(|i| if f.bit(i) { -1 } else { 1 }).collect()
}

/// `±1` values of a predicate on indices (`true` means `−1`).
pub fn table(n: usize, minus: impl Fn(usize) -> bool) -> Vec<i64> {
    (0..1usize << n).map(|i| if minus(i) { -1 } else { 1 }).collect()
}

/// `Σ_x f(x)(−1)^{|S ∩ x|}` for every `S`, by definition. `O(4^n)`.
pub fn naive_wht(v: &[i64]) -> Vec<i64> {
    (0..v.len())
        .map(|s| v.iter().enumerate().map(|(x, &fx)| if (s & x).count_ones() % 2 == 0 { fx } else { -fx }).sum())
        .collect()
}

/// Recursive split into halves; `O(n 2^n)`.
pub fn split_wht(v: &[i64]) -> Vec<i64> {
    if v.len() == 1 {
        return v.to_vec();
    }
    let h = v.len() / 2;
    let (lo, hi) = (split_wht(&v[..h]), split_wht(&v[h..]));
    let mut out = vec![0; v.len()];
    for i in 0..h {
        out[i] = lo[i] + hi[i];
        out[i + h] = lo[i] - hi[i];
    }
    out
}

/// Every element of the span, by closure.
pub fn span(masks: &[u128]) -> HashSet<u128> {
    let mut set: HashSet<u128> = HashSet::from([0]);
    for &m in masks {
        let more: Vec<u128> = set.iter().map(|&x| x ^ m).collect();
        set.extend(more);
    }
    set
}

/// Rank by the textbook XOR basis: keep `min(m, m ⊕ b)` against each kept vector.
pub fn rank(masks: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &m in masks {
        let mut m = m;
        for &b in &basis {
            m = m.min(m ^ b);
        }
        if m != 0 {
            basis.push(m);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Number of classes of `masks` modulo `span(gamma)`, by smallest representative.
pub fn classes(masks: &[u128], gamma: &[u128]) -> usize {
    let sp = span(gamma);
    masks.iter().map(|&m| sp.iter().map(|&v| v ^ m).min().unwrap()).collect::<HashSet<_>>().len()
}

/// F2-degree from the algebraic normal form `a_S = ⊕_{T⊆S} f(T)`.
pub fn anf_degree(n: usize, v: &[i64]) -> u32 {
    (0..1usize << n)
        .filter(|&s| {
            let mut acc = false;
            let mut t = s;
            loop {
                acc ^= v[t] == -1;
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            acc
        })
        .map(|s| s.count_ones())
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measures {
    pub delta: Rational,
    pub k: usize,
    pub r: usize,
    pub kprime: Rational,
    pub kdprime: Rational,
}

/// Measures from scaled coefficients `c_S = 2^n f̂(S)`, by definition.
pub fn measures(n: usize, c: &[i64]) -> Measures {
    let scale = 1i64 << n;
    let terms: Vec<(u128, Rational)> = (0..c.len()).filter(|&s| c[s] != 0).map(|s| (s as u128, Rational::new(c[s], scale))).collect();
    measures_sparse(&terms)
}

/// Measures from the nonzero coefficients.
pub fn measures_sparse(terms: &[(u128, Rational)]) -> Measures {
    let get = |m: u128| terms.iter().find(|t| t.0 == m).map_or(Rational::zero(), |t| t.1);
    let masks: Vec<u128> = terms.iter().map(|t| t.0).collect();
    let r = rank(&masks);
    let mut mags: Vec<Rational> = terms.iter().map(|t| t.1.abs()).collect();
    mags.sort();
    mags.dedup();
    // smallest threshold 1/|f̂(S)| at which the large coefficients span everything
    let kdprime = if r == 0 {
        Rational::zero()
    } else {
        mags.iter()
            .rev()
            .find(|&&m| {
                let big: Vec<u128> = terms.iter().filter(|t| t.1.abs() >= m).map(|t| t.0).collect();
                rank(&big) == r
            })
            .unwrap()
            .recip()
    };
    Measures {
        delta: (Rational::one() - get(0)) / 2,
        k: terms.len(),
        r,
        kprime: mags[0].recip(),
        kdprime,
    }
}

/// Largest `Σ|f̂(S)|` over bases of the span of the support: greedy by
/// magnitude is optimal for this matroid.
pub fn max_basis_l1(terms: &[(u128, Rational)]) -> Rational {
    let mut sorted: Vec<(u128, Rational)> = terms.to_vec();
    sorted.sort_by(|a, b| b.1.abs().cmp(&a.1.abs()));
    let mut chosen: Vec<u128> = Vec::new();
    let mut sum = Rational::zero();
    for (m, v) in sorted {
        chosen.push(m);
        if rank(&chosen) == chosen.len() {
            sum += v.abs();
        } else {
            chosen.pop();
        }
    }
    sum
}

pub fn measures_of(f: &BooleanFunction) -> Measures {
    measures(f.n(), &split_wht(&values(f)))
}

pub fn all_set(x: usize, width: usize) -> bool {
    x & ((1 << width) - 1) == (1 << width) - 1
}

/// `AND_m`: `−1` iff every input is `−1`.
pub fn and_minus(x: usize, m: usize) -> bool {
    all_set(x, m)
}

/// Inner product on `2h` variables: `−1` iff `Σ x_{2i} x_{2i+1}` is odd.
pub fn ip_minus(x: usize, h: usize) -> bool {
    (0..h).filter(|i| (x >> (2 * i)) & 3 == 3).count() % 2 == 1
}

/// `AND_m(y_1·g(z), y_2, …)` with `y` in the low `m` bits.
pub fn twisted_and_minus(x: usize, m: usize, g: impl Fn(usize) -> bool) -> bool {
    let y1 = (x & 1 == 1) ^ g(x >> m);
    y1 && all_set(x >> 1, m - 1)
}

/// Addressing on `s = log t` address bits followed by blocks of the given
/// widths; the address selects the block.
pub fn addressing_minus(x: usize, t: usize, widths: &[usize], blocks: &[&dyn Fn(usize) -> bool]) -> bool {
    let s = t.trailing_zeros() as usize;
    let a = x & (t - 1);
    let off = s + widths[..a].iter().sum::<usize>();
    blocks[a]((x >> off) & ((1 << widths[a]) - 1))
}

/// Every valid spec with arity at most `max` over a small parameter range.
pub fn spec_grid(max: usize) -> Vec<FamilySpec> {
    let pow = [2usize, 4, 8, 16, 32, 64];
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push(FamilySpec::And { n });
        out.push(FamilySpec::Parity { n });
        out.push(FamilySpec::BentIp { n });
    }
    for &t in &pow {
        out.push(FamilySpec::Addressing { t });
        for &tprime in &pow {
            out.push(FamilySpec::AdTt { t, tprime });
            out.push(FamilySpec::Mand { tprime, p: t.trailing_zeros() as usize });
            for &x in &pow {
                out.push(FamilySpec::AdTta { t, tprime, a: x });
                out.push(FamilySpec::Aab { t, tprime, ell: x });
                out.push(FamilySpec::Mad { t, tprime, p: x.trailing_zeros() as usize + 1 });
            }
            out.push(FamilySpec::Ab { tprime: t, ell: tprime });
        }
        for inner in [FamilySpec::And { n: 2 }, FamilySpec::AdTt { t: 2, tprime: 4 }, FamilySpec::Ab { tprime: 4, ell: 4 }] {
            out.push(FamilySpec::Composed { t, inner: Box::new(inner) });
        }
    }
    out.retain(|s| s.validate().map_or(false, |n| n <= max));
    out.sort_by_key(|s| serde_json::to_string(s).unwrap());
    out.dedup();
    out
}
