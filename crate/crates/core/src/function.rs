//! Truth tables, integer-scaled spectra and affine restrictions.
//!
//! Index convention: input `x ∈ {−1,1}^n` has index `Σ b_i 2^{i−1}` with
//! `b_i = (1 − x_i)/2`, and a table bit is set iff `f(x) = −1`.

use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::gf2::{parity, Gf2Matrix, Mask};
use crate::rational::Rational;
use crate::{max_arity, Error, Result};

/// A value in `{−1, +1}`; ordered with `+1` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `true` (bit 1) encodes −1.
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn bit(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;
    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be ±1, got {other}")),
        }
    }
}

pub(crate) fn check_arity(what: &'static str, n: usize) -> Result<()> {
    let max = max_arity();
    if n > max {
        return Err(Error::SizeGuard { what, n, max });
    }
    Ok(())
}

/// A function `{−1,1}^n → {−1,1}` as a bit-packed truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.n <= 8 {
            write!(f, "BooleanFunction({}, {})", self.n, self.table_string())
        } else {
            write!(f, "BooleanFunction(n = {})", self.n)
        }
    }
}

fn word_count(n: usize) -> usize {
    if n < 6 {
        1
    } else {
        1 << (n - 6)
    }
}

fn table_mask(n: usize) -> u64 {
    if n < 6 {
        (1u64 << (1 << n)) - 1
    } else {
        u64::MAX
    }
}

impl BooleanFunction {
    /// Builds a table from a predicate on indices; `true` means `f = −1`.
    pub fn from_fn<F: Fn(usize) -> bool>(n: usize, minus: F) -> Result<Self> {
        check_arity("truth table", n)?;
        let len = 1usize << n;
        let mut words = vec![0u64; word_count(n)];
        for idx in 0..len {
            if minus(idx) {
                words[idx >> 6] |= 1 << (idx & 63);
            }
        }
        Ok(Self { n, words })
    }

    /// Table of a function with `n ≤ 6` given as one word.
    pub fn from_word(n: usize, word: u64) -> Self {
        assert!(n <= 6, "from_word needs n <= 6");
        Self { n, words: vec![word & table_mask(n)] }
    }

    pub fn constant(n: usize, sign: Sign) -> Result<Self> {
        Self::from_fn(n, |_| sign.bit())
    }

    /// The character `χ_S`.
    pub fn parity(n: usize, mask: Mask) -> Result<Self> {
        Self::from_fn(n, |idx| parity(mask & idx as Mask))
    }

    /// `AND_n`: −1 exactly when every input is −1.
    pub fn and(n: usize) -> Result<Self> {
        let all = (1usize << n) - 1;
        Self::from_fn(n, |idx| idx == all)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// True iff `f` is −1 at `idx`.
    #[inline]
    pub fn bit(&self, idx: usize) -> bool {
        (self.words[idx >> 6] >> (idx & 63)) & 1 == 1
    }

    #[inline]
    pub fn value(&self, idx: usize) -> i8 {
        if self.bit(idx) {
            -1
        } else {
            1
        }
    }

    /// Number of inputs with `f = −1`.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `δ(f) = w / 2^n`.
    pub fn delta(&self) -> Rational {
        Rational::new(self.weight() as i64, 1i64 << self.n)
    }

    pub fn constant_value(&self) -> Option<Sign> {
        let w = self.weight();
        if w == 0 {
            Some(Sign::Plus)
        } else if w == self.len() as u64 {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Scaled spectrum `c_S = Σ_x f(x) χ_S(x)` by the fast transform.
    pub fn wht(&self) -> Spectrum {
        let mut c: Vec<i64> = (0..self.len()).map(|i| self.value(i) as i64).collect();
        butterfly(&mut c);
        Spectrum { n: self.n, coeffs: c }
    }

    /// Degree of the GF(2) polynomial of `(1 − f)/2`; 0 for constants.
    pub fn f2_degree(&self) -> u32 {
        const LEVEL_MASKS: [u64; 6] = [
            0x5555_5555_5555_5555,
            0x3333_3333_3333_3333,
            0x0F0F_0F0F_0F0F_0F0F,
            0x00FF_00FF_00FF_00FF,
            0x0000_FFFF_0000_FFFF,
            0x0000_0000_FFFF_FFFF,
        ];
        let mut a = self.words.clone();
        for i in 0..self.n.min(6) {
            let shift = 1 << i;
            for w in &mut a {
                *w ^= (*w & LEVEL_MASKS[i]) << shift;
            }
        }
        for i in 6..self.n {
            let step = 1 << (i - 6);
            for j in 0..a.len() {
                if j & step != 0 {
                    a[j] ^= a[j ^ step];
                }
            }
        }
        let mut deg = 0;
        for (wi, &w) in a.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                deg = deg.max(((wi << 6) | b).count_ones());
                w &= w - 1;
            }
        }
        deg
    }

    /// The quotient function on the free coordinates of `r`.
    pub fn restrict(&self, r: &RestrictionMap) -> Result<Self> {
        if r.n() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: r.n() });
        }
        Self::from_fn(r.quotient_arity(), |z| self.bit(r.point(z) as usize))
    }

    /// `F(x^(1),…,x^(t)) = ∏ f(x^(i))` on `n·t` variables, block `i` in
    /// bits `[i·n, (i+1)·n)`.
    pub fn xor_power(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::OutOfRange("xor power needs t >= 1".into()));
        }
        check_arity("xor power", self.n * t)?;
        let n = self.n;
        let low = (1usize << n) - 1;
        Self::from_fn(n * t, |idx| (0..t).fold(false, |acc, i| acc ^ self.bit((idx >> (i * n)) & low)))
    }

    /// `+`/`-` string in index order.
    pub fn table_string(&self) -> String {
        (0..self.len()).map(|i| if self.bit(i) { '-' } else { '+' }).collect()
    }

    /// Two-line text form: arity, then the table.
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", self.n, self.table_string())
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("missing arity line".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad arity: {e}")))?;
        check_arity("truth table", n)?;
        let table = lines.next().ok_or_else(|| Error::Parse("missing table line".into()))?;
        if lines.next().is_some() {
            return Err(Error::Parse("unexpected content after the table line".into()));
        }
        if table.len() != 1 << n {
            return Err(Error::Parse(format!("table has {} entries, expected {}", table.len(), 1usize << n)));
        }
        let bytes = table.as_bytes();
        if let Some(bad) = bytes.iter().find(|&&c| c != b'+' && c != b'-') {
            return Err(Error::Parse(format!("invalid table character {:?}", *bad as char)));
        }
        Self::from_fn(n, |i| bytes[i] == b'-')
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly.
fn butterfly(c: &mut [i64]) {
    let len = c.len();
    let mut h = 1;
    while h < len {
        for block in c.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Dense scaled spectrum: `coeffs[S] = 2^n f̂(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    n: usize,
    coeffs: Vec<i64>,
}

impl Spectrum {
    pub fn from_coeffs(n: usize, coeffs: Vec<i64>) -> Result<Self> {
        check_arity("spectrum", n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::ArityMismatch { expected: 1 << n, got: coeffs.len() });
        }
        Ok(Self { n, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> i64 {
        self.coeffs[mask]
    }

    /// `f̂(S)` exactly.
    pub fn fhat(&self, mask: usize) -> Rational {
        Rational::new(self.coeffs[mask], 1i64 << self.n)
    }

    /// Nonzero coefficients in ascending mask order.
    pub fn support(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(m, &c)| (m, c))
    }

    pub fn sparsity(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    /// `Σ c_S² = 4^n`.
    pub fn satisfies_parseval(&self) -> bool {
        let total: i128 = self.coeffs.iter().map(|&c| (c as i128) * (c as i128)).sum();
        total == 1i128 << (2 * self.n)
    }

    /// The function with this spectrum, if it is ±1-valued.
    pub fn inverse_wht(&self) -> Result<BooleanFunction> {
        let mut v = self.coeffs.clone();
        butterfly(&mut v);
        let scale = 1i64 << self.n;
        if v.iter().any(|&x| x != scale && x != -scale) {
            return Err(Error::NotBoolean);
        }
        BooleanFunction::from_fn(self.n, |i| v[i] < 0)
    }

    /// `coeffs'[α] = coeffs[B·α]`.
    pub fn basis_change(&self, b: &Gf2Matrix) -> Result<Self> {
        if b.n() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: b.n() });
        }
        if !b.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        let coeffs = (0..self.coeffs.len()).map(|a| self.coeffs[b.apply(a as Mask) as usize]).collect();
        Ok(Self { n: self.n, coeffs })
    }

    pub fn to_sparse(&self) -> SparseSpectrum {
        SparseSpectrum {
            n: self.n,
            terms: self.support().map(|(m, _)| (m as Mask, self.fhat(m))).collect(),
        }
    }
}

/// Nonzero Fourier coefficients `f̂(S)` as exact rationals, masks ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSpectrum {
    n: usize,
    terms: Vec<(Mask, Rational)>,
}

impl SparseSpectrum {
    /// Sums duplicate masks and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (Mask, Rational)>>(n: usize, terms: I) -> Self {
        let mut t: Vec<(Mask, Rational)> = terms.into_iter().collect();
        t.sort_unstable_by_key(|&(m, _)| m);
        let mut merged: Vec<(Mask, Rational)> = Vec::with_capacity(t.len());
        for (m, v) in t {
            match merged.last_mut() {
                Some((lm, lv)) if *lm == m => *lv += v,
                _ => merged.push((m, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        Self { n, terms: merged }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Mask, Rational)] {
        &self.terms
    }

    pub fn sparsity(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, mask: Mask) -> Rational {
        match self.terms.binary_search_by_key(&mask, |&(m, _)| m) {
            Ok(i) => self.terms[i].1,
            Err(_) => Rational::zero(),
        }
    }

    pub fn sum_of_squares(&self) -> Rational {
        self.terms.iter().map(|(_, v)| v * v).sum()
    }

    /// Dense integer form; fails if some `2^n f̂(S)` is not an integer.
    pub fn to_dense(&self) -> Result<Spectrum> {
        check_arity("spectrum", self.n)?;
        let mut coeffs = vec![0i64; 1 << self.n];
        let scale = Rational::from_integer(1i64 << self.n);
        for &(m, v) in &self.terms {
            let c = v * scale;
            if !c.is_integer() {
                return Err(Error::NotBoolean);
            }
            coeffs[m as usize] = c.to_integer();
        }
        Ok(Spectrum { n: self.n, coeffs })
    }

    /// CSV with header `mask_hex,c,fhat_num,fhat_den`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mask_hex,c,fhat_num,fhat_den\n");
        for &(m, v) in &self.terms {
            let c = (*v.numer() as i128)
                .checked_shl(self.n as u32)
                .filter(|_| self.n < 100)
                .map(|x| (x / *v.denom() as i128).to_string())
                .unwrap_or_default();
            let _ = writeln!(out, "{m:x},{c},{},{}", v.numer(), v.denom());
        }
        out
    }
}

/// An independent parity set `Γ` with signs `b`, in augmented echelon form.
///
/// The affine subspace is `{x : χ_γ(x) = b_γ for all γ ∈ Γ}`; quotient
/// coordinates are the non-pivot coordinates in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionMap {
    n: usize,
    gamma: Vec<Mask>,
    b: Vec<Sign>,
    // reduced rows with right-hand side bit, sorted by pivot
    rows: Vec<(Mask, bool)>,
    pivots: Vec<usize>,
    free: Vec<usize>,
}

impl RestrictionMap {
    pub fn new(n: usize, gamma: Vec<Mask>, b: Vec<Sign>) -> Result<Self> {
        if gamma.len() != b.len() {
            return Err(Error::OutOfRange(format!("{} masks but {} signs", gamma.len(), b.len())));
        }
        if gamma.len() > n || gamma.iter().any(|&g| g & !crate::gf2::full_mask(n) != 0) {
            return Err(Error::OutOfRange(format!("masks must lie in GF(2)^{n}")));
        }
        let mut rows: Vec<(Mask, bool)> = Vec::with_capacity(gamma.len());
        for (&g, &s) in gamma.iter().zip(&b) {
            let (mut m, mut rhs) = (g, s.bit());
            for &(r, rb) in &rows {
                if (m >> r.trailing_zeros()) & 1 == 1 {
                    m ^= r;
                    rhs ^= rb;
                }
            }
            if m == 0 {
                return Err(Error::DependentMasks);
            }
            let p = m.trailing_zeros();
            for (r, rb) in &mut rows {
                if (*r >> p) & 1 == 1 {
                    *r ^= m;
                    *rb ^= rhs;
                }
            }
            let pos = rows.partition_point(|&(r, _)| r.trailing_zeros() < p);
            rows.insert(pos, (m, rhs));
        }
        let pivots: Vec<usize> = rows.iter().map(|&(r, _)| r.trailing_zeros() as usize).collect();
        let free = (0..n).filter(|c| !pivots.contains(c)).collect();
        Ok(Self { n, gamma, b, rows, pivots, free })
    }

    /// No constraints: the whole cube.
    pub fn empty(n: usize) -> Self {
        Self { n, gamma: vec![], b: vec![], rows: vec![], pivots: vec![], free: (0..n).collect() }
    }

    /// Same parities with different signs.
    pub fn with_signs(&self, b: Vec<Sign>) -> Result<Self> {
        Self::new(self.n, self.gamma.clone(), b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> &[Mask] {
        &self.gamma
    }

    pub fn signs(&self) -> &[Sign] {
        &self.b
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn quotient_arity(&self) -> usize {
        self.free.len()
    }

    /// Original input index for quotient index `z`.
    pub fn point(&self, z: usize) -> Mask {
        let mut x: Mask = 0;
        for (i, &c) in self.free.iter().enumerate() {
            if (z >> i) & 1 == 1 {
                x |= 1 << c;
            }
        }
        let free_part = x;
        for &(r, rhs) in &self.rows {
            let p = r.trailing_zeros();
            if rhs ^ parity(r & free_part & !(1 << p)) {
                x |= 1 << p;
            }
        }
        x
    }

    /// Maps a parity on quotient coordinates to the original coordinates.
    pub fn lift_mask(&self, m: Mask) -> Mask {
        self.free
            .iter()
            .enumerate()
            .filter(|(i, _)| (m >> i) & 1 == 1)
            .fold(0, |acc, (_, &c)| acc | (1 << c))
    }

    /// Whether input `x` (in bit form) satisfies every constraint.
    pub fn contains(&self, x: Mask) -> bool {
        self.gamma.iter().zip(&self.b).all(|(&g, &s)| parity(g & x) == s.bit())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: usize, table: &str) -> BooleanFunction {
        BooleanFunction::parse_text(&format!("{n}\n{table}\n")).unwrap()
    }

    #[test]
    fn and2_spectrum() {
        let s = f(2, "+++-").wht();
        assert_eq!(s.coeffs(), &[2, 2, 2, -2]);
        assert_eq!(s.inverse_wht().unwrap(), f(2, "+++-"));
    }

    #[test]
    fn constant_spectrum() {
        let s = BooleanFunction::constant(3, Sign::Plus).unwrap().wht();
        assert_eq!(s.coeffs(), &[8, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn inverse_rejects_non_boolean() {
        let s = Spectrum::from_coeffs(2, vec![1, 0, 0, 0]).unwrap();
        assert_eq!(s.inverse_wht(), Err(Error::NotBoolean));
    }

    #[test]
    fn f2_degree_examples() {
        assert_eq!(BooleanFunction::and(3).unwrap().f2_degree(), 3);
        assert_eq!(BooleanFunction::parity(3, 0b111).unwrap().f2_degree(), 1);
        assert_eq!(BooleanFunction::constant(4, Sign::Minus).unwrap().f2_degree(), 0);
        assert_eq!(BooleanFunction::and(9).unwrap().f2_degree(), 9);
    }

    #[test]
    fn restriction_examples() {
        let and2 = BooleanFunction::and(2).unwrap();
        let r = RestrictionMap::new(2, vec![0b01], vec![Sign::Plus]).unwrap();
        assert_eq!(and2.restrict(&r).unwrap(), f(1, "++"));
        let r = r.with_signs(vec![Sign::Minus]).unwrap();
        assert_eq!(and2.restrict(&r).unwrap(), f(1, "+-"));
        let chi = BooleanFunction::parity(2, 0b11).unwrap();
        let r = RestrictionMap::new(2, vec![0b11], vec![Sign::Minus]).unwrap();
        assert_eq!(chi.restrict(&r).unwrap().constant_value(), Some(Sign::Minus));
        assert_eq!(
            RestrictionMap::new(3, vec![0b011, 0b110, 0b101], vec![Sign::Plus; 3]),
            Err(Error::DependentMasks)
        );
    }

    #[test]
    fn restriction_points_satisfy_constraints() {
        let r = RestrictionMap::new(5, vec![0b10110, 0b00111, 0b11000], vec![Sign::Minus, Sign::Plus, Sign::Minus])
            .unwrap();
        let pts: Vec<Mask> = (0..1 << r.quotient_arity()).map(|z| r.point(z)).collect();
        assert!(pts.iter().all(|&x| r.contains(x)));
        let mut d = pts.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let g = f(3, "+--+-++-");
        assert_eq!(BooleanFunction::parse_text(&g.to_text()).unwrap(), g);
        assert!(BooleanFunction::parse_text("2\n+++\n").is_err());
        assert!(BooleanFunction::parse_text("1\n+x\n").is_err());
        assert!(BooleanFunction::parse_text("").is_err());
    }

    #[test]
    fn xor_power_of_and2_level_one() {
        let big = BooleanFunction::and(2).unwrap().xor_power(2).unwrap();
        let s = big.wht();
        let level1: i64 = (0..4).map(|i| s.coeff(1 << i).abs()).sum();
        assert_eq!(Rational::new(level1, 16), Rational::from_integer(1));
    }

    #[test]
    fn sparse_csv_format() {
        let s = BooleanFunction::and(2).unwrap().wht().to_sparse();
        assert_eq!(s.to_csv(), "mask_hex,c,fhat_num,fhat_den\n0,2,1,2\n1,2,1,2\n2,2,1,2\n3,-2,-1,2\n");
    }
}
