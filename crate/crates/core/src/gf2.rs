//! GF(2) linear algebra over parity masks.
//!
//! A mask is a subset of `[n]` stored as a bit vector, bit `i` standing for
//! coordinate `i + 1`. Echelon forms use the highest set bit as the pivot and
//! are kept fully reduced, so a basis has a single canonical representation.

use itertools::Itertools;
use rand::Rng;

use crate::function::{RestrictionMap, Sign};
use crate::{Error, Result, DEFAULT_EXACT_SEARCH_MAX_N};

pub type Mask = u128;

/// Widest supported mask.
pub const MAX_MASK_BITS: usize = Mask::BITS as usize;

#[inline]
pub fn parity(m: Mask) -> bool {
    m.count_ones() & 1 == 1
}

#[inline]
fn pivot_of(row: Mask) -> usize {
    (Mask::BITS - 1 - row.leading_zeros()) as usize
}

/// Mask with every coordinate in `0..n` set.
pub fn full_mask(n: usize) -> Mask {
    if n >= MAX_MASK_BITS {
        Mask::MAX
    } else {
        (1 << n) - 1
    }
}

/// A subspace of GF(2)^n in reduced row-echelon form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Gf2Basis {
    rows: Vec<Mask>,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_masks<I: IntoIterator<Item = Mask>>(masks: I) -> Self {
        let mut b = Self::new();
        for m in masks {
            b.insert(m);
        }
        b
    }

    /// Like [`Gf2Basis::from_masks`] but fails if the masks are dependent
    /// (the zero mask counts as dependent).
    pub fn from_independent(masks: &[Mask]) -> Result<Self> {
        let mut b = Self::new();
        for &m in masks {
            if !b.insert(m) {
                return Err(Error::DependentMasks);
            }
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Rows sorted by pivot.
    pub fn rows(&self) -> &[Mask] {
        &self.rows
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|&r| pivot_of(r))
    }

    pub fn pivot_mask(&self) -> Mask {
        self.rows.iter().fold(0, |acc, &r| acc | (1 << pivot_of(r)))
    }

    /// Canonical coset representative: all pivot bits cleared.
    pub fn reduce(&self, mut m: Mask) -> Mask {
        for &r in &self.rows {
            if (m >> pivot_of(r)) & 1 == 1 {
                m ^= r;
            }
        }
        m
    }

    pub fn contains(&self, m: Mask) -> bool {
        self.reduce(m) == 0
    }

    /// Adds `m` to the span; returns false if it was already there.
    pub fn insert(&mut self, m: Mask) -> bool {
        let m = self.reduce(m);
        if m == 0 {
            return false;
        }
        let p = pivot_of(m);
        for r in &mut self.rows {
            if (*r >> p) & 1 == 1 {
                *r ^= m;
            }
        }
        let pos = self.rows.partition_point(|&r| pivot_of(r) < p);
        self.rows.insert(pos, m);
        true
    }

    /// Every element of the span (2^dim of them).
    pub fn span(&self) -> impl Iterator<Item = Mask> + '_ {
        (0u64..1 << self.rows.len()).map(move |sel| {
            self.rows
                .iter()
                .enumerate()
                .filter(|(i, _)| (sel >> i) & 1 == 1)
                .fold(0, |acc, (_, &r)| acc ^ r)
        })
    }
}

pub fn rank_of<I: IntoIterator<Item = Mask>>(masks: I) -> usize {
    Gf2Basis::from_masks(masks).dim()
}

pub fn reduce_mod(span: &Gf2Basis, mask: Mask) -> Mask {
    span.reduce(mask)
}

/// Number of distinct cosets of `span` met by `masks`.
pub fn coset_count<I: IntoIterator<Item = Mask>>(span: &Gf2Basis, masks: I) -> usize {
    let mut reps: Vec<Mask> = masks.into_iter().map(|m| span.reduce(m)).collect();
    reps.sort_unstable();
    reps.dedup();
    reps.len()
}

/// Square matrix over GF(2), stored by columns: `cols[j] = B·e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    n: usize,
    cols: Vec<Mask>,
}

impl Gf2Matrix {
    pub fn identity(n: usize) -> Self {
        Self { n, cols: (0..n).map(|j| 1 << j).collect() }
    }

    pub fn from_columns(cols: Vec<Mask>) -> Self {
        Self { n: cols.len(), cols }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[Mask] {
        &self.cols
    }

    pub fn apply(&self, v: Mask) -> Mask {
        let mut out = 0;
        let mut v = v;
        while v != 0 {
            let j = v.trailing_zeros() as usize;
            out ^= self.cols[j];
            v &= v - 1;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let cols = (0..self.n)
            .map(|i| {
                self.cols
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| (c >> i) & 1 == 1)
                    .fold(0, |acc, (j, _)| acc | (1 << j))
            })
            .collect();
        Self { n: self.n, cols }
    }

    pub fn is_invertible(&self) -> bool {
        rank_of(self.cols.iter().copied()) == self.n
    }

    pub fn inverse(&self) -> Result<Self> {
        // Gauss-Jordan on rows of [A | I].
        let n = self.n;
        let t = self.transpose();
        let mut rows: Vec<(Mask, Mask)> = (0..n).map(|i| (t.cols[i], 1 << i)).collect();
        for c in 0..n {
            let p = (c..n)
                .find(|&i| (rows[i].0 >> c) & 1 == 1)
                .ok_or(Error::SingularMatrix)?;
            rows.swap(c, p);
            let pr = rows[c];
            for (i, row) in rows.iter_mut().enumerate() {
                if i != c && (row.0 >> c) & 1 == 1 {
                    row.0 ^= pr.0;
                    row.1 ^= pr.1;
                }
            }
        }
        let inv_rows = Self { n, cols: rows.into_iter().map(|r| r.1).collect() };
        Ok(inv_rows.transpose())
    }

    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let cols = (0..n).map(|_| rng.gen::<Mask>() & full_mask(n)).collect();
            let m = Self { n, cols };
            if m.is_invertible() {
                return m;
            }
        }
    }
}

/// The affine subspace `offset + span(basis)`; the offset is canonical
/// (reduced modulo the basis).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    pub n: usize,
    pub basis: Gf2Basis,
    pub offset: Mask,
}

impl AffineSubspace {
    pub fn new(n: usize, basis: Gf2Basis, offset: Mask) -> Self {
        let offset = basis.reduce(offset);
        Self { n, basis, offset }
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn contains(&self, x: Mask) -> bool {
        self.basis.contains(x ^ self.offset)
    }

    pub fn points(&self) -> impl Iterator<Item = Mask> + '_ {
        self.basis.span().map(move |w| w ^ self.offset)
    }
}

fn check_search_size(n: usize, d: usize) -> Result<()> {
    if n > DEFAULT_EXACT_SEARCH_MAX_N {
        return Err(Error::SizeGuard { what: "subspace enumeration", n, max: DEFAULT_EXACT_SEARCH_MAX_N });
    }
    if d > n {
        return Err(Error::OutOfRange(format!("dimension {d} exceeds ambient dimension {n}")));
    }
    Ok(())
}

/// Every `d`-dimensional linear subspace of GF(2)^n, once each, in reduced
/// row-echelon form.
pub fn enumerate_linear_subspaces(n: usize, d: usize) -> Result<impl Iterator<Item = Gf2Basis>> {
    check_search_size(n, d)?;
    Ok((0..n).combinations(d).flat_map(move |pivots| {
        let pivot_set: Mask = pivots.iter().fold(0, |acc, &p| acc | (1 << p));
        // (row, column) slots that may hold a free bit
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).filter(move |&c| (pivot_set >> c) & 1 == 0).map(move |c| (i, c)))
            .collect();
        (0u64..1 << slots.len()).map(move |fill| {
            let mut rows: Vec<Mask> = pivots.iter().map(|&p| 1 << p).collect();
            for (s, &(i, c)) in slots.iter().enumerate() {
                if (fill >> s) & 1 == 1 {
                    rows[i] |= 1 << c;
                }
            }
            Gf2Basis { rows }
        })
    }))
}

/// Offsets that enumerate the cosets of `basis`: vectors supported on the
/// non-pivot coordinates.
pub fn coset_offsets(n: usize, basis: &Gf2Basis) -> impl Iterator<Item = Mask> {
    let free: Vec<usize> = (0..n).filter(|&c| (basis.pivot_mask() >> c) & 1 == 0).collect();
    (0u64..1 << free.len()).map(move |sel| {
        free.iter()
            .enumerate()
            .filter(|(i, _)| (sel >> i) & 1 == 1)
            .fold(0, |acc, (_, &c)| acc | (1 << c))
    })
}

/// Every `d`-dimensional affine subspace of GF(2)^n exactly once.
pub fn enumerate_affine_subspaces(n: usize, d: usize) -> Result<impl Iterator<Item = AffineSubspace>> {
    Ok(enumerate_linear_subspaces(n, d)?.flat_map(move |basis| {
        coset_offsets(n, &basis)
            .map(|u| AffineSubspace { n, basis: basis.clone(), offset: u })
            .collect::<Vec<_>>()
    }))
}

/// Parity constraints cutting out `u + span(w)`: one mask per non-pivot
/// coordinate of `w`, spanning the orthogonal complement, with
/// `b_γ = (−1)^{⟨γ,u⟩}`.
pub fn dual_constraints(w: &[Mask], u: Mask, n: usize) -> Result<RestrictionMap> {
    let basis = Gf2Basis::from_independent(w)?;
    let pivots = basis.pivot_mask();
    let mut gamma = Vec::with_capacity(n - basis.dim());
    for j in (0..n).filter(|&j| (pivots >> j) & 1 == 0) {
        let mut g: Mask = 1 << j;
        for &r in basis.rows() {
            if (r >> j) & 1 == 1 {
                g |= 1 << pivot_of(r);
            }
        }
        gamma.push(g);
    }
    let b = gamma.iter().map(|&g| Sign::from_bit(parity(g & u))).collect();
    RestrictionMap::new(n, gamma, b)
}
